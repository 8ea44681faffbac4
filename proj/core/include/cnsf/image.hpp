#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cnsf/geometry.hpp"
#include "cnsf/vec2.hpp"

namespace cnsf {

/**
 * Square n x n pixel grid centered on the rotation center.
 *
 * Coefficients are row-major; pixel (i, j) is centered at
 * ((j - (n-1)/2) h, ((n-1)/2 - i) h), so row 0 is the top of the image.
 */
struct ImageGrid {
    int n = 0;
    double h = 0.0;
    std::vector<double> c;

    ImageGrid() = default;
    ImageGrid(int n, double h, double fill = 0.0);

    double &at(int i, int j) { return c[std::size_t(i) * n + j]; }
    double at(int i, int j) const { return c[std::size_t(i) * n + j]; }
    std::size_t size() const { return c.size(); }
    Vec2 pixel_center(int i, int j) const {
        return {(j - 0.5 * (n - 1)) * h, (0.5 * (n - 1) - i) * h};
    }
    /// Half the side length of the whole grid.
    double half_extent() const { return 0.5 * n * h; }
};

/// Projection data, n_s rows (detector bins) by n_views columns, row-major.
struct Sinogram {
    int n_s = 0;
    int n_views = 0;
    std::vector<double> values;

    Sinogram() = default;
    Sinogram(int n_s, int n_views, double fill = 0.0);
    explicit Sinogram(const FanBeamGeometry &geometry, double fill = 0.0)
        : Sinogram(geometry.n_s, geometry.n_views(), fill) {}

    double &at(int bin, int view) { return values[std::size_t(bin) * n_views + view]; }
    double at(int bin, int view) const { return values[std::size_t(bin) * n_views + view]; }
    std::size_t size() const { return values.size(); }
    bool matches(const FanBeamGeometry &geometry) const {
        return n_s == geometry.n_s && n_views == geometry.n_views();
    }
};

double inner_product(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

} // namespace cnsf
