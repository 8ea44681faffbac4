#pragma once

#include <span>
#include <vector>

#include "cnsf/image.hpp"
#include "cnsf/vec2.hpp"

namespace cnsf {

/// Ellipse in normalized [-1, 1]^2 coordinates.
struct Ellipse {
    Vec2 center;
    Vec2 semi_axes;
    double rotation = 0.0; ///< radians, counter-clockwise
    double intensity = 0.0;

    bool contains(Vec2 x) const;
};

enum class SheppLoganVariant { original, modified };

/// The ten-ellipse Shepp-Logan table.
std::vector<Ellipse> shepp_logan_ellipses(SheppLoganVariant variant = SheppLoganVariant::original);

/// Sum of the intensities of the ellipses containing each pixel center; the
/// grid spans [-1, 1]^2 in normalized units.
ImageGrid rasterize(std::span<const Ellipse> ellipses, int n, double h);

ImageGrid shepp_logan(int n, double h, SheppLoganVariant variant = SheppLoganVariant::original);
ImageGrid all_ones(int n, double h);
/// Zero grid with pixel (i, j) set to `value`; throws ValidationError when out of range.
ImageGrid single_pixel(int n, double h, int i, int j, double value = 1.0);

} // namespace cnsf
