#include "cnsf/phantom.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cnsf/errors.hpp"

namespace cnsf {

bool Ellipse::contains(Vec2 x) const {
    const Vec2 d = x - center;
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    const double a = (c * d.x + s * d.y) / semi_axes.x;
    const double b = (-s * d.x + c * d.y) / semi_axes.y;
    return a * a + b * b <= 1.0;
}

std::vector<Ellipse> shepp_logan_ellipses(SheppLoganVariant variant) {
    constexpr double deg = std::numbers::pi / 180.0;
    // center, semi-axes, rotation, original intensity
    std::vector<Ellipse> table = {
        {{0.0, 0.0}, {0.69, 0.92}, 0.0, 2.0},
        {{0.0, -0.0184}, {0.6624, 0.874}, 0.0, -0.98},
        {{0.22, 0.0}, {0.11, 0.31}, -18.0 * deg, -0.02},
        {{-0.22, 0.0}, {0.16, 0.41}, 18.0 * deg, -0.02},
        {{0.0, 0.35}, {0.21, 0.25}, 0.0, 0.01},
        {{0.0, 0.1}, {0.046, 0.046}, 0.0, 0.01},
        {{0.0, -0.1}, {0.046, 0.046}, 0.0, 0.01},
        {{-0.08, -0.605}, {0.046, 0.023}, 0.0, 0.01},
        {{0.0, -0.606}, {0.023, 0.023}, 0.0, 0.01},
        {{0.06, -0.605}, {0.023, 0.046}, 0.0, 0.01},
    };
    if (variant == SheppLoganVariant::modified) {
        constexpr double contrast[] = {1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
        for (std::size_t k = 0; k < table.size(); ++k)
            table[k].intensity = contrast[k];
    }
    return table;
}

ImageGrid rasterize(std::span<const Ellipse> ellipses, int n, double h) {
    ImageGrid img(n, h);
    const double scale = img.half_extent();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 x = img.pixel_center(i, j) / scale;
            double value = 0.0;
            for (const Ellipse &e : ellipses)
                if (e.contains(x))
                    value += e.intensity;
            img.at(i, j) = value;
        }
    }
    return img;
}

ImageGrid shepp_logan(int n, double h, SheppLoganVariant variant) {
    const std::vector<Ellipse> table = shepp_logan_ellipses(variant);
    return rasterize(table, n, h);
}

ImageGrid all_ones(int n, double h) { return ImageGrid(n, h, 1.0); }

ImageGrid single_pixel(int n, double h, int i, int j, double value) {
    ImageGrid img(n, h);
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw ValidationError("pixel (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is outside the " + std::to_string(n) + "x" +
                              std::to_string(n) + " grid");
    img.at(i, j) = value;
    return img;
}

} // namespace cnsf
