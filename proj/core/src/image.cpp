#include "cnsf/image.hpp"

#include <cmath>

#include "cnsf/errors.hpp"

namespace cnsf {

ImageGrid::ImageGrid(int n_, double h_, double fill) : n(n_), h(h_) {
    if (n < 1)
        throw ValidationError("image grid needs n >= 1");
    if (!(h > 0.0) || !std::isfinite(h))
        throw ValidationError("pixel size must be positive");
    c.assign(std::size_t(n) * n, fill);
}

Sinogram::Sinogram(int n_s_, int n_views_, double fill) : n_s(n_s_), n_views(n_views_) {
    if (n_s < 1 || n_views < 1)
        throw ValidationError("sinogram needs at least one bin and one view");
    values.assign(std::size_t(n_s) * n_views, fill);
}

double inner_product(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ValidationError("inner_product: size mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        acc += a[k] * b[k];
    return acc;
}

double l2_norm(std::span<const double> a) { return std::sqrt(inner_product(a, a)); }

} // namespace cnsf
