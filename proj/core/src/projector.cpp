#include "cnsf/projector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cnsf/boxspline.hpp"
#include "cnsf/errors.hpp"
#include "cnsf/footprint.hpp"
#include "cnsf/parallel.hpp"

namespace cnsf {

std::string_view to_string(Model model) {
    switch (model) {
    case Model::cnsf:
        return "cnsf";
    case Model::reference:
        return "ref";
    case Model::area:
        return "area";
    case Model::parallel:
        return "parallel";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    if (name == "cnsf")
        return Model::cnsf;
    if (name == "ref" || name == "reference")
        return Model::reference;
    if (name == "area")
        return Model::area;
    if (name == "parallel")
        return Model::parallel;
    throw ValidationError("unknown projector model '" + std::string(name) + "'");
}

namespace {

void check_image(const ImageGrid &image, int n, double h) {
    if (image.n != n || std::abs(image.h - h) > 1e-12 * h)
        throw ValidationError("image grid does not match the projector (expected " +
                              std::to_string(n) + "x" + std::to_string(n) + ", h=" +
                              std::to_string(h) + ")");
    if (image.c.size() != std::size_t(n) * n)
        throw ValidationError("image coefficient count does not match its size");
}

void check_sinogram(const Sinogram &sino, const FanBeamGeometry &geometry) {
    if (!sino.matches(geometry) || sino.values.size() != std::size_t(sino.n_s) * sino.n_views)
        throw ValidationError("sinogram dimensions do not match the geometry (expected " +
                              std::to_string(geometry.n_s) + " bins x " +
                              std::to_string(geometry.n_views()) + " views)");
}

void check_views(std::span<const int> views, int n_views) {
    for (int v : views)
        if (v < 0 || v >= n_views)
            throw ValidationError("view index " + std::to_string(v) + " out of range [0, " +
                                  std::to_string(n_views) + ")");
}

std::vector<int> all_views(int n_views) {
    std::vector<int> views(n_views);
    for (int v = 0; v < n_views; ++v)
        views[v] = v;
    return views;
}

// Pixels are visited in square tiles so that the detector bins a view touches
// stay close together. Both projectors use this order for forward sums.
constexpr int kTile = 16;

template <class F>
void for_each_pixel_tiled(int n, F &&f) {
    for (int i0 = 0; i0 < n; i0 += kTile)
        for (int j0 = 0; j0 < n; j0 += kTile)
            for (int i = i0; i < std::min(n, i0 + kTile); ++i)
                for (int j = j0; j < std::min(n, j0 + kTile); ++j)
                    f(i, j);
}

int clamp_index(double x, int hi) {
    if (!(x > 0.0))
        return 0;
    if (x >= hi)
        return hi;
    return static_cast<int>(x);
}

} // namespace

Projector::Projector(FanBeamGeometry geometry, int n, double h, Model model, ExecutionOptions exec)
    : geometry_(std::move(geometry)), n_(n), h_(h), model_(model), threads_(exec.threads) {
    geometry_.validate();
    if (n_ < 1)
        throw ValidationError("image grid needs n >= 1");
    if (!(h_ > 0.0) || !std::isfinite(h_))
        throw ValidationError("pixel size must be positive");

    double s_max = 0.0;
    for (int b : {0, geometry_.n_s - 1})
        s_max = std::max(s_max, std::abs(geometry_.bin_center(b)));
    s_max += geometry_.tau;
    cos_min_ = geometry_.d_ps() / std::hypot(geometry_.d_ps(), s_max);

    const double half = 0.5 * n_ * h_;
    views_.reserve(geometry_.view_angles.size());
    for (double angle : geometry_.view_angles) {
        ViewTable vt{angle, view_frame(geometry_, angle), {}, 0.0};
        if (model_ != Model::parallel) {
            // Every image point must be strictly in front of the source.
            const double reach = half * (std::abs(vt.frame.u.x) + std::abs(vt.frame.u.y));
            if (!(geometry_.d_po - reach > 0.0))
                throw GeometryError("image grid reaches behind the source at view angle " +
                                    std::to_string(angle) + " rad");
        }
        if (model_ == Model::cnsf) {
            vt.rays.reserve(geometry_.n_s);
            for (int b = 0; b < geometry_.n_s; ++b) {
                const double s = geometry_.bin_center(b);
                const RayFrame rf = ray_frame(vt.frame, s);
                const double tp = effective_blur(vt.frame, geometry_, s);
                vt.rays.push_back({rf, tp});
                vt.blur_slope_max = std::max(vt.blur_slope_max, tp / dot(-vt.frame.p, rf.v));
            }
        }
        views_.push_back(std::move(vt));
    }
}

void Projector::pixel_weights(int view, int i, int j, WeightList &out) const {
    out.clear();
    const ViewTable &vt = views_[view];
    const Vec2 k{(j - 0.5 * (n_ - 1)) * h_, (0.5 * (n_ - 1) - i) * h_};
    const double tau = geometry_.tau;

    double lo, hi, pad;
    if (model_ == Model::parallel) {
        const Vec2 r{std::sin(vt.angle), -std::cos(vt.angle)};
        const double center = dot(r, k);
        const double reach = 0.5 * h_ * (std::abs(r.x) + std::abs(r.y));
        lo = center - reach;
        hi = center + reach;
        pad = 0.5 * tau;
    } else {
        const std::array<double, 4> c = corner_projections(vt.frame, geometry_, k, h_);
        lo = c.front();
        hi = c.back();
        if (model_ == Model::cnsf) {
            // The blur grows linearly with distance L along the ray; a lateral
            // offset w at L moves the detector coordinate by w D_ps / (L cos^2).
            pad = 0.5 * vt.blur_slope_max * geometry_.d_ps() / (cos_min_ * cos_min_);
        } else {
            pad = 0.5 * tau;
        }
    }
    const double offset = 0.5 * (geometry_.n_s - 1);
    const int last = geometry_.n_s - 1;
    // One extra bin on each side; zero weights are dropped below.
    const double first = (lo - pad) / geometry_.delta_s + offset;
    const double final = (hi + pad) / geometry_.delta_s + offset;
    if (final < 0.0 || first > last)
        return;
    const int b0 = clamp_index(std::floor(first), last);
    const int b1 = clamp_index(std::ceil(final), last);

    for (int b = b0; b <= b1; ++b) {
        double w = 0.0;
        switch (model_) {
        case Model::cnsf: {
            const RayFrame &rf = vt.rays[b].rf;
            const double blur = vt.rays[b].tau_prime * blur_depth_ratio(rf, vt.frame.p, k);
            const DirectionSet dirs = canonicalize3(rf.r.x * h_, rf.r.y * h_, blur);
            w = h_ * h_ * eval_centered_unchecked(dirs, rf.s_prime - dot(rf.r, k));
            break;
        }
        case Model::reference:
            w = reference_bin_integral(vt.frame, geometry_, k, h_, geometry_.bin_center(b),
                                       quadrature);
            break;
        case Model::area:
            w = area_bin_value(vt.frame, geometry_, k, h_, geometry_.bin_center(b));
            break;
        case Model::parallel:
            w = parallel_footprint_blurred(vt.angle, k, h_, tau, geometry_.bin_center(b));
            break;
        }
        if (w != 0.0)
            out.emplace_back(b, w);
    }
}

Sinogram SystemOperator::forward(const ImageGrid &image) const {
    const std::vector<int> views = all_views(geometry().n_views());
    return forward(image, views);
}

ImageGrid SystemOperator::back(const Sinogram &sino) const {
    const std::vector<int> views = all_views(geometry().n_views());
    return back(sino, views);
}

Sinogram Projector::forward(const ImageGrid &image, std::span<const int> views) const {
    check_image(image, n_, h_);
    check_views(views, geometry_.n_views());
    Sinogram out(geometry_);
    const int n_s = geometry_.n_s;
    parallel_for(int(views.size()), threads_, [&](int q0, int q1) {
        WeightList wl;
        std::vector<double> column(n_s);
        for (int q = q0; q < q1; ++q) {
            const int v = views[q];
            std::fill(column.begin(), column.end(), 0.0);
            for_each_pixel_tiled(n_, [&](int i, int j) {
                const double c = image.at(i, j);
                if (c == 0.0)
                    return;
                pixel_weights(v, i, j, wl);
                for (const auto &[b, w] : wl)
                    column[b] += c * w;
            });
            for (int b = 0; b < n_s; ++b)
                out.at(b, v) = column[b];
        }
    });
    return out;
}

ImageGrid Projector::back(const Sinogram &sino, std::span<const int> views) const {
    check_sinogram(sino, geometry_);
    check_views(views, geometry_.n_views());
    ImageGrid out(n_, h_);
    const int n_s = geometry_.n_s;
    const int n_views = geometry_.n_views();
    // View-major copy of the sinogram so each view reads one contiguous column.
    std::vector<double> by_view(std::size_t(n_views) * n_s);
    for (int b = 0; b < n_s; ++b)
        for (int v = 0; v < n_views; ++v)
            by_view[std::size_t(v) * n_s + b] = sino.values[std::size_t(b) * n_views + v];
    constexpr int kTile = 64;
    // Tiles of pixels, views outermost within a tile, so one view's ray table
    // stays in cache. Each pixel still sums over views in order, which keeps
    // the result independent of the tiling.
    parallel_for((n_ + kTile - 1) / kTile, threads_, [&](int t0, int t1) {
        WeightList wl;
        for (int r0 = t0 * kTile; r0 < std::min(n_, t1 * kTile); r0 += kTile) {
            const int r1 = std::min(n_, r0 + kTile);
            for (int c0 = 0; c0 < n_; c0 += kTile) {
                const int c1 = std::min(n_, c0 + kTile);
                for (int v : views) {
                    const double *column = &by_view[std::size_t(v) * n_s];
                    for (int i = r0; i < r1; ++i) {
                        double *row = &out.c[std::size_t(i) * n_];
                        for (int j = c0; j < c1; ++j) {
                            pixel_weights(v, i, j, wl);
                            double acc_j = row[j];
                            for (const auto &[b, w] : wl)
                                acc_j += column[b] * w;
                            row[j] = acc_j;
                        }
                    }
                }
            }
        }
    });
    return out;
}

PrecomputedProjector::PrecomputedProjector(const Projector &projector)
    : geometry_(projector.geometry()), n_(projector.image_size()), h_(projector.pixel_size()),
      threads_(projector.threads()) {
    const int n_views = geometry_.n_views();
    struct RowBlock {
        std::vector<std::size_t> counts;
        std::vector<int> bins;
        std::vector<double> weights;
    };
    std::vector<RowBlock> rows(n_);
    parallel_for(n_, threads_, [&](int i0, int i1) {
        WeightList wl;
        for (int i = i0; i < i1; ++i) {
            RowBlock &rb = rows[i];
            rb.counts.reserve(std::size_t(n_) * n_views);
            for (int j = 0; j < n_; ++j) {
                for (int v = 0; v < n_views; ++v) {
                    projector.pixel_weights(v, i, j, wl);
                    rb.counts.push_back(wl.size());
                    for (const auto &[b, w] : wl) {
                        rb.bins.push_back(b);
                        rb.weights.push_back(w);
                    }
                }
            }
        }
    });
    offsets_.reserve(std::size_t(n_) * n_ * n_views + 1);
    offsets_.push_back(0);
    for (RowBlock &rb : rows) {
        for (std::size_t count : rb.counts)
            offsets_.push_back(offsets_.back() + count);
        bins_.insert(bins_.end(), rb.bins.begin(), rb.bins.end());
        weights_.insert(weights_.end(), rb.weights.begin(), rb.weights.end());
        rb = RowBlock{};
    }
}

Sinogram PrecomputedProjector::forward(const ImageGrid &image, std::span<const int> views) const {
    check_image(image, n_, h_);
    const int n_views = geometry_.n_views();
    check_views(views, n_views);
    Sinogram out(geometry_);
    const int n_s = geometry_.n_s;
    parallel_for(int(views.size()), threads_, [&](int q0, int q1) {
        std::vector<double> column(n_s);
        for (int q = q0; q < q1; ++q) {
            const int v = views[q];
            std::fill(column.begin(), column.end(), 0.0);
            for_each_pixel_tiled(n_, [&](int i, int j) {
                const std::size_t k = std::size_t(i) * n_ + j;
                const double c = image.c[k];
                if (c == 0.0)
                    return;
                const std::size_t slot = k * n_views + v;
                for (std::size_t e = offsets_[slot]; e < offsets_[slot + 1]; ++e)
                    column[bins_[e]] += c * weights_[e];
            });
            for (int b = 0; b < n_s; ++b)
                out.at(b, v) = column[b];
        }
    });
    return out;
}

ImageGrid PrecomputedProjector::back(const Sinogram &sino, std::span<const int> views) const {
    check_sinogram(sino, geometry_);
    const int n_views = geometry_.n_views();
    check_views(views, n_views);
    ImageGrid out(n_, h_);
    parallel_for(n_, threads_, [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            for (int j = 0; j < n_; ++j) {
                const std::size_t k = std::size_t(i) * n_ + j;
                double acc = 0.0;
                for (int v : views) {
                    const std::size_t slot = k * n_views + v;
                    for (std::size_t e = offsets_[slot]; e < offsets_[slot + 1]; ++e)
                        acc += sino.at(bins_[e], v) * weights_[e];
                }
                out.c[k] = acc;
            }
        }
    });
    return out;
}

Sinogram forward_project(const ImageGrid &image, const FanBeamGeometry &geometry, Model model,
                         ExecutionOptions exec) {
    return Projector(geometry, image.n, image.h, model, exec).forward(image);
}

ImageGrid back_project(const Sinogram &sino, const FanBeamGeometry &geometry, int n, double h,
                       Model model, ExecutionOptions exec) {
    return Projector(geometry, n, h, model, exec).back(sino);
}

} // namespace cnsf
