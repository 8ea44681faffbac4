#include "cnsf/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cnsf/errors.hpp"
#include "cnsf/footprint.hpp"
#include "cnsf/parallel.hpp"

namespace cnsf {

void AsdPocsConfig::validate() const {
    auto fail = [](const std::string &what) { throw ValidationError("invalid ASD-POCS config: " + what); };
    if (n_iterations < 0)
        fail("n_iterations must be >= 0");
    if (!(beta0 > 0.0 && beta0 < 2.0))
        fail("beta0 must lie in (0, 2)");
    if (!(beta_red > 0.0 && beta_red <= 1.0))
        fail("beta_red must lie in (0, 1]");
    if (n_tv < 0)
        fail("n_tv must be >= 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        fail("alpha must be non-negative");
    if (!(alpha_red > 0.0 && alpha_red <= 1.0))
        fail("alpha_red must lie in (0, 1]");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        fail("r_max must be positive");
    if (n_subsets < 1)
        fail("n_subsets must be >= 1");
}

namespace {

struct Differences {
    double dx, dy, norm;
};

Differences differences(const ImageGrid &img, int i, int j) {
    const int n = img.n;
    const double c = img.at(i, j);
    const double dx = j + 1 < n ? img.at(i, j + 1) - c : 0.0;
    const double dy = i + 1 < n ? img.at(i + 1, j) - c : 0.0;
    return {dx, dy, std::sqrt(dx * dx + dy * dy + kTvEpsilon * kTvEpsilon)};
}

double distance(const ImageGrid &a, const ImageGrid &b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.c.size(); ++k) {
        const double d = a.c[k] - b.c[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

void require_finite(const ImageGrid &img, int iteration) {
    for (double v : img.c)
        if (!std::isfinite(v))
            throw ComputationError("ASD-POCS produced a non-finite value at iteration " +
                                   std::to_string(iteration));
}

std::vector<double> guarded_inverse(const std::vector<double> &sums) {
    std::vector<double> inv(sums.size());
    for (std::size_t k = 0; k < sums.size(); ++k)
        inv[k] = sums[k] < 1e-12 ? 0.0 : 1.0 / sums[k];
    return inv;
}

} // namespace

double tv_value(const ImageGrid &image) {
    double total = 0.0;
    for (int i = 0; i < image.n; ++i)
        for (int j = 0; j < image.n; ++j)
            total += differences(image, i, j).norm;
    return total;
}

ImageGrid tv_gradient(const ImageGrid &image) {
    const int n = image.n;
    ImageGrid grad(n, image.h);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Differences d = differences(image, i, j);
            double g = -(d.dx + d.dy) / d.norm;
            if (j > 0) {
                const Differences left = differences(image, i, j - 1);
                g += left.dx / left.norm;
            }
            if (i > 0) {
                const Differences up = differences(image, i - 1, j);
                g += up.dy / up.norm;
            }
            grad.at(i, j) = g;
        }
    }
    return grad;
}

SartStepper::SartStepper(const SystemOperator &op, int n_subsets) : op_(op) {
    const int n_views = op.geometry().n_views();
    if (n_subsets < 1 || n_subsets > n_views)
        throw ValidationError("n_subsets must lie in [1, " + std::to_string(n_views) + "]");
    subsets_.resize(n_subsets);
    for (int v = 0; v < n_views; ++v)
        subsets_[v % n_subsets].push_back(v);

    const ImageGrid ones(op.image_size(), op.pixel_size(), 1.0);
    inv_row_sums_ = guarded_inverse(op.forward(ones).values);
    const Sinogram unit(op.geometry(), 1.0);
    for (const auto &views : subsets_)
        inv_col_sums_.push_back(guarded_inverse(op.back(unit, views).c));
}

ImageGrid SartStepper::step(const ImageGrid &image, const Sinogram &measured, double beta,
                            bool nonneg, double *residual_norm) const {
    if (!measured.matches(op_.geometry()))
        throw ValidationError("measured sinogram does not match the projector geometry");
    const int n_s = measured.n_s;
    ImageGrid out = image;
    double sq = 0.0;
    for (std::size_t s = 0; s < subsets_.size(); ++s) {
        const std::vector<int> &views = subsets_[s];
        Sinogram residual = op_.forward(out, views);
        for (int v : views) {
            for (int b = 0; b < n_s; ++b) {
                const std::size_t k = std::size_t(b) * measured.n_views + v;
                const double r = measured.values[k] - residual.values[k];
                sq += r * r;
                residual.values[k] = r * inv_row_sums_[k];
            }
        }
        const ImageGrid correction = op_.back(residual, views);
        const std::vector<double> &inv_col = inv_col_sums_[s];
        for (std::size_t k = 0; k < out.c.size(); ++k) {
            out.c[k] += beta * correction.c[k] * inv_col[k];
            if (nonneg && out.c[k] < 0.0)
                out.c[k] = 0.0;
        }
    }
    if (residual_norm)
        *residual_norm = std::sqrt(sq);
    return out;
}

ImageGrid sart_step(const ImageGrid &image, const Sinogram &measured, const SystemOperator &op,
                    double beta, bool nonneg) {
    return SartStepper(op).step(image, measured, beta, nonneg);
}

ReconResult asd_pocs(const Sinogram &measured, const SystemOperator &op, const AsdPocsConfig &config,
                     const std::function<void(const IterationRecord &)> &on_iteration) {
    config.validate();
    if (!measured.matches(op.geometry()))
        throw ValidationError("measured sinogram does not match the projector geometry");
    for (double v : measured.values)
        if (!std::isfinite(v))
            throw ValidationError("measured sinogram contains non-finite values");

    const SartStepper sart(op, config.n_subsets);
    ReconResult result{ImageGrid(op.image_size(), op.pixel_size()), {}};
    ImageGrid &f = result.image;
    double beta = config.beta0;
    double alpha = config.alpha;

    for (int it = 0; it < config.n_iterations; ++it) {
        IterationRecord rec;
        rec.iteration = it;
        rec.beta = beta;
        rec.alpha = alpha;

        const ImageGrid before = f;
        f = sart.step(f, measured, beta, config.nonneg, &rec.data_residual);
        const double data_step = distance(f, before);

        const ImageGrid after_data = f;
        const double tv_step = alpha * data_step;
        for (int k = 0; k < config.n_tv && tv_step > 0.0; ++k) {
            const ImageGrid g = tv_gradient(f);
            const double gn = l2_norm(g.c);
            if (!(gn > 0.0))
                break;
            for (std::size_t m = 0; m < f.c.size(); ++m)
                f.c[m] -= tv_step * g.c[m] / gn;
        }
        const double tv_distance = distance(f, after_data);
        if (tv_distance > config.r_max * data_step)
            alpha *= config.alpha_red;
        beta *= config.beta_red;

        require_finite(f, it);
        rec.tv_value = tv_value(f);
        result.log.push_back(rec);
        if (on_iteration)
            on_iteration(rec);
    }
    return result;
}

double snr_db(const ImageGrid &reconstruction, const ImageGrid &truth) {
    if (reconstruction.c.size() != truth.c.size())
        throw ValidationError("snr_db: image sizes differ");
    constexpr double cap = 300.0;
    const double err = distance(reconstruction, truth);
    const double signal = l2_norm(truth.c);
    if (err == 0.0)
        return cap;
    return std::min(cap, 20.0 * std::log10(signal / err));
}

std::vector<double> max_error_curve(const FanBeamGeometry &geometry, Vec2 pixel_center, double h,
                                    Model model, int threads) {
    geometry.validate();
    std::vector<double> curve(geometry.n_views(), 0.0);
    parallel_for(geometry.n_views(), threads, [&](int v0, int v1) {
        for (int v = v0; v < v1; ++v) {
            const double angle = geometry.view_angles[v];
            const ViewFrame frame = view_frame(geometry, angle);
            double worst = 0.0;
            for (int b = 0; b < geometry.n_s; ++b) {
                const double s = geometry.bin_center(b);
                const double ref = reference_bin_integral(frame, geometry, pixel_center, h, s);
                double value = 0.0;
                switch (model) {
                case Model::cnsf:
                    value = cnsf_footprint_blurred(frame, geometry, pixel_center, h, s);
                    break;
                case Model::reference:
                    value = ref;
                    break;
                case Model::area:
                    value = area_bin_value(frame, geometry, pixel_center, h, s);
                    break;
                case Model::parallel:
                    value = parallel_footprint_blurred(angle, pixel_center, h, geometry.tau, s);
                    break;
                }
                worst = std::max(worst, std::abs(value - ref));
            }
            curve[v] = worst;
        }
    });
    return curve;
}

} // namespace cnsf
