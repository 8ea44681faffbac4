#pragma once

#include <functional>
#include <vector>

#include "cnsf/image.hpp"
#include "cnsf/projector.hpp"

namespace cnsf {

/// Smoothing term inside the isotropic TV norm.
inline constexpr double kTvEpsilon = 1e-8;

/// ASD-POCS schedule: SART data steps alternated with normalized TV descent.
struct AsdPocsConfig {
    int n_iterations = 200;
    double beta0 = 1.0;      ///< SART relaxation, in (0, 2)
    double beta_red = 0.995; ///< per-iteration decay of beta, in (0, 1]
    int n_tv = 20;           ///< TV descent steps per iteration
    double alpha = 0.2;      ///< TV step as a fraction of the data step distance
    double alpha_red = 0.95; ///< decay of alpha when TV steps dominate, in (0, 1]
    double r_max = 0.95;     ///< allowed ratio of TV distance to data distance
    bool nonneg = true;
    int n_subsets = 1;       ///< interleaved view subsets per data step; 1 is the simultaneous form

    void validate() const;
};

/// One row of the per-iteration log.
struct IterationRecord {
    int iteration = 0;
    /// ||y - A c|| before the data step; with subsets, accumulated over the
    /// subset residuals as each subset is visited
    double data_residual = 0.0;
    double tv_value = 0.0;      ///< TV after the iteration
    double beta = 0.0;
    double alpha = 0.0;
};

/// Isotropic TV with forward differences and replicated (zero-gradient) boundary.
double tv_value(const ImageGrid &image);
/// Exact gradient of tv_value.
ImageGrid tv_gradient(const ImageGrid &image);

/**
 * SART update c + beta * A^T((y - A c) / A1) / A^T 1.
 *
 * Ray and column sums are computed once at construction. Entries of the sums
 * below 1e-12 leave the corresponding update at zero. With n_subsets > 1 the
 * views are split round-robin (view v goes to subset v mod n_subsets) and
 * one step applies the update subset by subset, with A restricted to the
 * subset's views.
 */
class SartStepper {
  public:
    explicit SartStepper(const SystemOperator &op, int n_subsets = 1);

    /// Returns the updated image; `residual_norm`, when given, receives ||y - A c||.
    ImageGrid step(const ImageGrid &image, const Sinogram &measured, double beta, bool nonneg,
                   double *residual_norm = nullptr) const;

  private:
    const SystemOperator &op_;
    std::vector<std::vector<int>> subsets_;
    std::vector<double> inv_row_sums_;
    std::vector<std::vector<double>> inv_col_sums_; // per subset
};

/// Single SART step; recomputes the ray and column sums.
ImageGrid sart_step(const ImageGrid &image, const Sinogram &measured, const SystemOperator &op,
                    double beta, bool nonneg = false);

struct ReconResult {
    ImageGrid image;
    std::vector<IterationRecord> log;
};

/// ASD-POCS from a zero start. Throws ComputationError on non-finite values.
ReconResult asd_pocs(const Sinogram &measured, const SystemOperator &op, const AsdPocsConfig &config,
                     const std::function<void(const IterationRecord &)> &on_iteration = {});

/// 20 log10(||truth|| / ||rec - truth||), capped at 300 dB.
double snr_db(const ImageGrid &reconstruction, const ImageGrid &truth);

/**
 * Per-view max over detector bins of |model - reference| for one pixel,
 * both evaluated at the geometry's bin centers.
 */
std::vector<double> max_error_curve(const FanBeamGeometry &geometry, Vec2 pixel_center, double h,
                                    Model model, int threads = 1);

} // namespace cnsf
