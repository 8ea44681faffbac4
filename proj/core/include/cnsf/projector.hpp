#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cnsf/geometry.hpp"
#include "cnsf/image.hpp"
#include "cnsf/quadrature.hpp"

namespace cnsf {

/// Per-pixel weight model used by a projector.
enum class Model {
    cnsf,      ///< closed-form box spline with effective blur
    reference, ///< adaptive quadrature of the exact footprint over the bin
    area,      ///< clipped-area model
    parallel,  ///< parallel-beam box spline (source distances ignored)
};

std::string_view to_string(Model model);
/// Accepts "cnsf", "ref", "reference", "area", "parallel".
Model parse_model(std::string_view name);

struct ExecutionOptions {
    int threads = 1; ///< < 1 selects all hardware threads
};

/**
 * Linear system operator A mapping images to sinograms, with its adjoint.
 *
 * The view-subset forms restrict A to the listed views: columns of other
 * views are left at zero by forward and ignored by back.
 */
class SystemOperator {
  public:
    virtual ~SystemOperator() = default;
    Sinogram forward(const ImageGrid &image) const;
    ImageGrid back(const Sinogram &sino) const;
    virtual Sinogram forward(const ImageGrid &image, std::span<const int> views) const = 0;
    virtual ImageGrid back(const Sinogram &sino, std::span<const int> views) const = 0;
    virtual const FanBeamGeometry &geometry() const = 0;
    virtual int image_size() const = 0;
    virtual double pixel_size() const = 0;
};

/// (bin, weight) pairs produced for one pixel in one view.
using WeightList = std::vector<std::pair<int, double>>;

/**
 * Matrix-free projector for an n x n grid of pixel size h.
 *
 * Forward projection is parallel over views, back-projection over image
 * rows. Both enumerate the identical per-(pixel, view) weight list, so
 * back() is the exact adjoint of forward(), and results do not depend on
 * the worker count.
 */
class Projector final : public SystemOperator {
  public:
    Projector(FanBeamGeometry geometry, int n, double h, Model model, ExecutionOptions exec = {});

    using SystemOperator::back;
    using SystemOperator::forward;
    Sinogram forward(const ImageGrid &image, std::span<const int> views) const override;
    ImageGrid back(const Sinogram &sino, std::span<const int> views) const override;

    const FanBeamGeometry &geometry() const override { return geometry_; }
    int image_size() const override { return n_; }
    double pixel_size() const override { return h_; }
    Model model() const { return model_; }
    int threads() const { return threads_; }
    void set_threads(int threads) { threads_ = threads; }

    /// Non-zero weights of pixel (i, j) in `view`, bins ascending. Clears `out` first.
    void pixel_weights(int view, int i, int j, WeightList &out) const;

    /// Quadrature settings of the reference model.
    QuadratureOptions quadrature;

  private:
    struct BinRay {
        RayFrame rf;
        double tau_prime; // effective blur through the rotation center
    };
    struct ViewTable {
        double angle;
        ViewFrame frame;
        std::vector<BinRay> rays; // CNSF only
        double blur_slope_max = 0.0; // max of tau' per unit distance from the source
    };

    FanBeamGeometry geometry_;
    int n_;
    double h_;
    Model model_;
    int threads_;
    double cos_min_ = 1.0;
    std::vector<ViewTable> views_;
};

/**
 * Projector with every weight computed once and stored per pixel and view.
 *
 * Produces bitwise the same results as the wrapped matrix-free projector;
 * intended for iterative reconstruction with the expensive reference model.
 */
class PrecomputedProjector final : public SystemOperator {
  public:
    explicit PrecomputedProjector(const Projector &projector);

    using SystemOperator::back;
    using SystemOperator::forward;
    Sinogram forward(const ImageGrid &image, std::span<const int> views) const override;
    ImageGrid back(const Sinogram &sino, std::span<const int> views) const override;

    const FanBeamGeometry &geometry() const override { return geometry_; }
    int image_size() const override { return n_; }
    double pixel_size() const override { return h_; }
    std::size_t nonzeros() const { return weights_.size(); }

  private:
    FanBeamGeometry geometry_;
    int n_;
    double h_;
    int threads_;
    std::vector<std::size_t> offsets_; // (pixel * n_views + view) -> first entry
    std::vector<int> bins_;
    std::vector<double> weights_;
};

Sinogram forward_project(const ImageGrid &image, const FanBeamGeometry &geometry, Model model,
                         ExecutionOptions exec = {});
ImageGrid back_project(const Sinogram &sino, const FanBeamGeometry &geometry, int n, double h,
                       Model model, ExecutionOptions exec = {});

} // namespace cnsf
