#pragma once

#include <array>

#include "cnsf/geometry.hpp"
#include "cnsf/quadrature.hpp"
#include "cnsf/vec2.hpp"

namespace cnsf {

/*
 * Per-pixel projection values for one detector sample.
 *
 * Pixels are the indicator of the square of side h centered at
 * pixel_center, i.e. h^2 times the box spline with directions (h,0), (0,h).
 * All blurred values use unit-mass (averaging) detector blur.
 */

/// Exact fan-beam line integral of the pixel along the ray through s.
double cnsf_footprint(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 pixel_center,
                      double h, double s);

/// Closed-form blurred footprint: three-direction box spline whose third
/// direction is the effective blur on the line through the pixel center.
double cnsf_footprint_blurred(const ViewFrame &frame, const FanBeamGeometry &geometry,
                              Vec2 pixel_center, double h, double s);

/// Bin average of the exact footprint by adaptive quadrature (reference projector).
double reference_bin_integral(const ViewFrame &frame, const FanBeamGeometry &geometry,
                              Vec2 pixel_center, double h, double s,
                              const QuadratureOptions &opts = {});

/// Area-weighted model: clipped pixel / source-bin triangle area over (fan angle * distance).
double area_bin_value(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 pixel_center,
                      double h, double s);

/// Parallel-beam footprint with detector blur, exact as a three-direction box spline.
/// The detector axis is (sin(angle), -cos(angle)).
double parallel_footprint_blurred(double angle, Vec2 pixel_center, double h, double tau,
                                  double s);

/// Detector coordinates of the four pixel corners, ascending.
/// Throws GeometryError if a corner is not in front of the source.
std::array<double, 4> corner_projections(const ViewFrame &frame, const FanBeamGeometry &geometry,
                                         Vec2 pixel_center, double h);

namespace detail {

/// Unblurred footprint without precondition checks.
double exact_footprint(const ViewFrame &frame, Vec2 pixel_center, double h, double s);

} // namespace detail

} // namespace cnsf
