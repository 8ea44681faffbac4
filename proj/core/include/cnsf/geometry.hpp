#pragma once

#include <numbers>
#include <vector>

#include "cnsf/vec2.hpp"

namespace cnsf {

/**
 * Circular-orbit fan-beam system with a flat detector.
 *
 * The source sits at distance d_po from the rotation center along the
 * viewing direction u; the detector line is perpendicular to u and passes
 * through -d_so * u. Detector coordinates s are measured along the detector
 * axis e = perp(u), with bin j centered at (j - (n_s - 1) / 2) * delta_s.
 * Lengths are in millimetres, angles in radians.
 */
struct FanBeamGeometry {
    double d_po = 0.0;    ///< source to rotation center
    double d_so = 0.0;    ///< detector to rotation center
    int n_s = 0;          ///< number of detector bins
    double delta_s = 0.0; ///< spacing between bin centers
    double tau = 0.0;     ///< bin width used for detector blur
    std::vector<double> view_angles;

    /// Source to detector distance.
    double d_ps() const { return d_po + d_so; }
    int n_views() const { return static_cast<int>(view_angles.size()); }
    double bin_center(int j) const { return (j - 0.5 * (n_s - 1)) * delta_s; }

    /// Throws ValidationError when an invariant does not hold.
    void validate() const;

    /// `n_views` angles evenly spaced over [start, start + span).
    static FanBeamGeometry uniform(double d_po, double d_so, int n_s, double delta_s, double tau,
                                   int n_views, double span = 2.0 * std::numbers::pi,
                                   double start = 0.0);
};

/// Per-view frame: viewing direction, source position and detector axis.
struct ViewFrame {
    Vec2 u;        ///< viewing direction (unit)
    Vec2 p;        ///< source position, d_po * u
    Vec2 e;        ///< detector axis, perp(u)
    Vec2 d_center; ///< detector center, -d_so * u
};

/// Per-ray orthonormal frame: ray direction v and its perpendicular r.
struct RayFrame {
    Vec2 v;         ///< source to detector, unit
    Vec2 r;         ///< perpendicular to v, oriented so that dot(r, e) > 0
    double s_prime; ///< dot(r, p)
};

ViewFrame view_frame(const FanBeamGeometry &geometry, double angle);

/// Point on the physical detector line at coordinate s.
Vec2 detector_point(const ViewFrame &frame, double s);

/// Frame of the ray from the source through detector coordinate s.
RayFrame ray_frame(const ViewFrame &frame, double s);

/// Detector coordinate hit by the ray from the source through x.
/// Throws GeometryError when x is not strictly in front of the source.
double perspective_project(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 x);

/**
 * Width of detector bin s, seen from the source, on the line through the
 * rotation center perpendicular to the ray at s. This is the blur width used
 * by the closed-form fan-beam footprint.
 */
double effective_blur(const ViewFrame &frame, const FanBeamGeometry &geometry, double s);

/// Effective blur on the line perpendicular to the ray at s through `point`.
/// The edge rays of the bin diverge from the source, so this is the value
/// through the rotation center scaled by the ratio of distances along the ray.
double effective_blur(const ViewFrame &frame, const FanBeamGeometry &geometry, double s,
                      Vec2 point);

/// Scale applied to the rotation-center effective blur for a plane through `point`.
inline double blur_depth_ratio(const RayFrame &rf, Vec2 source, Vec2 point) {
    return dot(point - source, rf.v) / dot(-source, rf.v);
}

/// Angle subtended at the source by the detector interval [s - tau/2, s + tau/2].
double fan_angle(const ViewFrame &frame, double s, double tau);

} // namespace cnsf
