#include "cnsf/geometry.hpp"

#include <cmath>
#include <string>

#include "cnsf/errors.hpp"

namespace cnsf {

void FanBeamGeometry::validate() const {
    auto fail = [](const std::string &what) { throw ValidationError("invalid geometry: " + what); };
    if (!(d_po > 0.0) || !std::isfinite(d_po))
        fail("d_po must be positive");
    if (!(d_so >= 0.0) || !std::isfinite(d_so))
        fail("d_so must be non-negative");
    if (n_s < 1)
        fail("n_s must be at least 1");
    if (!(delta_s > 0.0) || !std::isfinite(delta_s))
        fail("delta_s must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau))
        fail("tau must be positive");
    if (view_angles.empty())
        fail("at least one view angle is required");
    for (double a : view_angles)
        if (!std::isfinite(a))
            fail("view angles must be finite");
}

FanBeamGeometry FanBeamGeometry::uniform(double d_po, double d_so, int n_s, double delta_s,
                                         double tau, int n_views, double span, double start) {
    FanBeamGeometry g{d_po, d_so, n_s, delta_s, tau, {}};
    g.view_angles.reserve(n_views > 0 ? n_views : 0);
    for (int k = 0; k < n_views; ++k)
        g.view_angles.push_back(start + span * k / n_views);
    g.validate();
    return g;
}

ViewFrame view_frame(const FanBeamGeometry &geometry, double angle) {
    const Vec2 u{std::cos(angle), std::sin(angle)};
    return {u, geometry.d_po * u, perp(u), -geometry.d_so * u};
}

Vec2 detector_point(const ViewFrame &frame, double s) { return frame.d_center + s * frame.e; }

RayFrame ray_frame(const ViewFrame &frame, double s) {
    const Vec2 d = detector_point(frame, s) - frame.p;
    const double len = norm(d);
    if (!(len > 0.0))
        throw GeometryError("degenerate ray: detector point coincides with the source");
    const Vec2 v = d / len;
    Vec2 r = perp(v);
    if (dot(r, frame.e) < 0.0)
        r = -r;
    return {v, r, dot(r, frame.p)};
}

double perspective_project(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 x) {
    const double depth = dot(frame.p - x, frame.u);
    if (!(depth > 0.0))
        throw GeometryError("point is not in front of the source");
    return geometry.d_ps() * dot(x - frame.p, frame.e) / depth;
}

double effective_blur(const ViewFrame &frame, const FanBeamGeometry &geometry, double s) {
    const RayFrame rf = ray_frame(frame, s);
    const double pv = dot(frame.p, rf.v);
    auto onto_plane = [&](double sd) {
        const Vec2 q = detector_point(frame, sd);
        const double denom = dot(frame.p - q, rf.v);
        if (!(denom < 0.0))
            throw GeometryError("detector bin edge is behind the source");
        const double t = pv / denom;
        return frame.p + t * (q - frame.p);
    };
    const Vec2 hi = onto_plane(s + 0.5 * geometry.tau);
    const Vec2 lo = onto_plane(s - 0.5 * geometry.tau);
    return std::abs(dot(hi, rf.r) - dot(lo, rf.r));
}

double effective_blur(const ViewFrame &frame, const FanBeamGeometry &geometry, double s,
                      Vec2 point) {
    const RayFrame rf = ray_frame(frame, s);
    const double depth = dot(point - frame.p, rf.v);
    if (!(depth > 0.0))
        throw GeometryError("point is not in front of the source");
    return effective_blur(frame, geometry, s) * blur_depth_ratio(rf, frame.p, point);
}

double fan_angle(const ViewFrame &frame, double s, double tau) {
    const Vec2 a = detector_point(frame, s + 0.5 * tau) - frame.p;
    const Vec2 b = detector_point(frame, s - 0.5 * tau) - frame.p;
    return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

} // namespace cnsf
