#include "cnsf/footprint.hpp"

#include <algorithm>
#include <cmath>

#include "cnsf/boxspline.hpp"
#include "cnsf/errors.hpp"
#include "cnsf/polygon.hpp"

namespace cnsf {

namespace {

void require_in_front(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 center,
                      double h) {
    (void)corner_projections(frame, geometry, center, h);
}

} // namespace

std::array<double, 4> corner_projections(const ViewFrame &frame, const FanBeamGeometry &geometry,
                                         Vec2 pixel_center, double h) {
    const double r = 0.5 * h;
    std::array<double, 4> s = {
        perspective_project(frame, geometry, pixel_center + Vec2{-r, -r}),
        perspective_project(frame, geometry, pixel_center + Vec2{r, -r}),
        perspective_project(frame, geometry, pixel_center + Vec2{r, r}),
        perspective_project(frame, geometry, pixel_center + Vec2{-r, r}),
    };
    std::sort(s.begin(), s.end());
    return s;
}

namespace detail {

double exact_footprint(const ViewFrame &frame, Vec2 pixel_center, double h, double s) {
    const RayFrame rf = ray_frame(frame, s);
    const DirectionSet dirs = canonicalize3(rf.r.x * h, rf.r.y * h, 0.0);
    return h * h * eval_centered_unchecked(dirs, rf.s_prime - dot(rf.r, pixel_center));
}

} // namespace detail

double cnsf_footprint(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 pixel_center,
                      double h, double s) {
    require_in_front(frame, geometry, pixel_center, h);
    const RayFrame rf = ray_frame(frame, s);
    const double raw[2] = {rf.r.x * h, rf.r.y * h};
    return h * h * eval_centered(canonicalize(raw), rf.s_prime - dot(rf.r, pixel_center));
}

double cnsf_footprint_blurred(const ViewFrame &frame, const FanBeamGeometry &geometry,
                              Vec2 pixel_center, double h, double s) {
    require_in_front(frame, geometry, pixel_center, h);
    const RayFrame rf = ray_frame(frame, s);
    const double blur = effective_blur(frame, geometry, s) * blur_depth_ratio(rf, frame.p, pixel_center);
    const double raw[3] = {rf.r.x * h, rf.r.y * h, blur};
    return h * h * eval_centered(canonicalize(raw), rf.s_prime - dot(rf.r, pixel_center));
}

double reference_bin_integral(const ViewFrame &frame, const FanBeamGeometry &geometry,
                              Vec2 pixel_center, double h, double s,
                              const QuadratureOptions &opts) {
    const std::array<double, 4> corners = corner_projections(frame, geometry, pixel_center, h);
    const double tau = geometry.tau;
    // The footprint vanishes outside the shadow of the pixel.
    const double a = std::max(s - 0.5 * tau, corners.front());
    const double b = std::min(s + 0.5 * tau, corners.back());
    if (!(a < b))
        return 0.0;
    auto integrand = [&](double sigma) {
        return detail::exact_footprint(frame, pixel_center, h, sigma);
    };
    const QuadratureResult q = integrate_adaptive(integrand, a, b, corners, opts);
    // Normalize by the rounded bin width actually integrated; for tiny tau the
    // endpoints s -/+ tau/2 lose relative precision against s.
    const double width = (s + 0.5 * tau) - (s - 0.5 * tau);
    return q.value / width;
}

double area_bin_value(const ViewFrame &frame, const FanBeamGeometry &geometry, Vec2 pixel_center,
                      double h, double s) {
    const double tau = geometry.tau;
    const ConvexPolygon beam = ConvexPolygon::triangle(
        frame.p, detector_point(frame, s - 0.5 * tau), detector_point(frame, s + 0.5 * tau));
    const double clipped = area(clip_convex(ConvexPolygon::square(pixel_center, h), beam));
    if (clipped == 0.0)
        return 0.0;
    return clipped / (fan_angle(frame, s, tau) * norm(pixel_center - frame.p));
}

double parallel_footprint_blurred(double angle, Vec2 pixel_center, double h, double tau,
                                  double s) {
    const Vec2 r{std::sin(angle), -std::cos(angle)};
    const double raw[3] = {r.x * h, r.y * h, tau};
    return h * h * eval_centered(canonicalize(raw), s - dot(r, pixel_center));
}

} // namespace cnsf
