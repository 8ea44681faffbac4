#include "cnsf/polygon.hpp"

#include <cmath>
#include <cstddef>

namespace cnsf {

ConvexPolygon ConvexPolygon::square(Vec2 center, double h) {
    const double r = 0.5 * h;
    return {{center + Vec2{-r, -r}, center + Vec2{r, -r}, center + Vec2{r, r},
             center + Vec2{-r, r}}};
}

ConvexPolygon ConvexPolygon::triangle(Vec2 a, Vec2 b, Vec2 c) {
    if (cross(b - a, c - a) < 0.0)
        return {{a, c, b}};
    return {{a, b, c}};
}

ConvexPolygon clip_half_plane(const ConvexPolygon &poly, Vec2 a, Vec2 b) {
    ConvexPolygon out;
    const std::size_t m = poly.vertices.size();
    if (m == 0)
        return out;
    out.vertices.reserve(m + 1);
    const Vec2 edge = b - a;
    auto side = [&](Vec2 x) { return cross(edge, x - a); };
    for (std::size_t k = 0; k < m; ++k) {
        const Vec2 cur = poly.vertices[k];
        const Vec2 next = poly.vertices[(k + 1) % m];
        const double sc = side(cur);
        const double sn = side(next);
        if (sc >= 0.0)
            out.vertices.push_back(cur);
        if ((sc >= 0.0) != (sn >= 0.0)) {
            const double t = sc / (sc - sn);
            out.vertices.push_back(cur + t * (next - cur));
        }
    }
    if (out.vertices.size() < 3)
        out.vertices.clear();
    return out;
}

ConvexPolygon clip_convex(const ConvexPolygon &subject, const ConvexPolygon &clip) {
    ConvexPolygon out = subject;
    const std::size_t m = clip.vertices.size();
    for (std::size_t k = 0; k < m && !out.empty(); ++k)
        out = clip_half_plane(out, clip.vertices[k], clip.vertices[(k + 1) % m]);
    return out;
}

double area(const ConvexPolygon &poly) {
    const std::size_t m = poly.vertices.size();
    if (m < 3)
        return 0.0;
    const Vec2 last = poly.vertices[m - 1];
    double twice = 0.0;
    for (std::size_t i = 0; i + 2 < m; ++i) {
        const Vec2 a = poly.vertices[i];
        const Vec2 b = poly.vertices[i + 1];
        twice += std::abs(cross(a - b, last - b));
    }
    return 0.5 * twice;
}

} // namespace cnsf
