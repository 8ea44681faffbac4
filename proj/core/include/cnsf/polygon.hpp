#pragma once

#include <vector>

#include "cnsf/vec2.hpp"

namespace cnsf {

/// Convex polygon with counter-clockwise vertices; empty when clipped away.
struct ConvexPolygon {
    std::vector<Vec2> vertices;

    bool empty() const { return vertices.size() < 3; }

    /// Axis-aligned square of side h centered at `center`.
    static ConvexPolygon square(Vec2 center, double h);
    /// Triangle a, b, c reordered counter-clockwise.
    static ConvexPolygon triangle(Vec2 a, Vec2 b, Vec2 c);
};

/// Keeps the part of `poly` on the left of the directed line a -> b.
ConvexPolygon clip_half_plane(const ConvexPolygon &poly, Vec2 a, Vec2 b);

/// Sutherland-Hodgman clip of `subject` against every edge of convex `clip`.
ConvexPolygon clip_convex(const ConvexPolygon &subject, const ConvexPolygon &clip);

/// Gauss area formula, fanned from the last vertex.
double area(const ConvexPolygon &poly);

} // namespace cnsf
