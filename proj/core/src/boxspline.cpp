#include "cnsf/boxspline.hpp"

#include "cnsf/errors.hpp"

namespace cnsf {

double truncated_power(double x, int degree) {
    if (degree < 0)
        throw ValidationError("truncated_power: negative degree");
    if (degree == 0)
        return x >= 0.0 ? 1.0 : 0.0;
    if (x <= 0.0)
        return 0.0;
    double r = x;
    for (int k = 1; k < degree; ++k)
        r *= x;
    return r;
}

DirectionSet canonicalize(std::span<const double> raw, double epsilon) {
    if (raw.empty() || raw.size() > 3)
        throw ValidationError("box spline needs 1 to 3 directions");
    if (!(epsilon > 0.0))
        throw ValidationError("degeneracy threshold must be positive");
    DirectionSet d = canonicalize3(raw[0], raw.size() > 1 ? raw[1] : 0.0,
                                   raw.size() > 2 ? raw[2] : 0.0, epsilon);
    if (d.size() == 0)
        throw ValidationError("all box spline directions are degenerate");
    return d;
}

double eval_centered(const DirectionSet &dirs, double x) {
    if (dirs.size() == 0)
        throw ValidationError("eval_centered: empty direction set");
    return eval_centered_unchecked(dirs, x);
}

} // namespace cnsf
