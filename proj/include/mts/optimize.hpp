#pragma once

#include <functional>

namespace mts {

struct BrentResult {
    double x;
    double fx;
    int iterations;
};

// Brent's method for a scalar minimum on [lo, hi]: parabolic interpolation
// with golden-section fallback. Stops when the bracket around the best point
// shrinks below x_tol (absolute).
BrentResult brent_minimize(const std::function<double(double)>& f, double lo,
                           double hi, double x_tol, int max_iter = 200);

} // namespace mts
