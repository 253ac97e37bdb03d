#include "mts/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace mts {

BrentResult brent_minimize(const std::function<double(double)>& f, double lo,
                           double hi, double x_tol, int max_iter) {
    if (!(lo < hi)) throw std::invalid_argument("brent_minimize: empty interval");
    if (!(x_tol > 0.0)) throw std::invalid_argument("brent_minimize: x_tol must be > 0");

    constexpr double golden = 0.3819660112501051; // 2 - phi

    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0; // last and second-to-last step sizes

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol1 = x_tol;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;

        bool use_golden = true;
        if (std::abs(e) > tol1) {
            // parabola through (x,fx), (w,fw), (v,fv)
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                // keep the probe away from the bracket ends
                if (u - a < tol2 || b - u < tol2) {
                    d = (x < mid) ? tol1 : -tol1;
                }
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (x < mid) ? b - x : a - x;
            d = golden * e;
        }

        const double u =
            (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);

        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, iter};
}

} // namespace mts
