#pragma once

// Test-side oracles, independent of the library's quadrature path.

#include <cmath>
#include <functional>

#include "onofri/rng.hpp"
#include "onofri/sphere.hpp"

namespace oracles {

// Adaptive Simpson on [a,b].
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-13) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integral of a radial chart function h(s), s = |z|^2, against omega_0:
// int_0^inf h(s) (1+s)^{-2} ds via the compactified variable.
inline double radial_omega0(const std::function<double(double)>& h, double tol = 1e-13) {
    return integrate_1d(
        [&h](double sig) {
            if (sig >= 1.0) return 0.0;
            return h(sig / (1.0 - sig));
        },
        0.0, 1.0, tol);
}

inline onofri::SpherePoint random_sphere_point(onofri::Rng& rng) {
    double v[3];
    double n2;
    do {
        n2 = 0.0;
        for (double& vi : v) {
            vi = rng.normal();
            n2 += vi * vi;
        }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    return onofri::SpherePoint{v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace oracles
