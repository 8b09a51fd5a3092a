#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace onofri {

using complexd = std::complex<double>;

/// Point on the unit two-sphere embedded in R^3.
struct SpherePoint {
    double x = 0.0, y = 0.0, z = -1.0;

    double norm_sq() const { return x * x + y * y + z * z; }
};

/// Stereographic chart coordinate. The chart is centered at the south pole
/// (0,0,-1) -> 0; the north pole has no finite coordinate.
struct StereoCoord {
    complexd value{0.0, 0.0};
    bool at_infinity = false;
};

inline StereoCoord stereo_project(const SpherePoint& p) {
    const double denom = 1.0 - p.z;
    if (denom <= 0.0) return StereoCoord{{0.0, 0.0}, true};
    return StereoCoord{complexd(p.x / denom, p.y / denom), false};
}

inline SpherePoint stereo_lift(const StereoCoord& c) {
    if (c.at_infinity) return SpherePoint{0.0, 0.0, 1.0};
    const double s = std::norm(c.value);
    const double d = 1.0 + s;
    return SpherePoint{2.0 * c.value.real() / d, 2.0 * c.value.imag() / d, (s - 1.0) / d};
}

inline SpherePoint stereo_lift(const complexd& z) { return stereo_lift(StereoCoord{z, false}); }

/// Fubini-Study weight psi_0(z) = log(1+|z|^2); the curvature form
/// omega_0 = dd^c psi_0 has chart density (1/pi)(1+|z|^2)^{-2} and unit mass.
inline double fubini_study_weight(const StereoCoord& c) {
    if (c.at_infinity) throw std::domain_error("fubini_study_weight: weight undefined in this chart");
    return std::log1p(std::norm(c.value));
}

inline double fubini_study_weight(const complexd& z) { return std::log1p(std::norm(z)); }

/// Squared chordal distance in the diameter-one normalization,
/// d(p,q)^2 = |z_p - z_q|^2 e^{-psi0(z_p)} e^{-psi0(z_q)} = ||p-q||^2 / 4.
/// log d^2 is the Green function of (S^2, omega_0).
inline double chordal_sq(const SpherePoint& p, const SpherePoint& q) {
    const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
    return 0.25 * (dx * dx + dy * dy + dz * dz);
}

/// Moebius transformation z -> (a z + b) / (c z + d), stored with ad - bc = 1.
/// SU(2) elements (c = -conj(b), d = conj(a)) are the sphere rotations; the
/// dilations generate the rest of the conformal group.
struct MobiusMap {
    complexd a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    MobiusMap() = default;
    MobiusMap(complexd a_, complexd b_, complexd c_, complexd d_) : a(a_), b(b_), c(c_), d(d_) {
        normalize();
    }

    void normalize() {
        const complexd det = a * d - b * c;
        if (std::abs(det) < 1e-300) throw std::invalid_argument("MobiusMap: singular coefficient matrix");
        const complexd r = std::sqrt(det);
        a /= r; b /= r; c /= r; d /= r;
    }

    complexd det() const { return a * d - b * c; }

    static MobiusMap identity() { return MobiusMap{}; }

    /// Rotation of the sphere, z -> (alpha z + beta)/(-conj(beta) z + conj(alpha)).
    static MobiusMap rotation(complexd alpha, complexd beta) {
        return MobiusMap(alpha, beta, -std::conj(beta), std::conj(alpha));
    }

    /// z -> lambda z with lambda > 0.
    static MobiusMap dilation(double lambda) {
        if (!(lambda > 0.0)) throw std::invalid_argument("MobiusMap::dilation: lambda must be positive");
        const double r = std::sqrt(lambda);
        return MobiusMap(complexd(r, 0.0), {}, {}, complexd(1.0 / r, 0.0));
    }

    MobiusMap compose(const MobiusMap& o) const {  // (*this) after o
        return MobiusMap(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
    }

    StereoCoord apply(const StereoCoord& zc) const {
        if (zc.at_infinity) {
            if (std::abs(c) == 0.0) return StereoCoord{{0.0, 0.0}, true};
            return StereoCoord{a / c, false};
        }
        const complexd den = c * zc.value + d;
        if (std::abs(den) == 0.0) return StereoCoord{{0.0, 0.0}, true};
        return StereoCoord{(a * zc.value + b) / den, false};
    }

    complexd apply(const complexd& z) const {
        const StereoCoord r = apply(StereoCoord{z, false});
        if (r.at_infinity) return complexd(std::numeric_limits<double>::infinity(), 0.0);
        return r.value;
    }

    /// Derivative M'(z) = 1/(cz+d)^2 for the unit-determinant representative.
    complexd derivative(const complexd& z) const {
        const complexd den = c * z + d;
        return 1.0 / (den * den);
    }

    bool is_rotation(double tol = 1e-12) const {
        return std::abs(c + std::conj(b)) <= tol && std::abs(d - std::conj(a)) <= tol;
    }
};

}  // namespace onofri
