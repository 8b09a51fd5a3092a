#include "onofri/test_function.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "onofri/rng.hpp"

namespace onofri {

namespace {

constexpr double kPi = std::numbers::pi;

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double softplus_local(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

TestFunction make_constant(double c) {
    TestFunction u;
    u.value = [c](const complexd&) { return c; };
    u.grad_sq_density = [](const complexd&) { return 0.0; };
    u.ddc_density = [](const complexd&) { return 0.0; };
    u.label = "const(" + fmt_double(c) + ")";
    u.radial = true;
    u.radial_value = [c](double) { return c; };
    u.radial_deriv = [](double) { return 0.0; };
    return u;
}

TestFunction make_harmonic1() {
    TestFunction u;
    u.value = [](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e300) return 1.0;
        return (s - 1.0) / (s + 1.0);
    };
    u.grad_sq_density = [](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e75) return 0.0;
        const double d = 1.0 + s;
        return 16.0 * s / (d * d * d * d);
    };
    u.ddc_density = [](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e100) return 0.0;
        const double d = 1.0 + s;
        return 2.0 * (1.0 - s) / (kPi * d * d * d);
    };
    u.label = "harmonic1";
    u.radial = true;
    u.radial_value = [](double t) { return std::tanh(0.5 * t); };
    u.radial_deriv = [](double t) {
        const double c = std::cosh(0.5 * t);
        return 0.5 / (c * c);
    };
    return u;
}

TestFunction make_dilation(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("make_dilation: lambda must be positive");
    const double l2 = lambda * lambda;
    TestFunction u;
    u.value = [l2](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e300) return std::log(l2);
        return std::log1p(l2 * s) - std::log1p(s);
    };
    u.grad_sq_density = [l2](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e150) return 0.0;
        const double a = (1.0 + l2 * s) * (1.0 + s);
        const double diff = l2 - 1.0;
        return 4.0 * s * diff * diff / (a * a);
    };
    u.ddc_density = [l2](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e150) return 0.0;
        const double da = 1.0 + l2 * s;
        const double db = 1.0 + s;
        return (l2 / (da * da) - 1.0 / (db * db)) / kPi;
    };
    u.label = "dilation(" + fmt_double(lambda) + ")";
    u.radial = true;
    const double loglam2 = std::log(l2);
    u.radial_value = [l2, loglam2](double t) {
        // log(1+l2 e^t) - log(1+e^t), stable for large |t|
        if (t > 50.0) return loglam2 + std::log1p(std::exp(-t) / l2) - std::log1p(std::exp(-t));
        return std::log1p(l2 * std::exp(t)) - std::log1p(std::exp(t));
    };
    u.radial_deriv = [loglam2](double t) { return sigmoid(t + loglam2) - sigmoid(t); };
    return u;
}

TestFunction make_mobius(const MobiusMap& m) {
    const complexd a = m.a, b = m.b, c = m.c, d = m.d;
    // u_M = log(|az+b|^2 + |cz+d|^2) - log(1+|z|^2); omega_0 + dd^c u_M = M^* omega_0.
    auto qsum = [a, b, c, d](const complexd& z) {
        return std::norm(a * z + b) + std::norm(c * z + d);
    };
    TestFunction u;
    u.value = [qsum, a, c](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e100) return std::log(std::norm(a) + std::norm(c));
        return std::log(qsum(z)) - std::log1p(s);
    };
    u.grad_sq_density = [qsum, a, b, c, d](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e75) return 0.0;
        const complexd num = a * std::conj(a * z + b) + c * std::conj(c * z + d);
        const complexd uz = num / qsum(z) - std::conj(z) / (1.0 + s);
        return 4.0 * std::norm(uz);
    };
    u.ddc_density = [qsum](const complexd& z) {
        const double s = std::norm(z);
        if (s > 1e75) return 0.0;
        const double q = qsum(z);
        const double db = 1.0 + s;
        return (1.0 / (q * q) - 1.0 / (db * db)) / kPi;
    };
    std::ostringstream lab;
    lab.precision(6);
    lab << "mobius(a=" << a << ",b=" << b << ",c=" << c << ",d=" << d << ")";
    u.label = lab.str();
    u.radial = false;
    return u;
}

TestFunction make_radial_bump(double height, double width, double center) {
    if (!(width > 0.0 && width <= 2.0)) {
        throw std::invalid_argument("make_radial_bump: width must be in (0,2]");
    }
    // g(t) = h sech^{2q}((t-c)/2); the exponent is kept integral so the chart
    // integrands stay rational in the compactified radial variable.
    const double q = std::max(1.0, std::round(2.0 / width));
    auto g = [height, q, center](double t) {
        return height * std::exp(q * (std::log(4.0) - 2.0 * softplus_local(t - center) + (t - center)));
    };
    auto gp = [g, q, center](double t) {
        const double sig = 1.0 / (1.0 + std::exp(-(t - center)));
        return g(t) * q * (1.0 - 2.0 * sig);
    };
    auto gpp = [g, q, center](double t) {
        const double sig = 1.0 / (1.0 + std::exp(-(t - center)));
        const double a = q * (1.0 - 2.0 * sig);
        return g(t) * (a * a - 2.0 * q * sig * (1.0 - sig));
    };
    TestFunction u;
    u.value = [g](const complexd& z) {
        const double s = std::norm(z);
        if (s <= 0.0 || s > 1e300) return 0.0;
        return g(std::log(s));
    };
    u.grad_sq_density = [gp](const complexd& z) {
        const double s = std::norm(z);
        if (s <= 1e-300 || s > 1e300) return 0.0;
        const double d = gp(std::log(s));
        return 4.0 * d * d / s;
    };
    u.ddc_density = [gpp](const complexd& z) {
        const double s = std::norm(z);
        if (s <= 1e-300 || s > 1e300) return 0.0;
        return gpp(std::log(s)) / (kPi * s);
    };
    u.label = "bump(h=" + fmt_double(height) + ",w=" + fmt_double(width) + ",c=" + fmt_double(center) + ")";
    u.radial = true;
    u.radial_value = g;
    u.radial_deriv = gp;
    return u;
}

namespace {

// Orthonormal real harmonics against omega_0: three of degree 1, five of degree 2.
struct HarmonicBasis {
    double value(int j, const SpherePoint& p) const {
        const double r15 = std::sqrt(15.0), r3 = std::sqrt(3.0), r5 = std::sqrt(5.0);
        switch (j) {
            case 0: return r3 * p.x;
            case 1: return r3 * p.y;
            case 2: return r3 * p.z;
            case 3: return r15 * p.x * p.y;
            case 4: return r15 * p.y * p.z;
            case 5: return r15 * p.z * p.x;
            case 6: return 0.5 * r15 * (p.x * p.x - p.y * p.y);
            case 7: return 0.5 * r5 * (3.0 * p.z * p.z - 1.0);
        }
        return 0.0;
    }
    std::array<double, 3> ambient_grad(int j, const SpherePoint& p) const {
        const double r15 = std::sqrt(15.0), r3 = std::sqrt(3.0), r5 = std::sqrt(5.0);
        switch (j) {
            case 0: return {r3, 0.0, 0.0};
            case 1: return {0.0, r3, 0.0};
            case 2: return {0.0, 0.0, r3};
            case 3: return {r15 * p.y, r15 * p.x, 0.0};
            case 4: return {0.0, r15 * p.z, r15 * p.y};
            case 5: return {r15 * p.z, 0.0, r15 * p.x};
            case 6: return {r15 * p.x, -r15 * p.y, 0.0};
            case 7: return {0.0, 0.0, 3.0 * r5 * p.z};
        }
        return {0.0, 0.0, 0.0};
    }
};

const HarmonicBasis kBasis;

}  // namespace

const std::vector<int>& harmonic_basis_degrees() {
    static const std::vector<int> degrees = {1, 1, 1, 2, 2, 2, 2, 2};
    return degrees;
}

std::vector<double> random_fourier_coeffs(std::uint64_t seed, int modes) {
    if (modes < 1 || modes > 8) throw std::invalid_argument("random_fourier: modes must be in [1,8]");
    Rng rng(Rng::mix64(seed ^ 0x52414e46ull));
    std::vector<double> coeffs(modes);
    for (int j = 0; j < modes; ++j) coeffs[j] = 0.35 * rng.normal();
    return coeffs;
}

TestFunction make_random_fourier(std::uint64_t seed, int modes) {
    const std::vector<double> coeffs = random_fourier_coeffs(seed, modes);
    const std::vector<int>& degrees = harmonic_basis_degrees();

    TestFunction u;
    u.value = [coeffs](const complexd& z) {
        const SpherePoint p = stereo_lift(z);
        double v = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) v += coeffs[j] * kBasis.value(static_cast<int>(j), p);
        return v;
    };
    u.grad_sq_density = [coeffs](const complexd& z) {
        const SpherePoint p = stereo_lift(z);
        std::array<double, 3> grad{0.0, 0.0, 0.0};
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            const auto gj = kBasis.ambient_grad(static_cast<int>(j), p);
            grad[0] += coeffs[j] * gj[0];
            grad[1] += coeffs[j] * gj[1];
            grad[2] += coeffs[j] * gj[2];
        }
        const double gdotn = grad[0] * p.x + grad[1] * p.y + grad[2] * p.z;
        const double tangential =
            grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2] - gdotn * gdotn;
        const double s = std::norm(z);
        const double d = 1.0 + s;
        return 4.0 * tangential / (d * d);
    };
    u.ddc_density = [coeffs, degrees](const complexd& z) {
        const SpherePoint p = stereo_lift(z);
        double lap = 0.0;  // Delta_{S^2} u = -l(l+1) on each harmonic
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            const int l = degrees[j];
            lap -= coeffs[j] * l * (l + 1) * kBasis.value(static_cast<int>(j), p);
        }
        const double d = 1.0 + std::norm(z);
        return lap / (kPi * d * d);
    };
    u.label = "random_fourier(seed=" + std::to_string(seed) + ",modes=" + std::to_string(modes) + ")";
    u.radial = false;
    return u;
}

TestFunction scale(const TestFunction& u, double t) {
    TestFunction r;
    auto val = u.value;
    auto grad = u.grad_sq_density;
    auto ddc = u.ddc_density;
    r.value = [val, t](const complexd& z) { return t * val(z); };
    r.grad_sq_density = [grad, t](const complexd& z) { return t * t * grad(z); };
    r.ddc_density = [ddc, t](const complexd& z) { return t * ddc(z); };
    r.label = fmt_double(t) + "*" + u.label;
    r.radial = u.radial;
    if (u.radial) {
        auto rv = u.radial_value;
        auto rd = u.radial_deriv;
        r.radial_value = [rv, t](double x) { return t * rv(x); };
        r.radial_deriv = [rd, t](double x) { return t * rd(x); };
    }
    return r;
}

TestFunction add_constant(const TestFunction& u, double c) {
    TestFunction r = u;
    auto val = u.value;
    r.value = [val, c](const complexd& z) { return val(z) + c; };
    r.label = u.label + "+" + fmt_double(c);
    if (u.radial) {
        auto rv = u.radial_value;
        r.radial_value = [rv, c](double t) { return rv(t) + c; };
    }
    return r;
}

TestFunction sum(const TestFunction& u, const TestFunction& v) {
    TestFunction r;
    auto uval = u.value, vval = v.value;
    auto uddc = u.ddc_density, vddc = v.ddc_density;
    r.value = [uval, vval](const complexd& z) { return uval(z) + vval(z); };
    r.ddc_density = [uddc, vddc](const complexd& z) { return uddc(z) + vddc(z); };
    r.grad_sq_density = nullptr;  // |grad(u+v)|^2 is not additive
    if (u.radial && v.radial) {
        auto urv = u.radial_value, vrv = v.radial_value;
        auto urd = u.radial_deriv, vrd = v.radial_deriv;
        r.radial = true;
        r.radial_value = [urv, vrv](double t) { return urv(t) + vrv(t); };
        r.radial_deriv = [urd, vrd](double t) { return urd(t) + vrd(t); };
        auto rd = r.radial_deriv;
        r.grad_sq_density = [rd](const complexd& z) {
            const double s = std::norm(z);
            if (s <= 1e-300 || s > 1e300) return 0.0;
            const double d = rd(std::log(s));
            return 4.0 * d * d / s;
        };
    }
    r.label = u.label + "+" + v.label;
    return r;
}

TestFunction pullback(const TestFunction& u, const MobiusMap& m) {
    TestFunction r;
    auto val = u.value;
    auto grad = u.grad_sq_density;
    auto ddc = u.ddc_density;
    r.value = [val, m](const complexd& z) { return val(m.apply(z)); };
    r.grad_sq_density = [grad, m](const complexd& z) {
        const complexd w = m.apply(z);
        const double jac = std::norm(m.derivative(z));
        return grad(w) * jac;
    };
    r.ddc_density = [ddc, m](const complexd& z) {
        const complexd w = m.apply(z);
        const double jac = std::norm(m.derivative(z));
        return ddc(w) * jac;
    };
    r.label = u.label + "ateM";
    r.radial = false;
    return r;
}

MobiusMap random_mobius(std::uint64_t seed, double lambda_min, double lambda_max) {
    Rng rng(Rng::mix64(seed ^ 0x4d4f4249ull));
    auto haar_rotation = [&rng]() {
        double q[4];
        double n2 = 0.0;
        for (double& qi : q) {
            qi = rng.normal();
            n2 += qi * qi;
        }
        const double n = std::sqrt(n2);
        return MobiusMap::rotation({q[0] / n, q[1] / n}, {q[2] / n, q[3] / n});
    };
    const double lambda = std::exp(rng.uniform(std::log(lambda_min), std::log(lambda_max)));
    return haar_rotation().compose(MobiusMap::dilation(lambda)).compose(haar_rotation());
}

TestFunction make_from_params(const std::map<std::string, std::string>& params) {
    auto get = [&params](const std::string& key, const std::string& fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto getd = [&get](const std::string& key, double fallback) {
        return std::stod(get(key, fmt_double(fallback)));
    };
    const std::string family = get("family", "");
    if (family == "const" || family == "constant") return make_constant(getd("c", 0.0));
    if (family == "harmonic1" || family == "h1") return make_harmonic1();
    if (family == "dilation") return make_dilation(getd("lambda", 2.0));
    if (family == "mobius") {
        return make_mobius(random_mobius(std::stoull(get("seed", "1")), getd("lambda_min", 1.2),
                                         getd("lambda_max", 2.5)));
    }
    if (family == "bump" || family == "radial_bump") {
        return make_radial_bump(getd("height", 0.5), getd("width", 1.0), getd("center", 0.0));
    }
    if (family == "random_fourier" || family == "fourier") {
        return make_random_fourier(std::stoull(get("seed", "1")),
                                   static_cast<int>(getd("modes", 8)));
    }
    throw std::invalid_argument("make_from_params: unknown family '" + family + "'");
}

}  // namespace onofri
