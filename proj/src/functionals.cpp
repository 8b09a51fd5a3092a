#include "onofri/functionals.hpp"

#include <stdexcept>

namespace onofri {

double dirichlet_energy(const TestFunction& u, const QuadratureRule& rule) {
    // dA = pi (1+|z|^2)^2 omega_0, so D = (1/4) int grad_sq (1+|z|^2)^2 omega_0.
    auto grad = u.grad_sq_density;
    const double d = integrate(
        [&grad](const complexd& z) {
            const double f = 1.0 + std::norm(z);
            return 0.25 * grad(z) * f * f;
        },
        rule);
    if (d < -1e-12) throw std::runtime_error("dirichlet_energy: negative result " + std::to_string(d));
    return d < 0.0 ? 0.0 : d;
}

double mean_value(const TestFunction& u, const QuadratureRule& rule) {
    auto val = u.value;
    return integrate([&val](const complexd& z) { return val(z); }, rule);
}

double energy_E(const TestFunction& u, int k, const QuadratureRule& rule) {
    if (k < 1) throw std::invalid_argument("energy_E: k must be >= 1");
    return -dirichlet_energy(u, rule) / (2.0 * k) + mean_value(u, rule);
}

double j_functional(const TestFunction& u, const QuadratureRule& rule) {
    return mean_value(u, rule) - energy_E(u, 1, rule);
}

}  // namespace onofri
