#include "onofri/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace onofri {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess for the i-th root of P_n on [-1,1].
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> (0,1), descending root order
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
}

QuadratureRule build_quadrature(int level) {
    if (level < 1) throw std::invalid_argument("build_quadrature: level must be >= 1");
    QuadratureRule rule;
    rule.level = level;
    rule.n_radial = 2 * (level + 1);
    rule.n_angular = 4 * (level + 1);
    gauss_legendre_01(rule.n_radial, rule.sigma_nodes, rule.sigma_weights);

    rule.nodes.reserve(static_cast<std::size_t>(rule.n_radial) * rule.n_angular);
    rule.weights.reserve(rule.nodes.capacity());
    for (int i = 0; i < rule.n_radial; ++i) {
        const double sigma = rule.sigma_nodes[i];
        const double r = std::sqrt(sigma / (1.0 - sigma));
        const double w = rule.sigma_weights[i] / rule.n_angular;
        for (int j = 0; j < rule.n_angular; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / rule.n_angular;
            rule.nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
            rule.weights.push_back(w);
        }
    }
    return rule;
}

namespace {

double pairwise_range(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_range(v, lo, mid) + pairwise_range(v, mid, hi);
}

}  // namespace

double pairwise_sum(const std::vector<double>& terms) {
    if (terms.empty()) return 0.0;
    return pairwise_range(terms, 0, terms.size());
}

double integrate(const std::function<double(const complexd&)>& f, const QuadratureRule& rule) {
    std::vector<double> terms(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double fq = f(rule.nodes[q]);
        if (!std::isfinite(fq)) {
            throw std::domain_error("integrate: non-finite integrand at node " + std::to_string(q));
        }
        terms[q] = rule.weights[q] * fq;
    }
    return pairwise_sum(terms);
}

std::string QuadratureRule::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "node_re,node_im,weight\n";
    for (std::size_t q = 0; q < size(); ++q) {
        os << nodes[q].real() << ',' << nodes[q].imag() << ',' << weights[q] << '\n';
    }
    return os.str();
}

}  // namespace onofri
