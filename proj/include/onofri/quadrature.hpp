#pragma once

#include <functional>
#include <string>
#include <vector>

#include "onofri/sphere.hpp"

namespace onofri {

/// Quadrature rule for integrals against the normalized area form omega_0.
///
/// In the compactified radial variable sigma = |z|^2/(1+|z|^2) and the polar
/// angle theta, omega_0 is the uniform measure d(sigma) d(theta)/2pi on
/// (0,1) x [0,2pi). The rule is a tensor product of Gauss-Legendre in sigma
/// and the trapezoid rule in theta, so the monomial moments
/// |z|^{2i}(1+|z|^2)^{-m} are integrated exactly for m <= 2*level.
struct QuadratureRule {
    int level = 0;
    int n_radial = 0;
    int n_angular = 0;
    std::vector<complexd> nodes;       // chart coordinates z_q
    std::vector<double> weights;       // sum to 1
    std::vector<double> sigma_nodes;   // Gauss-Legendre nodes on (0,1)
    std::vector<double> sigma_weights; // Gauss-Legendre weights, sum to 1

    std::size_t size() const { return nodes.size(); }

    /// CSV dump (re, im, weight) with header.
    std::string to_csv() const;
};

QuadratureRule build_quadrature(int level);

/// Gauss-Legendre nodes/weights on (0,1); weights sum to 1.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Integral of f against omega_0. Uses a fixed-shape pairwise reduction so
/// the result does not depend on execution order. Throws std::domain_error
/// (carrying the node index) if f is non-finite at a node.
double integrate(const std::function<double(const complexd&)>& f, const QuadratureRule& rule);

/// Pairwise (fixed tree) sum of a vector of terms.
double pairwise_sum(const std::vector<double>& terms);

}  // namespace onofri
