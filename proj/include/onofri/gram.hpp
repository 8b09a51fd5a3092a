#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "onofri/quadrature.hpp"
#include "onofri/test_function.hpp"

namespace onofri {

/// Normalized Gram matrix of the monomial basis of H^0(O(m)+K) under the
/// weight e^{-u}: M_ij = c_i c_j int z^i conj(z)^j (1+|z|^2)^{-m} e^{-u} omega_0
/// with c_i = sqrt((m+1) binom(m,i)), so M = identity at u = 0.
struct GramMatrix {
    int m = 0;                 // degree, N = m + 1
    bool radial = false;       // diagonal fast path was used
    Eigen::MatrixXcd mat;      // Hermitian positive definite
    Eigen::MatrixXcd chol;     // lower triangular, positive real diagonal

    int size() const { return m + 1; }
    std::string to_csv() const;  // row,col,re,im
};

struct BergmanEval {
    StereoCoord z;
    double beta_density = 0.0;       // density of beta_u against omega_0
    Eigen::VectorXcd kernel_row;     // weighted orthonormal basis values at z
};

GramMatrix assemble_gram(int m, const TestFunction& u, const QuadratureRule& rule);

/// L_m(u) = -log det M, via the triangular factor (never forms det directly).
double logdet_L(const GramMatrix& gram);
double logdet_L(int m, const TestFunction& u, const QuadratureRule& rule);

/// Weighted monomial basis phi_i(z) = c_i z^i (1+|z|^2)^{-m/2} e^{-u(z)/2},
/// evaluated in log space; |phi| is bounded by sqrt((m+1) e^{-u}).
Eigen::VectorXcd weighted_basis(int m, const TestFunction& u, const complexd& z);

/// Weighted orthonormalized basis at z (forward solve against the factor).
Eigen::VectorXcd onb_at(const GramMatrix& gram, const TestFunction& u, const complexd& z);

BergmanEval bergman(const GramMatrix& gram, const TestFunction& u, const complexd& z);
BergmanEval bergman(int m, const TestFunction& u, const QuadratureRule& rule, const StereoCoord& z);

/// Toeplitz operator with (real) symbol f in the u-orthonormal basis:
/// T[f]_kl = <f e_k, e_l>_u. T[1] = identity, Tr T[f] = N int f beta_u.
Eigen::MatrixXcd toeplitz_matrix(const GramMatrix& gram, const TestFunction& u,
                                 const QuadratureRule& rule,
                                 const std::function<double(const complexd&)>& symbol);
Eigen::MatrixXcd toeplitz_matrix(int m, const TestFunction& u, const QuadratureRule& rule,
                                 const TestFunction& f);

/// First variation of the Bergman density at z along direction v:
/// d/ds beta_{u+sv}(z) at s=0, as the kernel second-moment expression.
double rv_operator(const GramMatrix& gram, const TestFunction& u, const TestFunction& v,
                   const QuadratureRule& rule, const complexd& z);
double rv_operator(int m, const TestFunction& u, const TestFunction& v, const QuadratureRule& rule,
                   const StereoCoord& z);

/// d^2/ds^2 [(1/N) L_m(u + s v)] at s = 0 as the Toeplitz trace expression
/// (1/N)(Tr T[v]^2 - Tr T[v^2]); always <= 0 along affine directions.
double second_derivative_trace(const GramMatrix& gram, const TestFunction& u,
                               const TestFunction& v, const QuadratureRule& rule);
double second_derivative_trace(int m, const TestFunction& u, const TestFunction& v,
                               const QuadratureRule& rule);

/// Bergman density profile over a radial grid in t = log|z|^2, as CSV.
std::string bergman_profile_csv(const GramMatrix& gram, const TestFunction& u,
                                const std::vector<double>& t_values);

double log_binomial(int n, int k);

}  // namespace onofri
