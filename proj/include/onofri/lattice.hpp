#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "onofri/gram.hpp"

namespace onofri {

struct LatticeCount {
    int m = 0;
    std::string u_label;
    std::int64_t count = 0;          // Gaussian-integer coefficient vectors in the unit ball
    double h0 = 0.0;                 // log(count)
    double log_ball_volume = 0.0;
    double minkowski_bound = 0.0;    // log Vol B - 2N log 2

    static std::string csv_header();
    std::string csv_row() const;
};

/// Unnormalized Gram matrix G_ij = int z^i conj(z)^j (1+|z|^2)^{-m} e^{-u} omega_0;
/// the normalized matrix is diag(c) G diag(c).
Eigen::MatrixXcd unnormalized_gram(int m, const TestFunction& u, const QuadratureRule& rule);

/// Exact count of a in (Z+iZ)^{m+1} with a^* G a <= 1 (zero included),
/// by depth-first enumeration inside the Cholesky bounding box. m <= 4.
std::int64_t count_lattice_points(const Eigen::MatrixXcd& gram_unnormalized);
LatticeCount count_lattice_points(int m, const TestFunction& u, const QuadratureRule& rule);

/// Same count plus the Minkowski lower bound h0 >= log Vol B - 2N log 2 with
/// Vol B = V_{2N} / det G.
LatticeCount minkowski_check(int m, const TestFunction& u, const QuadratureRule& rule);

/// L_m(u) - (log Vol B(u) - log Vol B(0)); vanishes identically.
double volume_identity_check(int m, const TestFunction& u, const QuadratureRule& rule);

/// Brute-force reference count over a 2x-margin axis box (test oracle).
std::int64_t count_lattice_points_bruteforce(const Eigen::MatrixXcd& gram_unnormalized,
                                             double margin = 2.0);

}  // namespace onofri
