#pragma once

#include "onofri/quadrature.hpp"
#include "onofri/test_function.hpp"

namespace onofri {

/// Dirichlet energy D(u) = int du ^ d^c u = (1/4pi) int |grad u|^2 dA.
double dirichlet_energy(const TestFunction& u, const QuadratureRule& rule);

/// int u omega_0.
double mean_value(const TestFunction& u, const QuadratureRule& rule);

/// E_k(u) = -D(u)/(2k) + int u omega_0, the Aubin-Mabuchi energy for the
/// weight k psi_0 on the sphere. Satisfies E_k(u + c) = E_k(u) + c.
double energy_E(const TestFunction& u, int k, const QuadratureRule& rule);

/// Aubin's J functional, J(u) = int u omega_0 - E_1(u) = D(u)/2 >= 0.
double j_functional(const TestFunction& u, const QuadratureRule& rule);

}  // namespace onofri
