#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "onofri/quadrature.hpp"
#include "onofri/test_function.hpp"

namespace onofri {

double softplus(double t);  // log(1+e^t), the radial Fubini-Study potential
double sigmoid(double t);

/// Rotationally symmetric function u(z) = g(t), t = log|z|^2, on a grid with
/// linear extensions of the given asymptotic slopes. For weight k the
/// associated potential is phi = k softplus(t) + g(t); u is omega-psh exactly
/// when phi is convex with slopes in [0,k].
struct RadialFunction {
    std::vector<double> t;
    std::vector<double> g;
    double slope_left = 0.0;
    double slope_right = 0.0;
    std::function<double(double)> analytic;        // optional closed form g(t)
    std::function<double(double)> analytic_deriv;  // and g'(t)

    double eval(double tt) const;
    int size() const { return static_cast<int>(t.size()); }
    std::string to_csv() const;  // t,value
};

std::vector<double> make_radial_grid(double t_max = 12.0, int n = 2049);
RadialFunction radial_from(const TestFunction& u, const std::vector<double>& grid);
RadialFunction radial_constant(double c, const std::vector<double>& grid);

/// Largest omega-psh minorant: convex hull of the potential with slopes
/// clipped to the admissible range. P u <= u, idempotent, identity on the
/// omega-psh cone.
RadialFunction project_envelope(const RadialFunction& u, int k);

/// Monge-Ampere weights of omega_u on the grid (slope jumps of the potential,
/// pole atoms folded into the end points). Total mass k.
std::vector<double> ma_measure_radial(const RadialFunction& u, int k);

/// int (u - P u) d omega_{P u} (normalized to mass 1); vanishes because the
/// envelope's measure sits on the contact set.
double check_orthogonality(const RadialFunction& u, int k);

/// Dirichlet energy of the piecewise-linear interpolant, int g'(t)^2 dt.
double radial_dirichlet(const RadialFunction& u);
/// int u omega_0, exact per-cell formula for the piecewise-linear interpolant.
double radial_mean(const RadialFunction& u);
/// E_k = -D/(2k) + mean.
double radial_energy(const RadialFunction& u, int k);

struct ComposedDerivative {
    double fd = 0.0;     // centered difference of E_k o P along u + s v
    double exact = 0.0;  // int v d omega_{P u} (normalized)
};
ComposedDerivative derivative_of_composed_energy(const RadialFunction& u, const RadialFunction& v,
                                                 int k, double step = 1e-4);

/// Convex piecewise-linear potential given by breakpoints; slope before the
/// first breakpoint is slope_lo, after the last slope_hi.
struct PLPotential {
    int k = 1;
    std::vector<double> bp_t;
    std::vector<double> bp_v;
    std::vector<double> cell_slopes;  // size bp_t.size()+1
    std::vector<double> cell_sderiv;  // d/ds of the potential per cell (geodesics)
    double potential(double tt) const;
    double u_value(double tt) const { return potential(tt) - k * softplus(tt); }
    std::size_t cell_index(double tt) const;
    double slope_at(double tt) const { return cell_slopes[cell_index(tt)]; }
    double sderiv_at(double tt) const { return cell_sderiv.empty() ? 0.0 : cell_sderiv[cell_index(tt)]; }
};

/// C0-geodesic between omega-psh endpoints via linear interpolation of the
/// Legendre duals of the potentials (the exact solution of the homogeneous
/// Monge-Ampere Dirichlet problem in the S^1-invariant reduction).
struct RadialGeodesic {
    int k = 1;
    std::vector<double> p;      // dual grid on [0,k]
    std::vector<double> dual0;  // phi_0^*(p)
    std::vector<double> dual1;  // phi_1^*(p)

    PLPotential at(double s) const;
    double u_value(double s, double tt) const;
};

RadialGeodesic geodesic_radial(const RadialFunction& u0, const RadialFunction& u1, int k);

double pl_dirichlet(const PLPotential& pot);
double pl_mean(const PLPotential& pot);
double pl_energy(const PLPotential& pot);  // E_k of u = pot - k psi_0

/// -log det of the (diagonal) radial Gram matrix for profile g.
double radial_logdet_L(int m, const std::function<double(double)>& g, const QuadratureRule& rule);

struct GeodesicCheck {
    std::vector<double> s;
    std::vector<double> energy;   // E_k(u_s), affine along the geodesic
    std::vector<double> norm_l;   // L_m(u_s)/(m+1), convex
    std::vector<double> f;        // E - L/(m+1), concave, maximal at a critical endpoint
    double energy_affine_dev = 0.0;
    double l_min_second_diff = 0.0;
    double f_max_second_diff = 0.0;
    double f_excess_over_start = 0.0;  // max_s F(u_s) - F(u_0)
    double ma_det_max = 0.0;           // discrete (s,t) Monge-Ampere determinant
};

/// Requires k = m + 2 so the energy and the determinant functional pair up.
GeodesicCheck check_functionals_along_geodesic(const RadialGeodesic& g, int m,
                                               const QuadratureRule& rule, int n_s = 17);

struct SolverResult {
    RadialFunction u;
    std::vector<double> residuals;
    bool converged = false;
    double distance_to_family = 0.0;
    double lambda_fit = 1.0;
    std::string to_json() const;
};

/// Damped fixed-point iteration for the critical-point equation
/// k omega_0 + dd^c u = k beta_u (weight k = m+2), solved radially.
SolverResult critical_point_solver(int m, const RadialFunction& u_init, const QuadratureRule& rule,
                                   double damping = 0.5, int max_iter = 500,
                                   double tol = 1e-6);

std::string geodesic_to_csv(const RadialGeodesic& g, const std::vector<double>& s_values,
                            const std::vector<double>& grid);

}  // namespace onofri
