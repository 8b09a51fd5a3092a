#pragma once

#include <string>
#include <vector>

#include "onofri/functionals.hpp"
#include "onofri/gram.hpp"

namespace onofri {

enum class Verdict { Pass, Equality, Fail };

std::string to_string(Verdict v);

struct SlackReport {
    std::string name;
    int index = 0;  // m or N
    std::string u_label;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    double tolerance = 1e-8;
    double equality_tolerance = 1e-6;
    Verdict verdict = Verdict::Pass;

    static SlackReport make(std::string name, int index, std::string u_label, double lhs,
                            double rhs, double tol = 1e-8, double eq_tol = 1e-6);
    std::string csv_row() const;
    static std::string csv_header();
};

/// Corollary-of-the-main-theorem bound on S^2:
/// -L_m(u) <= -(m+1) int u omega_0 + ((m+1)/(m+2)) D(u)/2, equality exactly on
/// Moebius pullbacks of omega_0.
SlackReport check_moser(int m, const TestFunction& u, const QuadratureRule& rule);

/// The m = 0 case: log int e^{-u} omega_0 <= -int u omega_0 + D(u)/4.
SlackReport check_onofri(const TestFunction& u, const QuadratureRule& rule);

/// log(det Delta_u / det Delta_0) through the anomaly formula:
/// -D(u)/2 + (m+1) int u omega_0 - L_m(u). Invariant under u -> u + c.
double det_laplacian_log_ratio(int m, const TestFunction& u, const QuadratureRule& rule);

/// Sharp determinant bound: ratio <= -D(u)/(2(m+2)) (and <= 0).
SlackReport check_det_bound(int m, const TestFunction& u, const QuadratureRule& rule);

/// Log moment generating function of the centered linear statistic of the
/// N-particle spherical ensemble: G_N(t,u) = -L_{N-1}(t u) + t N int u omega_0.
double fluctuation_mgf(int n_particles, double t, const TestFunction& u, const QuadratureRule& rule);

/// Multi-particle bound G_N(t,u) <= (N/(N+1)) (t^2/2) D(u).
SlackReport check_mgf_bound(int n_particles, double t, const TestFunction& u,
                            const QuadratureRule& rule);

struct CltRow {
    int n_particles = 0;
    double mgf = 0.0;          // G_N(t,u)
    double target = 0.0;       // (t^2/2) D(u), the CLT limit
    double ratio = 0.0;        // G_N / target
    double bound_ratio = 0.0;  // G_N / ((N/(N+1)) target)
};

/// Probes the approach of G_N(t,u) to the CLT limit (t^2/2) D(u).
std::vector<CltRow> clt_probe(const TestFunction& u, const QuadratureRule& rule,
                              const std::vector<int>& n_list, double t = 1.0);

struct SharpnessFit {
    double a = 0.0;      // recovered from constants; equals m+1
    double b_min = 0.0;  // sup over the saturating family; >= (m+1)/(2(m+2))
};

SharpnessFit sharpness_fit(int m, const QuadratureRule& rule);

struct AsymptoticRow {
    int k = 0;
    double norm_l = 0.0;  // L_{k-2}(k u) / (k-1)
    double k_energy = 0.0;  // k E_1(u)
    double gap = 0.0;
};

/// L_{k omega_0}(k u) = k E_1(u) + O(1): the gap stays bounded in k.
std::vector<AsymptoticRow> asymptotic_energy_probe(const TestFunction& u,
                                                   const std::vector<int>& k_list,
                                                   const QuadratureRule& rule);

/// Aggregate for CSV/JSON emission.
struct SlackSuite {
    std::string suite;
    std::vector<SlackReport> reports;

    int passes() const;
    int failures() const;
    double worst_slack() const;
    std::string to_csv() const;
    std::string to_json() const;
};

}  // namespace onofri
