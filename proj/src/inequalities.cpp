#include "onofri/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace onofri {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Equality: return "equality";
        case Verdict::Fail: return "fail";
    }
    return "?";
}

SlackReport SlackReport::make(std::string name, int index, std::string u_label, double lhs,
                              double rhs, double tol, double eq_tol) {
    SlackReport r;
    r.name = std::move(name);
    r.index = index;
    r.u_label = std::move(u_label);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tolerance = tol;
    r.equality_tolerance = eq_tol;
    if (r.slack < -tol) {
        r.verdict = Verdict::Fail;
    } else if (std::abs(r.slack) <= eq_tol) {
        r.verdict = Verdict::Equality;
    } else {
        r.verdict = Verdict::Pass;
    }
    return r;
}

std::string SlackReport::csv_header() { return "name,index,u_label,lhs,rhs,slack,verdict"; }

std::string SlackReport::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << name << ',' << index << ",\"" << u_label << "\"," << lhs << ',' << rhs << ',' << slack
       << ',' << to_string(verdict);
    return os.str();
}

SlackReport check_moser(int m, const TestFunction& u, const QuadratureRule& rule) {
    const double lhs = -logdet_L(m, u, rule);
    const double rhs = -(m + 1.0) * mean_value(u, rule) +
                       (m + 1.0) / (m + 2.0) * 0.5 * dirichlet_energy(u, rule);
    return SlackReport::make("moser", m, u.label, lhs, rhs);
}

SlackReport check_onofri(const TestFunction& u, const QuadratureRule& rule) {
    auto val = u.value;
    const double lhs = std::log(integrate([&val](const complexd& z) { return std::exp(-val(z)); }, rule));
    const double rhs = -mean_value(u, rule) + 0.25 * dirichlet_energy(u, rule);
    SlackReport r = SlackReport::make("onofri", 0, u.label, lhs, rhs);
    return r;
}

double det_laplacian_log_ratio(int m, const TestFunction& u, const QuadratureRule& rule) {
    return -0.5 * dirichlet_energy(u, rule) + (m + 1.0) * mean_value(u, rule) - logdet_L(m, u, rule);
}

SlackReport check_det_bound(int m, const TestFunction& u, const QuadratureRule& rule) {
    const double lhs = det_laplacian_log_ratio(m, u, rule);
    const double rhs = -dirichlet_energy(u, rule) / (2.0 * (m + 2.0));
    return SlackReport::make("det_bound", m, u.label, lhs, rhs);
}

double fluctuation_mgf(int n_particles, double t, const TestFunction& u,
                       const QuadratureRule& rule) {
    if (n_particles < 1) throw std::invalid_argument("fluctuation_mgf: N must be >= 1");
    if (t == 0.0) return 0.0;
    const TestFunction tu = scale(u, t);
    return -logdet_L(n_particles - 1, tu, rule) + t * n_particles * mean_value(u, rule);
}

SlackReport check_mgf_bound(int n_particles, double t, const TestFunction& u,
                            const QuadratureRule& rule) {
    const double lhs = fluctuation_mgf(n_particles, t, u, rule);
    const double rhs = n_particles / (n_particles + 1.0) * 0.5 * t * t * dirichlet_energy(u, rule);
    SlackReport r = SlackReport::make("mgf_bound", n_particles, u.label, lhs, rhs);
    r.equality_tolerance = 1e-5;
    return r;
}

std::vector<CltRow> clt_probe(const TestFunction& u, const QuadratureRule& rule,
                              const std::vector<int>& n_list, double t) {
    const double d = dirichlet_energy(u, rule);
    std::vector<CltRow> rows;
    rows.reserve(n_list.size());
    for (const int n : n_list) {
        CltRow row;
        row.n_particles = n;
        row.mgf = fluctuation_mgf(n, t, u, rule);
        row.target = 0.5 * t * t * d;
        row.ratio = row.target != 0.0 ? row.mgf / row.target : 0.0;
        const double bound = n / (n + 1.0) * row.target;
        row.bound_ratio = bound != 0.0 ? row.mgf / bound : 0.0;
        rows.push_back(row);
    }
    return rows;
}

SharpnessFit sharpness_fit(int m, const QuadratureRule& rule) {
    SharpnessFit fit;
    // L_m(c) = (m+1) c pins the linear coefficient.
    fit.a = logdet_L(m, make_constant(1.0), rule);

    fit.b_min = -1e300;
    // Saturating family: (m+2) u_lambda, the automorphism orbit at weight m+2.
    for (double loglam2 = 0.05; loglam2 <= 2.8; loglam2 += 0.137) {
        const TestFunction u = scale(make_dilation(std::exp(0.5 * loglam2)), m + 2);
        const double d = dirichlet_energy(u, rule);
        if (d < 1e-12) continue;
        const double val = (-logdet_L(m, u, rule) + fit.a * mean_value(u, rule)) / d;
        fit.b_min = std::max(fit.b_min, val);
    }
    return fit;
}

std::vector<AsymptoticRow> asymptotic_energy_probe(const TestFunction& u,
                                                   const std::vector<int>& k_list,
                                                   const QuadratureRule& rule) {
    const double e1 = energy_E(u, 1, rule);
    std::vector<AsymptoticRow> rows;
    rows.reserve(k_list.size());
    for (const int k : k_list) {
        if (k < 3) throw std::invalid_argument("asymptotic_energy_probe: k must be >= 3");
        AsymptoticRow row;
        row.k = k;
        row.norm_l = logdet_L(k - 2, scale(u, k), rule) / (k - 1.0);
        row.k_energy = k * e1;
        row.gap = row.norm_l - row.k_energy;
        rows.push_back(row);
    }
    return rows;
}

int SlackSuite::passes() const {
    int n = 0;
    for (const auto& r : reports) n += r.verdict != Verdict::Fail;
    return n;
}

int SlackSuite::failures() const { return static_cast<int>(reports.size()) - passes(); }

double SlackSuite::worst_slack() const {
    double w = 1e300;
    for (const auto& r : reports) w = std::min(w, r.slack);
    return reports.empty() ? 0.0 : w;
}

std::string SlackSuite::to_csv() const {
    std::ostringstream os;
    os << SlackReport::csv_header() << '\n';
    for (const auto& r : reports) os << r.csv_row() << '\n';
    return os.str();
}

std::string SlackSuite::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["passes"] = passes();
    j["failures"] = failures();
    j["worst_slack"] = worst_slack();
    return j.dump(2);
}

}  // namespace onofri
