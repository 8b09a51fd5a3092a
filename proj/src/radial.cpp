#include "onofri/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "onofri/gram.hpp"

namespace onofri {

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double RadialFunction::eval(double tt) const {
    if (tt <= t.front()) return g.front() + slope_left * (tt - t.front());
    if (tt >= t.back()) return g.back() + slope_right * (tt - t.back());
    const auto it = std::upper_bound(t.begin(), t.end(), tt);
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (tt - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * g[i - 1] + w * g[i];
}

std::string RadialFunction::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,value\n";
    for (int i = 0; i < size(); ++i) os << t[i] << ',' << g[i] << '\n';
    return os.str();
}

std::vector<double> make_radial_grid(double t_max, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = -t_max + 2.0 * t_max * i / (n - 1);
    return t;
}

RadialFunction radial_from(const TestFunction& u, const std::vector<double>& grid) {
    if (!u.radial || !u.radial_value) {
        throw std::invalid_argument("radial_from: test function is not radial");
    }
    RadialFunction r;
    r.t = grid;
    r.g.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) r.g[i] = u.radial_value(grid[i]);
    r.analytic = u.radial_value;
    r.analytic_deriv = u.radial_deriv;
    return r;
}

RadialFunction radial_constant(double c, const std::vector<double>& grid) {
    RadialFunction r;
    r.t = grid;
    r.g.assign(grid.size(), c);
    r.analytic = [c](double) { return c; };
    r.analytic_deriv = [](double) { return 0.0; };
    return r;
}

namespace {

std::vector<double> potential_values(const RadialFunction& u, int k) {
    std::vector<double> phi(u.t.size());
    for (std::size_t i = 0; i < u.t.size(); ++i) phi[i] = k * softplus(u.t[i]) + u.g[i];
    return phi;
}

/// Indices of the lower convex hull vertices of (t, phi).
std::vector<int> lower_hull(const std::vector<double>& t, const std::vector<double>& phi) {
    std::vector<int> hull;
    for (int i = 0; i < static_cast<int>(t.size()); ++i) {
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            const double cross = (t[b] - t[a]) * (phi[i] - phi[a]) - (t[i] - t[a]) * (phi[b] - phi[a]);
            if (cross <= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(i);
    }
    return hull;
}

}  // namespace

RadialFunction project_envelope(const RadialFunction& u, int k) {
    const std::vector<double>& t = u.t;
    const int n = u.size();

    // Extend the potential over the linear branches of u (the softplus part
    // flattens out within ~60 units, after which the branches are exactly
    // affine and the slope clip below takes over).
    const int n_ext = 60;
    std::vector<double> te, phie;
    te.reserve(n + 2 * n_ext);
    phie.reserve(n + 2 * n_ext);
    for (int j = n_ext; j >= 1; --j) {
        const double tt = t.front() - j;
        te.push_back(tt);
        phie.push_back(k * softplus(tt) + u.g.front() + u.slope_left * (tt - t.front()));
    }
    for (int i = 0; i < n; ++i) {
        te.push_back(t[i]);
        phie.push_back(k * softplus(t[i]) + u.g[i]);
    }
    for (int j = 1; j <= n_ext; ++j) {
        const double tt = t.back() + j;
        te.push_back(tt);
        phie.push_back(k * softplus(tt) + u.g.back() + u.slope_right * (tt - t.back()));
    }

    const std::vector<int> hull = lower_hull(te, phie);
    const double clip_lo = std::max(0.0, u.slope_left);
    const double clip_hi = std::min(static_cast<double>(k), k + u.slope_right);

    // Support vertex for a given slope p: minimizes phi_v - p t_v.
    auto support_vertex = [&](double p) {
        int best = hull[0];
        double best_val = phie[best] - p * te[best];
        for (const int v : hull) {
            const double val = phie[v] - p * te[v];
            if (val < best_val) {
                best_val = val;
                best = v;
            }
        }
        return best;
    };
    const int v_lo = support_vertex(clip_lo);
    const int v_hi = support_vertex(clip_hi);

    std::vector<double> env(te.size());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < te.size(); ++i) {
        if (static_cast<int>(i) <= v_lo) {
            env[i] = phie[v_lo] + clip_lo * (te[i] - te[v_lo]);
        } else if (static_cast<int>(i) >= v_hi) {
            env[i] = phie[v_hi] + clip_hi * (te[i] - te[v_hi]);
        } else {
            while (seg + 1 < hull.size() && te[hull[seg + 1]] < te[i]) ++seg;
            const int a = hull[seg], b = hull[seg + 1];
            env[i] = phie[a] + (phie[b] - phie[a]) * (te[i] - te[a]) / (te[b] - te[a]);
        }
        env[i] = std::min(env[i], phie[i]);
    }

    RadialFunction out;
    out.t = t;
    out.g.resize(n);
    bool changed = false;
    for (int i = 0; i < n; ++i) {
        out.g[i] = env[n_ext + i] - k * softplus(t[i]);
        if (std::abs(out.g[i] - u.g[i]) > 1e-13) changed = true;
    }
    if (!changed) {
        out = u;
        return out;
    }
    out.slope_left = clip_lo;             // potential slope at -inf
    out.slope_right = clip_hi - k;        // u-slope at +inf
    return out;
}

std::vector<double> ma_measure_radial(const RadialFunction& u, int k) {
    const std::vector<double>& t = u.t;
    const int n = u.size();
    const std::vector<double> phi = potential_values(u, k);
    std::vector<double> w(n, 0.0);
    std::vector<double> mid(n - 1);
    for (int i = 0; i + 1 < n; ++i) mid[i] = (phi[i + 1] - phi[i]) / (t[i + 1] - t[i]);

    w[0] = mid[0];                       // mass of (-inf, t_1], pole atom included
    for (int i = 1; i + 1 < n; ++i) w[i] = mid[i] - mid[i - 1];
    w[n - 1] = k - mid[n - 2];           // mass of (t_{G-1}, +inf], pole atom included

    for (int i = 0; i < n; ++i) {
        if (w[i] < -1e-10) throw std::invalid_argument("ma_measure_radial: input not omega-psh");
        if (w[i] < 0.0) w[i] = 0.0;
    }
    return w;
}

double check_orthogonality(const RadialFunction& u, int k) {
    const RadialFunction pu = project_envelope(u, k);
    const std::vector<double> w = ma_measure_radial(pu, k);
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += (u.g[i] - pu.g[i]) * w[i];
    return acc / k;
}

double radial_dirichlet(const RadialFunction& u) {
    double acc = 0.0;
    for (int i = 0; i + 1 < u.size(); ++i) {
        const double h = u.t[i + 1] - u.t[i];
        const double q = (u.g[i + 1] - u.g[i]) / h;
        acc += q * q * h;
    }
    return acc;
}

namespace {

/// int_a^b (g_a + q (t-a)) sigma'(t) dt, exact.
double cell_mean(double a, double b, double ga, double q) {
    const double sa = sigmoid(a), sb = sigmoid(b);
    return ga * (sb - sa) + q * ((b - a) * sb - (softplus(b) - softplus(a)));
}

}  // namespace

double radial_mean(const RadialFunction& u) {
    double acc = 0.0;
    for (int i = 0; i + 1 < u.size(); ++i) {
        const double h = u.t[i + 1] - u.t[i];
        acc += cell_mean(u.t[i], u.t[i + 1], u.g[i], (u.g[i + 1] - u.g[i]) / h);
    }
    const double t0 = u.t.front(), tb = u.t.back();
    acc += u.g.front() * sigmoid(t0) - u.slope_left * softplus(t0);      // left tail
    acc += u.g.back() * (1.0 - sigmoid(tb)) + u.slope_right * softplus(-tb);  // right tail
    return acc;
}

double radial_energy(const RadialFunction& u, int k) {
    return -radial_dirichlet(u) / (2.0 * k) + radial_mean(u);
}

ComposedDerivative derivative_of_composed_energy(const RadialFunction& u, const RadialFunction& v,
                                                 int k, double step) {
    auto shifted = [&u, &v](double s) {
        RadialFunction r = u;
        r.analytic = nullptr;
        r.analytic_deriv = nullptr;
        for (int i = 0; i < r.size(); ++i) r.g[i] += s * v.g[i];
        r.slope_left += s * v.slope_left;
        r.slope_right += s * v.slope_right;
        return r;
    };
    ComposedDerivative out;
    out.fd = (radial_energy(project_envelope(shifted(step), k), k) -
              radial_energy(project_envelope(shifted(-step), k), k)) /
             (2.0 * step);
    const RadialFunction pu = project_envelope(u, k);
    const std::vector<double> w = ma_measure_radial(pu, k);
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += v.g[i] * w[i];
    out.exact = acc / k;
    return out;
}

double PLPotential::potential(double tt) const {
    if (bp_t.empty()) throw std::logic_error("PLPotential: empty");
    if (tt <= bp_t.front()) return bp_v.front() + cell_slopes.front() * (tt - bp_t.front());
    if (tt >= bp_t.back()) return bp_v.back() + cell_slopes.back() * (tt - bp_t.back());
    const std::size_t j = cell_index(tt);
    return bp_v[j - 1] + cell_slopes[j] * (tt - bp_t[j - 1]);
}

std::size_t PLPotential::cell_index(double tt) const {
    if (tt <= bp_t.front()) return 0;
    if (tt >= bp_t.back()) return cell_slopes.size() - 1;
    return static_cast<std::size_t>(std::upper_bound(bp_t.begin(), bp_t.end(), tt) - bp_t.begin());
}

namespace {

constexpr int kAnalyticDualSize = 131073;  // 2^17 + 1

/// phi^*(p) for the potential of an analytic radial function at weight k.
double analytic_dual(const RadialFunction& u, int k, double p) {
    // Solve phi'(t) = k sigmoid(t) + g'(t) = p by bisection (phi is convex).
    double lo = -60.0, hi = 60.0;
    auto dphi = [&u, k](double t) { return k * sigmoid(t) + u.analytic_deriv(t); };
    if (dphi(lo) >= p) {
        const double t = lo;
        return p * t - (k * softplus(t) + u.analytic(t));
    }
    if (dphi(hi) <= p) {
        // p t - k psi0(t) -> -g(inf) - k softplus(-t) terms; evaluate at the cap
        const double t = hi;
        return p * t - (k * softplus(t) + u.analytic(t));
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dphi(mid) < p ? lo : hi) = mid;
        if (hi - lo < 1e-14 * std::max(1.0, std::abs(lo))) break;
    }
    const double t = 0.5 * (lo + hi);
    return p * t - (k * softplus(t) + u.analytic(t));
}

/// Dual of the piecewise-linear potential on the grid (with linear branches).
std::vector<double> pl_dual(const RadialFunction& u, int k, const std::vector<double>& p) {
    const std::vector<double> phi = potential_values(u, k);
    const std::vector<int> hull = lower_hull(u.t, phi);
    std::vector<double> dual(p.size());
    std::size_t v = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        // argmax over hull vertices of p t - phi; advances monotonically in p
        while (v + 1 < hull.size() &&
               p[j] * u.t[hull[v + 1]] - phi[hull[v + 1]] >= p[j] * u.t[hull[v]] - phi[hull[v]]) {
            ++v;
        }
        dual[j] = p[j] * u.t[hull[v]] - phi[hull[v]];
    }
    return dual;
}

std::vector<double> hull_slopes(const RadialFunction& u, int k) {
    const std::vector<double> phi = potential_values(u, k);
    const std::vector<int> hull = lower_hull(u.t, phi);
    std::vector<double> slopes;
    slopes.reserve(hull.size() + 1);
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const int a = hull[i], b = hull[i + 1];
        slopes.push_back((phi[b] - phi[a]) / (u.t[b] - u.t[a]));
    }
    return slopes;
}

bool is_omega_psh(const RadialFunction& u, int k) {
    const std::vector<double> phi = potential_values(u, k);
    for (int i = 1; i + 1 < u.size(); ++i) {
        const double h1 = u.t[i] - u.t[i - 1], h2 = u.t[i + 1] - u.t[i];
        const double second = (phi[i + 1] - phi[i]) / h2 - (phi[i] - phi[i - 1]) / h1;
        if (second < -1e-9) return false;
    }
    return true;
}

}  // namespace

RadialGeodesic geodesic_radial(const RadialFunction& u0, const RadialFunction& u1, int k) {
    if (!is_omega_psh(u0, k) || !is_omega_psh(u1, k)) {
        throw std::invalid_argument("geodesic_radial: endpoint not omega-psh");
    }
    RadialGeodesic geo;
    geo.k = k;

    const bool analytic = u0.analytic && u0.analytic_deriv && u1.analytic && u1.analytic_deriv;
    if (analytic) {
        geo.p.resize(kAnalyticDualSize);
        for (int j = 0; j < kAnalyticDualSize; ++j) {
            const double x = std::sin(0.5 * std::numbers::pi * j / (kAnalyticDualSize - 1));
            geo.p[j] = k * x * x;
        }
    } else {
        std::vector<double> p = hull_slopes(u0, k);
        const std::vector<double> s1 = hull_slopes(u1, k);
        p.insert(p.end(), s1.begin(), s1.end());
        p.push_back(0.0);
        p.push_back(static_cast<double>(k));
        std::sort(p.begin(), p.end());
        for (const double v : p) {
            if (v < -1e-12 || v > k + 1e-12) {
                throw std::invalid_argument("geodesic_radial: endpoint potential slope outside [0,k]");
            }
            if (geo.p.empty() || v - geo.p.back() > 1e-13) geo.p.push_back(std::clamp(v, 0.0, double(k)));
        }
        if (geo.p.front() > 0.0) geo.p.insert(geo.p.begin(), 0.0);
        if (geo.p.back() < k) geo.p.push_back(k);
    }

    auto dual_of = [&](const RadialFunction& u) {
        if (analytic) {
            std::vector<double> d(geo.p.size());
            for (std::size_t j = 0; j < geo.p.size(); ++j) d[j] = analytic_dual(u, k, geo.p[j]);
            return d;
        }
        return pl_dual(u, k, geo.p);
    };
    geo.dual0 = dual_of(u0);
    geo.dual1 = dual_of(u1);
    return geo;
}

PLPotential RadialGeodesic::at(double s) const {
    const std::size_t n = p.size();
    std::vector<double> ds(n);
    for (std::size_t j = 0; j < n; ++j) ds[j] = (1.0 - s) * dual0[j] + s * dual1[j];

    PLPotential pot;
    pot.k = k;
    pot.bp_t.reserve(n - 1);
    pot.bp_v.reserve(n - 1);
    pot.cell_slopes.reserve(n);
    pot.cell_sderiv.reserve(n);
    pot.cell_slopes.push_back(p.front());
    pot.cell_sderiv.push_back(dual0.front() - dual1.front());
    double last_t = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double dp = p[j + 1] - p[j];
        if (dp <= 1e-300) continue;
        double tj = (ds[j + 1] - ds[j]) / dp;
        if (tj < last_t) tj = last_t;  // guard against rounding inversions
        if (!pot.bp_t.empty() && tj - last_t < 1e-13) {
            // merge vertices closer than resolution; keep the later slope
            pot.cell_slopes.back() = p[j + 1];
            pot.cell_sderiv.back() = dual0[j + 1] - dual1[j + 1];
            pot.bp_v.back() = p[j] * pot.bp_t.back() - ds[j];
            continue;
        }
        pot.bp_t.push_back(tj);
        pot.bp_v.push_back(p[j] * tj - ds[j]);
        pot.cell_slopes.push_back(p[j + 1]);
        pot.cell_sderiv.push_back(dual0[j + 1] - dual1[j + 1]);
        last_t = tj;
    }
    if (pot.bp_t.empty()) {
        pot.bp_t.push_back(0.0);
        pot.bp_v.push_back(-ds.front());
        pot.cell_slopes.push_back(p.back());
        pot.cell_sderiv.push_back(dual0.back() - dual1.back());
    }
    return pot;
}

double RadialGeodesic::u_value(double s, double tt) const { return at(s).u_value(tt); }

double pl_dirichlet(const PLPotential& pot) {
    // u' = slope - k sigmoid(t) piecewise; int (p - k sigma)^2 dt in closed form.
    const double k = pot.k;
    auto segment = [k](double p, double a, double b) {
        const double pa = softplus(a), pb = softplus(b);
        const double sa = sigmoid(a), sb = sigmoid(b);
        return p * p * (b - a) - 2.0 * p * k * (pb - pa) + k * k * ((pb - sb) - (pa - sa));
    };
    double acc = 0.0;
    // left tail: slope p_min (must be 0 for finite energy) down to -inf
    const double p_min = pot.cell_slopes.front(), p_max = pot.cell_slopes.back();
    const double t0 = pot.bp_t.front(), tb = pot.bp_t.back();
    acc += pot.k * pot.k * (softplus(t0) - sigmoid(t0)) +
           p_min * p_min * 0.0;  // p_min = 0 on geodesics
    for (std::size_t j = 0; j + 1 < pot.bp_t.size(); ++j) {
        acc += segment(pot.cell_slopes[j + 1], pot.bp_t[j], pot.bp_t[j + 1]);
    }
    // right tail: slope p_max = k; (k - k sigma)^2 integrates to k^2 (softplus(-t) - sigmoid(-t))
    acc += k * k * (softplus(-tb) - sigmoid(-tb)) +
           (p_max - k) * (p_max - k) * 0.0;
    return acc;
}

double pl_mean(const PLPotential& pot) {
    // int (phi - k psi0) sigma' dt = int phi sigma' dt - k (int psi0 omega_0 = 1).
    double acc = 0.0;
    const double t0 = pot.bp_t.front(), tb = pot.bp_t.back();
    acc += pot.bp_v.front() * sigmoid(t0) - pot.cell_slopes.front() * softplus(t0);
    for (std::size_t j = 0; j + 1 < pot.bp_t.size(); ++j) {
        acc += cell_mean(pot.bp_t[j], pot.bp_t[j + 1], pot.bp_v[j], pot.cell_slopes[j + 1]);
    }
    acc += pot.bp_v.back() * (1.0 - sigmoid(tb)) + pot.cell_slopes.back() * softplus(-tb);
    return acc - pot.k;
}

double pl_energy(const PLPotential& pot) {
    return -pl_dirichlet(pot) / (2.0 * pot.k) + pl_mean(pot);
}

double radial_logdet_L(int m, const std::function<double(double)>& g, const QuadratureRule& rule) {
    if (rule.level < m) {
        throw std::invalid_argument("radial_logdet_L: rule level insufficient for degree m=" +
                                    std::to_string(m));
    }
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        double entry = 0.0;
        for (int q = 0; q < rule.n_radial; ++q) {
            const double sigma = rule.sigma_nodes[q];
            const double t = std::log(sigma) - std::log1p(-sigma);
            const double loge = std::log(m + 1.0) + log_binomial(m, i) + i * std::log(sigma) +
                                (m - i) * std::log1p(-sigma) - g(t);
            entry += rule.sigma_weights[q] * std::exp(loge);
        }
        acc += std::log(entry);
    }
    return -acc;
}

GeodesicCheck check_functionals_along_geodesic(const RadialGeodesic& g, int m,
                                               const QuadratureRule& rule, int n_s) {
    if (g.k != m + 2) {
        throw std::invalid_argument("check_functionals_along_geodesic: requires k = m + 2");
    }
    GeodesicCheck chk;
    chk.s.resize(n_s);
    chk.energy.resize(n_s);
    chk.norm_l.resize(n_s);
    chk.f.resize(n_s);
    for (int i = 0; i < n_s; ++i) {
        const double s = static_cast<double>(i) / (n_s - 1);
        chk.s[i] = s;
        const PLPotential pot = g.at(s);
        chk.energy[i] = pl_energy(pot);
        chk.norm_l[i] =
            radial_logdet_L(m, [&pot](double t) { return pot.u_value(t); }, rule) / (m + 1.0);
        chk.f[i] = chk.energy[i] - chk.norm_l[i];
    }
    for (int i = 0; i < n_s; ++i) {
        const double s = chk.s[i];
        const double chord = (1.0 - s) * chk.energy.front() + s * chk.energy.back();
        chk.energy_affine_dev = std::max(chk.energy_affine_dev, std::abs(chk.energy[i] - chord));
    }
    chk.l_min_second_diff = 1e300;
    chk.f_max_second_diff = -1e300;
    for (int i = 1; i + 1 < n_s; ++i) {
        const double dl = chk.norm_l[i + 1] - 2.0 * chk.norm_l[i] + chk.norm_l[i - 1];
        const double df = chk.f[i + 1] - 2.0 * chk.f[i] + chk.f[i - 1];
        chk.l_min_second_diff = std::min(chk.l_min_second_diff, dl);
        chk.f_max_second_diff = std::max(chk.f_max_second_diff, df);
    }
    chk.f_excess_over_start = *std::max_element(chk.f.begin(), chk.f.end()) - chk.f.front();

    // Discrete homogeneous Monge-Ampere check in (s,t).
    const double hs = 1e-3, ht = 1e-3;
    for (int is = 1; is <= 15; ++is) {
        const double s = is / 16.0;
        const PLPotential pm = g.at(s - hs), p0 = g.at(s), pp = g.at(s + hs);
        for (int it = 0; it <= 32; ++it) {
            const double t = -10.0 + 20.0 * it / 32.0;
            const double f_ss =
                (pp.potential(t) - 2.0 * p0.potential(t) + pm.potential(t)) / (hs * hs);
            const double f_tt =
                (p0.potential(t + ht) - 2.0 * p0.potential(t) + p0.potential(t - ht)) / (ht * ht);
            const double f_st = (pp.potential(t + ht) - pp.potential(t - ht) - pm.potential(t + ht) +
                                 pm.potential(t - ht)) /
                                (4.0 * hs * ht);
            chk.ma_det_max = std::max(chk.ma_det_max, std::abs(f_ss * f_tt - f_st * f_st));
        }
    }
    return chk;
}

namespace {

double radial_bergman_density(int m, const Eigen::VectorXd& diag,
                              const std::function<double(double)>& g, double t) {
    // beta density against omega_0 at log|z|^2 = t for radial weight g.
    const int n = m + 1;
    double acc = 0.0;
    const double sp = softplus(t);
    for (int i = 0; i < n; ++i) {
        const double loge = std::log(m + 1.0) + log_binomial(m, i) + i * t - m * sp - g(t) -
                            std::log(diag(i));
        acc += std::exp(loge);
    }
    return acc / n;
}

Eigen::VectorXd radial_gram_diag(int m, const std::function<double(double)>& g,
                                 const QuadratureRule& rule) {
    Eigen::VectorXd diag(m + 1);
    for (int i = 0; i <= m; ++i) {
        double entry = 0.0;
        for (int q = 0; q < rule.n_radial; ++q) {
            const double sigma = rule.sigma_nodes[q];
            const double t = std::log(sigma) - std::log1p(-sigma);
            const double loge = std::log(m + 1.0) + log_binomial(m, i) + i * std::log(sigma) +
                                (m - i) * std::log1p(-sigma) - g(t);
            entry += rule.sigma_weights[q] * std::exp(loge);
        }
        diag(i) = entry;
    }
    return diag;
}

}  // namespace

SolverResult critical_point_solver(int m, const RadialFunction& u_init, const QuadratureRule& rule,
                                   double damping, int max_iter, double tol) {
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw std::invalid_argument("critical_point_solver: damping must be in (0,1]");
    }
    const int k = m + 2;
    if (!is_omega_psh(u_init, k)) {
        throw std::invalid_argument("critical_point_solver: u_init not omega-psh");
    }
    const std::vector<double>& t = u_init.t;
    const int n = u_init.size();
    const double h = t[1] - t[0];

    std::vector<double> sp(n), w_trap(n, h);
    for (int i = 0; i < n; ++i) sp[i] = sigmoid(t[i]) * (1.0 - sigmoid(t[i]));
    w_trap.front() = w_trap.back() = 0.5 * h;
    double sp_mass = 0.0;
    for (int i = 0; i < n; ++i) sp_mass += sp[i] * w_trap[i];

    RadialFunction u = u_init;
    u.analytic = nullptr;
    u.analytic_deriv = nullptr;

    SolverResult result;
    auto residual_of = [&](const RadialFunction& uu, const std::vector<double>& rhs) {
        double r = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            const double upp = (uu.g[i + 1] - 2.0 * uu.g[i] + uu.g[i - 1]) / (h * h);
            r = std::max(r, std::abs(upp - rhs[i]));
        }
        return r;
    };

    std::vector<double> rhs(n), wsol(n);
    for (int iter = 0; iter < max_iter; ++iter) {
        auto profile = [&u](double tt) { return u.eval(tt); };
        const Eigen::VectorXd diag = radial_gram_diag(m, profile, rule);
        for (int i = 0; i < n; ++i) {
            rhs[i] = k * (radial_bergman_density(m, diag, profile, t[i]) - 1.0) * sp[i];
        }
        double imbalance = 0.0;
        for (int i = 0; i < n; ++i) imbalance += rhs[i] * w_trap[i];
        for (int i = 0; i < n; ++i) rhs[i] -= imbalance * sp[i] / sp_mass;

        const double res = residual_of(u, rhs);
        result.residuals.push_back(res);
        if (res <= tol) {
            result.converged = true;
            break;
        }
        if (result.residuals.size() > 50) {
            const double past = result.residuals[result.residuals.size() - 51];
            if (res > 10.0 * past) {
                throw std::runtime_error("critical_point_solver: diverging residual history");
            }
        }

        // Tridiagonal solve of w'' = rhs with zero left slope, right value pinned.
        std::vector<double> a(n, 1.0), b(n, -2.0), c(n, 1.0), d(n);
        for (int i = 0; i < n; ++i) d[i] = rhs[i] * h * h;
        b[0] = -1.0; c[0] = 1.0; d[0] = 0.0;       // w_1 = w_0
        a[n - 1] = 0.0; b[n - 1] = 1.0; d[n - 1] = 0.0;  // pin
        for (int i = 1; i < n; ++i) {
            const double mfac = a[i] / b[i - 1];
            b[i] -= mfac * c[i - 1];
            d[i] -= mfac * d[i - 1];
        }
        wsol[n - 1] = d[n - 1] / b[n - 1];
        for (int i = n - 2; i >= 0; --i) wsol[i] = (d[i] - c[i] * wsol[i + 1]) / b[i];

        // normalize to zero omega_0-mean
        double wm = 0.0;
        for (int i = 0; i < n; ++i) wm += wsol[i] * sp[i] * w_trap[i];
        wm /= sp_mass;
        for (int i = 0; i < n; ++i) u.g[i] = (1.0 - damping) * u.g[i] + damping * (wsol[i] - wm);
    }

    // Distance to the dilation family k u_lambda + const (Chebyshev-centred).
    auto family_dist = [&](double loglam2) {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < n; ++i) {
            const double ul = softplus(t[i] + loglam2) - softplus(t[i]);
            const double diff = u.g[i] - k * ul;
            lo = std::min(lo, diff);
            hi = std::max(hi, diff);
        }
        return 0.5 * (hi - lo);
    };
    double lo = -6.0, hi = 6.0;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (family_dist(m1) < family_dist(m2)) hi = m2; else lo = m1;
    }
    const double best = 0.5 * (lo + hi);
    result.distance_to_family = family_dist(best);
    result.lambda_fit = std::exp(0.5 * best);
    result.u = u;
    return result;
}

std::string SolverResult::to_json() const {
    nlohmann::json j;
    j["converged"] = converged;
    j["iterations"] = residuals.size();
    j["residuals"] = residuals;
    j["distance_to_family"] = distance_to_family;
    j["lambda_fit"] = lambda_fit;
    return j.dump(2);
}

std::string geodesic_to_csv(const RadialGeodesic& g, const std::vector<double>& s_values,
                            const std::vector<double>& grid) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (const double s : s_values) os << ",s=" << s;
    os << '\n';
    std::vector<PLPotential> pots;
    pots.reserve(s_values.size());
    for (const double s : s_values) pots.push_back(g.at(s));
    for (const double t : grid) {
        os << t;
        for (const auto& pot : pots) os << ',' << pot.u_value(t);
        os << '\n';
    }
    return os.str();
}

}  // namespace onofri
