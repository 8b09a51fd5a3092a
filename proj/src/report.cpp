#include "onofri/report.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "onofri/dpp.hpp"
#include "onofri/inequalities.hpp"
#include "onofri/lattice.hpp"
#include "onofri/radial.hpp"
#include "onofri/rng.hpp"

namespace onofri {

using nlohmann::json;

std::string library_version() { return "0.1.0"; }

namespace {

const std::set<std::string> kGlobalKeys = {"command", "level", "seed", "threads", "out"};
const std::set<std::string> kFamilyKeys = {"family", "lambda",     "c",     "height",    "width",
                                           "center", "fseed",      "modes", "lambda_min", "lambda_max"};

const std::map<std::string, std::set<std::string>>& command_keys() {
    static const std::map<std::string, std::set<std::string>> keys = [] {
        std::map<std::string, std::set<std::string>> k;
        k["functionals"] = {"m_list", "k"};
        k["verify"] = {"m_list"};
        k["det-bound"] = {"m_list"};
        k["mgf"] = {"n_list", "t_min", "t_max", "t_steps"};
        k["clt"] = {"n_list", "t"};
        k["dpp-sample"] = {"n", "n_samples", "sampler"};
        k["chernoff"] = {"n", "lambda_dev", "n_samples"};
        k["envelope"] = {"k"};
        k["geodesic"] = {"m", "n_s"};
        k["critical"] = {"m", "damping", "max_iter", "tol"};
        k["lattice"] = {"m_list"};
        k["asymptotic"] = {"k_list"};
        k["self-test"] = {};
        for (auto& [cmd, set] : k) {
            if (cmd == "self-test" || cmd == "dpp-sample") continue;
            set.insert(kFamilyKeys.begin(), kFamilyKeys.end());
        }
        return k;
    }();
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

TestFunction function_from_config(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> p;
    for (const auto& [key, value] : cfg.params) {
        if (key == "fseed") {
            p["seed"] = value;
        } else if (kFamilyKeys.count(key)) {
            p[key] = value;
        }
    }
    if (!p.count("family")) p["family"] = "harmonic1";
    return make_from_params(p);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int line_no = 0;
    std::map<std::string, std::string> raw;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                        ": expected key=value, got '" + t + "'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        raw[section.empty() ? key : section + "/" + key] = value;
    }

    if (raw.count("command")) cfg.command = raw["command"];
    if (cfg.command.empty()) throw std::invalid_argument("config parse error: missing 'command' key");
    const auto& table = command_keys();
    const auto cmd_it = table.find(cfg.command);
    if (cmd_it == table.end()) {
        throw std::invalid_argument("config parse error: unknown command '" + cfg.command + "'");
    }

    for (const auto& [key, value] : raw) {
        std::string plain = key;
        const auto slash = key.find('/');
        if (slash != std::string::npos) {
            const std::string sec = key.substr(0, slash);
            if (sec != cfg.command) continue;  // other-section keys are inert
            plain = key.substr(slash + 1);
        }
        if (plain == "command") continue;
        if (plain == "level") {
            cfg.level = std::stoi(value);
        } else if (plain == "seed") {
            cfg.seed = std::stoull(value);
        } else if (plain == "threads") {
            cfg.threads = std::stoi(value);
        } else if (plain == "out") {
            cfg.out_dir = value;
        } else if (cmd_it->second.count(plain)) {
            cfg.params[plain] = value;
        } else {
            throw std::invalid_argument("config parse error: unknown key '" + plain +
                                        "' for command '" + cfg.command + "'");
        }
    }
    return cfg;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double ExperimentConfig::getd(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : std::stod(it->second);
}

long ExperimentConfig::geti(const std::string& key, long fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : std::stol(it->second);
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key,
                                                const std::string& fallback) const {
    std::vector<int> out;
    std::istringstream is(get(key, fallback));
    std::string tok;
    while (std::getline(is, tok, ',')) {
        const std::string t = trim(tok);
        if (!t.empty()) out.push_back(std::stoi(t));
    }
    return out;
}

SelfTestResult self_test(bool corrupt_weights) {
    SelfTestResult res;
    std::ostringstream details;
    QuadratureRule rule = build_quadrature(6);
    if (corrupt_weights) {
        for (std::size_t q = 0; q < rule.weights.size(); q += 7) rule.weights[q] *= 1.01;
    }

    double worst_moment = 0.0;
    for (int m = 0; m <= 10; ++m) {
        for (int i = 0; i <= m; ++i) {
            const double got = integrate(
                [i, m](const complexd& z) {
                    const double s = std::norm(z);
                    return std::pow(s, i) * std::pow(1.0 + s, -m);
                },
                rule);
            const double want = std::exp(-std::log(m + 1.0) - log_binomial(m, i));
            worst_moment = std::max(worst_moment, std::abs(got - want));
        }
    }
    res.worst_moment_error = worst_moment;

    double mass = 0.0;
    for (const double w : rule.weights) mass += w;
    details << "weight_mass_error=" << std::abs(mass - 1.0) << " ";

    double worst_green = 0.0;
    Rng rng(20260810);
    for (int trial = 0; trial < 100; ++trial) {
        auto random_point = [&rng]() {
            double v[3];
            double n2 = 0.0;
            do {
                n2 = 0.0;
                for (double& vi : v) {
                    vi = rng.normal();
                    n2 += vi * vi;
                }
            } while (n2 < 1e-12);
            const double n = std::sqrt(n2);
            return SpherePoint{v[0] / n, v[1] / n, v[2] / n};
        };
        const SpherePoint p = random_point(), q = random_point();
        const StereoCoord zp = stereo_project(p), zq = stereo_project(q);
        if (zp.at_infinity || zq.at_infinity) continue;
        const double chart = std::norm(zp.value - zq.value) *
                             std::exp(-fubini_study_weight(zp) - fubini_study_weight(zq));
        worst_green = std::max(worst_green, std::abs(chart - chordal_sq(p, q)));
    }
    res.worst_green_error = worst_green;

    double worst_logdet = 0.0;
    for (const int m : {0, 3, 8}) {
        worst_logdet = std::max(worst_logdet, std::abs(logdet_L(m, make_constant(0.0), rule)));
    }
    res.logdet_zero_error = worst_logdet;

    res.pass = worst_moment < 1e-10 && worst_green < 1e-12 && worst_logdet < 1e-9 &&
               std::abs(mass - 1.0) < 1e-13;
    details << "moment=" << worst_moment << " green=" << worst_green << " logdet0=" << worst_logdet;
    res.details = details.str();

    std::uint64_t h = Rng::mix64(static_cast<std::uint64_t>(worst_moment * 1e18) ^
                                 static_cast<std::uint64_t>(worst_green * 1e18) ^
                                 (res.pass ? 0x6f6bull : 0xbadull));
    std::ostringstream dig;
    dig << (res.pass ? "ok-" : "FAIL-") << std::hex << (h & 0xffffffffull);
    res.digest = dig.str();
    return res;
}

namespace {

json slack_json(const SlackReport& r) {
    return json{{"name", r.name},   {"index", r.index}, {"u_label", r.u_label},
                {"lhs", r.lhs},     {"rhs", r.rhs},     {"slack", r.slack},
                {"verdict", to_string(r.verdict)}};
}

void run_verify(const ExperimentConfig& cfg, const QuadratureRule& rule, json& results,
                RunReport& report, bool det_bound) {
    const TestFunction u = function_from_config(cfg);
    SlackSuite suite;
    suite.suite = det_bound ? "det_bound" : "moser";
    for (const int m : cfg.get_int_list("m_list", "0,5")) {
        suite.reports.push_back(det_bound ? check_det_bound(m, u, rule) : check_moser(m, u, rule));
    }
    results["rows"] = json::array();
    for (const auto& r : suite.reports) {
        results["rows"].push_back(slack_json(r));
        if (r.verdict == Verdict::Fail) report.exit_code = 1;
    }
    results["worst_slack"] = suite.worst_slack();
    report.csv_files[suite.suite + ".csv"] = suite.to_csv();
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    RunReport report;
    json j;
    j["command"] = cfg.command;
    j["version"] = library_version();
    json echo;
    echo["command"] = cfg.command;
    echo["level"] = cfg.level;
    echo["seed"] = cfg.seed;
    echo["threads"] = cfg.threads;
    for (const auto& [k, v] : cfg.params) echo[k] = v;
    j["config"] = echo;

    const SelfTestResult st = self_test();
    j["self_test_digest"] = st.digest;
    if (!st.pass) {
        j["error"] = "self test failed: " + st.details;
        report.exit_code = 2;
        report.json = j.dump(2);
        return report;
    }

    json results;
    try {
        const QuadratureRule rule = build_quadrature(cfg.level);
        if (cfg.command == "self-test") {
            results["pass"] = st.pass;
            results["details"] = st.details;
        } else if (cfg.command == "verify") {
            run_verify(cfg, rule, results, report, /*det_bound=*/false);
        } else if (cfg.command == "det-bound") {
            run_verify(cfg, rule, results, report, /*det_bound=*/true);
        } else if (cfg.command == "functionals") {
            const TestFunction u = function_from_config(cfg);
            const int k = static_cast<int>(cfg.geti("k", 1));
            results["dirichlet"] = dirichlet_energy(u, rule);
            results["mean"] = mean_value(u, rule);
            results["energy"] = energy_E(u, k, rule);
            results["j"] = j_functional(u, rule);
            std::ostringstream csv;
            csv.precision(17);
            csv << "m,logdet_L\n";
            for (const int m : cfg.get_int_list("m_list", "0,1,2,5")) {
                csv << m << ',' << logdet_L(m, u, rule) << '\n';
            }
            report.csv_files["functionals.csv"] = csv.str();
        } else if (cfg.command == "mgf") {
            const TestFunction u = function_from_config(cfg);
            const double t0 = cfg.getd("t_min", -3.0), t1 = cfg.getd("t_max", 3.0);
            const int steps = static_cast<int>(cfg.geti("t_steps", 13));
            SlackSuite suite;
            suite.suite = "mgf_bound";
            for (const int n : cfg.get_int_list("n_list", "2,8")) {
                for (int i = 0; i < steps; ++i) {
                    const double t = t0 + (t1 - t0) * i / (steps - 1);
                    suite.reports.push_back(check_mgf_bound(n, t, u, rule));
                }
            }
            results["worst_slack"] = suite.worst_slack();
            for (const auto& r : suite.reports) {
                if (r.verdict == Verdict::Fail) report.exit_code = 1;
            }
            report.csv_files["mgf.csv"] = suite.to_csv();
        } else if (cfg.command == "clt") {
            const TestFunction u = function_from_config(cfg);
            const auto rows = clt_probe(u, rule, cfg.get_int_list("n_list", "8,16,32,64"),
                                        cfg.getd("t", 1.0));
            std::ostringstream csv;
            csv.precision(17);
            csv << "N,mgf,target,ratio,bound_ratio\n";
            results["rows"] = json::array();
            for (const auto& r : rows) {
                csv << r.n_particles << ',' << r.mgf << ',' << r.target << ',' << r.ratio << ','
                    << r.bound_ratio << '\n';
                results["rows"].push_back(json{{"N", r.n_particles},
                                               {"mgf", r.mgf},
                                               {"target", r.target},
                                               {"ratio", r.ratio},
                                               {"bound_ratio", r.bound_ratio}});
            }
            report.csv_files["clt.csv"] = csv.str();
        } else if (cfg.command == "dpp-sample") {
            const int n = static_cast<int>(cfg.geti("n", 5));
            const int count = static_cast<int>(cfg.geti("n_samples", 3));
            const std::string sampler = cfg.get("sampler", "random-matrix");
            std::vector<PointConfiguration> samples;
            samples.reserve(count);
            for (int i = 0; i < count; ++i) {
                const std::uint64_t s = Rng::sub_seed(cfg.seed, i);
                samples.push_back(sampler == "kernel-projection" ? sample_kernel_projection(n, s)
                                                                 : sample_random_matrix(n, s));
            }
            report.csv_files["samples.csv"] = samples_to_csv(samples);
            results["n"] = n;
            results["n_samples"] = count;
            results["sampler"] = sampler;
        } else if (cfg.command == "chernoff") {
            const TestFunction u = function_from_config(cfg);
            const auto res = chernoff_experiment(u, static_cast<int>(cfg.geti("n", 16)),
                                                 cfg.getd("lambda_dev", 0.2),
                                                 static_cast<int>(cfg.geti("n_samples", 20000)),
                                                 cfg.seed, rule);
            results["empirical_tail"] = res.empirical_tail;
            results["tail_std_error"] = res.tail_std_error;
            results["bound"] = res.bound;
            if (res.empirical_tail > res.bound + 3.0 * res.tail_std_error) report.exit_code = 1;
        } else if (cfg.command == "envelope") {
            const TestFunction uf = function_from_config(cfg);
            const int k = static_cast<int>(cfg.geti("k", 1));
            const RadialFunction u = radial_from(uf, make_radial_grid());
            const RadialFunction pu = project_envelope(u, k);
            results["orthogonality"] = check_orthogonality(u, k);
            std::ostringstream csv;
            csv.precision(17);
            csv << "t,u,Pu\n";
            for (int i = 0; i < u.size(); ++i) csv << u.t[i] << ',' << u.g[i] << ',' << pu.g[i] << '\n';
            report.csv_files["envelope.csv"] = csv.str();
        } else if (cfg.command == "geodesic") {
            const int m = static_cast<int>(cfg.geti("m", 0));
            const int k = m + 2;
            const TestFunction uf = function_from_config(cfg);
            const auto grid = make_radial_grid();
            const RadialFunction u0 = radial_constant(0.0, grid);
            RadialFunction u1 = radial_from(scale(uf, k), grid);
            const RadialGeodesic geo = geodesic_radial(u0, u1, k);
            const GeodesicCheck chk =
                check_functionals_along_geodesic(geo, m, rule, static_cast<int>(cfg.geti("n_s", 17)));
            results["energy_affine_dev"] = chk.energy_affine_dev;
            results["l_min_second_diff"] = chk.l_min_second_diff;
            results["f_excess_over_start"] = chk.f_excess_over_start;
            results["ma_det_max"] = chk.ma_det_max;
            if (chk.energy_affine_dev > 1e-6 || chk.l_min_second_diff < -1e-7 ||
                chk.f_excess_over_start > 1e-7) {
                report.exit_code = 1;
            }
            report.csv_files["geodesic.csv"] =
                geodesic_to_csv(geo, {0.0, 0.25, 0.5, 0.75, 1.0}, make_radial_grid(12.0, 257));
        } else if (cfg.command == "critical") {
            const int m = static_cast<int>(cfg.geti("m", 2));
            const RadialFunction init = radial_from(
                make_radial_bump(cfg.getd("height", 0.3), cfg.getd("width", 1.5),
                                 cfg.getd("center", 0.0)),
                make_radial_grid());
            const SolverResult sol = critical_point_solver(
                m, project_envelope(init, m + 2), rule, cfg.getd("damping", 0.5),
                static_cast<int>(cfg.geti("max_iter", 500)), cfg.getd("tol", 1e-6));
            results = json::parse(sol.to_json());
            if (!sol.converged) report.exit_code = 1;
            report.csv_files["critical.csv"] = sol.u.to_csv();
        } else if (cfg.command == "lattice") {
            const TestFunction u = function_from_config(cfg);
            std::ostringstream csv;
            csv << LatticeCount::csv_header() << '\n';
            results["rows"] = json::array();
            for (const int m : cfg.get_int_list("m_list", "0,1,2")) {
                const LatticeCount lc = minkowski_check(m, u, rule);
                csv << lc.csv_row() << '\n';
                results["rows"].push_back(json{{"m", lc.m},
                                               {"count", lc.count},
                                               {"h0", lc.h0},
                                               {"minkowski_bound", lc.minkowski_bound}});
            }
            report.csv_files["lattice.csv"] = csv.str();
        } else if (cfg.command == "asymptotic") {
            const TestFunction u = function_from_config(cfg);
            const auto rows = asymptotic_energy_probe(u, cfg.get_int_list("k_list", "4,8,16"), rule);
            std::ostringstream csv;
            csv.precision(17);
            csv << "k,norm_l,k_energy,gap\n";
            for (const auto& r : rows) {
                csv << r.k << ',' << r.norm_l << ',' << r.k_energy << ',' << r.gap << '\n';
            }
            report.csv_files["asymptotic.csv"] = csv.str();
        } else {
            throw std::invalid_argument("run: unknown command '" + cfg.command + "'");
        }
    } catch (const std::exception& e) {
        j["error"] = e.what();
        report.exit_code = 2;
    }

    j["results"] = results;
    const auto t_end = std::chrono::steady_clock::now();
    j["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count();
    report.json = j.dump(2);
    return report;
}

}  // namespace onofri
