#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "onofri/report.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for sharp Toeplitz/Onofri inequalities on the two-sphere"};
    std::string config_path;
    std::string out_dir;
    std::string command;
    long seed = -1;
    int level = -1;
    int threads = -1;
    bool self_test_only = false;

    app.add_option("command", command,
                   "Command (functionals|verify|det-bound|mgf|clt|dpp-sample|chernoff|envelope|"
                   "geodesic|critical|lattice|asymptotic|self-test)");
    app.add_option("--config", config_path, "Configuration file (key=value, # comments)");
    app.add_option("--out", out_dir, "Output directory for CSV/JSON reports");
    app.add_option("--seed", seed, "Root seed (overrides config)");
    app.add_option("--level", level, "Quadrature level (overrides config)");
    app.add_option("--threads", threads, "Worker threads, 0 = auto (overrides config)");
    app.add_flag("--self-test", self_test_only, "Run the built-in self test and exit");
    app.allow_extras();  // key=value overrides on the command line

    CLI11_PARSE(app, argc, argv);

    if (self_test_only || command == "self-test") {
        const onofri::SelfTestResult res = onofri::self_test();
        std::cout << (res.pass ? "self-test PASS " : "self-test FAIL ") << res.details << "\n";
        return res.pass ? 0 : 1;
    }

    std::ostringstream cfg_text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config file: " << config_path << "\n";
            return 2;
        }
        cfg_text << in.rdbuf() << "\n";
    }
    if (!command.empty()) cfg_text << "command = " << command << "\n";
    for (const std::string& extra : app.remaining()) {
        cfg_text << extra << "\n";  // e.g. m_list=0,5 family=dilation lambda=2
    }
    if (seed >= 0) cfg_text << "seed = " << seed << "\n";
    if (level >= 0) cfg_text << "level = " << level << "\n";
    if (threads >= 0) cfg_text << "threads = " << threads << "\n";
    if (!out_dir.empty()) cfg_text << "out = " << out_dir << "\n";

    onofri::ExperimentConfig cfg;
    try {
        cfg = onofri::ExperimentConfig::parse(cfg_text.str());
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    const onofri::RunReport report = onofri::run(cfg);

    fs::create_directories(cfg.out_dir);
    {
        std::ofstream out(fs::path(cfg.out_dir) / "report.json");
        out << report.json << "\n";
    }
    for (const auto& [name, content] : report.csv_files) {
        std::ofstream out(fs::path(cfg.out_dir) / name);
        out << content;
    }
    std::cout << report.json << "\n";
    return report.exit_code;
}
