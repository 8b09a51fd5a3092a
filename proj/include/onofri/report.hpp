#pragma once

#include <map>
#include <string>
#include <vector>

namespace onofri {

/// Parsed plain-text key=value configuration. Sections ([name]) scope their
/// keys to the matching command; unknown keys are rejected.
struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> params;
    int level = 8;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir = ".";

    static ExperimentConfig parse(const std::string& text);
    std::string get(const std::string& key, const std::string& fallback) const;
    double getd(const std::string& key, double fallback) const;
    long geti(const std::string& key, long fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::string& fallback) const;
};

struct RunReport {
    std::string json;                              // full report
    std::map<std::string, std::string> csv_files;  // filename -> content
    int exit_code = 0;
};

/// Dispatch a configuration to the module operations. Exit code 0 iff no
/// inequality verdict failed and no module error occurred.
RunReport run(const ExperimentConfig& config);

struct SelfTestResult {
    bool pass = false;
    double worst_moment_error = 0.0;
    double worst_green_error = 0.0;
    double logdet_zero_error = 0.0;
    std::string digest;
    std::string details;
};

/// Moment closed forms, L_m(0) = 0, Green-identity spot checks. The digest is
/// embedded in every subsequent report. `corrupt_weights` is a negative-control
/// fixture that must make the moment suite fail.
SelfTestResult self_test(bool corrupt_weights = false);

std::string library_version();

}  // namespace onofri
