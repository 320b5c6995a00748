#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liftdual/problem.hpp"
#include "liftdual/solver.hpp"

namespace liftdual {

struct ConfigError : Error {
    using Error::Error;
};

// Flat key=value text.  "[section]" prefixes the following keys with
// "section.", dotted keys may also be written in full; '#' starts a comment.
struct RawConfig {
    std::map<std::string, std::string> values;
    std::string text;  // the source, kept verbatim for run directories

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string str(const std::string& key, const std::string& fallback) const;
    double num(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;
};

RawConfig parse_config(const std::string& text);
RawConfig load_config(const std::string& path);

struct SweepSettings {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double tol = 0.1;
    double threshold = 0.05;  // share of the domain with u_s < s that signals a free boundary
};

struct VerifySettings {
    double r1_max = 0.1;  // area-weighted L1 bounds on the calibration residuals
    double r2_max = 0.1;
    double r3_max = 0.1;
    double gap_max = 0.02;  // relative duality gap
    double margin = 0.0;    // columns closer than this to the lateral boundary are skipped
};

struct RunConfig {
    RawConfig raw;
    ProblemSpec problem;
    SolverConfig solver;
    std::string output_dir = "run";
    std::vector<double> levels{0.5};
    bool images = true;
    std::uint64_t seed = 0;
    std::string shape = "rectangle";
    SweepSettings sweep;
    VerifySettings verify;
};

// validates every key; unknown keys and malformed values raise ConfigError
RunConfig build_run_config(const RawConfig& raw);
// rebuilds the problem for another lambda, keeping everything else
ProblemSpec with_lambda(const RunConfig& rc, double lambda);

}  // namespace liftdual
