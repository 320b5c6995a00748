#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liftdual/config.hpp"

namespace liftdual {

// stable process exit codes
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,           // malformed config or arguments
    kExitNumeric = 3,         // NaN or a failed inner solve
    kExitNotConverged = 4,    // artifacts are still written
    kExitBracket = 5,         // sweep bracket does not straddle a transition
    kExitMissing = 6,         // run directory lacks artifacts
    kExitNotCalibrated = 7,   // verify ran but a threshold was exceeded
};

struct CommandIo {
    std::ostream& out;
    std::ostream& err;
};

// key=value overrides applied on top of the config file
RawConfig load_with_overrides(const std::string& path, const std::vector<std::string>& overrides);

int cmd_solve(const RunConfig& rc, CommandIo io);
int cmd_sweep_lambda(const RunConfig& rc, std::optional<double> lo, std::optional<double> hi,
                     std::optional<double> tol, CommandIo io);
int cmd_verify(const std::string& run_dir, CommandIo io);
int cmd_export(const std::string& run_dir, const std::string& format, CommandIo io);
// writes a run directory holding a closed-form pair: "value_function" (1D Alt-Caffarelli) or "convex"
int cmd_oracle(const RunConfig& rc, const std::string& kind, CommandIo io);

struct Streamline {
    std::vector<std::array<double, 3>> points;  // (x, y, t); y = 0 in 1D
};
// RK2 along the normalised direction of the cell-centred flux, seeds drawn from one seed
std::vector<Streamline> trace_streamlines(const FluxField& s, const GridSpec& g, const DomainMask& mask,
                                          std::uint64_t seed, int n_seeds, int max_steps);

}  // namespace liftdual
