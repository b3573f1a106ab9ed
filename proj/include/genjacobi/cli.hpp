#pragma once

#include "genjacobi/numerics.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace genjacobi::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFail = 1,
    kExitParse = 2,
    kExitIntegerParameter = 3,
    /// Everything checked passed, but a non-vanishing integral diverges and was skipped.
    kExitDivergentSkipped = 4,
    kExitCapExceeded = 5,
    kExitOtherError = 6,
};

inline constexpr double kDefaultTol = 1e-10;
/// Default for characterize, whose recovered coefficients carry the moment
/// system's conditioning.
inline constexpr double kDefaultCharacterizeTol = 1e-7;
inline constexpr const char* kTolEnvVar = "GENJACOBI_TOL";

struct RunConfig {
    /// Explicit --tol, else GENJACOBI_TOL, else the command default.
    std::optional<double> tol;
    int depth_cap = 24;
    std::optional<double> truncation;
    int root_cap = 20;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool timing = false;
};

/// Accepts "x", "x+yi", "x-yi", "yi" (also with j) and "(x,y)".
std::optional<Complex> parse_complex(std::string_view text);

/// Runs one command line (without the program name). JSON or CSV goes to
/// `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace genjacobi::cli
