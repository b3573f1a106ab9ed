#pragma once

#include "genjacobi/regimes.hpp"
#include "genjacobi/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace genjacobi::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

Json complex_json(Complex z);
Json poly_json(const numerics::Poly& p);
Json block_json(const regimes::ConditionBlock& block);
Json regime_json(const regimes::RegimeReport& regime);
Json orth_json(const verify::OrthReport& report);
Json characterize_json(const verify::CharacterizeReport& report, double tol, bool pass);
Json zero_json(const regimes::ZeroReport& report, double realness_tol);
Json rh_json(const verify::RhReport& report);

struct Envelope {
    std::string command;
    int n = 0;
    Complex alpha;
    Complex beta;
    std::optional<std::string> regime;
    Json payload = Json::object();
    /// Absent for commands that make no claim.
    std::optional<bool> pass;
    std::optional<double> wall_time;
    std::optional<std::string> error_type;
    std::optional<std::string> error_message;
};

/// Fixed field order; doubles in the shortest form that round-trips.
Json envelope_json(const Envelope& envelope);

/// Two-space indented dump followed by a newline.
std::string dump(const Json& json);

/// "key = value" lines, one per leaf, in document order.
std::string flatten_text(const Json& json);

/// CSV with header "re,im,region".
void write_zero_csv(std::ostream& out, const regimes::ZeroReport& report, double realness_tol);

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

} // namespace genjacobi::report
