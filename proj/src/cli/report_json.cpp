#include "genjacobi/report.hpp"

#include "genjacobi/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace genjacobi::report {

namespace {

// nlohmann writes non-finite numbers as null; keep them readable instead.
Json number(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0.0 ? "inf" : "-inf";
}

Json optional_int(const std::optional<int>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

void flatten(const Json& j, const std::string& prefix, std::string& out)
{
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out += prefix + " = " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

} // namespace

std::string format_double(double x)
{
    std::array<char, 32> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), result.ptr);
}

Json complex_json(Complex z)
{
    Json j;
    j["re"] = number(z.real());
    j["im"] = number(z.imag());
    return j;
}

Json poly_json(const numerics::Poly& p)
{
    Json arr = Json::array();
    for (const Complex& c : p.coeffs()) {
        arr.push_back(complex_json(c));
    }
    return arr;
}

Json block_json(const regimes::ConditionBlock& block)
{
    Json j;
    j["contour"] = std::string(contour::label_name(block.contour_label));
    j["weight_alpha"] = number(block.weight_alpha);
    j["weight_beta"] = number(block.weight_beta);
    j["extra_monomial_power"] = block.extra_monomial_power;
    j["max_vanishing_degree"] = block.max_vanishing_degree;
    j["expect_nonzero_at"] = optional_int(block.expect_nonzero_at);
    j["divergence_note"] = block.divergence_note;
    j["condition_count"] = block.condition_count();
    return j;
}

Json regime_json(const regimes::RegimeReport& regime)
{
    Json j;
    j["tag"] = std::string(regimes::tag_name(regime.tag));
    Json counts = Json::array();
    Json blocks = Json::array();
    for (const regimes::ConditionBlock& b : regime.blocks) {
        counts.push_back(b.condition_count());
        blocks.push_back(block_json(b));
    }
    j["condition_counts"] = counts;
    j["total_conditions"] = regime.total_conditions;
    j["characterizing"] = regime.characterizing();
    j["blocks"] = blocks;
    j["notes"] = regime.notes;
    return j;
}

Json orth_json(const verify::OrthReport& report)
{
    Json j;
    j["tol"] = number(report.tol);
    if (report.radius) {
        j["loop_radius"] = number(*report.radius);
    }
    Json rows = Json::array();
    for (std::size_t i = 0; i < report.integrals.size(); ++i) {
        const contour::QuadResult& r = report.integrals[i];
        Json row;
        row["degree"] = report.degrees[i];
        row["integral"] = complex_json(r.value);
        row["abs_error"] = number(r.abs_error);
        row["l1_norm"] = number(r.l1_norm);
        row["residual"] = number(report.residuals[i]);
        rows.push_back(row);
    }
    j["integrals"] = rows;
    j["rhs_closed_form"] = complex_json(report.rhs_closed_form);
    j["max_vanishing_residual"] = number(report.max_vanishing_residual);
    j["closed_form_residual"] = number(report.closed_form_residual);
    if (report.nonzero_margin) {
        j["nonzero_margin"] = number(*report.nonzero_margin);
        j["nonzero_threshold"] = number(verify::kNonzeroFactor * report.tol);
    }
    j["divergent_skipped"] = report.divergent_skipped;
    j["pass"] = report.pass;
    return j;
}

Json characterize_json(const verify::CharacterizeReport& report, double tol, bool pass)
{
    Json j;
    j["regime"] = regime_json(report.regime);
    j["recovered_monic"] = poly_json(report.recovered);
    j["jacobi_monic"] = poly_json(report.expected);
    j["max_relative_deviation"] = number(report.max_relative_deviation);
    j["tol"] = number(tol);
    j["condition_estimate"] = number(report.condition_estimate);
    j["condition_cap"] = number(verify::kConditionCap);
    j["rows_used"] = report.rows_used;
    j["rows_total"] = report.rows_total;
    j["unused_row_residual"] = number(report.unused_row_residual);
    j["pass"] = pass;
    return j;
}

Json zero_json(const regimes::ZeroReport& report, double realness_tol)
{
    Json j;
    Json roots = Json::array();
    for (const Complex& r : report.roots) {
        Json row = complex_json(r);
        row["region"] = std::string(regimes::region_name(regimes::root_region(r, realness_tol)));
        roots.push_back(row);
    }
    j["roots"] = roots;
    j["realness_tol"] = number(realness_tol);
    j["count_in_minus1_1"] = report.count_in_minus1_1;
    j["count_left"] = report.count_left;
    j["count_right"] = report.count_right;
    j["hilbert_klein"] = optional_int(report.hilbert_klein_N);
    j["quasi_lower_bound"] = optional_int(report.quasi_lower_bound);
    return j;
}

Json rh_json(const verify::RhReport& report)
{
    Json j;
    Json jumps = Json::array();
    for (const verify::RhJumpSample& s : report.jumps) {
        Json row;
        row["segment"] = s.point.segment;
        row["s"] = number(s.point.s);
        row["t"] = complex_json(s.t);
        row["residual"] = number(s.jump.residual);
        Json raw = Json::array();
        for (const double r : s.jump.raw) {
            raw.push_back(number(r));
        }
        row["raw"] = raw;
        row["det_jump"] = number(s.jump.det_jump);
        jumps.push_back(row);
    }
    j["jump"] = {{"offset", number(verify::kJumpOffset)},
                 {"tol", number(verify::kJumpTolerance)},
                 {"max_residual", number(report.max_jump)},
                 {"points", jumps}};
    Json dets = Json::array();
    for (const verify::RhDetSample& d : report.dets) {
        dets.push_back({{"z", complex_json(d.z)}, {"residual", number(d.residual)}});
    }
    j["det"] = {{"tol", number(verify::kDetTolerance)}, {"max_residual", number(report.max_det)}, {"points", dets}};
    j["decay"] = {{"radii", {number(report.decay_radii[0]), number(report.decay_radii[1])}},
                  {"values", {number(report.decay[0]), number(report.decay[1])}},
                  {"ratio", number(report.decay_ratio)},
                  {"expected_ratio", 2.0},
                  {"tol", number(verify::kDecayTolerance)}};
    Json bounded = Json::array();
    for (const verify::BoundednessSample& b : report.boundedness) {
        bounded.push_back(
            {{"point", complex_json(b.point)}, {"distance", number(b.distance)}, {"max_entry", number(b.max_entry)}});
    }
    j["boundedness"] = bounded;
    j["pass"] = report.pass;
    return j;
}

Json envelope_json(const Envelope& e)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "genjacobi";
    j["version"] = kToolVersion;
    j["command"] = e.command;
    j["input"] = {{"n", e.n}, {"alpha", complex_json(e.alpha)}, {"beta", complex_json(e.beta)}};
    j["regime"] = e.regime ? Json(*e.regime) : Json(nullptr);
    j["payload"] = e.payload;
    j["verdict"] = e.pass ? Json(*e.pass ? "PASS" : "FAIL") : Json(nullptr);
    if (e.error_type) {
        j["error"] = {{"type", *e.error_type}, {"message", e.error_message.value_or("")}};
    }
    if (e.wall_time) {
        j["wall_time_s"] = number(*e.wall_time);
    }
    return j;
}

std::string dump(const Json& json)
{
    return json.dump(2) + "\n";
}

std::string flatten_text(const Json& json)
{
    std::string out;
    flatten(json, "", out);
    return out;
}

void write_zero_csv(std::ostream& out, const regimes::ZeroReport& report, double realness_tol)
{
    std::string text = "re,im,region\n";
    for (const Complex& r : report.roots) {
        text += format_double(r.real()) + ',' + format_double(r.imag()) + ',' +
                std::string(regimes::region_name(regimes::root_region(r, realness_tol))) + '\n';
    }
    out << text;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        f << content;
        f.flush();
        if (!f) {
            throw Error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move " + tmp.string() + " to " + path.string());
    }
}

} // namespace genjacobi::report
