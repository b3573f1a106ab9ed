#include "genjacobi/cli.hpp"

#include "genjacobi/errors.hpp"
#include "genjacobi/jacobi.hpp"
#include "genjacobi/regimes.hpp"
#include "genjacobi/report.hpp"
#include "genjacobi/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace genjacobi::cli {

namespace {

using report::Envelope;
using report::Json;

// Raised for malformed input that CLI11 itself cannot see (complex syntax,
// out-of-range values); mapped onto kExitParse.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::optional<double> parse_double(std::string_view text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc() || result.ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

struct Triple {
    int n = 0;
    std::string alpha = "0";
    std::string beta = "0";
};

Complex complex_arg(const std::string& text, const char* name)
{
    const auto z = parse_complex(text);
    if (!z) {
        throw UsageError(std::string("--") + name + ": cannot parse '" + text + "' as a number");
    }
    return *z;
}

double real_arg(const std::string& text, const char* name)
{
    const Complex z = complex_arg(text, name);
    if (z.imag() != 0.0) {
        throw UsageError(std::string("--") + name + " must be real for this command");
    }
    return z.real();
}

std::string join(const std::vector<std::string>& args)
{
    std::string out;
    for (const std::string& a : args) {
        if (!out.empty()) {
            out += ' ';
        }
        out += a;
    }
    return out;
}

double tolerance(const RunConfig& config, double command_default)
{
    return config.tol.value_or(command_default);
}

std::optional<std::string> try_regime(int n, Complex alpha, Complex beta)
{
    if (alpha.imag() != 0.0 || beta.imag() != 0.0) {
        return std::nullopt;
    }
    try {
        return std::string(regimes::tag_name(regimes::classify(n, alpha.real(), beta.real()).tag));
    } catch (const Error&) {
        return std::nullopt;
    }
}

verify::VerifyOptions verify_options(const RunConfig& config)
{
    verify::VerifyOptions o;
    o.depth_cap = config.depth_cap;
    o.truncation = config.truncation;
    return o;
}

// Evaluation points from --z values and an optional --grid
// "re0,re1,count[,im0,im1,count]".
std::vector<Complex> eval_points(const std::vector<std::string>& zs, const std::string& grid)
{
    std::vector<Complex> points;
    for (const std::string& z : zs) {
        points.push_back(complex_arg(z, "z"));
    }
    if (grid.empty()) {
        return points;
    }
    std::vector<std::string> parts;
    std::stringstream ss(grid);
    for (std::string item; std::getline(ss, item, ',');) {
        parts.push_back(item);
    }
    if (parts.size() != 3 && parts.size() != 6) {
        throw UsageError("--grid needs re0,re1,count or re0,re1,count,im0,im1,count");
    }
    auto axis = [&](std::size_t offset) {
        const auto lo = parse_double(parts[offset]);
        const auto hi = parse_double(parts[offset + 1]);
        const auto count = parse_double(parts[offset + 2]);
        if (!lo || !hi || !count || *count < 1.0 || *count != std::floor(*count) || *count > 1e6) {
            throw UsageError("--grid: malformed axis '" + parts[offset] + "," + parts[offset + 1] + "," +
                             parts[offset + 2] + "'");
        }
        std::vector<double> v;
        const int m = static_cast<int>(*count);
        for (int i = 0; i < m; ++i) {
            v.push_back(m == 1 ? *lo : *lo + (*hi - *lo) * i / (m - 1));
        }
        return v;
    };
    const std::vector<double> re = axis(0);
    const std::vector<double> im = parts.size() == 6 ? axis(3) : std::vector<double>{0.0};
    for (const double y : im) {
        for (const double x : re) {
            points.emplace_back(x, y);
        }
    }
    return points;
}

struct Outcome {
    Envelope envelope;
    int code = kExitOk;
    /// Raw text replacing the JSON envelope on stdout (CSV output).
    std::optional<std::string> raw;
};

void emit(const Outcome& o, const RunConfig& config, std::ostream& out)
{
    if (o.raw) {
        out << *o.raw;
        return;
    }
    const Json j = report::envelope_json(o.envelope);
    out << (config.format == "text" ? report::flatten_text(j) : report::dump(j));
}

Outcome cmd_eval(const Triple& t, const std::vector<std::string>& zs, const std::string& grid, const RunConfig& config)
{
    Outcome o;
    const JacobiParams p{t.n, complex_arg(t.alpha, "alpha"), complex_arg(t.beta, "beta")};
    if (p.n < 0) {
        throw UsageError("--n must be >= 0");
    }
    const std::vector<Complex> points = eval_points(zs, grid);
    if (points.empty()) {
        throw UsageError("eval needs --z or --grid");
    }
    o.envelope.alpha = p.alpha;
    o.envelope.beta = p.beta;
    o.envelope.regime = try_regime(p.n, p.alpha, p.beta);
    Json rows = Json::array();
    std::string csv = "z_re,z_im,p_re,p_im\n";
    for (const Complex& z : points) {
        const Complex v = jacobi_eval(p, z);
        rows.push_back({{"z", report::complex_json(z)}, {"value", report::complex_json(v)}});
        csv += report::format_double(z.real()) + ',' + report::format_double(z.imag()) + ',' +
               report::format_double(v.real()) + ',' + report::format_double(v.imag()) + '\n';
    }
    o.envelope.payload["degree_reduction"] = report::Json(degree_reduction_index(p).has_value());
    o.envelope.payload["points"] = rows;
    if (config.format == "csv") {
        o.raw = csv;
    }
    return o;
}

Outcome cmd_classify(const Triple& t)
{
    Outcome o;
    const double alpha = real_arg(t.alpha, "alpha");
    const double beta = real_arg(t.beta, "beta");
    o.envelope.alpha = alpha;
    o.envelope.beta = beta;
    const regimes::RegimeReport r = regimes::classify(t.n, alpha, beta);
    o.envelope.regime = std::string(regimes::tag_name(r.tag));
    o.envelope.payload = report::regime_json(r);
    try {
        o.envelope.payload["hilbert_klein"] = regimes::hilbert_klein(t.n, alpha, beta);
    } catch (const KappaZero&) {
        o.envelope.payload["hilbert_klein"] = nullptr;
    }
    o.envelope.payload["quasi_lower_bound"] = regimes::quasi_lower_bound(t.n, alpha, beta);
    return o;
}

Outcome cmd_verify_main(const Triple& t, const RunConfig& config)
{
    Outcome o;
    const Complex alpha = complex_arg(t.alpha, "alpha");
    const Complex beta = complex_arg(t.beta, "beta");
    o.envelope.alpha = alpha;
    o.envelope.beta = beta;
    o.envelope.regime = try_regime(t.n, alpha, beta);
    const verify::OrthReport r =
        verify::verify_main(t.n, alpha, beta, tolerance(config, kDefaultTol), verify_options(config));
    o.envelope.payload = report::orth_json(r);
    o.envelope.pass = r.pass;
    o.code = r.pass ? kExitOk : kExitFail;
    return o;
}

Outcome cmd_verify_regime(const Triple& t, const RunConfig& config)
{
    Outcome o;
    const double alpha = real_arg(t.alpha, "alpha");
    const double beta = real_arg(t.beta, "beta");
    o.envelope.alpha = alpha;
    o.envelope.beta = beta;
    const regimes::RegimeReport regime = regimes::classify(t.n, alpha, beta);
    o.envelope.regime = std::string(regimes::tag_name(regime.tag));
    const double tol = tolerance(config, kDefaultTol);
    bool pass = true;
    bool skipped = false;
    Json blocks = Json::array();
    for (const regimes::ConditionBlock& b : regime.blocks) {
        const verify::OrthReport r = verify::verify_block(b, t.n, alpha, beta, tol, verify_options(config));
        pass = pass && r.pass;
        skipped = skipped || r.divergent_skipped;
        blocks.push_back({{"block", report::block_json(b)}, {"check", report::orth_json(r)}});
    }
    o.envelope.payload["regime"] = report::regime_json(regime);
    o.envelope.payload["tol"] = tol;
    o.envelope.payload["blocks"] = blocks;
    if (skipped) {
        o.envelope.payload["divergence_note"] = regime.notes;
    }
    o.envelope.pass = pass;
    o.code = !pass ? kExitFail : (skipped ? kExitDivergentSkipped : kExitOk);
    return o;
}

Outcome cmd_verify_rh(const Triple& t)
{
    Outcome o;
    const Complex alpha = complex_arg(t.alpha, "alpha");
    const Complex beta = complex_arg(t.beta, "beta");
    o.envelope.alpha = alpha;
    o.envelope.beta = beta;
    o.envelope.regime = try_regime(t.n, alpha, beta);
    const verify::RhReport r = verify::rh_verify(t.n, alpha, beta);
    o.envelope.payload = report::rh_json(r);
    o.envelope.pass = r.pass;
    o.code = r.pass ? kExitOk : kExitFail;
    return o;
}

Outcome cmd_characterize(const Triple& t, const RunConfig& config)
{
    Outcome o;
    const double alpha = real_arg(t.alpha, "alpha");
    const double beta = real_arg(t.beta, "beta");
    o.envelope.alpha = alpha;
    o.envelope.beta = beta;
    o.envelope.regime = try_regime(t.n, alpha, beta);
    const double tol = tolerance(config, kDefaultCharacterizeTol);
    const verify::CharacterizeReport r = verify::characterize(t.n, alpha, beta, tol, verify_options(config));
    const bool pass = r.max_relative_deviation <= tol;
    o.envelope.payload = report::characterize_json(r, tol, pass);
    o.envelope.pass = pass;
    o.code = pass ? kExitOk : kExitFail;
    return o;
}

Outcome cmd_zeros(const Triple& t, const std::string& csv_path, const RunConfig& config)
{
    Outcome o;
    const double alpha = real_arg(t.alpha, "alpha");
    const double beta = real_arg(t.beta, "beta");
    o.envelope.alpha = alpha;
    o.envelope.beta = beta;
    o.envelope.regime = try_regime(t.n, alpha, beta);
    regimes::ZeroOptions zo;
    zo.degree_cap = config.root_cap;
    zo.seed = config.seed;
    const regimes::ZeroReport z = regimes::zero_report(t.n, alpha, beta, zo);
    o.envelope.payload = report::zero_json(z, zo.realness_tol);
    if (z.hilbert_klein_N) {
        const bool pass = z.count_in_minus1_1 == *z.hilbert_klein_N &&
                          (!z.quasi_lower_bound || *z.quasi_lower_bound <= z.count_in_minus1_1);
        o.envelope.pass = pass;
        o.code = pass ? kExitOk : kExitFail;
    }
    std::ostringstream csv;
    report::write_zero_csv(csv, z, zo.realness_tol);
    if (!csv_path.empty()) {
        report::write_file_atomically(csv_path, csv.str());
        o.envelope.payload["csv"] = csv_path;
    } else if (config.format == "csv") {
        o.raw = csv.str();
    }
    return o;
}

Outcome cmd_contour(const std::string& label_text, double xi, double radius, int samples, const std::string& csv_path,
                    const RunConfig& config)
{
    Outcome o;
    const auto label = contour::label_from_name(label_text);
    if (!label || *label == contour::ContourLabel::Custom) {
        throw UsageError("--label must be one of gamma, gamma1, gammam1, gammainf, interval, rayleft, rayright");
    }
    if (samples < 1) {
        throw UsageError("--samples must be positive");
    }
    const contour::PathSpec path = contour::build_path(*label, xi, radius);
    const double extent = config.truncation.value_or(10.0);
    const std::vector<Complex> points = contour::polyline(path, samples, extent);
    std::ostringstream csv;
    contour::write_polyline_csv(csv, points);
    o.envelope.payload["label"] = label_text;
    o.envelope.payload["closed"] = path.closed;
    o.envelope.payload["point_count"] = points.size();
    o.envelope.payload["first"] = report::complex_json(points.front());
    o.envelope.payload["last"] = report::complex_json(points.back());
    if (!csv_path.empty()) {
        report::write_file_atomically(csv_path, csv.str());
        o.envelope.payload["csv"] = csv_path;
    } else if (config.format != "text") {
        o.raw = csv.str();
    }
    return o;
}

void add_triple(CLI::App* cmd, Triple& t)
{
    cmd->add_option("--n", t.n, "Degree")->required();
    cmd->add_option("--alpha", t.alpha, "alpha (real, or complex where allowed: 0.4+0.2i)")->required();
    cmd->add_option("--beta", t.beta, "beta")->required();
}

void add_common(CLI::App* cmd, RunConfig& config, std::optional<double>& tol_flag)
{
    cmd->add_option("--tol", tol_flag, "Tolerance (overrides GENJACOBI_TOL)");
    cmd->add_option("--depth-cap", config.depth_cap, "Quadrature bisection depth cap")->check(CLI::PositiveNumber);
    cmd->add_option("--truncation", config.truncation, "Cut rays at this distance");
    cmd->add_option("--root-cap", config.root_cap, "Largest degree for root finding")->check(CLI::PositiveNumber);
    cmd->add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--seed", config.seed, "Seed for root-finder perturbations");
    cmd->add_flag("--timing", config.timing, "Report wall time");
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const IntegerParameter*>(&e)) {
        return kExitIntegerParameter;
    }
    if (dynamic_cast<const CapExceeded*>(&e)) {
        return kExitCapExceeded;
    }
    if (dynamic_cast<const UsageError*>(&e)) {
        return kExitParse;
    }
    return kExitOtherError;
}

std::string error_type(const std::exception& e)
{
    if (dynamic_cast<const IntegerParameter*>(&e)) return "IntegerParameter";
    if (dynamic_cast<const CapExceeded*>(&e)) return "CapExceeded";
    if (dynamic_cast<const UsageError*>(&e)) return "UsageError";
    if (dynamic_cast<const DivergentIntegral*>(&e)) return "DivergentIntegral";
    if (dynamic_cast<const RegimeNotCharacterizing*>(&e)) return "RegimeNotCharacterizing";
    if (dynamic_cast<const IllConditioned*>(&e)) return "IllConditioned";
    if (dynamic_cast<const ConditionViolated*>(&e)) return "ConditionViolated";
    if (dynamic_cast<const RefinementLimit*>(&e)) return "RefinementLimit";
    if (dynamic_cast<const GeometryError*>(&e)) return "GeometryError";
    if (dynamic_cast<const KappaZero*>(&e)) return "KappaZero";
    if (dynamic_cast<const TooCloseToContour*>(&e)) return "TooCloseToContour";
    return "Error";
}

} // namespace

std::optional<Complex> parse_complex(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.front() == '(' && text.back() == ')') {
        const std::string_view inner = text.substr(1, text.size() - 2);
        const auto comma = inner.find(',');
        if (comma == std::string_view::npos) {
            return std::nullopt;
        }
        const auto re = parse_double(inner.substr(0, comma));
        const auto im = parse_double(inner.substr(comma + 1));
        if (!re || !im) {
            return std::nullopt;
        }
        return Complex(*re, *im);
    }
    if (const auto re = parse_double(text)) {
        return Complex(*re, 0.0);
    }
    if (text.back() != 'i' && text.back() != 'j') {
        return std::nullopt;
    }
    text.remove_suffix(1);
    // Split at the last sign that is not an exponent sign or the leading one.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [](std::string_view s) -> std::optional<double> {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return parse_double(s);
    };
    if (split == std::string_view::npos) {
        const auto im = imag_part(text);
        return im ? std::optional<Complex>(Complex(0.0, *im)) : std::nullopt;
    }
    const auto re = parse_double(text.substr(0, split));
    const auto im = imag_part(text.substr(split));
    if (!re || !im) {
        return std::nullopt;
    }
    return Complex(*re, *im);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Generalised Jacobi polynomials: evaluation, orthogonality checks, zeros", "genjacobi"};
    app.require_subcommand(1);

    RunConfig config;
    std::optional<double> tol_flag;
    Triple triple;

    CLI::App* eval = app.add_subcommand("eval", "Evaluate P_n^{(alpha,beta)} at points");
    add_triple(eval, triple);
    std::vector<std::string> zs;
    std::string grid;
    eval->add_option("--z", zs, "Evaluation point (repeatable)");
    eval->add_option("--grid", grid, "re0,re1,count[,im0,im1,count]");
    add_common(eval, config, tol_flag);

    CLI::App* classify = app.add_subcommand("classify", "Orthogonality regime and condition counts");
    add_triple(classify, triple);
    add_common(classify, config, tol_flag);

    CLI::App* verify_cmd = app.add_subcommand("verify", "Check orthogonality relations numerically");
    add_triple(verify_cmd, triple);
    std::string which = "main";
    verify_cmd->add_option("--which", which, "main, regime or rh")->check(CLI::IsMember({"main", "regime", "rh"}));
    add_common(verify_cmd, config, tol_flag);

    CLI::App* characterize = app.add_subcommand("characterize", "Recover the monic polynomial from its conditions");
    add_triple(characterize, triple);
    add_common(characterize, config, tol_flag);

    CLI::App* zeros = app.add_subcommand("zeros", "Zeros of P_n with region counts");
    add_triple(zeros, triple);
    std::string zeros_csv;
    zeros->add_option("--csv", zeros_csv, "Write the roots as CSV to this path");
    add_common(zeros, config, tol_flag);

    CLI::App* contour_cmd = app.add_subcommand("contour", "Polyline of an integration contour as CSV");
    std::string label;
    double xi = 0.0;
    double radius = 0.5;
    int samples = 64;
    std::string contour_csv;
    contour_cmd->add_option("--label", label, "gamma, gamma1, gammam1, gammainf, interval, rayleft, rayright")
        ->required();
    contour_cmd->add_option("--xi", xi, "Start point of the double loop");
    contour_cmd->add_option("--radius", radius, "Loop radius of the double loop");
    contour_cmd->add_option("--samples", samples, "Samples per segment");
    contour_cmd->add_option("--csv", contour_csv, "Write the polyline to this path instead of stdout");
    add_common(contour_cmd, config, tol_flag);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "genjacobi: " << e.what() << "\n";
        return kExitParse;
    }

    const std::string command = join(args);
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        if (tol_flag) {
            config.tol = tol_flag;
        } else if (const char* env = std::getenv(kTolEnvVar)) {
            const auto v = parse_double(env);
            if (!v) {
                throw UsageError(std::string(kTolEnvVar) + " is not a number: '" + env + "'");
            }
            config.tol = v;
        }
        if (config.tol && !(*config.tol > 0.0)) {
            throw UsageError("tolerance must be positive");
        }
        if (config.truncation && !(*config.truncation > 0.0)) {
            throw UsageError("--truncation must be positive");
        }

        if (eval->parsed()) {
            outcome = cmd_eval(triple, zs, grid, config);
        } else if (classify->parsed()) {
            outcome = cmd_classify(triple);
        } else if (verify_cmd->parsed()) {
            outcome = which == "main"     ? cmd_verify_main(triple, config)
                      : which == "regime" ? cmd_verify_regime(triple, config)
                                          : cmd_verify_rh(triple);
        } else if (characterize->parsed()) {
            outcome = cmd_characterize(triple, config);
        } else if (zeros->parsed()) {
            outcome = cmd_zeros(triple, zeros_csv, config);
        } else {
            outcome = cmd_contour(label, xi, radius, samples, contour_csv, config);
        }
    } catch (const std::exception& e) {
        err << "genjacobi: " << e.what() << "\n";
        Outcome failed;
        failed.code = exit_code_for(e);
        failed.envelope.error_type = error_type(e);
        failed.envelope.error_message = e.what();
        outcome = std::move(failed);
    }
    outcome.envelope.command = command;
    if (!contour_cmd->parsed()) {
        outcome.envelope.n = triple.n;
        if (!outcome.envelope.error_type) {
            // alpha and beta were filled in by the command.
        } else if (const auto a = parse_complex(triple.alpha)) {
            outcome.envelope.alpha = *a;
            if (const auto b = parse_complex(triple.beta)) {
                outcome.envelope.beta = *b;
            }
        }
    }
    if (config.timing) {
        outcome.envelope.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    emit(outcome, config, out);
    return outcome.code;
}

} // namespace genjacobi::cli
