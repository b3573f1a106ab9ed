#include "genjacobi/errors.hpp"
#include "genjacobi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace genjacobi::verify {

namespace {

int selection_rank(contour::ContourLabel label)
{
    switch (label) {
    case contour::ContourLabel::GammaMinus1: return 0;
    case contour::ContourLabel::GammaPlus1: return 1;
    default: return 2;
    }
}

} // namespace

MomentSystem build_moment_system(int n, const regimes::RegimeReport& regime, const VerifyOptions& options,
                                 double quad_tol)
{
    std::vector<std::size_t> order(regime.blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return selection_rank(regime.blocks[a].contour_label) < selection_rank(regime.blocks[b].contour_label);
    });

    struct Row {
        MomentRow source;
        Eigen::VectorXcd coeffs;
        std::complex<double> rhs;
    };
    std::vector<Row> rows;
    contour::QuadOptions q;
    q.tol = quad_tol;
    q.depth_cap = options.depth_cap;
    q.truncation = options.truncation;
    for (const std::size_t index : order) {
        const regimes::ConditionBlock& block = regime.blocks[index];
        if (block.max_vanishing_degree < 0) {
            continue;
        }
        // Moments t^{extra + k}, k = 0..max_vanishing + n.
        contour::PolyIntegrand f;
        f.bases.push_back(numerics::Poly::constant(1.0));
        f.first_power = block.extra_monomial_power;
        f.power_count = block.max_vanishing_degree + n + 1;
        f.weight_alpha = block.weight_alpha;
        f.weight_beta = block.weight_beta;
        const std::vector<contour::QuadResult> mu = contour::integrate_many(block_path(block, options), f, q);
        for (int j = 0; j <= block.max_vanishing_degree; ++j) {
            Row row;
            row.source = {index, j};
            row.coeffs.resize(n);
            for (int i = 0; i < n; ++i) {
                row.coeffs(i) = mu[static_cast<std::size_t>(j + i)].value;
            }
            row.rhs = -mu[static_cast<std::size_t>(j + n)].value;
            rows.push_back(std::move(row));
        }
    }
    if (static_cast<int>(rows.size()) < n) {
        std::ostringstream msg;
        msg << "regime " << regimes::tag_name(regime.tag) << " gives " << rows.size() << " conditions for n = " << n;
        throw RegimeNotCharacterizing(msg.str());
    }

    MomentSystem sys;
    const std::size_t extra = rows.size() - static_cast<std::size_t>(n);
    sys.matrix.resize(n, n);
    sys.rhs.resize(n);
    sys.extra_matrix.resize(static_cast<Eigen::Index>(extra), n);
    sys.extra_rhs.resize(static_cast<Eigen::Index>(extra));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r < static_cast<std::size_t>(n)) {
            const auto i = static_cast<Eigen::Index>(r);
            sys.matrix.row(i) = rows[r].coeffs.transpose();
            sys.rhs(i) = rows[r].rhs;
            sys.sources.push_back(rows[r].source);
        } else {
            const auto i = static_cast<Eigen::Index>(r - static_cast<std::size_t>(n));
            sys.extra_matrix.row(i) = rows[r].coeffs.transpose();
            sys.extra_rhs(i) = rows[r].rhs;
            sys.extra_sources.push_back(rows[r].source);
        }
    }
    return sys;
}

numerics::Poly solve_moment_system(MomentSystem& system)
{
    const Eigen::Index n = system.matrix.rows();
    std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1);
    coeffs.back() = 1.0;
    if (n == 0) {
        system.condition_estimate = 1.0;
        return numerics::Poly(coeffs);
    }
    Eigen::MatrixXcd a = system.matrix;
    Eigen::VectorXcd b = system.rhs;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = a.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0) {
            a.row(i) /= s;
            b(i) /= s;
        }
    }
    Eigen::VectorXd col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = a.col(j).cwiseAbs().maxCoeff();
        col(j) = s > 0.0 ? 1.0 / s : 1.0;
        a.col(j) *= col(j);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const Eigen::VectorXd& sv = svd.singularValues();
    system.condition_estimate = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
    const Eigen::VectorXcd y = a.colPivHouseholderQr().solve(b);
    for (Eigen::Index j = 0; j < n; ++j) {
        coeffs[static_cast<std::size_t>(j)] = y(j) * col(j);
    }
    return numerics::Poly(coeffs);
}

double coefficient_deviation(const numerics::Poly& recovered, const numerics::Poly& expected)
{
    const std::size_t size = std::max(recovered.size(), expected.size());
    const double floor = kDeviationFloor * expected.max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double denom = std::max(std::abs(expected[i]), floor);
        const double diff = std::abs(recovered[i] - expected[i]);
        worst = std::max(worst, denom > 0.0 ? diff / denom : diff);
    }
    return worst;
}

CharacterizeReport characterize(int n, double alpha, double beta, double tol, const VerifyOptions& options)
{
    CharacterizeReport report;
    report.regime = regimes::classify(n, alpha, beta);
    if (!report.regime.characterizing()) {
        throw RegimeNotCharacterizing(std::string("regime ") + std::string(regimes::tag_name(report.regime.tag)) +
                                      " does not determine P_n");
    }
    if (n > kCharacterizeDegreeCap) {
        throw RegimeNotCharacterizing("characterization is limited to n <= " +
                                      std::to_string(kCharacterizeDegreeCap));
    }
    const double quad_tol = options.quad_tol ? *options.quad_tol : std::clamp(1e-4 * tol, 1e-14, 1e-10);
    MomentSystem sys = build_moment_system(n, report.regime, options, quad_tol);
    report.rows_used = static_cast<int>(sys.matrix.rows());
    report.rows_total = report.rows_used + static_cast<int>(sys.extra_matrix.rows());
    report.recovered = solve_moment_system(sys);
    report.condition_estimate = sys.condition_estimate;
    if (sys.condition_estimate > kConditionCap) {
        std::ostringstream msg;
        msg << "moment system condition estimate " << sys.condition_estimate << " exceeds " << kConditionCap;
        throw IllConditioned(msg.str());
    }
    const NormalizedJacobi nj = normalized_jacobi(JacobiParams{n, alpha, beta});
    report.expected = nj.monic_factor * nj.coeffs;
    report.max_relative_deviation = coefficient_deviation(report.recovered, report.expected);

    for (Eigen::Index r = 0; r < sys.extra_matrix.rows(); ++r) {
        Complex value = -sys.extra_rhs(r);
        double scale = std::abs(sys.extra_rhs(r));
        for (Eigen::Index i = 0; i < n; ++i) {
            const Complex term = sys.extra_matrix(r, i) * report.recovered[static_cast<std::size_t>(i)];
            value += term;
            scale += std::abs(term);
        }
        report.unused_row_residual = std::max(report.unused_row_residual, scale > 0.0 ? std::abs(value) / scale : 0.0);
    }
    return report;
}

} // namespace genjacobi::verify
