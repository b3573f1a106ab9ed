#include "oracles.hpp"

#include "genjacobi/errors.hpp"
#include "genjacobi/verify.hpp"

#include <doctest.h>

#include <random>
#include <tuple>

using namespace genjacobi;
using namespace genjacobi::verify;
using contour::ContourLabel;

namespace {

const regimes::ConditionBlock& block_on(const regimes::RegimeReport& r, ContourLabel label)
{
    for (const regimes::ConditionBlock& b : r.blocks) {
        if (b.contour_label == label) {
            return b;
        }
    }
    throw std::runtime_error("no block on the requested contour");
}

// One sample per characterizing regime and orientation.
const std::tuple<int, double, double> kRegimeSamples[] = {
    {4, 0.5, 0.5},   {6, 0.3, 1.7},    {3, -8.3, 0.5},   {3, 0.5, -8.3},  {5, 2.5, -3.7},
    {5, -3.7, 2.5},  {4, -7.3, -2.4},  {4, -2.4, -7.3},  {4, 0.3, -6.6},  {4, -6.6, 0.3},
    {5, -2.3, -1.6}, {4, -5.3, -1.6},  {4, -1.6, -5.3},  {5, -4.5, -4.3}, {10, -3.3, -4.6},
    {10, 1.2, -4.4}, {8, -12.3, -2.2}, {7, -3.4, -14.2}, {3, 0.5, -4.3},   {2, -5.3, -3.4},
};

} // namespace

TEST_SUITE("verify")
{
    TEST_CASE("closed-form right-hand side")
    {
        CHECK(orth_main_rhs(3, 2, 0.4, -0.7) == Complex(0.0));
        CHECK(std::abs(orth_main_rhs(0, 0, 0.5, 0.5) - 2.0 * kPi) < 1e-13);
        // Gamma(-3/2)^2 = 16 pi / 9 in the denominator.
        CHECK(std::abs(orth_main_rhs(1, 1, 0.5, 0.5) - 0.75 * kPi) < 1e-13);
        CHECK(orth_main_rhs(2, 2, 2.0, 0.5) == Complex(0.0));

        std::mt19937_64 rng(6);
        for (int i = 0; i < 100; ++i) {
            const int n = static_cast<int>(rng() % 12);
            const double a = oracle::non_integer(rng, -9.0, 6.0);
            const double b = oracle::non_integer(rng, -9.0, 6.0);
            if (std::abs(2 * n + a + b + 2 - std::round(2 * n + a + b + 2)) < 0.05 || 2 * n + a + b + 2 < 0.0) {
                continue;
            }
            CAPTURE(n);
            CAPTURE(a);
            CAPTURE(b);
            CHECK(oracle::rel_diff(orth_main_rhs(n, n, a, b), oracle::main_rhs_real(n, a, b)) < 1e-11);
        }
    }

    TEST_CASE("verify_main examples")
    {
        const OrthReport r = verify_main(3, Complex(0.4, 0.2), -0.7, 1e-8);
        CHECK(r.pass);
        CHECK(r.degrees.size() == 4);
        CHECK(r.max_vanishing_residual <= 1e-8);
        CHECK(r.closed_form_residual <= 1e-8);

        const OrthReport zero = verify_main(0, 0.5, 0.5, 1e-10);
        REQUIRE(zero.integrals.size() == 1);
        CHECK(std::abs(zero.integrals[0].value - 2.0 * kPi) <= 1e-10);

        const OrthReport pole = verify_main(2, 2.0, 0.5, 1e-8);
        CHECK(pole.rhs_closed_form == Complex(0.0));
        CHECK(pole.pass);
        CHECK(pole.residuals.back() <= 1e-8);
    }

    TEST_CASE("verify_main is sensitive to a wrong weight")
    {
        // Same polynomial, weight exponent shifted: the conditions must fail.
        const regimes::RegimeReport r = regimes::classify(4, 0.5, 0.5);
        regimes::ConditionBlock wrong = r.blocks[0];
        wrong.weight_alpha += 0.5;
        CHECK_FALSE(verify_block(wrong, 4, 0.5, 0.5, 1e-8).pass);
        CHECK(verify_block(r.blocks[0], 4, 0.5, 0.5, 1e-8).pass);
    }

    TEST_CASE("verify_block examples")
    {
        const regimes::RegimeReport r = regimes::classify(5, 2.5, -3.7);
        const OrthReport loop = verify_block(block_on(r, ContourLabel::GammaPlus1), 5, 2.5, -3.7, 1e-8);
        CHECK(loop.pass);
        CHECK(loop.degrees.size() == 3);
        const OrthReport interval = verify_block(block_on(r, ContourLabel::Interval), 5, 2.5, -3.7, 1e-8);
        CHECK(interval.pass);
        REQUIRE(interval.nonzero_margin.has_value());
        CHECK(*interval.nonzero_margin > kNonzeroFactor * 1e-8);

        const regimes::RegimeReport deg = regimes::classify(3, 0.5, -3.4);
        REQUIRE(deg.blocks.size() == 1);
        const OrthReport single = verify_block(deg.blocks[0], 3, 0.5, -3.4, 1e-8);
        CHECK(single.pass);
        CHECK(single.degrees.size() == 1);
        CHECK(single.nonzero_margin.has_value());

        const regimes::RegimeReport last = regimes::classify(5, -4.5, -4.3);
        for (const regimes::ConditionBlock& b : last.blocks) {
            CAPTURE(contour::label_name(b.contour_label));
            CHECK(verify_block(b, 5, -4.5, -4.3, 1e-8).pass);
        }
    }

    TEST_CASE("divergent non-vanishing degree is skipped")
    {
        const regimes::RegimeReport r = regimes::classify(2, -3.2, -1.5);
        const regimes::ConditionBlock& ray = block_on(r, ContourLabel::RayLeft);
        REQUIRE(ray.divergence_note);
        const OrthReport o = verify_block(ray, 2, -3.2, -1.5, 1e-8);
        CHECK(o.divergent_skipped);
        CHECK_FALSE(o.nonzero_margin.has_value());
    }

    TEST_CASE("every regime block verifies")
    {
        for (const auto& [n, a, b] : kRegimeSamples) {
            const regimes::RegimeReport r = regimes::classify(n, a, b);
            for (const regimes::ConditionBlock& blk : r.blocks) {
                CAPTURE(n);
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(contour::label_name(blk.contour_label));
                CHECK(verify_block(blk, n, a, b, 1e-8).pass);
            }
        }
    }

    TEST_CASE("characterization examples")
    {
        CHECK(characterize(3, 0.5, 0.5, 1e-9).max_relative_deviation <= 1e-9);
        const CharacterizeReport row1 = characterize(5, 2.5, -3.7, 1e-7);
        CHECK(row1.max_relative_deviation <= 1e-7);
        CHECK(row1.rows_used == 5);
        CHECK(characterize(5, -4.5, -4.3, 1e-7).max_relative_deviation <= 1e-7);
        CHECK_THROWS_AS(characterize(3, 0.5, -3.4, 1e-7), RegimeNotCharacterizing);
        CHECK_THROWS_AS(characterize(13, 0.5, 0.5, 1e-7), RegimeNotCharacterizing);
    }

    TEST_CASE("characterization recovers monic Jacobi in every regime")
    {
        for (const auto& [n, a, b] : kRegimeSamples) {
            CAPTURE(n);
            CAPTURE(a);
            CAPTURE(b);
            const CharacterizeReport c = characterize(n, a, b, 1e-7);
            CHECK(c.max_relative_deviation <= 1e-7);
            CHECK(c.condition_estimate <= kConditionCap);
            // Monic reference independent of the normalisation code.
            const numerics::Poly raw = jacobi_coeffs(JacobiParams{n, a, b});
            const Complex lead = raw[static_cast<std::size_t>(n)];
            for (int i = 0; i <= n; ++i) {
                const Complex expected = raw[static_cast<std::size_t>(i)] / lead;
                CHECK(std::abs(c.recovered[static_cast<std::size_t>(i)] - expected) <=
                      1e-7 * std::max(std::abs(expected), 1e-6 * raw.max_abs() / std::abs(lead)));
            }
        }
    }

    TEST_CASE("perturbation contrast")
    {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (const auto& [n, a, b] : kRegimeSamples) {
            CAPTURE(n);
            CAPTURE(a);
            CAPTURE(b);
            const regimes::RegimeReport r = regimes::classify(n, a, b);
            MomentSystem sys = build_moment_system(n, r);
            const numerics::Poly good = solve_moment_system(sys);
            const NormalizedJacobi nj = normalized_jacobi(JacobiParams{n, a, b});
            const numerics::Poly expected = nj.monic_factor * nj.coeffs;
            const double match = coefficient_deviation(good, expected);
            for (Eigen::Index row = 0; row < sys.rhs.size(); ++row) {
                MomentSystem bad = sys;
                const double scale = sys.matrix.row(row).cwiseAbs().maxCoeff();
                bad.rhs(row) = scale * Complex(u(rng), u(rng));
                const numerics::Poly moved = solve_moment_system(bad);
                CHECK(coefficient_deviation(moved, good) >= 1e3 * std::max(match, 1e-16));
            }
        }
    }

    TEST_CASE("overdetermined systems are consistent")
    {
        // t q(t) for deg q <= n - k - 2 is another vanishing condition on the interval.
        const int n = 5;
        const double a = 2.5;
        const double b = -3.7;
        regimes::RegimeReport r = regimes::classify(n, a, b);
        regimes::ConditionBlock extra = block_on(r, ContourLabel::Interval);
        extra.extra_monomial_power = 1;
        extra.max_vanishing_degree -= 1;
        extra.expect_nonzero_at.reset();
        r.blocks.push_back(extra);
        MomentSystem sys = build_moment_system(n, r);
        REQUIRE(sys.extra_matrix.rows() == extra.max_vanishing_degree + 1);
        const numerics::Poly p = solve_moment_system(sys);
        for (Eigen::Index row = 0; row < sys.extra_matrix.rows(); ++row) {
            Complex value = -sys.extra_rhs(row);
            double scale = std::abs(sys.extra_rhs(row));
            for (Eigen::Index i = 0; i < n; ++i) {
                value += sys.extra_matrix(row, i) * p[static_cast<std::size_t>(i)];
                scale += std::abs(sys.extra_matrix(row, i) * p[static_cast<std::size_t>(i)]);
            }
            CHECK(std::abs(value) <= 1e-8 * scale);
        }
        CHECK(characterize(n, a, b, 1e-7).unused_row_residual == 0.0);
    }

    TEST_CASE("Riemann-Hilbert matrix")
    {
        const YMatrix y = rh_build_Y(3, 0.4, -0.7, Complex(3.0, 2.0));
        CHECK(std::abs(y.det() - 1.0) <= 1e-8);
        // Y11 is the monic polynomial.
        const Complex big(40.0, 25.0);
        const YMatrix far = rh_build_Y(3, 0.4, -0.7, big);
        const NormalizedJacobi nj = normalized_jacobi(JacobiParams{3, 0.4, -0.7});
        CHECK(oracle::rel_diff(far.entries[0], (nj.monic_factor * nj.coeffs)(big)) < 1e-12);
        CHECK(std::abs(y.d_nm1 * orth_main_rhs(2, 2, 0.4, -0.7) + Complex(0.0, 2.0 * kPi)) < 1e-12);
        // The closed form behind d_{n-1} agrees with quadrature.
        const OrthReport prev = verify_main(2, 0.4, -0.7, 1e-10);
        CHECK(std::abs(prev.integrals.back().value - orth_main_rhs(2, 2, 0.4, -0.7)) <=
              1e-9 * std::abs(orth_main_rhs(2, 2, 0.4, -0.7)));

        CHECK_THROWS_AS(rh_build_Y(2, 2.0, 0.5, 3.0), ConditionViolated);
        CHECK_THROWS_AS(rh_build_Y(2, 0.3, 0.6, 1.5), TooCloseToContour);
    }

    TEST_CASE("jump residuals shrink with the offset")
    {
        const contour::PathSpec loop = contour::build_gamma_double_loop();
        const auto points = jump_probe_points(loop, 8);
        REQUIRE(points.size() == 8);
        const JumpReport j = rh_check_jump(2, 0.3, 0.6, points[1], kJumpOffset);
        CHECK(j.residual <= kJumpTolerance);
        CHECK(j.det_jump <= kDetTolerance);
        CHECK(j.raw[3] < j.raw[0]);
    }

    TEST_CASE("Riemann-Hilbert checks")
    {
        CHECK(rh_det_points().size() == 10);
        for (const auto& [n, a, b] : {std::tuple{2, 0.3, 0.6}, std::tuple{3, 0.4, -0.7}, std::tuple{4, -0.6, 1.4}}) {
            CAPTURE(n);
            const RhReport r = rh_verify(n, a, b);
            CHECK(r.pass);
            CHECK(r.max_jump <= kJumpTolerance);
            CHECK(r.max_det <= kDetTolerance);
            CHECK(std::abs(r.decay_ratio - 2.0) <= kDecayTolerance * 2.0);
            CHECK(r.jumps.size() == 8);
            CHECK(r.dets.size() == 10);
        }
    }
}
