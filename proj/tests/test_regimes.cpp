#include "oracles.hpp"

#include "genjacobi/errors.hpp"
#include "genjacobi/regimes.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <tuple>

using namespace genjacobi;
using namespace genjacobi::regimes;
using contour::ContourLabel;

namespace {

ContourLabel mirror(ContourLabel l)
{
    switch (l) {
    case ContourLabel::GammaPlus1: return ContourLabel::GammaMinus1;
    case ContourLabel::GammaMinus1: return ContourLabel::GammaPlus1;
    case ContourLabel::RayLeft: return ContourLabel::RayRight;
    case ContourLabel::RayRight: return ContourLabel::RayLeft;
    default: return l;
    }
}

RegimeTag mirror(RegimeTag t)
{
    if (t == RegimeTag::Multi54ii) {
        return RegimeTag::Multi54iii;
    }
    if (t == RegimeTag::Multi54iii) {
        return RegimeTag::Multi54ii;
    }
    return t;
}

using BlockKey = std::tuple<int, double, double, int, int, int, bool>;

BlockKey key(const ConditionBlock& b, bool mirrored)
{
    const ContourLabel l = mirrored ? mirror(b.contour_label) : b.contour_label;
    const double wa = mirrored ? b.weight_beta : b.weight_alpha;
    const double wb = mirrored ? b.weight_alpha : b.weight_beta;
    return {static_cast<int>(l), wa, wb, b.extra_monomial_power, b.max_vanishing_degree,
            b.expect_nonzero_at.value_or(-2), b.divergence_note};
}

const ConditionBlock* find(const RegimeReport& r, ContourLabel l)
{
    for (const ConditionBlock& b : r.blocks) {
        if (b.contour_label == l) {
            return &b;
        }
    }
    return nullptr;
}

// Floor independent of the library's helper.
int fl(double x)
{
    return static_cast<int>(std::floor(x));
}

} // namespace

TEST_SUITE("regimes")
{
    TEST_CASE("classical case")
    {
        const RegimeReport r = classify(4, 0.5, 0.5);
        CHECK(r.tag == RegimeTag::ClassicalReal);
        REQUIRE(r.blocks.size() == 1);
        CHECK(r.blocks[0].contour_label == ContourLabel::Interval);
        CHECK(r.blocks[0].max_vanishing_degree == 3);
        CHECK(r.blocks[0].expect_nonzero_at == std::optional<int>(4));
        CHECK(r.total_conditions == 4);
        // Legendre: integer parameters are fine while both exceed -1.
        CHECK(classify(3, 0.0, 0.0).tag == RegimeTag::ClassicalReal);
    }

    TEST_CASE("MultiAlt51 first row")
    {
        const RegimeReport r = classify(5, 2.5, -3.7);
        CHECK(r.tag == RegimeTag::MultiAlt51);
        const ConditionBlock* loop = find(r, ContourLabel::GammaPlus1);
        const ConditionBlock* interval = find(r, ContourLabel::Interval);
        REQUIRE(loop != nullptr);
        REQUIRE(interval != nullptr);
        CHECK(loop->condition_count() == 3);
        CHECK(loop->max_vanishing_degree == 2);
        CHECK(interval->weight_alpha == doctest::Approx(2.5));
        CHECK(interval->weight_beta == doctest::Approx(-0.7));
        CHECK(interval->max_vanishing_degree == 1);
        CHECK(r.total_conditions == 5);
    }

    TEST_CASE("counts for n = 75, alpha = -37.4, beta = -25.1")
    {
        const RegimeReport r = classify(75, -37.4, -25.1);
        CHECK(r.tag == RegimeTag::Multi54i);
        const ConditionBlock* m1 = find(r, ContourLabel::GammaMinus1);
        const ConditionBlock* p1 = find(r, ContourLabel::GammaPlus1);
        const ConditionBlock* iv = find(r, ContourLabel::Interval);
        REQUIRE(m1 != nullptr);
        REQUIRE(p1 != nullptr);
        REQUIRE(iv != nullptr);
        CHECK(m1->max_vanishing_degree == 36);
        CHECK(m1->weight_alpha == doctest::Approx(-37.4));
        CHECK(m1->weight_beta == doctest::Approx(-0.1));
        CHECK(p1->max_vanishing_degree == 24);
        CHECK(p1->weight_alpha == doctest::Approx(-0.4));
        CHECK(p1->weight_beta == doctest::Approx(-25.1));
        CHECK(iv->max_vanishing_degree == 12);
        CHECK(iv->weight_alpha == doctest::Approx(-0.4));
        CHECK(iv->weight_beta == doctest::Approx(-0.1));
        CHECK(r.total_conditions == 75);
        CHECK(hilbert_klein(75, -37.4, -25.1) == 13);
        CHECK(quasi_lower_bound(75, -37.4, -25.1) == 13);
    }

    TEST_CASE("MultiLast example")
    {
        const RegimeReport r = classify(5, -4.5, -4.3);
        CHECK(r.tag == RegimeTag::MultiLast);
        const ConditionBlock* m1 = find(r, ContourLabel::GammaMinus1);
        const ConditionBlock* p1 = find(r, ContourLabel::GammaPlus1);
        const ConditionBlock* inf = find(r, ContourLabel::GammaInf);
        REQUIRE(m1 != nullptr);
        REQUIRE(p1 != nullptr);
        REQUIRE(inf != nullptr);
        CHECK(m1->max_vanishing_degree == 0);
        CHECK(p1->max_vanishing_degree == 0);
        CHECK(inf->max_vanishing_degree == 2);
        CHECK(r.total_conditions == 5);
    }

    TEST_CASE("degenerate single condition")
    {
        const RegimeReport r = classify(3, 0.5, -3.4);
        CHECK(r.tag == RegimeTag::DegenerateSingle);
        REQUIRE(r.blocks.size() == 1);
        CHECK(r.blocks[0].contour_label == ContourLabel::GammaMinus1);
        CHECK(r.blocks[0].max_vanishing_degree == -1);
        CHECK(r.blocks[0].expect_nonzero_at == std::optional<int>(0));
        CHECK(r.total_conditions == 1);
        CHECK_FALSE(r.characterizing());
    }

    TEST_CASE("divergence windows are flagged")
    {
        // 2n + a + b = -0.7 with a single satisfied condition.
        const RegimeReport r = classify(2, -3.2, -1.5);
        CHECK(r.tag == RegimeTag::MultiAlt51);
        const ConditionBlock* ray = find(r, ContourLabel::RayLeft);
        REQUIRE(ray != nullptr);
        CHECK(ray->divergence_note);
        CHECK(r.notes.find("diverges") != std::string::npos);
        CHECK_FALSE(find(r, ContourLabel::GammaInf)->divergence_note);
    }

    TEST_CASE("integer parameters are refused")
    {
        CHECK_THROWS_AS(classify(3, -2.0, 0.5), IntegerParameter);
        CHECK_THROWS_AS(classify(3, -1.5, -2.5), IntegerParameter);
        CHECK_THROWS_AS(classify(3, -1.3 + 1e-10, -2.7), IntegerParameter);
        CHECK_THROWS_AS(classify(0, 0.5, 0.5), ConditionViolated);
    }

    TEST_CASE("E(u)")
    {
        CHECK(hilbert_klein_E(-1.5) == 0);
        CHECK(hilbert_klein_E(0.0) == 0);
        CHECK(hilbert_klein_E(3.0) == 2);
        CHECK(hilbert_klein_E(3.0 + 1e-11) == 2);
        CHECK(hilbert_klein_E(3.7) == 3);
        CHECK(hilbert_klein_E(0.4) == 0);
    }

    TEST_CASE("Hilbert-Klein examples")
    {
        CHECK(hilbert_klein(6, 0.5, 0.5) == 6);
        CHECK(hilbert_klein(75, -37.4, -25.1) == 13);
        CHECK(hilbert_klein(5, -2.3, 0.5) == 3);
        CHECK_THROWS_AS(hilbert_klein(3, -2.0, 0.5), KappaZero);
    }

    TEST_CASE("quasi lower bound examples")
    {
        CHECK(quasi_lower_bound(5, 2.5, -3.7) == 2);
        CHECK(quasi_lower_bound(75, -37.4, -25.1) == 13);
        CHECK(quasi_lower_bound(4, 0.5, 0.5) == 4);
        CHECK(quasi_lower_bound(5, -4.5, -4.3) == 0);
    }

    TEST_CASE("zero report examples")
    {
        const ZeroReport classical = zero_report(4, 0.5, 0.5);
        CHECK(classical.count_in_minus1_1 == 4);
        CHECK(classical.hilbert_klein_N == std::optional<int>(4));

        const ZeroReport hk = zero_report(5, -2.3, 0.5);
        CHECK(hk.count_in_minus1_1 == 3);
        CHECK(hk.quasi_lower_bound == std::optional<int>(3));

        const ZeroReport legendre = zero_report(2, 0.0, 0.0);
        const double s = 1.0 / std::sqrt(3.0);
        CHECK(oracle::max_root_distance({-s, s}, legendre.roots) < 1e-14);
        CHECK(legendre.count_in_minus1_1 == 2);

        CHECK_THROWS_AS(zero_report(21, 0.5, 0.5), CapExceeded);
        ZeroOptions big;
        big.degree_cap = 30;
        CHECK(zero_report(21, 0.5, 0.5, big).count_in_minus1_1 == 21);
    }

    TEST_CASE("root regions")
    {
        CHECK(root_region(0.3, 1e-7) == RootRegion::Interval);
        CHECK(root_region(Complex(0.3, 1e-9), 1e-7) == RootRegion::Interval);
        CHECK(root_region(Complex(0.3, 1e-3), 1e-7) == RootRegion::Complex);
        CHECK(root_region(-1.0, 1e-7) == RootRegion::Left);
        CHECK(root_region(4.0, 1e-7) == RootRegion::Right);
        CHECK(region_name(RootRegion::Left) == "left");
    }

    TEST_CASE("classification is exhaustive and consistent")
    {
        std::mt19937_64 rng(2024);
        int counted = 0;
        for (int i = 0; i < 10000; ++i) {
            const int n = 1 + static_cast<int>(rng() % 12);
            const double a = oracle::non_integer(rng, -15.0, 15.0, 1e-6);
            const double b = oracle::non_integer(rng, -15.0, 15.0, 1e-6);
            if (std::abs(a + b - std::round(a + b)) <= 1e-6) {
                continue;
            }
            ++counted;
            const RegimeReport r = classify(n, a, b);
            if (r.tag == RegimeTag::Unclassified) {
                std::ostringstream s;
                s << "unclassified (" << n << ", " << a << ", " << b << ")";
                FAIL(s.str());
            }
            int total = 0;
            for (const ConditionBlock& blk : r.blocks) {
                CHECK(blk.max_vanishing_degree >= -1);
                if (blk.expect_nonzero_at) {
                    CHECK(*blk.expect_nonzero_at == blk.max_vanishing_degree + 1);
                }
                total += blk.condition_count();
            }
            CHECK(total == r.total_conditions);
            if (r.characterizing()) {
                CHECK(r.total_conditions >= n);
            }
            if (r.tag == RegimeTag::MultiLast) {
                CHECK(r.total_conditions == n);
            }
            const bool window = -1.0 < 2 * n + a + b && 2 * n + a + b < 0.0;
            for (const ConditionBlock& blk : r.blocks) {
                if (blk.divergence_note) {
                    CHECK(window);
                }
            }
        }
        CHECK(counted > 9000);
    }

    TEST_CASE("count identities")
    {
        std::mt19937_64 rng(31);
        int multi54i = 0;
        int last = 0;
        for (int i = 0; i < 20000 && (multi54i < 50 || last < 50); ++i) {
            const int n = 2 + static_cast<int>(rng() % 40);
            const double a = oracle::non_integer(rng, -double(n), -1.0);
            const double b = oracle::non_integer(rng, -double(n), -1.0);
            if (std::abs(a + b - std::round(a + b)) < 0.05 || 2 * n + a + b <= 0.0) {
                continue;
            }
            const RegimeReport r = classify(n, a, b);
            if (a + b + n > -1.0) {
                REQUIRE(r.tag == RegimeTag::Multi54i);
                ++multi54i;
                // Vanishing conditions; the interval block may hold none when n = [-a] + [-b].
                int vanishing = 0;
                for (const ConditionBlock& blk : r.blocks) {
                    vanishing += blk.max_vanishing_degree + 1;
                }
                CHECK(find(r, ContourLabel::GammaMinus1)->max_vanishing_degree + 1 == fl(-a));
                CHECK(find(r, ContourLabel::GammaPlus1)->max_vanishing_degree + 1 == fl(-b));
                CHECK(find(r, ContourLabel::Interval)->max_vanishing_degree + 1 == n - fl(-a) - fl(-b));
                CHECK(fl(-a) + fl(-b) + (n - fl(-a) - fl(-b)) == vanishing);
            } else if (a + b + n < -1.0) {
                REQUIRE(r.tag == RegimeTag::MultiLast);
                ++last;
                CHECK(find(r, ContourLabel::GammaMinus1)->max_vanishing_degree + 1 == n - fl(-b));
                CHECK(find(r, ContourLabel::GammaPlus1)->max_vanishing_degree + 1 == n - fl(-a));
                CHECK(find(r, ContourLabel::GammaInf)->max_vanishing_degree + 1 == fl(-a) + fl(-b) - n);
                CHECK(r.total_conditions == n);
            }
        }
        CHECK(multi54i >= 50);
        CHECK(last >= 50);
    }

    TEST_CASE("swap symmetry")
    {
        std::mt19937_64 rng(77);
        for (int i = 0; i < 2000; ++i) {
            const int n = 1 + static_cast<int>(rng() % 12);
            const double a = oracle::non_integer(rng, -15.0, 15.0);
            const double b = oracle::non_integer(rng, -15.0, 15.0);
            if (std::abs(a + b - std::round(a + b)) < 0.05) {
                continue;
            }
            const RegimeReport r = classify(n, a, b);
            const RegimeReport s = classify(n, b, a);
            CAPTURE(n);
            CAPTURE(a);
            CAPTURE(b);
            CHECK(s.tag == mirror(r.tag));
            CHECK(s.total_conditions == r.total_conditions);
            std::vector<BlockKey> lhs;
            std::vector<BlockKey> rhs;
            for (const ConditionBlock& blk : r.blocks) {
                lhs.push_back(key(blk, true));
            }
            for (const ConditionBlock& blk : s.blocks) {
                rhs.push_back(key(blk, false));
            }
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            CHECK(lhs == rhs);
            if (numerics::kappa_sign(n, a, b) != 0) {
                CHECK(hilbert_klein(n, a, b) == hilbert_klein(n, b, a));
            }
        }
    }

    TEST_CASE("zero counts match Hilbert-Klein and bound quasi-orthogonality")
    {
        std::mt19937_64 rng(99);
        int checked = 0;
        for (int i = 0; i < 1500; ++i) {
            const int n = 1 + static_cast<int>(rng() % 20);
            const double a = oracle::non_integer(rng, -30.0, 15.0);
            const double b = oracle::non_integer(rng, -30.0, 15.0);
            if (std::abs(a + b - std::round(a + b)) < 0.05) {
                continue;
            }
            const ZeroReport z = zero_report(n, a, b);
            CAPTURE(n);
            CAPTURE(a);
            CAPTURE(b);
            REQUIRE(z.hilbert_klein_N.has_value());
            CHECK(z.count_in_minus1_1 == *z.hilbert_klein_N);
            CHECK(z.count_in_minus1_1 + z.count_left + z.count_right <= n);
            // Distinct real roots in (-1, 1).
            std::vector<double> real_inside;
            for (const Complex& r : z.roots) {
                if (root_region(r, 1e-7) == RootRegion::Interval) {
                    real_inside.push_back(r.real());
                }
            }
            std::sort(real_inside.begin(), real_inside.end());
            const auto distinct = std::unique(real_inside.begin(), real_inside.end(),
                                              [](double x, double y) { return std::abs(x - y) < 1e-9; }) -
                                  real_inside.begin();
            REQUIRE(z.quasi_lower_bound.has_value());
            CHECK(*z.quasi_lower_bound <= distinct);
            ++checked;
        }
        CHECK(checked > 1000);
    }
}
