#include "nearpoly/nearby.hpp"
#include "nearpoly/reference.hpp"
#include "support/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string>

using namespace nearpoly;
using oracle::rational;

namespace {

const float_spec f32 = float_spec::binary32();

polynomial difficult()
{
    return polynomial{-1e30f, 1e30f, 1e-30f};
}

polynomial random_poly(std::mt19937_64& rng, int degree, int e_lo, int e_hi)
{
    std::vector<float> c(static_cast<std::size_t>(degree + 1));
    for (auto& v : c)
        v = oracle::random_float(rng, e_lo, e_hi);
    return polynomial(std::move(c));
}

/// Plan assembled from a fixed split, bypassing the heuristics.
nearby_plan plan_from_split(const polynomial& p, float x, int x_bits, int h_bits)
{
    const auto easy = build_easy(p, x, f32, x_bits, h_bits);
    nearby_plan plan;
    plan.x_hat = easy.x_hat;
    plan.p_hat = easy.p_hat;
    plan.c = assemble_c<float>(easy.partials, easy.diffs, easy.x_hat);
    plan.m_hat = x_bits + h_bits;
    plan.r = h_bits;
    plan.source_degree = p.degree();
    return plan;
}

/// The fraction bits of |x| as a string, most significant first.
std::string fraction_bits(float x)
{
    const auto bits = std::bit_cast<std::uint32_t>(x) & 0x7fffffu;
    std::string s;
    for (int i = 22; i >= 0; --i)
        s += ((bits >> i) & 1u) != 0 ? '1' : '0';
    return s;
}

/// R by reading bits directly: fraction bit m - R (1-based) is zero means
/// T_{m-R} and T_{m-R-1} agree.
int serendipity_oracle(float x, int m)
{
    const auto s = fraction_bits(x);
    int r = m / 2;
    while (r < m - 1 && s[static_cast<std::size_t>(m - r - 1)] == '0')
        ++r;
    return r;
}

bool horner_is_exact(std::span<const float> p_hat, float x_hat)
{
    const float h = horner<float>(p_hat, x_hat);
    return oracle::to_q(h) == oracle::eval(oracle::to_q(p_hat), oracle::to_q(x_hat));
}

} // namespace

TEST(BuildEasy, PowersOfTwoAreUntouched)
{
    // Every term P_i x^i is a power of two in [1, 2^8], so no partial sum
    // needs more than 11 fraction bits.
    std::mt19937_64 rng(31);
    for (int t = 0; t < 500; ++t) {
        const int k = static_cast<int>(rng() % 5) - 2;
        const float x = std::ldexp((rng() & 1) != 0 ? 1.0f : -1.0f, k);
        std::vector<float> c(1 + rng() % 9);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const int u = static_cast<int>(rng() % 9);
            c[i] = std::ldexp((rng() & 1) != 0 ? 1.0f : -1.0f, u - static_cast<int>(i) * k);
        }
        const polynomial p(c);
        const auto easy = build_easy(p, x, f32, 11, 11);
        EXPECT_EQ(easy.x_hat, x);
        EXPECT_EQ(polynomial(easy.p_hat), p);
    }
}

TEST(BuildEasy, Errors)
{
    const polynomial p{1.0f, 2.0f};
    EXPECT_THROW(build_easy(p, 1.0f, f32, 12, 12), domain_error);
    EXPECT_THROW(build_easy(p, 1.0f, f32, -1, 5), domain_error);
    EXPECT_THROW(build_easy(p, 0.0f, f32, 11, 11), degenerate_point);
    EXPECT_THROW(build_easy(p, std::numeric_limits<float>::infinity(), f32, 11, 11), invalid_input);
    EXPECT_THROW(build_easy(polynomial{0.0f, 0.0f, 0.0f, 1e30f}, 1e10f, f32, 11, 11), overflow_error);
}

TEST(BuildEasy, PartialsAreHornerOfPHatWhenStoredExactly)
{
    std::mt19937_64 rng(32);
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_poly(rng, 8, 0, 0);
        const float x = oracle::random_float(rng, 0, 0);
        const auto easy = build_easy(p, x, f32, 11, 11);
        // P_hat_i = H_i - S_i held exactly iff diffs carry no extra rounding.
        bool stored_exactly = true;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const rational s = oracle::to_q(easy.partials[i + 1]) * oracle::to_q(easy.x_hat);
            stored_exactly = stored_exactly && oracle::to_q(easy.p_hat[i]) == oracle::to_q(easy.partials[i]) - s;
        }
        if (!stored_exactly)
            continue;
        const auto h = horner_partials<float>(easy.p_hat, easy.x_hat);
        ASSERT_EQ(h, easy.partials);
        ASSERT_TRUE(horner_is_exact(easy.p_hat, easy.x_hat));
    }
}

TEST(BuildEasy, StepDeviationBound)
{
    std::mt19937_64 rng(33);
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_poly(rng, 8, -8, 8);
        const float x = oracle::random_float(rng, -1, 1);
        const int h_bits = 11;
        const auto easy = build_easy(p, x, f32, 11, h_bits);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const float s = easy.partials[i + 1] * easy.x_hat;
            rational bound = oracle::to_q(std::ldexp(1.0, exponent(p[i]) - h_bits));
            if (s != 0.0f)
                bound += oracle::to_q(std::ldexp(1.0, exponent(s) - h_bits));
            // Storing P_hat_i costs at most half an ulp on top.
            if (easy.p_hat[i] != 0.0f)
                bound += oracle::to_q(std::ldexp(1.0, exponent(easy.p_hat[i]) - 25));
            const auto dev = boost::multiprecision::abs(oracle::to_q(easy.p_hat[i]) - oracle::to_q(p[i]));
            ASSERT_LT(dev, bound) << "trial " << t << " step " << i;
        }
    }
}

TEST(BuildEasy, ExactEvaluationOnRandomPolynomials)
{
    // n = 8, coefficients +-(0.5, 1) 2^e with e in [-8, 8]. A fixed 11/11
    // split cannot absorb exponent gaps of that size, so the split comes from
    // the plan heuristics, and exactness is required wherever the condition
    // table approves the plan.
    std::mt19937_64 rng(34);
    int exact = 0, approved = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_poly(rng, 8, -8, 8);
        const float x = oracle::random_float(rng, 0, 0);
        const auto plan = build_plan(p, x);
        const bool ok = horner_is_exact(plan.p_hat, plan.x_hat);
        exact += ok ? 1 : 0;
        if (check_conditions(plan, p).all_ok()) {
            ++approved;
            ASSERT_TRUE(ok) << "trial " << t;
        }
    }
    EXPECT_GT(approved, 50);
    EXPECT_GE(exact, 950);
    std::cout << "exact " << exact << "/1000, approved " << approved << "/1000\n";
}

TEST(ComputeDelta, Examples)
{
    const polynomial lin{-1.0f, 1.0f};
    const auto h = horner_partials<float>(lin.coeffs(), 1.0f);
    const auto d = compute_delta<float>(lin.coeffs(), 1.0f, h);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0], -1);

    const auto q = difficult();
    const auto hq = horner_partials<float>(q.coeffs(), 1.0f);
    const auto dq = compute_delta<float>(q.coeffs(), 1.0f, hq);
    ASSERT_EQ(dq.size(), 2u);
    EXPECT_EQ(dq[1], exponent(1e30f) - exponent(1e-30f) - 1);
    EXPECT_GT(*std::max_element(dq.begin(), dq.end()), 190);

    const polynomial c{5.0f};
    EXPECT_TRUE(compute_delta<float>(c.coeffs(), 1.0f, horner_partials<float>(c.coeffs(), 1.0f)).empty());
}

TEST(ComputeDelta, ZeroOperandsGiveZero)
{
    const polynomial p{0.0f, 3.0f, 0.0f, 1.0f};
    const auto h = horner_partials<float>(p.coeffs(), 2.0f);
    const auto d = compute_delta<float>(p.coeffs(), 2.0f, h);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0], 0); // P_0 = 0
    EXPECT_EQ(d[2], 0); // P_2 = 0
    EXPECT_EQ(d[1], exponent(3.0f) - exponent(h[2]) - exponent(2.0f));
}

TEST(ReducedBits, Examples)
{
    // E(2) = E(1) + E(1): every gap is zero.
    EXPECT_EQ(reduced_bits(polynomial{2.0f, 1.0f}, 1.0f), f32.mantissa_bits - 1);
    EXPECT_EQ(reduced_bits(difficult(), 1.0f), 8);
    EXPECT_EQ(reduced_bits(difficult(), 1.0001f), 8);
    EXPECT_THROW(reduced_bits(polynomial{1.0f, 1.0f}, 0.0f), degenerate_point);
}

TEST(ReducedBits, AlwaysWithinClamp)
{
    std::mt19937_64 rng(35);
    for (int t = 0; t < 20000; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 12), -10, 10);
        const float x = oracle::random_float(rng, -3, 3);
        for (auto mode : {delta_mode::signed_max, delta_mode::abs_max}) {
            const int m = reduced_bits(p, x, f32, mode);
            ASSERT_GE(m, f32.budget_floor());
            ASSERT_LE(m, f32.mantissa_bits);
        }
        ASSERT_GE(reduced_bits(p, x, f32, delta_mode::signed_max), reduced_bits(p, x, f32, delta_mode::abs_max));
    }
}

TEST(Serendipity, Examples)
{
    for (int m = f32.budget_floor(); m <= f32.mantissa_bits; ++m)
        EXPECT_EQ(serendipity_shift(1.0f, m), m - 1) << m;
    const float all_ones = 2.0f - 0x1p-23f;
    for (int m = f32.budget_floor(); m <= f32.mantissa_bits; ++m)
        EXPECT_EQ(serendipity_shift(all_ones, m), m / 2) << m;
    EXPECT_EQ(serendipity_shift(1.5f, 23), 22);
    EXPECT_EQ(serendipity_oracle(1.5f, 23), 22);
    EXPECT_THROW(serendipity_shift(1.0f, 7), domain_error);
    EXPECT_THROW(serendipity_shift(1.0f, 24), domain_error);
    EXPECT_THROW(serendipity_shift(0.0f, 20), degenerate_point);
}

TEST(Serendipity, MatchesBitOracle)
{
    std::mt19937_64 rng(36);
    for (int t = 0; t < 100000; ++t) {
        const float x = oracle::random_bits(rng, static_cast<int>(rng() % 24), -30, 30);
        const int m = f32.budget_floor() + static_cast<int>(rng() % 16);
        ASSERT_EQ(serendipity_shift(x, m), serendipity_oracle(x, m)) << std::hexfloat << x << " m=" << m;
    }
}

TEST(ComputeC, LastEqualsLeadingCoefficient)
{
    std::mt19937_64 rng(37);
    for (int t = 0; t < 500; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 10), -6, 6);
        const auto plan = build_plan(p, oracle::random_float(rng, -2, 2));
        ASSERT_EQ(plan.c_at(p.degree() - 1), p[static_cast<std::size_t>(p.degree())]);
        const auto c = compute_c<float>(p.coeffs(), plan.p_hat, plan.x_hat);
        ASSERT_EQ(c.back(), p[static_cast<std::size_t>(p.degree())]);
    }
}

TEST(ComputeC, RationalRecurrenceMatchesDoubleSum)
{
    std::mt19937_64 rng(38);
    for (int t = 0; t < 500; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 8), -6, 6);
        const float x = oracle::random_float(rng, -2, 2);
        const auto plan = build_plan(p, x);
        const auto pq = oracle::to_q(p.coeffs());
        const auto ph = oracle::to_q(plan.p_hat);
        const auto c = compute_c<rational>(pq, ph, oracle::to_q(plan.x_hat));
        ASSERT_EQ(c, oracle::c_by_double_sum(pq, oracle::to_q(plan.x_hat)));
    }
}

TEST(ComputeC, FloatRecurrenceRoundsOnceOnSmallInstances)
{
    std::mt19937_64 rng(39);
    for (int t = 0; t < 500; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        std::vector<float> c(static_cast<std::size_t>(n + 1));
        for (auto& v : c)
            v = oracle::random_bits(rng, 3, -1, 1);
        const polynomial p(c);
        const float x = oracle::random_bits(rng, 3, 0, 0);
        const auto plan = build_plan(p, x);
        const auto pq = oracle::to_q(p.coeffs());
        const auto got = compute_c<float>(p.coeffs(), plan.p_hat, plan.x_hat);
        const auto want = oracle::c_by_double_sum(pq, oracle::to_q(plan.x_hat));
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t k = 0; k < got.size(); ++k)
            ASSERT_EQ(got[k], oracle::to_float(want[k])) << "trial " << t << " C_" << static_cast<int>(k) - 1;
    }
}

TEST(ComputeC, HeadAloneIsHornerOfPHat)
{
    std::mt19937_64 rng(40);
    for (int t = 0; t < 500; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 10), -6, 6);
        const auto plan = build_plan(p, oracle::random_float(rng, -2, 2));
        const auto head = compute_c<float>(plan.p_hat, plan.p_hat, plan.x_hat);
        ASSERT_EQ(head.front(), horner<float>(plan.p_hat, plan.x_hat));
        auto partials = horner_partials<float>(plan.p_hat, plan.x_hat);
        partials.pop_back();
        ASSERT_EQ(head, partials);
    }
}

TEST(ComputeC, Errors)
{
    const std::vector<float> p{1.0f, 2.0f}, q{1.0f};
    EXPECT_THROW(compute_c<float>(p, q, 1.0f), domain_error);
}

TEST(CheckConditions, Examples)
{
    // Every gap zero: the symmetric split passes everywhere.
    const polynomial easy{2.0f, 1.0f};
    const auto plan = plan_from_split(easy, 1.0f, 11, 11);
    EXPECT_TRUE(check_conditions(plan, easy).all_ok());

    const auto hard = difficult();
    for (int xb = 0; xb <= 11; ++xb)
        for (int hb : {4, 8, 11, 16, 20}) {
            if (xb + hb > f32.mantissa_bits)
                continue;
            EXPECT_FALSE(check_conditions(plan_from_split(hard, 1.0f, xb, hb), hard).all_ok());
        }
    EXPECT_FALSE(check_conditions(build_plan(hard, 1.0f), hard).all_ok());

    const polynomial unit{1.0f, 1.0f};
    const auto r = check_conditions(build_plan(unit, 0.75f), unit);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_TRUE(r.records[0].ok());
    EXPECT_EQ(r.records[0].step, 0);
}

TEST(CheckConditions, OneRecordPerStep)
{
    std::mt19937_64 rng(41);
    for (int t = 0; t < 200; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 12), -10, 10);
        const auto plan = build_plan(p, oracle::random_float(rng, -3, 3));
        const auto r = check_conditions(plan, p);
        ASSERT_EQ(static_cast<int>(r.records.size()), p.degree());
        for (std::size_t k = 0; k < r.records.size(); ++k)
            ASSERT_EQ(r.records[k].step, p.degree() - 1 - static_cast<int>(k));
    }
    EXPECT_THROW(check_conditions(build_plan(polynomial{1.0f, 1.0f}, 1.0f), polynomial{1.0f, 1.0f, 1.0f}),
                 domain_error);
}

TEST(CheckConditions, ApprovedPlansEvaluateExactly)
{
    std::mt19937_64 rng(42);
    int approved = 0;
    for (int t = 0; t < 20000; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 10), -12, 12);
        const float x = oracle::random_float(rng, -3, 3);
        const auto plan = build_plan(p, x);
        if (!check_conditions(plan, p).all_ok())
            continue;
        ++approved;
        ASSERT_TRUE(horner_is_exact(plan.p_hat, plan.x_hat)) << "trial " << t;
    }
    EXPECT_GT(approved, 1000);
}

TEST(BuildPlan, Invariants)
{
    std::mt19937_64 rng(43);
    for (int t = 0; t < 1000000; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 8), -20, 20);
        const float x = oracle::random_float(rng, -8, 8);
        const auto plan = build_plan(p, x);
        ASSERT_LE(bit_count(plan.x_hat) + plan.r, f32.mantissa_bits);
        ASSERT_EQ(plan.x_hat, truncate(x, plan.m_hat - plan.r));
        ASSERT_EQ(plan.c.size(), p.size());
        ASSERT_EQ(plan.p_hat.size(), p.size());
        ASSERT_EQ(plan.c.back(), p.coeffs().back());
        ASSERT_EQ(plan.source_degree, p.degree());
        ASSERT_GE(plan.m_hat, f32.budget_floor());
        ASSERT_LE(plan.m_hat, f32.mantissa_bits);
        const double gap = std::fabs(static_cast<double>(x) - plan.x_hat);
        ASSERT_LT(gap, std::ldexp(1.0, exponent(x) - 1 - (plan.m_hat - plan.r)));
    }
}

TEST(BuildPlan, EasyPolynomialsStayClose)
{
    // Similar-magnitude coefficients at x near 1: P_hat moves by a few units
    // of the h_bits budget.
    std::mt19937_64 rng(44);
    for (int t = 0; t < 2000; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 8), 0, 0);
        const float x = oracle::random_float(rng, 0, 0);
        const auto plan = build_plan(p, x);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double rel = std::fabs(static_cast<double>(plan.p_hat[i]) - p[i]) / std::fabs(p[i]);
            ASSERT_LE(rel, 8.0 * (1 << p.degree()) * std::ldexp(1.0, -plan.r)) << t << ' ' << i;
        }
    }
}

TEST(BuildPlan, Deterministic)
{
    std::mt19937_64 rng(45);
    for (int t = 0; t < 500; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 12), -20, 20);
        const float x = oracle::random_float(rng, -8, 8);
        const auto a = build_plan(p, x);
        const auto b = build_plan(p, x);
        ASSERT_EQ(a, b);
        ASSERT_EQ(0, std::memcmp(a.c.data(), b.c.data(), a.c.size() * sizeof(float)));
    }
}

TEST(BuildPlan, CountedScalarMatchesFloat)
{
    std::mt19937_64 rng(46);
    for (int t = 0; t < 200; ++t) {
        const auto p = random_poly(rng, 1 + static_cast<int>(rng() % 12), -20, 20);
        const float x = oracle::random_float(rng, -8, 8);
        const auto plan = build_plan(p, x);
        std::vector<counted<float>> pc(p.coeffs().begin(), p.coeffs().end());
        const auto cp = build_plan<counted<float>>(pc, counted<float>(x));
        ASSERT_EQ(cp.x_hat.value(), plan.x_hat);
        for (std::size_t k = 0; k < plan.c.size(); ++k)
            ASSERT_EQ(cp.c[k].value(), plan.c[k]);
    }
}

TEST(BuildPlan, Errors)
{
    EXPECT_THROW(build_plan(polynomial{3.0f}, 1.0f), domain_error);
    EXPECT_THROW(build_plan(polynomial{1.0f, 1.0f}, 0.0f), degenerate_point);
    EXPECT_THROW(build_plan(polynomial{1.0f, 1.0f}, std::numeric_limits<float>::quiet_NaN()), invalid_input);
    EXPECT_THROW(build_plan(polynomial{0.0f, 0.0f, 0.0f, 1e30f}, 1e10f), overflow_error);
}

TEST(BuildPlan, DiagnosticOptions)
{
    const polynomial p{-0.3f, 1.7f, -2.2f, 1.0f};
    plan_options fixed;
    fixed.reduce_budget = false;
    EXPECT_EQ(build_plan(p, 1.1f, f32, fixed).m_hat, f32.mantissa_bits - 1);
    plan_options literal;
    literal.serendipity = serendipity_mode::full_width;
    const auto plan = build_plan(p, 1.1f, f32, literal);
    EXPECT_LE(bit_count(plan.x_hat) + plan.r, f32.mantissa_bits);
}
