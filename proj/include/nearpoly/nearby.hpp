#ifndef NEARPOLY_NEARBY_HPP
#define NEARPOLY_NEARBY_HPP

#include "nearpoly/arith.hpp"
#include "nearpoly/error.hpp"
#include "nearpoly/fpbits.hpp"
#include "nearpoly/polynomial.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Nearby-polynomial construction.
//
// Given P and an evaluation point x, pick x_hat close to x and P_hat close to
// P such that Horner's method evaluates P_hat at x_hat with no rounding at all:
// x_hat and every Horner partial sum are truncated so that each product fits
// the significand, and P_hat_i absorbs whatever the truncation of each sum
// discarded. Writing
//
//     C_j = sum_{i=0}^{n-1-j} P_{j+1+i} x_hat^i,    C_{-1} = P(x_hat),
//
// gives the exact identity P(x) = C_{-1} + (x - x_hat) * sum_j C_j x^j. Each
// C_j is the exact partial sum of P_hat (the "head") plus a Horner pass over
// the small differences P - P_hat (the "tail"), so it is accurate to a few
// ulps of the tail rather than of the full partial sum.

namespace nearpoly {

/// Precomputed bundle for accurate evaluation near x_hat.
///
/// c is offset by one: c[k] holds C_{k-1}, so c[0] = C_{-1} = P(x_hat) and
/// c[n] = C_{n-1} = P_n.
template<typename T>
struct basic_plan
{
    T x_hat{};
    std::vector<T> p_hat;
    std::vector<T> c;
    int m_hat = 0;
    int r = 0;
    int source_degree = 0;

    const T& c_at(int j) const { return c[static_cast<std::size_t>(j + 1)]; }

    friend bool operator==(const basic_plan&, const basic_plan&) = default;
};

using nearby_plan = basic_plan<float>;

/// One addition step of the construction checked against the exactness table.
struct condition_record
{
    int step = 0;
    int delta = 0;
    bool input_ok = true;
    bool output_ok = true;

    bool ok() const noexcept { return input_ok && output_ok; }
    friend bool operator==(const condition_record&, const condition_record&) = default;
};

struct condition_report
{
    std::vector<condition_record> records;

    bool all_ok() const noexcept
    {
        return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.ok(); });
    }
    friend bool operator==(const condition_report&, const condition_report&) = default;
};

/// How the reduced-bits heuristic aggregates the per-step exponent gaps.
enum class delta_mode {
    signed_max, // max_n delta_n (default)
    abs_max,    // max_n |delta_n|, diagnostic only
};

/// Which width the serendipity loop truncates x to.
enum class serendipity_mode {
    budget_relative, // T_{m_hat - R}(x) (default)
    full_width,      // T_{M - R}(x), diagnostic only
};

struct plan_options
{
    delta_mode delta = delta_mode::signed_max;
    serendipity_mode serendipity = serendipity_mode::budget_relative;
    /// Skip the reduced-bits pass and use the full budget M - 1. Diagnostic.
    bool reduce_budget = true;
};

template<typename T>
struct easy_result
{
    std::vector<T> p_hat;
    T x_hat{};
    /// partials[i] = H after coefficient i was folded in; partials[n+1] = 0.
    std::vector<T> partials;
    /// P_i - (H_i - S_i) carried exactly up to one final rounding, even when
    /// the stored P_hat_i had to be rounded.
    std::vector<T> diffs;
};

/// Knuth's TwoSum in T: a + b = first + second exactly for binary floats.
template<typename T>
std::pair<T, T> two_sum(const T& a, const T& b)
{
    const T s = a + b;
    const T bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

namespace detail {

template<typename T>
void check_finite(const T& v, const char* where, std::size_t step)
{
    if (!is_finite(v))
        throw overflow_error(where, step);
}

} // namespace detail

/// Nearby polynomial for an "easy" P: x_hat = T_{x_bits}(x), then for
/// i = n..0
///
///     S = H * x_hat          (exact: H and x_hat are both truncated)
///     H = T_{h_bits}(S + P_i)
///     P_hat_i = H - S
///
/// The returned partials are the Horner partial sums of P_hat at x_hat.
/// x_bits = h_bits = floor(M/2) is the symmetric split.
template<typename T>
easy_result<T> build_easy(std::span<const T> p, const T& x, const float_spec& spec, int x_bits, int h_bits)
{
    if (x_bits < 0 || h_bits < 0 || x_bits + h_bits > spec.mantissa_bits)
        throw domain_error("build_easy: bit split " + std::to_string(x_bits) + "+" + std::to_string(h_bits)
                           + " exceeds the mantissa budget");
    if (!is_finite(x))
        throw invalid_input("build_easy: non-finite evaluation point");
    if (strip(x) == 0.0f)
        throw degenerate_point("build_easy: x = 0, evaluate P_0 directly");

    const std::size_t n1 = p.size();
    easy_result<T> out;
    out.x_hat = T(truncate(strip(x), x_bits));
    out.p_hat.assign(n1, T(0));
    out.partials.assign(n1 + 1, T(0));

    out.diffs.assign(n1, T(0));

    T h(0);
    for (std::size_t i = n1; i-- > 0;) {
        const T s = h * out.x_hat;
        detail::check_finite(s, "build_easy", i);
        const auto [sum, sum_err] = two_sum(s, p[i]);
        detail::check_finite(sum, "build_easy", i);
        h = T(truncate(strip(sum), h_bits));
        out.p_hat[i] = h - s;
        // sum - h is the truncated-off part of sum: exact.
        out.diffs[i] = (sum - h) + sum_err;
        out.partials[i] = h;
    }
    return out;
}

inline easy_result<float> build_easy(const polynomial& p, float x, const float_spec& spec, int x_bits, int h_bits)
{
    return build_easy<float>(p.coeffs(), x, spec, x_bits, h_bits);
}

/// Exponent gap of each addition step,
///
///     delta_i = E(P_i) - E(H_{i+1}) - E(x_hat),
///
/// for steps i = 0..n-1 (the top step adds P_n to zero and has no gap).
/// partials must follow the horner_partials layout. A zero operand gives 0.
template<typename T>
std::vector<int> compute_delta(std::span<const T> p, const T& x_hat, std::span<const T> partials)
{
    if (p.size() <= 1)
        return {};
    const std::size_t n = p.size() - 1;
    if (partials.size() < n + 1)
        throw domain_error("compute_delta: partial sums do not cover every step");
    std::vector<int> delta(n, 0);
    const float xh = strip(x_hat);
    for (std::size_t i = 0; i < n; ++i) {
        const float coeff = strip(p[i]);
        const float incoming = strip(partials[i + 1]);
        if (coeff == 0.0f || incoming == 0.0f || xh == 0.0f)
            continue;
        delta[i] = exponent(coeff) - exponent(incoming) - exponent(xh);
    }
    return delta;
}

/// Reduced mantissa budget M_hat for a possibly difficult polynomial.
///
/// Runs one binary32 Horner pass at T_{M/2}(x), takes the largest exponent
/// gap, and returns max(M - 1 - gap, ceil((M+1)/3)), never above M - 1 so that
/// any x_bits + h_bits split of the budget keeps products exact.
template<typename T>
int reduced_bits(std::span<const T> p, const T& x, const float_spec& spec, delta_mode mode = delta_mode::signed_max)
{
    if (!is_finite(x))
        throw invalid_input("reduced_bits: non-finite evaluation point");
    if (strip(x) == 0.0f)
        throw degenerate_point("reduced_bits: x = 0");
    const T x_hat(truncate(strip(x), spec.mantissa_bits / 2));
    const auto partials = horner_partials<T>(p, x_hat);
    const auto delta = compute_delta<T>(p, x_hat, partials);

    int gap = 0;
    if (!delta.empty()) {
        if (mode == delta_mode::signed_max) {
            gap = *std::max_element(delta.begin(), delta.end());
        } else {
            gap = 0;
            for (int d : delta)
                gap = std::max(gap, d < 0 ? -d : d);
        }
    }
    const int floor_bits = spec.budget_floor();
    const int ceiling = spec.mantissa_bits - 1;
    // Widen before subtracting; gaps from extreme exponents reach a few hundred.
    const long candidate = static_cast<long>(spec.mantissa_bits) - 1 - gap;
    return static_cast<int>(std::clamp<long>(candidate, floor_bits, ceiling));
}

inline int reduced_bits(const polynomial& p, float x, const float_spec& spec = float_spec::binary32(),
                        delta_mode mode = delta_mode::signed_max)
{
    return reduced_bits<float>(p.coeffs(), x, spec, mode);
}

/// Number of bits R given to the partial sums. Starts at floor(m_hat/2) and
/// takes one more bit from x for every trailing zero of x at the truncation
/// boundary, which costs x_hat nothing.
inline int serendipity_shift(float x, int m_hat, const float_spec& spec = float_spec::binary32(),
                             serendipity_mode mode = serendipity_mode::budget_relative)
{
    detail::require_finite(x, "serendipity_shift");
    if (x == 0.0f)
        throw degenerate_point("serendipity_shift: x = 0");
    if (m_hat < spec.budget_floor() || m_hat > spec.mantissa_bits)
        throw domain_error("serendipity_shift: m_hat " + std::to_string(m_hat) + " outside the budget range");

    const int width = mode == serendipity_mode::budget_relative ? m_hat : spec.mantissa_bits;
    int r = m_hat / 2;
    while (r < width - 1 && truncate(x, width - r) == truncate(x, width - r - 1))
        ++r;
    return r;
}

/// C_{-1}..C_{n-1} from the head partial sums (Horner partials of P_hat at
/// x_hat, layout of horner_partials) and the per-coefficient differences
/// diffs[i] = P_i - P_hat_i:
///
///     tail_{n-1} = diffs[n],   tail_{j-1} = tail_j x_hat + diffs[j],
///     C_j = head_j + tail_j    (one rounding)
template<typename T>
std::vector<T> assemble_c(std::span<const T> head, std::span<const T> diffs, const T& x_hat)
{
    if (diffs.empty())
        throw domain_error("compute_c: empty polynomial");
    if (head.size() < diffs.size())
        throw domain_error("compute_c: head partial sums too short");
    const std::size_t n = diffs.size() - 1;
    std::vector<T> c(n + 1, T(0));

    // c[k] = C_{k-1}; its head is the partial sum H_k.
    T tail = diffs[n];
    c[n] = head[n] + tail;
    detail::check_finite(c[n], "compute_c", n);
    for (std::size_t k = n; k-- > 0;) {
        tail = tail * x_hat + diffs[k];
        detail::check_finite(tail, "compute_c", k);
        c[k] = head[k] + tail;
        detail::check_finite(c[k], "compute_c", k);
    }
    return c;
}

/// C_{-1}..C_{n-1} for P around x_hat, split into the exact head
/// head_{j-1} = head_j x_hat + P_hat_j and the tail over P - P_hat.
template<typename T>
std::vector<T> compute_c(std::span<const T> p, std::span<const T> p_hat, const T& x_hat)
{
    if (p_hat.size() != p.size())
        throw domain_error("compute_c: P_hat and P differ in length");
    const auto head = horner_partials<T>(p_hat, x_hat);
    std::vector<T> diffs(p.size(), T(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        diffs[i] = p[i] - p_hat[i];
        detail::check_finite(diffs[i], "compute_c", i);
    }
    return assemble_c<T>(head, diffs, x_hat);
}

/// Full plan: reduced budget, serendipitous split, nearby polynomial and C.
///
/// The head of C reuses the partial sums of the construction pass, and the
/// tail runs over the exactly carried differences, so a P_hat_i that had to be
/// rounded when stored does not leak into C.
template<typename T>
basic_plan<T> build_plan(std::span<const T> p, const T& x, const float_spec& spec = float_spec::binary32(),
                         const plan_options& options = {})
{
    if (p.size() < 2)
        throw domain_error("build_plan: polynomial must have degree >= 1");
    if (!is_finite(x))
        throw invalid_input("build_plan: non-finite evaluation point");
    if (strip(x) == 0.0f)
        throw degenerate_point("build_plan: x = 0, evaluate P_0 directly");

    basic_plan<T> plan;
    plan.source_degree = static_cast<int>(p.size()) - 1;
    plan.m_hat = options.reduce_budget ? reduced_bits<T>(p, x, spec, options.delta) : spec.mantissa_bits - 1;
    plan.r = serendipity_shift(strip(x), plan.m_hat, spec, options.serendipity);
    const int x_bits = (options.serendipity == serendipity_mode::budget_relative ? plan.m_hat : spec.mantissa_bits)
                       - plan.r;

    auto easy = build_easy<T>(p, x, spec, x_bits, plan.r);
    plan.c = assemble_c<T>(easy.partials, easy.diffs, easy.x_hat);
    plan.x_hat = easy.x_hat;
    plan.p_hat = std::move(easy.p_hat);
    return plan;
}

inline nearby_plan build_plan(const polynomial& p, float x, const float_spec& spec = float_spec::binary32(),
                              const plan_options& options = {})
{
    return build_plan<float>(p.coeffs(), x, spec, options);
}

/// Checks every addition step of the plan against the exactness table:
///
///                     delta > 0                              delta < 0
///     input        B(H_{i+1}) <= M - 1 - B(x_hat) - delta    B(H_{i+1}) <= M - 1 - B(x_hat)
///     output       B(H_i) >= delta                           B(H_i) >= -delta
///
/// H are the binary32 Horner partials of P_hat at x_hat; delta is measured
/// against the original coefficients. Steps with delta = 0 pass. The input
/// bound is one bit below M: a product of factors with a and b fraction bits
/// can carry into a + b + 1 bits.
inline condition_report check_conditions(const nearby_plan& plan, const polynomial& p,
                                         const float_spec& spec = float_spec::binary32())
{
    if (static_cast<int>(plan.p_hat.size()) != p.degree() + 1)
        throw domain_error("check_conditions: plan was built for a different polynomial");
    const auto partials = horner_partials<float>(plan.p_hat, plan.x_hat);
    const auto delta = compute_delta<float>(p.coeffs(), plan.x_hat, partials);
    const int bx = bit_count(plan.x_hat);
    const int m = spec.mantissa_bits - 1;

    condition_report report;
    for (std::size_t k = delta.size(); k-- > 0;) {
        condition_record rec;
        rec.step = static_cast<int>(k);
        rec.delta = delta[k];
        const int b_in = bit_count(partials[k + 1]);
        const int b_out = bit_count(partials[k]);
        if (rec.delta > 0) {
            rec.input_ok = b_in <= m - bx - rec.delta;
            rec.output_ok = b_out >= rec.delta;
        } else if (rec.delta < 0) {
            rec.input_ok = b_in <= m - bx;
            rec.output_ok = b_out >= -rec.delta;
        }
        report.records.push_back(rec);
    }
    return report;
}

} // namespace nearpoly

#endif // NEARPOLY_NEARBY_HPP
