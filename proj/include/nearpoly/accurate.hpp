#ifndef NEARPOLY_ACCURATE_HPP
#define NEARPOLY_ACCURATE_HPP

#include "nearpoly/error.hpp"
#include "nearpoly/fpbits.hpp"
#include "nearpoly/nearby.hpp"
#include "nearpoly/polynomial.hpp"
#include "nearpoly/reference.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace nearpoly {

/// P(x) = C_{-1} + (x - x_hat) * sum_{j=0}^{n-1} C_j x^j.
///
/// The sum is a plain Horner loop, so the cost is n+1 multiplications and
/// n+2 additions: one Horner pass.
template<typename T>
T eval_plan(const basic_plan<T>& plan, const T& x)
{
    if (!is_finite(x))
        throw invalid_input("eval_plan: non-finite evaluation point");
    const std::size_t n = plan.c.size() - 1;
    T sum(0);
    for (std::size_t k = n + 1; k-- > 1;) {
        sum = sum * x + plan.c[k];
        if (!is_finite(sum))
            throw overflow_error("eval_plan", k - 1);
    }
    const T result = plan.c[0] + (x - plan.x_hat) * sum;
    if (!is_finite(result))
        throw overflow_error("eval_plan", 0);
    return result;
}

/// Coefficients S_0..S_{n-1} of the deflated polynomial, P(x) = P(r) + (x - r) S(x),
/// written in terms of the plan's C:
///
///     S_{n-1} = C_{n-1}
///     S_j     = C_j + (r - x_hat) * A_j,   A_j = A_{j+1} r + C_{j+1},  A_{n-1} = 0
template<typename T>
std::vector<T> deflate_coeffs(const basic_plan<T>& plan, const T& r)
{
    if (!is_finite(r))
        throw invalid_input("deflate: non-finite root");
    if (plan.c.size() < 2)
        throw domain_error("deflate: plan degree must be >= 1");
    const std::size_t n = plan.c.size() - 1;
    std::vector<T> s(n, T(0));
    const T shift = r - plan.x_hat;
    T acc(0);
    s[n - 1] = plan.c_at(static_cast<int>(n) - 1);
    for (std::size_t j = n - 1; j-- > 0;) {
        acc = acc * r + plan.c_at(static_cast<int>(j) + 1);
        s[j] = plan.c_at(static_cast<int>(j)) + shift * acc;
        if (!is_finite(acc) || !is_finite(s[j]))
            throw overflow_error("deflate", j);
    }
    return s;
}

inline float eval_plan(const nearby_plan& plan, float x)
{
    return eval_plan<float>(plan, x);
}

inline polynomial deflate(const nearby_plan& plan, float r)
{
    return polynomial(deflate_coeffs<float>(plan, r));
}

struct root_result
{
    float root = 0.0f;
    extended residual = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Set when the final iterate drifted far enough from x_hat that the plan
    /// no longer describes a nearby point well.
    bool plan_strained = false;
};

struct polish_options
{
    int max_iterations = 64;
    /// Evaluate with Horner's method instead of the plan (comparison runs).
    bool use_horner = false;
};

namespace detail {

inline bool plan_is_strained(const nearby_plan& plan, float x)
{
    if (plan.x_hat == 0.0f)
        return false;
    const int width = (plan.m_hat - plan.r) / 2;
    const double limit = std::ldexp(1.0, exponent(plan.x_hat) - width);
    return std::fabs(static_cast<double>(x) - static_cast<double>(plan.x_hat)) >= limit;
}

} // namespace detail

/// Newton iteration x <- x - P(x)/P'(x) with P evaluated through one plan
/// built at x0 and reused for every iterate; P' is plain Horner.
///
/// Stops when |step| <= 4 eps |x|, when |P(x)| stops decreasing, or after
/// max_iterations. In the second case the best iterate is kept and counted as
/// converged if its residual is within e_max. Throws stalled on a zero
/// derivative.
inline std::pair<root_result, nearby_plan> polish_root(const polynomial& p, float x0,
                                                       const float_spec& spec = float_spec::binary32(),
                                                       const polish_options& options = {})
{
    if (!std::isfinite(x0))
        throw invalid_input("polish_root: non-finite initial guess");
    auto plan = build_plan(p, x0, spec);
    const polynomial dp = derivative(p);
    auto value_at = [&](float x) { return options.use_horner ? horner_eval(p, x) : eval_plan(plan, x); };

    float x = x0;
    float fx = value_at(x);
    root_result out;
    bool converged = false;
    int it = 0;
    while (it < options.max_iterations && fx != 0.0f) {
        const float slope = horner_eval(dp, x);
        if (slope == 0.0f)
            throw stalled("polish_root: zero derivative", x);
        const float step = fx / slope;
        const float next = x - step;
        if (!std::isfinite(next))
            throw overflow_error("polish_root", static_cast<std::size_t>(it));
        ++it;
        if (std::fabs(step) <= 4.0f * spec.eps * std::fabs(x)) {
            x = next;
            fx = value_at(x);
            converged = true;
            break;
        }
        const float fnext = value_at(next);
        if (std::fabs(fnext) >= std::fabs(fx)) {
            converged = std::fabs(static_cast<double>(fx)) <= e_max(p, x, spec);
            break;
        }
        x = next;
        fx = fnext;
    }
    if (fx == 0.0f)
        converged = true;

    out.root = x;
    out.iterations = it;
    out.converged = converged;
    out.residual = reference_eval(p, x);
    out.plan_strained = !options.use_horner && detail::plan_is_strained(plan, x);
    return {out, std::move(plan)};
}

/// Refines one root per guess. Each guess is polished against the current
/// deflated polynomial, which is then deflated through that root's plan; the
/// root is finally re-polished against the original P. Residuals refer to P.
inline std::vector<root_result> polish_all(const polynomial& p, std::span<const float> guesses,
                                           const float_spec& spec = float_spec::binary32(),
                                           const polish_options& options = {})
{
    std::vector<root_result> results;
    results.reserve(guesses.size());
    polynomial current = p;
    for (float guess : guesses) {
        if (current.degree() < 1)
            break;
        auto [deflated_root, plan] = polish_root(current, guess, spec, options);
        if (options.use_horner) {
            // Synthetic division by (x - r), the classical Horner deflation.
            const auto cs = current.coeffs();
            std::vector<float> s(cs.size() - 1);
            float acc = 0.0f;
            for (std::size_t k = cs.size() - 1; k-- > 0;) {
                acc = acc * deflated_root.root + cs[k + 1];
                s[k] = acc;
            }
            current = polynomial(std::move(s));
        } else {
            current = deflate(plan, deflated_root.root);
        }
        auto refined = polish_root(p, deflated_root.root, spec, options).first;
        refined.iterations += deflated_root.iterations;
        results.push_back(refined);
    }
    return results;
}

} // namespace nearpoly

#endif // NEARPOLY_ACCURATE_HPP
