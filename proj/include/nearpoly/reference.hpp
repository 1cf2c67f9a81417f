#ifndef NEARPOLY_REFERENCE_HPP
#define NEARPOLY_REFERENCE_HPP

#include "nearpoly/error.hpp"
#include "nearpoly/fpbits.hpp"
#include "nearpoly/polynomial.hpp"

#include <cmath>
#include <span>
#include <vector>

// Extended-precision side of the library: the ground-truth evaluator used to
// measure working-precision errors and the worst-case error normalizer.
//
// binary64 has 53 significand bits, which covers the 2M+6 = 52 bits needed for
// binary32 work. Evaluation is compensated Horner (error-free transformations)
// on top of binary64, so the result behaves as if computed with roughly twice
// that precision and then rounded once.

namespace nearpoly {

/// binary64 is the extended format.
using extended = double;

namespace eft {

struct pair
{
    double value;
    double error;
};

/// Knuth's branch-free TwoSum: a + b = value + error exactly.
inline pair two_sum(double a, double b) noexcept
{
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

/// a * b = value + error exactly (barring underflow), via fused multiply-add.
inline pair two_prod(double a, double b) noexcept
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace eft

/// Compensated Horner over binary64 for coefficients of any type convertible
/// to double.
template<typename Coeff>
double compensated_horner(std::span<const Coeff> coeffs, double x)
{
    const std::size_t n = coeffs.size();
    if (n == 0)
        return 0.0;
    double s = static_cast<double>(coeffs[n - 1]);
    double c = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) {
        const auto [p, pe] = eft::two_prod(s, x);
        const auto [t, se] = eft::two_sum(p, static_cast<double>(coeffs[i]));
        s = t;
        c = c * x + (pe + se);
        if (!std::isfinite(s) || !std::isfinite(c))
            throw overflow_error("reference_eval", i);
    }
    const double r = s + c;
    if (!std::isfinite(r))
        throw overflow_error("reference_eval", 0);
    return r;
}

/// Ground-truth value of P(x), treated as exact when measuring binary32 error.
inline extended reference_eval(const polynomial& p, float x)
{
    if (!std::isfinite(x))
        throw invalid_input("reference_eval: non-finite evaluation point");
    return compensated_horner<float>(p.coeffs(), x);
}

/// Worst-case expected error of evaluating P at x, used to normalize errors:
///
///     |P'(x)| eps/2 + sum_i |i P_i x^(i-1)| eps/2
///
/// The first term is already bounded by the second; both are kept as the
/// normalizer is defined that way. Computed entirely in binary64.
inline extended e_max(const polynomial& p, float x, const float_spec& spec = float_spec::binary32())
{
    if (!std::isfinite(x))
        throw invalid_input("e_max: non-finite evaluation point");
    if (p.degree() == 0)
        return 0.0;
    // i * P_i is exact in binary64 for any binary32 P_i and i < 2^29.
    std::vector<double> d(p.size() - 1);
    std::vector<double> abs_d(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = static_cast<double>(i + 1) * static_cast<double>(p[i + 1]);
        abs_d[i] = std::fabs(d[i]);
    }
    const double ex = x;
    const double slope = std::fabs(compensated_horner<double>(d, ex));
    double magnitude = 0.0;
    for (std::size_t i = abs_d.size(); i-- > 0;)
        magnitude = magnitude * std::fabs(ex) + abs_d[i];
    const double half_eps = static_cast<double>(spec.eps) / 2.0;
    const double result = slope * half_eps + magnitude * half_eps;
    if (!std::isfinite(result))
        throw overflow_error("e_max", 0);
    return result;
}

} // namespace nearpoly

#endif // NEARPOLY_REFERENCE_HPP
