#ifndef NEARPOLY_FPBITS_HPP
#define NEARPOLY_FPBITS_HPP

#include "nearpoly/arith.hpp"
#include "nearpoly/error.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

namespace nearpoly {

/// Parameters of the working precision.
///
/// mantissa_bits (M) counts the stored fraction bits, excluding the implicit
/// leading bit. The arithmetic itself is always binary32; M sets the bit
/// budgets handed out by the nearby-polynomial construction.
struct float_spec
{
    int mantissa_bits = 23;
    int max_exponent = 127;
    float eps = 0x1p-24f; // 2^-(M+1)

    static constexpr float_spec binary32() noexcept { return {}; }

    /// Smallest budget the reduced-bits heuristic may return: ceil((M+1)/3).
    constexpr int budget_floor() const noexcept { return (mantissa_bits + 1 + 2) / 3; }

    friend bool operator==(const float_spec&, const float_spec&) = default;
};

inline constexpr int binary32_fraction_bits = 23;

namespace detail {

constexpr std::uint32_t fraction_mask = 0x007f'ffffu;
constexpr std::uint32_t exponent_mask = 0x7f80'0000u;

inline void require_finite(float z, const char* op)
{
    if (!std::isfinite(z))
        throw invalid_input(std::string(op) + ": non-finite argument");
}

/// Integer significand of |z| with the implicit bit made explicit for normal
/// numbers. Zero for zero.
inline std::uint32_t significand(float z) noexcept
{
    const auto bits = std::bit_cast<std::uint32_t>(z);
    const auto frac = bits & fraction_mask;
    return (bits & exponent_mask) != 0 ? (frac | 0x0080'0000u) : frac;
}

} // namespace detail

/// T_k(z): keep the leading significand bit and the next k fraction bits, zero
/// the rest (round toward zero on the magnitude). Subnormals are treated the
/// same way with their highest set bit playing the role of the implicit bit.
inline float truncate(float z, int k)
{
    detail::require_finite(z, "truncate");
    if (k < 0 || k > binary32_fraction_bits)
        throw domain_error("truncate: bit count " + std::to_string(k) + " outside [0, 23]");
    const auto sig = detail::significand(z);
    if (sig == 0)
        return z;
    const int lead = std::bit_width(sig) - 1;
    if (lead <= k)
        return z;
    // The low bits of the significand sit in the low bits of the encoding for
    // both normal and subnormal numbers.
    const std::uint32_t drop = (std::uint32_t{1} << (lead - k)) - 1;
    return std::bit_cast<float>(std::bit_cast<std::uint32_t>(z) & ~drop);
}

/// B(z): fraction bits after the leading bit up to and including the lowest
/// set bit. B(0) = 0.
inline int bit_count(float z)
{
    detail::require_finite(z, "bit_count");
    const auto sig = detail::significand(z);
    if (sig == 0)
        return 0;
    return std::bit_width(sig) - 1 - std::countr_zero(sig);
}

/// E(z) with |z| = m * 2^E(z), m in [0.5, 1). Read from the encoding, no
/// floating-point arithmetic.
inline int exponent(float z)
{
    detail::require_finite(z, "exponent");
    const auto bits = std::bit_cast<std::uint32_t>(z);
    const auto biased = static_cast<int>((bits & detail::exponent_mask) >> 23);
    if (biased != 0)
        return biased - 126;
    const auto sig = bits & detail::fraction_mask;
    if (sig == 0)
        throw domain_error("exponent: zero has no exponent");
    return std::bit_width(sig) - 149;
}

/// Mantissa bits lost when adding p_n to hx: |E(p_n) - E(hx)|. Zero if either
/// side is zero since the addition is then exact.
inline int bits_lost(float p_n, float hx)
{
    detail::require_finite(p_n, "bits_lost");
    detail::require_finite(hx, "bits_lost");
    if (p_n == 0.0f || hx == 0.0f)
        return 0;
    const int gap = exponent(p_n) - exponent(hx);
    return gap < 0 ? -gap : gap;
}

/// True iff the binary32 product a*b carries no rounding error. binary64
/// holds any product of two binary32 values exactly.
inline bool product_is_exact(float a, float b) noexcept
{
    const float rounded = a * b;
    return static_cast<double>(rounded) == static_cast<double>(a) * static_cast<double>(b);
}

} // namespace nearpoly

#endif // NEARPOLY_FPBITS_HPP
