#ifndef NEARPOLY_ARITH_HPP
#define NEARPOLY_ARITH_HPP

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>

namespace nearpoly {

// The working precision is the host binary32 type. That is only a faithful
// emulation if every float operation is rounded to binary32 on its own.
static_assert(std::numeric_limits<float>::is_iec559, "binary32 float required");
static_assert(std::numeric_limits<float>::digits == 24);
static_assert(FLT_EVAL_METHOD == 0, "float expressions must not be evaluated in excess precision");

/// Running totals of floating-point work, filled in by counted<T>.
struct op_counts
{
    std::uint64_t mul = 0;
    std::uint64_t add = 0; // additions and subtractions

    friend bool operator==(const op_counts&, const op_counts&) = default;
};

namespace detail {
inline thread_local op_counts* active_counts = nullptr;
}

/// Installs an op_counts sink for the current thread for the lifetime of the scope.
class counting_scope
{
  public:
    explicit counting_scope(op_counts& sink) noexcept
        : previous_(detail::active_counts)
    {
        detail::active_counts = &sink;
    }
    ~counting_scope() { detail::active_counts = previous_; }

    counting_scope(const counting_scope&) = delete;
    counting_scope& operator=(const counting_scope&) = delete;

  private:
    op_counts* previous_;
};

/// Arithmetic wrapper that behaves exactly like T but tallies every
/// multiplication and addition/subtraction into the active counting_scope.
/// Negation, comparison and conversion are free.
template<typename T>
class counted
{
  public:
    using value_type = T;

    constexpr counted() noexcept = default;
    constexpr counted(T v) noexcept : v_(v) {}

    constexpr T value() const noexcept { return v_; }

    friend counted operator*(counted a, counted b) noexcept
    {
        tally(&op_counts::mul);
        return counted(a.v_ * b.v_);
    }
    friend counted operator+(counted a, counted b) noexcept
    {
        tally(&op_counts::add);
        return counted(a.v_ + b.v_);
    }
    friend counted operator-(counted a, counted b) noexcept
    {
        tally(&op_counts::add);
        return counted(a.v_ - b.v_);
    }
    friend constexpr counted operator-(counted a) noexcept { return counted(-a.v_); }

    friend constexpr bool operator==(counted a, counted b) noexcept { return a.v_ == b.v_; }
    friend constexpr auto operator<=>(counted a, counted b) noexcept { return a.v_ <=> b.v_; }

  private:
    static void tally(std::uint64_t op_counts::*field) noexcept
    {
        if (detail::active_counts != nullptr)
            ++(detail::active_counts->*field);
    }

    T v_{};
};

template<typename T>
struct is_counted : std::false_type {};
template<typename T>
struct is_counted<counted<T>> : std::true_type {};

/// Customization point for scalar types used by the generic algorithms.
/// Exact types (rationals) are always finite.
template<typename T>
struct scalar_traits
{
    static bool is_finite(const T& v)
    {
        if constexpr (std::is_floating_point_v<T>)
            return std::isfinite(v);
        else
            return true;
    }
};

template<typename T>
struct scalar_traits<counted<T>>
{
    static bool is_finite(const counted<T>& v) { return scalar_traits<T>::is_finite(v.value()); }
};

template<typename T>
bool is_finite(const T& v)
{
    return scalar_traits<T>::is_finite(v);
}

/// Unwraps a counted value; identity for plain floats.
inline float strip(float v) noexcept { return v; }
template<typename T>
T strip(counted<T> v) noexcept
{
    return v.value();
}

} // namespace nearpoly

#endif // NEARPOLY_ARITH_HPP
