#ifndef NEARPOLY_POLYNOMIAL_HPP
#define NEARPOLY_POLYNOMIAL_HPP

#include "nearpoly/arith.hpp"
#include "nearpoly/error.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nearpoly {

/// Univariate polynomial with binary32 coefficients, lowest degree first.
///
/// Trailing zero coefficients are trimmed on construction; the zero
/// polynomial is stored as {0} with degree 0. Immutable once built.
class polynomial
{
  public:
    polynomial() : coeffs_{0.0f} {}

    explicit polynomial(std::vector<float> coeffs)
        : coeffs_(std::move(coeffs))
    {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!std::isfinite(coeffs_[i]))
                throw invalid_input("polynomial: coefficient " + std::to_string(i) + " is not finite");
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0f)
            coeffs_.pop_back();
        if (coeffs_.empty())
            coeffs_.push_back(0.0f);
    }

    polynomial(std::initializer_list<float> coeffs)
        : polynomial(std::vector<float>(coeffs))
    {}

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const float> coeffs() const noexcept { return coeffs_; }
    float operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0f; }

    friend bool operator==(const polynomial&, const polynomial&) = default;

  private:
    std::vector<float> coeffs_;
};

/// Horner's method, H <- H*x + P_i for i = n..0 starting from H = 0. Every
/// operation is performed in T. Throws overflow_error naming the coefficient
/// index at which the partial sum left the finite range.
template<typename T>
T horner(std::span<const T> coeffs, const T& x)
{
    T h(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        h = h * x + coeffs[i];
        if (!is_finite(h))
            throw overflow_error("horner", i);
    }
    return h;
}

/// Horner partial sums: result[i] is the value after coefficient i has been
/// added, result[n+1] is the initial zero. result[0] is P(x).
template<typename T>
std::vector<T> horner_partials(std::span<const T> coeffs, const T& x)
{
    std::vector<T> partials(coeffs.size() + 1, T(0));
    T h(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        h = h * x + coeffs[i];
        if (!is_finite(h))
            throw overflow_error("horner", i);
        partials[i] = h;
    }
    return partials;
}

/// Horner evaluation in binary32.
inline float horner_eval(const polynomial& p, float x)
{
    if (!std::isfinite(x))
        throw invalid_input("horner_eval: non-finite evaluation point");
    return horner<float>(p.coeffs(), x);
}

/// d/dx P, each coefficient (i+1)*P_{i+1} rounded to binary32.
inline polynomial derivative(const polynomial& p)
{
    if (p.degree() == 0)
        return polynomial{};
    std::vector<float> d(p.size() - 1);
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = static_cast<float>(i + 1) * p[i + 1];
        if (!std::isfinite(d[i]))
            throw overflow_error("derivative", i);
    }
    return polynomial(std::move(d));
}

} // namespace nearpoly

#endif // NEARPOLY_POLYNOMIAL_HPP
