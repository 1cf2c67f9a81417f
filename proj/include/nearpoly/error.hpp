#ifndef NEARPOLY_ERROR_HPP
#define NEARPOLY_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nearpoly {

/// Base class of everything the library throws.
class error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A NaN or infinity was handed to an operation that only accepts finite values.
class invalid_input : public error
{
  public:
    using error::error;
};

/// An argument lies outside the domain of the operation (bit width out of range,
/// exponent of zero, ...).
class domain_error : public error
{
  public:
    using error::error;
};

/// Emulated arithmetic left the finite range of the working format.
class overflow_error : public error
{
  public:
    overflow_error(const std::string& where, std::size_t step)
        : error(where + ": overflow at step " + std::to_string(step)),
          step_(step)
    {}

    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

/// The evaluation point makes the construction degenerate (x = 0).
class degenerate_point : public error
{
  public:
    using error::error;
};

/// Newton iteration hit a zero derivative. Carries the best iterate seen.
class stalled : public error
{
  public:
    stalled(const std::string& what, float best)
        : error(what), best_(best)
    {}

    float best() const noexcept { return best_; }

  private:
    float best_;
};

/// Malformed text input (polynomial files, plan dumps, numeric literals).
class parse_error : public error
{
  public:
    using error::error;
};

} // namespace nearpoly

#endif // NEARPOLY_ERROR_HPP
