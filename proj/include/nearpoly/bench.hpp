#ifndef NEARPOLY_BENCH_HPP
#define NEARPOLY_BENCH_HPP

#include "nearpoly/accurate.hpp"
#include "nearpoly/error.hpp"
#include "nearpoly/fpbits.hpp"
#include "nearpoly/hexfloat.hpp"
#include "nearpoly/nearby.hpp"
#include "nearpoly/polynomial.hpp"
#include "nearpoly/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

// Random-polynomial accuracy harness.
//
// Roots are s * m * 2^e with s uniform in {-1, +1}, m uniform in (0.5, 1) and e
// uniform in (-F/(N D), F/(N D)); the polynomial is the binary32 product of the
// linear factors. Every root is then evaluated by Horner and through a plan,
// and both errors are divided by e_max.
//
// Reproducibility: polynomial i draws from std::mt19937_64 seeded with
// splitmix64(seed + (i + 1) * 0x9e3779b97f4a7c15). mt19937_64 is fully
// specified by the standard, and uniforms are formed from raw bits rather than
// std::uniform_real_distribution, so streams match across platforms.

namespace nearpoly {

struct random_spec
{
    int order = 8;            // N
    double difficulty = 1.0;  // D
    int max_exponent = 127;   // F
    std::uint64_t seed = 1;
    int count = 128;          // number of polynomials

    void validate() const
    {
        if (order < 1)
            throw domain_error("random_spec: order must be >= 1");
        if (!(difficulty >= 1.0) || !std::isfinite(difficulty))
            throw domain_error("random_spec: difficulty must be finite and >= 1");
        if (max_exponent < 1)
            throw domain_error("random_spec: max_exponent must be >= 1");
        if (count < 0)
            throw domain_error("random_spec: count must be >= 0");
    }
};

struct generated_poly
{
    polynomial poly;
    std::vector<float> roots;
};

struct error_row
{
    int poly_id = 0;
    float root = 0.0f;
    double err_horner = 0.0;
    double err_accurate = 0.0;
    extended e_max_value = 0.0;

    friend bool operator==(const error_row&, const error_row&) = default;
};

struct experiment_result
{
    std::vector<error_row> rows;
    int skipped = 0;
};

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept
{
    z += 0x9e37'79b9'7f4a'7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58'476d'1ce4'e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d0'49bb'1331'11ebull;
    return z ^ (z >> 31);
}

/// Generator for polynomial poly_id of an experiment with the given seed.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t poly_id)
{
    return std::mt19937_64(splitmix64(seed + (poly_id + 1) * 0x9e37'79b9'7f4a'7c15ull));
}

namespace detail {

/// Uniform on the open interval (0, 1) with 52-bit resolution.
inline double open_unit(std::mt19937_64& rng)
{
    for (;;) {
        const std::uint64_t k = rng() >> 12;
        if (k != 0)
            return static_cast<double>(k) * 0x1p-52;
    }
}

} // namespace detail

/// One root before rounding: sign, mantissa in (0.5, 1), real exponent.
struct root_draw
{
    bool negative = false;
    double mantissa = 0.0;
    double exponent = 0.0;

    float value() const
    {
        const double v = mantissa * std::exp2(exponent);
        return static_cast<float>(negative ? -v : v);
    }
};

/// Exponents are drawn from (-half_width, half_width), half_width = F/(N D).
inline root_draw draw_root(double half_width, std::mt19937_64& rng)
{
    root_draw d;
    d.negative = (rng() >> 63) != 0;
    // 0.5 + j 2^-53 for j in [1, 2^52): exact, strictly inside (0.5, 1).
    d.mantissa = 0.5 + 0.5 * detail::open_unit(rng);
    d.exponent = (2.0 * detail::open_unit(rng) - 1.0) * half_width;
    return d;
}

inline double exponent_half_width(const random_spec& spec)
{
    return static_cast<double>(spec.max_exponent) / (spec.order * spec.difficulty);
}

/// N roots, each computed in binary64 and rounded to binary32.
inline std::vector<float> gen_roots(const random_spec& spec, std::mt19937_64& rng)
{
    spec.validate();
    const double half_width = exponent_half_width(spec);
    std::vector<float> roots(static_cast<std::size_t>(spec.order));
    for (auto& root : roots)
        root = draw_root(half_width, rng).value();
    return roots;
}

/// Expands prod_k (x - r_k) in generation order with binary32 arithmetic.
inline generated_poly poly_from_roots(std::vector<float> roots)
{
    if (roots.empty())
        throw domain_error("poly_from_roots: no roots");
    std::vector<float> c{-roots[0], 1.0f};
    for (std::size_t k = 1; k < roots.size(); ++k) {
        const float r = roots[k];
        std::vector<float> next(c.size() + 1);
        next[0] = -(r * c[0]);
        for (std::size_t i = 1; i < c.size(); ++i)
            next[i] = c[i - 1] - r * c[i];
        next[c.size()] = c.back();
        for (std::size_t i = 0; i < next.size(); ++i)
            if (!std::isfinite(next[i]))
                throw overflow_error("poly_from_roots", k);
        c = std::move(next);
    }
    return {polynomial(std::move(c)), std::move(roots)};
}

/// Normalized Horner and plan errors of P at r. Empty when e_max vanishes;
/// overflow propagates.
inline std::optional<error_row> measure(const polynomial& p, float r, const plan_options& options = {},
                                        const float_spec& fspec = float_spec::binary32())
{
    const extended scale = e_max(p, r, fspec);
    if (!(scale > 0.0))
        return std::nullopt;
    const extended truth = reference_eval(p, r);
    const float h = horner_eval(p, r);
    const float a = eval_plan(build_plan(p, r, fspec, options), r);
    error_row row;
    row.root = r;
    row.err_horner = std::fabs(static_cast<double>(h) - truth) / scale;
    row.err_accurate = std::fabs(static_cast<double>(a) - truth) / scale;
    row.e_max_value = scale;
    return row;
}

/// Normalized Horner and plan errors at every construction root.
inline experiment_result run_experiment(const random_spec& spec, const plan_options& options = {},
                                        const float_spec& fspec = float_spec::binary32())
{
    spec.validate();
    experiment_result out;
    out.rows.reserve(static_cast<std::size_t>(spec.count) * static_cast<std::size_t>(spec.order));
    for (int id = 0; id < spec.count; ++id) {
        auto rng = substream(spec.seed, static_cast<std::uint64_t>(id));
        generated_poly gen;
        try {
            gen = poly_from_roots(gen_roots(spec, rng));
        } catch (const overflow_error&) {
            out.skipped += spec.order;
            continue;
        }
        for (float r : gen.roots) {
            try {
                auto row = measure(gen.poly, r, options, fspec);
                if (!row) {
                    ++out.skipped;
                    continue;
                }
                row->poly_id = id;
                out.rows.push_back(*row);
            } catch (const overflow_error&) {
                ++out.skipped;
            }
        }
    }
    return out;
}

struct method_summary
{
    double median = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
    /// Geometric mean over the strictly positive errors; exact rows are
    /// reported in zeros instead of dragging the mean to zero.
    double geomean = 0.0;
    std::size_t zeros = 0;
};

struct summary
{
    std::size_t rows = 0;
    method_summary horner;
    method_summary accurate;
    /// median(err_horner) / median(err_accurate); +inf when the accurate
    /// median is zero, 1 when both are.
    double improvement_factor = 1.0;
};

namespace detail {

/// Linear interpolation between closest ranks on sorted data.
inline double quantile(const std::vector<double>& sorted, double q)
{
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

inline method_summary summarize_column(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    method_summary s;
    s.median = quantile(v, 0.5);
    s.p10 = quantile(v, 0.1);
    s.p90 = quantile(v, 0.9);
    double log_sum = 0.0;
    std::size_t positive = 0;
    for (double e : v) {
        if (e > 0.0) {
            log_sum += std::log(e);
            ++positive;
        } else {
            ++s.zeros;
        }
    }
    s.geomean = positive > 0 ? std::exp(log_sum / static_cast<double>(positive)) : 0.0;
    return s;
}

} // namespace detail

inline summary summarize(const std::vector<error_row>& rows)
{
    if (rows.empty())
        throw domain_error("summarize: no rows");
    std::vector<double> h, a;
    h.reserve(rows.size());
    a.reserve(rows.size());
    for (const auto& row : rows) {
        h.push_back(row.err_horner);
        a.push_back(row.err_accurate);
    }
    summary s;
    s.rows = rows.size();
    s.horner = detail::summarize_column(std::move(h));
    s.accurate = detail::summarize_column(std::move(a));
    if (s.accurate.median > 0.0)
        s.improvement_factor = s.horner.median / s.accurate.median;
    else
        s.improvement_factor = s.horner.median > 0.0 ? HUGE_VAL : 1.0;
    return s;
}

/// CSV with header poly_id,root_hex,err_horner,err_accurate,e_max.
inline void write_csv(std::ostream& os, const std::vector<error_row>& rows)
{
    os << "poly_id,root_hex,err_horner,err_accurate,e_max\n";
    for (const auto& row : rows)
        os << row.poly_id << ',' << format_hex(row.root) << ',' << format_sci(row.err_horner) << ','
           << format_sci(row.err_accurate) << ',' << format_sci(row.e_max_value) << '\n';
}

inline void write_summary(std::ostream& os, const summary& s)
{
    auto line = [&](const char* name, const method_summary& m) {
        os << "  " << name << ": median=" << format_sci(m.median) << " p10=" << format_sci(m.p10)
           << " p90=" << format_sci(m.p90) << " geomean=" << format_sci(m.geomean) << " zeros=" << m.zeros
           << '\n';
    };
    os << "rows=" << s.rows << '\n';
    line("horner  ", s.horner);
    line("accurate", s.accurate);
    os << "improvement_factor=" << format_sci(s.improvement_factor) << '\n';
}

} // namespace nearpoly

#endif // NEARPOLY_BENCH_HPP
