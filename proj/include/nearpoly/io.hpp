#ifndef NEARPOLY_IO_HPP
#define NEARPOLY_IO_HPP

#include "nearpoly/accurate.hpp"
#include "nearpoly/error.hpp"
#include "nearpoly/hexfloat.hpp"
#include "nearpoly/nearby.hpp"
#include "nearpoly/polynomial.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Text formats used by the command-line tool.
//
//   polynomial  {"coeffs": [c0, c1, ...]}   lowest degree first; each entry a
//               decimal or hex-float string (or a JSON number)
//   plan        {"x_hat", "p_hat", "c", "m_hat", "r", "source_degree",
//                "conditions": [{"step", "delta", "input_ok", "output_ok"}]}
//               floats as hex literals, c[k] = C_{k-1}
//   roots       [{"root", "residual", "iterations", "converged"}]

namespace nearpoly {

using json = nlohmann::json;

namespace detail {

inline float float_from_json(const json& v, const char* what)
{
    if (v.is_string())
        return parse_float(v.get<std::string>());
    if (v.is_number()) {
        const float f = static_cast<float>(v.get<double>());
        if (!std::isfinite(f))
            throw parse_error(std::string(what) + ": number out of binary32 range");
        return f;
    }
    throw parse_error(std::string(what) + ": expected a number or numeric string");
}

inline std::vector<float> floats_from_json(const json& v, const char* what)
{
    if (!v.is_array())
        throw parse_error(std::string(what) + ": expected an array");
    std::vector<float> out;
    out.reserve(v.size());
    for (const auto& e : v)
        out.push_back(float_from_json(e, what));
    return out;
}

inline json floats_to_json(const std::vector<float>& v)
{
    json a = json::array();
    for (float f : v)
        a.push_back(format_hex(f));
    return a;
}

inline json parse_text(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
}

inline int int_from_json(const json& obj, const char* key)
{
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer())
        throw parse_error(std::string("plan: missing integer field '") + key + "'");
    return obj.at(key).get<int>();
}

inline bool bool_from_json(const json& obj, const char* key)
{
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_boolean())
        throw parse_error(std::string("plan: missing boolean field '") + key + "'");
    return obj.at(key).get<bool>();
}

} // namespace detail

inline polynomial polynomial_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("coeffs"))
        throw parse_error("polynomial: expected an object with a 'coeffs' array");
    auto coeffs = detail::floats_from_json(j.at("coeffs"), "polynomial coeffs");
    if (coeffs.empty())
        throw parse_error("polynomial: 'coeffs' is empty");
    return polynomial(std::move(coeffs));
}

inline polynomial parse_polynomial(std::string_view text)
{
    return polynomial_from_json(detail::parse_text(text));
}

inline json polynomial_to_json(const polynomial& p)
{
    return {{"coeffs", detail::floats_to_json({p.coeffs().begin(), p.coeffs().end()})}};
}

/// Initial guesses: a bare array or {"guesses": [...]}.
inline std::vector<float> parse_guesses(std::string_view text)
{
    const json j = detail::parse_text(text);
    if (j.is_object() && j.contains("guesses"))
        return detail::floats_from_json(j.at("guesses"), "guesses");
    return detail::floats_from_json(j, "guesses");
}

inline json plan_to_json(const nearby_plan& plan, const condition_report& report)
{
    json conditions = json::array();
    for (const auto& rec : report.records)
        conditions.push_back(
            {{"step", rec.step}, {"delta", rec.delta}, {"input_ok", rec.input_ok}, {"output_ok", rec.output_ok}});
    return {
        {"x_hat", format_hex(plan.x_hat)},
        {"p_hat", detail::floats_to_json(plan.p_hat)},
        {"c", detail::floats_to_json(plan.c)},
        {"m_hat", plan.m_hat},
        {"r", plan.r},
        {"source_degree", plan.source_degree},
        {"conditions", conditions},
    };
}

inline std::pair<nearby_plan, condition_report> plan_from_json(const json& j)
{
    if (!j.is_object())
        throw parse_error("plan: expected an object");
    nearby_plan plan;
    if (!j.contains("x_hat") || !j.contains("p_hat") || !j.contains("c"))
        throw parse_error("plan: missing x_hat, p_hat or c");
    plan.x_hat = detail::float_from_json(j.at("x_hat"), "plan x_hat");
    plan.p_hat = detail::floats_from_json(j.at("p_hat"), "plan p_hat");
    plan.c = detail::floats_from_json(j.at("c"), "plan c");
    plan.m_hat = detail::int_from_json(j, "m_hat");
    plan.r = detail::int_from_json(j, "r");
    plan.source_degree = detail::int_from_json(j, "source_degree");
    const auto expected = static_cast<std::size_t>(plan.source_degree) + 1;
    if (plan.source_degree < 1 || plan.p_hat.size() != expected || plan.c.size() != expected)
        throw parse_error("plan: vector lengths do not match source_degree");

    condition_report report;
    if (j.contains("conditions")) {
        if (!j.at("conditions").is_array())
            throw parse_error("plan: 'conditions' must be an array");
        for (const auto& rec : j.at("conditions")) {
            condition_record r;
            r.step = detail::int_from_json(rec, "step");
            r.delta = detail::int_from_json(rec, "delta");
            r.input_ok = detail::bool_from_json(rec, "input_ok");
            r.output_ok = detail::bool_from_json(rec, "output_ok");
            report.records.push_back(r);
        }
    }
    return {std::move(plan), std::move(report)};
}

inline json root_results_to_json(const std::vector<root_result>& results)
{
    json a = json::array();
    for (const auto& r : results) {
        char residual[48];
        std::snprintf(residual, sizeof residual, "%a", r.residual);
        a.push_back({{"root", format_hex(r.root)},
                     {"residual", residual},
                     {"iterations", r.iterations},
                     {"converged", r.converged}});
    }
    return a;
}

} // namespace nearpoly

#endif // NEARPOLY_IO_HPP
