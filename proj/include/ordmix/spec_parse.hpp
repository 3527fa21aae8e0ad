#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "ordmix/baseline.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/named.hpp"
#include "ordmix/transform.hpp"

// Text forms of distributions for the command line.
//
//   texp:THETA,LAMBDA        transformed exponential
//   slaplace:THETA,LAMBDA    skew-Laplace
//   g:LAMBDA:BASE            transform of a baseline
//   BASE                     same as g:0:BASE
//
// with BASE one of exp:RATE, laplace:SCALE, weibull:SHAPE,SCALE, uniform:A,B
// (exp and laplace default to 1 when the parameter list is omitted).
namespace ordmix::spec {

enum class Family { texp, slaplace, transform };
enum class Base { exp, laplace, weibull, uniform };

struct DistributionSpec {
    Family family = Family::transform;
    double theta = 1.0;
    double lambda = 0.0;
    Base base = Base::exp;
    std::vector<double> base_params{1.0};
};

/// Decimal number or one of ln2, e, pi with an optional sign. The whole
/// string must be consumed.
inline double parse_number(std::string_view s)
{
    std::string_view body = s;
    double sign = 1.0;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        sign = body.front() == '-' ? -1.0 : 1.0;
        body.remove_prefix(1);
    }
    if (body == "ln2")
        return sign * std::numbers::ln2;
    if (body == "e")
        return sign * std::numbers::e;
    if (body == "pi")
        return sign * std::numbers::pi;
    if (body == "inf")
        return sign * inf;

    const std::string_view num = s.starts_with('+') ? body : s;
    if (num.empty() || num.front() == '+' || (s.starts_with('+') && num.front() == '-'))
        throw DomainError("not a number: '" + std::string(s) + "'");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || ptr != num.data() + num.size() || std::isnan(v))
        throw DomainError("not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<double> parse_list(std::string_view s)
{
    std::vector<double> out;
    for (std::string_view part : split(s, ','))
        out.push_back(parse_number(part));
    return out;
}

inline std::string_view to_string(Base b)
{
    switch (b) {
    case Base::exp: return "exp";
    case Base::laplace: return "laplace";
    case Base::weibull: return "weibull";
    case Base::uniform: return "uniform";
    }
    return "?";
}

inline std::string_view to_string(Family f)
{
    switch (f) {
    case Family::texp: return "texp";
    case Family::slaplace: return "slaplace";
    case Family::transform: return "transform";
    }
    return "?";
}

inline Base parse_base_name(std::string_view name)
{
    for (Base b : {Base::exp, Base::laplace, Base::weibull, Base::uniform})
        if (to_string(b) == name)
            return b;
    throw DomainError("unknown baseline '" + std::string(name) + "'");
}

inline std::size_t base_arity(Base b) { return (b == Base::exp || b == Base::laplace) ? 1 : 2; }

/// Parameter counts and ranges.
inline void validate(const DistributionSpec& s)
{
    detail::require_lambda(s.lambda);
    if (s.family != Family::transform) {
        detail::require_positive(s.theta, "theta");
        return;
    }
    if (s.base_params.size() != base_arity(s.base))
        throw DomainError(std::string(to_string(s.base)) + " takes " + std::to_string(base_arity(s.base)) +
                          " parameter(s)");
    switch (s.base) {
    case Base::exp: detail::require_positive(s.base_params[0], "rate"); break;
    case Base::laplace: detail::require_positive(s.base_params[0], "scale"); break;
    case Base::weibull:
        detail::require_positive(s.base_params[0], "shape");
        detail::require_positive(s.base_params[1], "scale");
        break;
    case Base::uniform:
        if (!(s.base_params[0] < s.base_params[1]) || !std::isfinite(s.base_params[0]) ||
            !std::isfinite(s.base_params[1]))
            throw DomainError("uniform bounds must be finite with a < b");
        break;
    }
}

/// BASE text, e.g. "weibull:2,1" or "exp".
inline DistributionSpec parse_base(std::string_view text)
{
    DistributionSpec s;
    const std::size_t colon = text.find(':');
    s.base = parse_base_name(text.substr(0, colon));
    if (colon == std::string_view::npos) {
        if (base_arity(s.base) != 1)
            throw DomainError(std::string(to_string(s.base)) + " needs explicit parameters");
        s.base_params = {1.0};
    } else
        s.base_params = parse_list(text.substr(colon + 1));
    validate(s);
    return s;
}

inline DistributionSpec parse(std::string_view text)
{
    DistributionSpec s;
    if (text.starts_with("texp:") || text.starts_with("slaplace:")) {
        const std::size_t colon = text.find(':');
        s.family = text.starts_with("texp:") ? Family::texp : Family::slaplace;
        const auto params = parse_list(text.substr(colon + 1));
        if (params.size() != 2)
            throw DomainError(std::string(to_string(s.family)) + " takes THETA,LAMBDA");
        s.theta = params[0];
        s.lambda = params[1];
    } else if (text.starts_with("g:")) {
        const std::string_view rest = text.substr(2);
        const std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw DomainError("expected g:LAMBDA:BASE");
        const double lambda = parse_number(rest.substr(0, colon));
        s = parse_base(rest.substr(colon + 1));
        s.lambda = lambda;
    } else
        s = parse_base(text);
    validate(s);
    return s;
}

inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Fewest significant digits that still parse back to v.
inline std::string shortest_number(double v)
{
    char buf[32];
    for (int digits = 1; digits < 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v)
            return buf;
    }
    return format_number(v);
}

/// Inverse of parse(): parse(to_compact(s)) reproduces s exactly.
inline std::string to_compact(const DistributionSpec& s)
{
    if (s.family != Family::transform)
        return std::string(to_string(s.family)) + ":" + shortest_number(s.theta) + "," + shortest_number(s.lambda);
    std::string out = "g:" + shortest_number(s.lambda) + ":" + std::string(to_string(s.base)) + ":";
    for (std::size_t i = 0; i < s.base_params.size(); ++i)
        out += (i ? "," : "") + shortest_number(s.base_params[i]);
    return out;
}

inline AnyDistribution make_base(const DistributionSpec& s)
{
    const auto& p = s.base_params;
    switch (s.base) {
    case Base::exp: return Exponential(p.at(0));
    case Base::laplace: return Laplace(p.at(0));
    case Base::weibull: return Weibull(p.at(0), p.at(1));
    case Base::uniform: return Uniform(p.at(0), p.at(1));
    }
    throw DomainError("unknown baseline");
}

/// The transformed law. Named families keep their closed forms.
inline AnyDistribution make_distribution(const DistributionSpec& s)
{
    validate(s);
    switch (s.family) {
    case Family::texp: return TransformedExponential(s.theta, s.lambda);
    case Family::slaplace: return SkewLaplace(s.theta, s.lambda);
    case Family::transform: return Transformed<AnyDistribution>(make_base(s), s.lambda);
    }
    throw DomainError("unknown family");
}

/// The baseline F of the transformed law.
inline AnyDistribution make_baseline(const DistributionSpec& s)
{
    switch (s.family) {
    case Family::texp: return Exponential(s.theta);
    case Family::slaplace: return Laplace(s.theta);
    case Family::transform: return make_base(s);
    }
    throw DomainError("unknown family");
}

} // namespace ordmix::spec
