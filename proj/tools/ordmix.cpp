#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ordmix.hpp"
#include "ordmix/acceptance.hpp"

using json = nlohmann::ordered_json;
using namespace ordmix;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::string num(double v) { return spec::format_number(v); }

json witness_json(const std::optional<Witness>& w)
{
    if (!w)
        return nullptr;
    json j{{"x", w->x}};
    j["y"] = w->y ? json(*w->y) : json(nullptr);
    j["slack"] = w->slack;
    return j;
}

// Flags naming one distribution: --spec, or --family/--transform with
// --theta, --lambda and --baseline.
struct SpecFlags {
    std::string family;
    std::string theta = "1";
    std::string lambda = "0";
    std::string baseline;
    std::string text;
    bool transform = false;

    CLI::Option* family_opt = nullptr;
    CLI::Option* theta_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* baseline_opt = nullptr;
    CLI::Option* transform_opt = nullptr;
    CLI::Option* spec_opt = nullptr;

    void add(CLI::App* app)
    {
        family_opt = app->add_option("--family", family, "texp, slaplace or transform");
        transform_opt = app->add_flag("--transform", transform, "same as --family transform");
        theta_opt = app->add_option("--theta", theta, "rate/scale of texp and slaplace");
        lambda_opt = app->add_option("--lambda", lambda, "mixing parameter in [-1, 1]");
        baseline_opt = app->add_option("--baseline", baseline, "exp[:R] laplace[:S] weibull:K,S uniform:A,B");
        spec_opt = app->add_option("--spec", text, "compact form, e.g. texp:1,0.5 or g:0.5:weibull:2,1");
    }

    bool given() const
    {
        return family_opt->count() || transform_opt->count() || theta_opt->count() || lambda_opt->count() ||
               baseline_opt->count() || spec_opt->count();
    }

    spec::DistributionSpec build() const
    {
        if (spec_opt->count()) {
            if (family_opt->count() || transform_opt->count() || theta_opt->count() || lambda_opt->count() ||
                baseline_opt->count())
                throw DomainError("--spec cannot be combined with other distribution flags");
            return spec::parse(text);
        }
        std::string fam = family;
        if (transform) {
            if (!fam.empty() && fam != "transform")
                throw DomainError("--transform conflicts with --family " + fam);
            fam = "transform";
        }
        if (fam.empty() && baseline_opt->count())
            fam = "transform";
        if (fam.empty())
            throw DomainError("no distribution: give --family, --transform, --baseline or --spec");

        spec::DistributionSpec s;
        if (fam == "texp" || fam == "slaplace") {
            if (baseline_opt->count())
                throw DomainError("--baseline applies to the transform family only");
            s.family = fam == "texp" ? spec::Family::texp : spec::Family::slaplace;
            s.theta = spec::parse_number(theta);
        } else if (fam == "transform") {
            if (theta_opt->count())
                throw DomainError("--theta applies to texp and slaplace only");
            s = spec::parse_base(baseline.empty() ? "exp" : baseline);
        } else
            throw DomainError("unknown family '" + fam + "'");
        s.lambda = spec::parse_number(lambda);
        spec::validate(s);
        return s;
    }
};

std::uint64_t parse_seed(const std::string& text, const std::string& what)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw DomainError(what + " is not an unsigned integer: '" + text + "'");
    return v;
}

// --seed beats ORDMIX_SEED beats the built-in default.
std::uint64_t resolve_seed(const CLI::Option* opt, const std::string& flag)
{
    if (opt->count())
        return parse_seed(flag, "--seed");
    if (const char* env = std::getenv("ORDMIX_SEED"))
        return parse_seed(env, "ORDMIX_SEED");
    return config::default_seed;
}

AnyCopula parse_coupling(const std::string& name)
{
    if (name == "independence" || name == "pi" || name == "Pi")
        return IndependenceCopula{};
    if (name == "M" || name == "comonotone" || name == "upper")
        return UpperFrechet{};
    if (name == "W" || name == "countermonotone" || name == "antithetic" || name == "lower")
        return LowerFrechet{};
    throw DomainError("unknown coupling '" + name + "' (independence, M, W)");
}

double numeric_mrl(const AnyDistribution& g, double t)
{
    const double s = ordmix::survival(g, t);
    if (!(s > 0.0))
        throw DomainError("mean residual life needs survival > 0 at t=" + num(t));
    auto surv = [&](double x) { return ordmix::survival(g, x); };
    const double tol = 1e-12;
    double total = 0.0;
    double a = t;
    // kink of the Laplace-type densities at 0
    if (a < 0.0 && g.upper() > 0.0) {
        total += adaptive_simpson(surv, a, 0.0, tol);
        a = 0.0;
    }
    total += std::isfinite(g.upper()) ? adaptive_simpson(surv, a, g.upper(), tol) : integrate_tail(surv, a, +1, tol);
    return total / s;
}

int cmd_eval(std::ostream& out, const SpecFlags& flags, const std::string& what, const std::vector<std::string>& points)
{
    const auto s = flags.build();
    const AnyDistribution g = spec::make_distribution(s);
    std::optional<TransformedExponential> te;
    if (s.family == spec::Family::texp)
        te.emplace(s.theta, s.lambda);

    std::vector<double> xs;
    for (const auto& p : points)
        xs.push_back(spec::parse_number(p));

    std::vector<double> values;
    for (double x : xs) {
        if (what == "cdf")
            values.push_back(g.cdf(x));
        else if (what == "pdf")
            values.push_back(g.pdf(x));
        else if (what == "survival")
            values.push_back(ordmix::survival(g, x));
        else if (what == "hazard")
            values.push_back(ordmix::hazard(g, x));
        else if (what == "quantile")
            values.push_back(g.quantile(x));
        else if (what == "mrl")
            values.push_back(te ? te->mean_residual_life(x) : numeric_mrl(g, x));
        else
            throw DomainError("unknown --what '" + what + "'");
    }

    const char* input = what == "quantile" ? "q" : (what == "mrl" ? "t" : "x");
    out << input << ',' << what << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << num(xs[i]) << ',' << num(values[i]) << '\n';
    return exit_pass;
}

struct SampleArgs {
    std::size_t n = 0;
    std::string seed;
    bool bivariate = false;
    std::string coupling = "independence";
    std::string margin1 = "exp";
    std::string margin2 = "exp";
};

int cmd_sample(std::ostream& out, const SpecFlags& flags, const SampleArgs& a, const CLI::Option* seed_opt)
{
    if (a.n < 1)
        throw DomainError("--n must be at least 1");
    const std::uint64_t seed = resolve_seed(seed_opt, a.seed);
    Stream rng(seed);

    if (a.bivariate) {
        if (flags.family_opt->count() || flags.transform_opt->count() || flags.theta_opt->count() ||
            flags.baseline_opt->count() || flags.spec_opt->count())
            throw DomainError("--bivariate takes --lambda, --coupling, --margin1 and --margin2");
        const double lambda = spec::parse_number(flags.lambda);
        const auto m1 = spec::parse_base(a.margin1);
        const auto m2 = spec::parse_base(a.margin2);
        const AnyCopula d = parse_coupling(a.coupling);
        const BivariateTransformed b(spec::make_base(m1), spec::make_base(m2), d, lambda);
        const auto pairs = b.sample(a.n, rng);
        out << "# coupling=" << d.name() << " lambda=" << num(lambda) << " margin1=" << spec::to_compact(m1)
            << " margin2=" << spec::to_compact(m2) << " seed=" << seed << " n=" << a.n << '\n';
        out << "x,y\n";
        for (const auto& [x, y] : pairs)
            out << num(x) << ',' << num(y) << '\n';
        return exit_pass;
    }

    const auto s = flags.build();
    const Transformed<AnyDistribution> g(spec::make_baseline(s), s.lambda);
    const auto xs = g.sample(a.n, rng);
    out << "# spec=" << spec::to_compact(s) << " seed=" << seed << " n=" << a.n << '\n';
    out << "x\n";
    for (double x : xs)
        out << num(x) << '\n';
    return exit_pass;
}

int cmd_check_order(std::ostream& out, const std::string& kind_text, const std::string& left,
                    const std::string& right, int resolution, double tol)
{
    const auto kind = parse_order_kind(kind_text);
    if (!kind)
        throw DomainError("unknown order '" + kind_text + "'");
    const auto ls = spec::parse(left);
    const auto rs = spec::parse(right);
    const AnyDistribution f1 = spec::make_distribution(ls);
    const AnyDistribution f2 = spec::make_distribution(rs);
    const Grid grid = Grid::quantile_spaced(f1, resolution);
    const auto rep = check_order(*kind, f1, f2, grid, tol);

    json j;
    j["check"] = "order";
    j["kind"] = std::string(to_string(*kind));
    j["left"] = spec::to_compact(ls);
    j["right"] = spec::to_compact(rs);
    j["holds"] = rep.holds;
    j["margin"] = rep.margin;
    j["witness"] = witness_json(rep.witness);
    j["grid"] = {{"spacing", "quantiles of left"}, {"resolution", resolution}};
    j["tolerance"] = tol;
    out << j.dump(2) << '\n';
    return rep.holds ? exit_pass : exit_fail;
}

int cmd_check_aging(std::ostream& out, const SpecFlags& flags, const std::string& expect, int resolution, double tol)
{
    std::optional<AgingClass> expected;
    if (!expect.empty()) {
        expected = parse_aging_class(expect);
        if (!expected)
            throw DomainError("unknown aging class '" + expect + "'");
    }
    const auto s = flags.build();
    const AnyDistribution g = spec::make_distribution(s);
    const auto rep = classify_aging(g, Grid::quantile_spaced(g, resolution), tol);

    json classes = json::object();
    for (AgingClass c : all_aging_classes) {
        const auto& v = rep[c];
        classes[std::string(to_string(c))] = {{"holds", v.holds}, {"margin", v.margin}, {"witness", witness_json(v.witness)}};
    }
    json j;
    j["check"] = "aging";
    j["spec"] = spec::to_compact(s);
    j["classes"] = classes;
    j["consistent"] = rep.consistent();
    if (expected)
        j["expect"] = {{"class", std::string(to_string(*expected))}, {"holds", rep[*expected].holds}};
    j["grid"] = {{"spacing", "quantiles"}, {"resolution", resolution}};
    j["tolerance"] = tol;
    out << j.dump(2) << '\n';

    const bool ok = rep.consistent() && (!expected || rep[*expected].holds);
    return ok ? exit_pass : exit_fail;
}

int cmd_copula_grid(std::ostream& out, const std::string& coupling, const std::string& lambda_text, int resolution,
                    bool validate)
{
    if (resolution < 3)
        throw DomainError("--resolution must be at least 3");
    const double lambda = spec::parse_number(lambda_text);
    const TransformedCopula c(parse_coupling(coupling), lambda);

    if (validate) {
        const auto rep = copula_validity(c, resolution, config::copula_volume_tol);
        json j;
        j["copula"] = c.name();
        j["lambda"] = lambda;
        j["resolution"] = resolution;
        j["tolerance"] = config::copula_volume_tol;
        j["valid"] = rep.valid;
        j["grounded"] = rep.grounded;
        j["uniform_margins"] = rep.uniform_margins;
        j["two_increasing"] = rep.two_increasing;
        j["max_ground_error"] = rep.max_ground_error;
        j["max_margin_error"] = rep.max_margin_error;
        j["worst_volume"] = rep.worst_volume;
        j["worst_rectangle"] = {rep.worst_u, rep.worst_v};
        j["witness"] = rep.witness ? json{rep.witness->first, rep.witness->second} : json(nullptr);
        out << j.dump(2) << '\n';
        return rep.valid ? exit_pass : exit_fail;
    }

    out << "u,v,c\n";
    for (int i = 0; i <= resolution; ++i)
        for (int k = 0; k <= resolution; ++k) {
            const double u = static_cast<double>(i) / resolution;
            const double v = static_cast<double>(k) / resolution;
            out << num(u) << ',' << num(v) << ',' << num(c.value(u, v)) << '\n';
        }
    return exit_pass;
}

json config_json()
{
    return {{"default_seed", config::default_seed},
            {"ks_critical", config::ks_critical_5pct},
            {"order_grid_size", config::order_grid_size},
            {"order_tol", config::order_tol_closed_form},
            {"copula_resolution", config::copula_resolution},
            {"copula_volume_tol", config::copula_volume_tol},
            {"quad_abs_tol", config::quad_abs_tol},
            {"mixture_seed_base", acceptance::mixture_seed_base},
            {"inverse_seed_base", acceptance::inverse_seed_base},
            {"bivariate_seed", acceptance::bivariate_seed}};
}

int cmd_verify_suite(std::ostream& out, const std::string& name, acceptance::Suite suite, bool as_json,
                     bool negative_control)
{
    const auto results = acceptance::run_suite(suite, {negative_control});
    std::size_t passed = 0;
    for (const auto& r : results)
        passed += r.pass ? 1 : 0;
    const bool ok = passed == results.size();

    if (as_json) {
        json list = json::array();
        for (const auto& r : results)
            list.push_back({{"id", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"worst", r.worst},
                            {"tolerance", r.tolerance},
                            {"detail", r.detail}});
        json j;
        j["suite"] = name;
        j["negative_control"] = negative_control;
        j["config"] = config_json();
        j["criteria"] = list;
        j["passed"] = passed;
        j["total"] = results.size();
        j["pass"] = ok;
        out << j.dump(2) << '\n';
    } else {
        out << "# config " << config_json().dump() << '\n';
        for (const auto& r : results)
            out << acceptance::format_line(r) << '\n';
        out << passed << '/' << results.size() << " criteria passed\n";
    }
    return ok ? exit_pass : exit_fail;
}

// Reads a sample CSV: '#' lines carry provenance, a non-numeric first line is
// the header, every other line starts with the value.
int cmd_verify_ks(std::ostream& out, std::istream& in, const SpecFlags& flags, bool as_json)
{
    std::vector<double> xs;
    std::string provenance;
    std::string line;
    bool seen_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            std::istringstream words(line.substr(1));
            std::string w;
            while (words >> w) {
                if (w.starts_with("spec="))
                    provenance = w.substr(5);
                if (w.starts_with("coupling="))
                    throw DomainError("verify ks takes univariate samples");
            }
            continue;
        }
        const std::string field = line.substr(0, line.find(','));
        try {
            xs.push_back(spec::parse_number(field));
        } catch (const DomainError&) {
            if (seen_header || !xs.empty())
                throw DomainError("line " + std::to_string(lineno) + ": not a number: '" + field + "'");
            seen_header = true;
        }
    }

    spec::DistributionSpec s;
    if (flags.given())
        s = flags.build();
    else if (!provenance.empty())
        s = spec::parse(provenance);
    else
        throw DomainError("no distribution: pass --spec or pipe the output of 'ordmix sample'");

    const AnyDistribution g = spec::make_distribution(s);
    const auto ks = verify::ks_statistic(verify::SampleBatch<double>{xs, 0}, [&](double x) { return g.cdf(x); });

    if (as_json) {
        json j{{"check", "ks"},   {"spec", spec::to_compact(s)}, {"n", xs.size()},
               {"statistic", ks.statistic}, {"threshold", ks.threshold}, {"pass", ks.pass}};
        out << j.dump(2) << '\n';
    } else
        out << (ks.pass ? "PASS" : "FAIL") << " ks spec=" << spec::to_compact(s) << " n=" << xs.size()
            << " statistic=" << num(ks.statistic) << " threshold=" << num(ks.threshold) << '\n';
    return ks.pass ? exit_pass : exit_fail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ordmix: order-statistics mixture distributions"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "write output to FILE instead of stdout");

    const std::vector<std::string> whats{"cdf", "pdf", "hazard", "survival", "quantile", "mrl"};

    auto* eval = app.add_subcommand("eval", "evaluate a function of a distribution at points");
    SpecFlags eval_spec;
    eval_spec.add(eval);
    std::string what = "cdf";
    std::vector<std::string> points;
    eval->add_option("--what", what, "cdf, pdf, hazard, survival, quantile or mrl")->check(CLI::IsMember(whats));
    eval->add_option("--points", points, "points; ln2, e, pi accepted")->required()->delimiter(',');

    auto* sample = app.add_subcommand("sample", "draw a reproducible sample as CSV");
    SpecFlags sample_spec;
    sample_spec.add(sample);
    SampleArgs sargs;
    sample->add_option("--n", sargs.n, "sample size")->required();
    auto* seed_opt = sample->add_option("--seed", sargs.seed, "seed; default ORDMIX_SEED or 42");
    sample->add_flag("--bivariate", sargs.bivariate, "sample pairs from the bivariate transform");
    sample->add_option("--coupling", sargs.coupling, "independence, M or W");
    sample->add_option("--margin1", sargs.margin1, "baseline of the first coordinate");
    sample->add_option("--margin2", sargs.margin2, "baseline of the second coordinate");

    auto* check = app.add_subcommand("check", "stochastic order and aging checks (JSON)");
    check->require_subcommand(1);
    int resolution = config::order_grid_size;
    double tol = config::order_tol_closed_form;

    auto* order = check->add_subcommand("order", "check LEFT <=_KIND RIGHT");
    std::string kind_text;
    std::string left;
    std::string right;
    order->add_option("kind", kind_text, "st, hr, lr, convex, star, superadditive, dispersive")->required();
    order->add_option("--left", left, "distribution spec")->required();
    order->add_option("--right", right, "distribution spec")->required();
    order->add_option("--resolution", resolution, "grid points")->check(CLI::Range(3, 1 << 20));
    order->add_option("--tol", tol, "slack tolerance");

    auto* aging = check->add_subcommand("aging", "classify IHR, DHR, IHRA, DHRA, NBU, NWU");
    SpecFlags aging_spec;
    aging_spec.add(aging);
    std::string expect;
    aging->add_option("--expect", expect, "exit 1 unless this class holds");
    aging->add_option("--resolution", resolution, "grid points")->check(CLI::Range(3, 1 << 20));
    aging->add_option("--tol", tol, "slack tolerance");

    auto* grid = app.add_subcommand("copula-grid", "tabulate the transformed copula");
    std::string coupling = "independence";
    std::string grid_lambda = "0";
    int grid_resolution = config::copula_resolution;
    bool validate = false;
    grid->add_option("--coupling", coupling, "independence, M or W");
    grid->add_option("--lambda", grid_lambda, "mixing parameter in [-1, 1]");
    grid->add_option("--resolution", grid_resolution, "grid cells per side");
    grid->add_flag("--validate", validate, "report copula validity as JSON instead of the grid");

    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->require_subcommand(1);
    bool as_json = false;
    bool negative_control = false;
    std::vector<std::pair<std::string, acceptance::Suite>> suites{
        {"univariate", acceptance::Suite::univariate},
        {"bivariate", acceptance::Suite::bivariate},
        {"all", acceptance::Suite::all}};
    std::vector<CLI::App*> suite_cmds;
    for (const auto& [name, suite] : suites) {
        auto* sc = verify->add_subcommand(name, "criteria of the " + name + " suite");
        sc->add_flag("--json", as_json, "machine-readable output");
        sc->add_flag("--negative-control", negative_control, "add a copula family that violates the ordering");
        suite_cmds.push_back(sc);
    }
    auto* ks = verify->add_subcommand("ks", "KS test of a sample read from stdin");
    SpecFlags ks_spec;
    ks_spec.add(ks);
    ks->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_pass : exit_usage;
    }

    try {
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path, std::ios::binary);
            if (!file)
                throw DomainError("cannot open --out file '" + out_path + "'");
        }
        std::ostream& out = out_path.empty() ? std::cout : file;

        int rc = exit_usage;
        if (*eval)
            rc = cmd_eval(out, eval_spec, what, points);
        else if (*sample)
            rc = cmd_sample(out, sample_spec, sargs, seed_opt);
        else if (*order)
            rc = cmd_check_order(out, kind_text, left, right, resolution, tol);
        else if (*aging)
            rc = cmd_check_aging(out, aging_spec, expect, resolution, tol);
        else if (*grid)
            rc = cmd_copula_grid(out, coupling, grid_lambda, grid_resolution, validate);
        else if (*ks)
            rc = cmd_verify_ks(out, std::cin, ks_spec, as_json);
        else
            for (std::size_t i = 0; i < suites.size(); ++i)
                if (*suite_cmds[i])
                    rc = cmd_verify_suite(out, suites[i].first, suites[i].second, as_json, negative_control);
        out.flush();
        if (!out)
            throw DomainError("write failed");
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "ordmix: " << e.what() << '\n';
        return exit_usage;
    }
}
