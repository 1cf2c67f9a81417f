// Command-line front end: evaluate, inspect plans, deflate, polish roots and
// run the random-polynomial accuracy benchmark.
//
// Exit codes: 0 success, 2 input error, 3 numeric overflow, 4 non-convergence.

#include "nearpoly/io.hpp"
#include "nearpoly/nearpoly.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace nearpoly;

constexpr int exit_input = 2;
constexpr int exit_overflow = 3;
constexpr int exit_no_convergence = 4;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

polynomial load_polynomial(const std::string& path)
{
    return parse_polynomial(read_file(path));
}

int cmd_eval(const std::string& poly_path, const std::string& at, const std::string& method, bool as_json)
{
    const auto p = load_polynomial(poly_path);
    const float x = parse_float(at);
    float value = 0.0f;
    if (method == "horner") {
        value = horner_eval(p, x);
    } else if (p.degree() == 0 || x == 0.0f) {
        value = p[0];
    } else {
        value = eval_plan(build_plan(p, x), x);
    }
    if (as_json)
        std::cout << json{{"value", format_hex(value)}, {"decimal", format_decimal(value)}}.dump() << '\n';
    else
        std::cout << format_hex(value) << ' ' << format_decimal(value) << '\n';
    return 0;
}

int cmd_plan(const std::string& poly_path, const std::string& at)
{
    const auto p = load_polynomial(poly_path);
    const auto plan = build_plan(p, parse_float(at));
    std::cout << plan_to_json(plan, check_conditions(plan, p)).dump(2) << '\n';
    return 0;
}

int cmd_deflate(const std::string& poly_path, const std::string& at, const std::string& root)
{
    const auto p = load_polynomial(poly_path);
    const auto plan = build_plan(p, parse_float(at));
    std::cout << polynomial_to_json(deflate(plan, parse_float(root))).dump() << '\n';
    return 0;
}

int cmd_roots(const std::string& poly_path, const std::string& guesses_path)
{
    const auto p = load_polynomial(poly_path);
    const auto guesses = parse_guesses(read_file(guesses_path));
    const auto results = polish_all(p, guesses);
    bool all_converged = results.size() == guesses.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        all_converged = all_converged && results[i].converged;
        if (results[i].plan_strained)
            std::cerr << "warning: root " << i << " drifted far from its plan point; accuracy may suffer\n";
    }
    std::cout << root_results_to_json(results).dump(2) << '\n';
    return all_converged ? 0 : exit_no_convergence;
}

struct bench_args
{
    int order = 8;
    double difficulty = 1.0;
    int count = 128;
    std::uint64_t seed = 1;
    std::vector<int> orders;
    int rows = 1024;
    std::string out;
    bool delta_abs = false;
    bool literal_serendipity = false;
    bool fixed_budget = false;
};

std::string per_order_path(const std::string& out, int order)
{
    const std::filesystem::path path(out);
    auto name = path.stem().string() + "_n" + std::to_string(order) + path.extension().string();
    return (path.parent_path() / name).string();
}

void run_one(const random_spec& spec, const plan_options& options, const std::string& out)
{
    const auto result = run_experiment(spec, options);
    std::ofstream csv(out, std::ios::binary);
    if (!csv)
        throw parse_error("cannot write '" + out + "'");
    write_csv(csv, result.rows);
    std::cout << "order=" << spec.order << " difficulty=" << spec.difficulty << " count=" << spec.count
              << " seed=" << spec.seed << " skipped=" << result.skipped << " csv=" << out << '\n';
    if (!result.rows.empty())
        write_summary(std::cout, summarize(result.rows));
}

int cmd_bench(const bench_args& args)
{
    plan_options options;
    options.delta = args.delta_abs ? delta_mode::abs_max : delta_mode::signed_max;
    options.serendipity = args.literal_serendipity ? serendipity_mode::full_width : serendipity_mode::budget_relative;
    options.reduce_budget = !args.fixed_budget;

    random_spec spec;
    spec.difficulty = args.difficulty;
    spec.seed = args.seed;
    if (args.orders.empty()) {
        spec.order = args.order;
        spec.count = args.count;
        run_one(spec, options, args.out);
        return 0;
    }
    // One file per order so the CSV schema stays fixed; counts give `rows`
    // roots per order.
    for (int order : args.orders) {
        spec.order = order;
        spec.count = order > 0 ? std::max(1, args.rows / order) : 0;
        run_one(spec, options, per_order_path(args.out, order));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Accurate polynomial evaluation near zeros via nearby polynomials"};
    app.require_subcommand(1);

    std::string poly_path, at, method = "accurate", root, guesses_path;
    bool as_json = false;

    auto* eval = app.add_subcommand("eval", "Evaluate P at a point");
    eval->add_option("--poly", poly_path, "Polynomial JSON file")->required();
    eval->add_option("--at", at, "Evaluation point (decimal or hex float)")->required();
    eval->add_option("--method", method, "horner or accurate")->check(CLI::IsMember({"horner", "accurate"}));
    eval->add_flag("--json", as_json, "Print JSON");

    auto* plan = app.add_subcommand("plan", "Dump the nearby-polynomial plan for a point");
    plan->add_option("--poly", poly_path)->required();
    plan->add_option("--at", at)->required();

    auto* defl = app.add_subcommand("deflate", "Deflate P by a root through the plan built at --at");
    defl->add_option("--poly", poly_path)->required();
    defl->add_option("--at", at)->required();
    defl->add_option("--root", root)->required();

    auto* roots = app.add_subcommand("roots", "Polish roots from initial guesses, deflating as it goes");
    roots->add_option("--poly", poly_path)->required();
    roots->add_option("--guesses", guesses_path, "JSON array of guesses")->required();

    bench_args bargs;
    auto* bench = app.add_subcommand("bench", "Random-polynomial accuracy benchmark");
    bench->add_option("--order", bargs.order, "Polynomial order N")->check(CLI::PositiveNumber);
    bench->add_option("--difficulty", bargs.difficulty, "Difficulty D >= 1")->check(CLI::Range(1.0, 1e300));
    bench->add_option("--count", bargs.count, "Number of polynomials")->check(CLI::NonNegativeNumber);
    bench->add_option("--seed", bargs.seed, "RNG seed");
    bench->add_option("--orders", bargs.orders, "Sweep orders, e.g. 2,4,8")->delimiter(',');
    bench->add_option("--rows", bargs.rows, "Roots per order in a sweep")->check(CLI::PositiveNumber);
    bench->add_option("--out", bargs.out, "CSV output path")->required();
    bench->add_flag("--delta-abs", bargs.delta_abs, "Use max |delta| in the budget heuristic (diagnostic)");
    bench->add_flag("--literal-serendipity", bargs.literal_serendipity,
                    "Truncate x at M - R instead of M_hat - R (diagnostic)");
    bench->add_flag("--fixed-budget", bargs.fixed_budget, "Skip the reduced-bits heuristic (diagnostic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input;
    }

    try {
        if (*eval)
            return cmd_eval(poly_path, at, method, as_json);
        if (*plan)
            return cmd_plan(poly_path, at);
        if (*defl)
            return cmd_deflate(poly_path, at, root);
        if (*roots)
            return cmd_roots(poly_path, guesses_path);
        if (*bench)
            return cmd_bench(bargs);
    } catch (const overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_overflow;
    } catch (const stalled& e) {
        std::cerr << "error: " << e.what() << " (best iterate " << format_hex(e.best()) << ")\n";
        return exit_no_convergence;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
    return 0;
}
