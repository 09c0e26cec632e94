#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "emdut/core.hpp"

using namespace emdut::cli;

namespace {

constexpr int kExitBudget = 1;
constexpr int kExitInput = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact earth mover's distance under translation"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and print JSON");
    solve_cmd->add_option("problem", solve_opt.problem, "emd, emdut1d or emdut-hd")
        ->required()
        ->check(CLI::IsMember({"emd", "emdut1d", "emdut-hd"}));
    solve_cmd->add_option("--blue", solve_opt.blue, "Blue point-set file")->required();
    solve_cmd->add_option("--red", solve_opt.red, "Red point-set file")->required();
    solve_cmd->add_option("--metric", solve_opt.metric, "l1 or linf")->capture_default_str();
    solve_cmd->add_option("--algorithm", solve_opt.algorithm,
                          "emd: hungarian|monotone; emdut1d: sweep|oracle|symmetric; emdut-hd: exact");
    solve_cmd->add_option("--strategy", solve_opt.strategy, "emdut-hd search: auto|enumerate|branch-and-bound")
        ->capture_default_str();
    solve_cmd->add_option("--budget", solve_opt.budget, "emdut-hd work budget")->capture_default_str();

    auto* gen_cmd = app.add_subcommand("gen", "Write a reduction instance and its threshold sidecar");
    gen_cmd->require_subcommand(1);
    GenOvOptions ov_opt;
    auto* gen_ov_cmd = gen_cmd->add_subcommand("ov", "Orthogonal-vectors instance on the line");
    gen_ov_cmd->add_option("--vectors", [&](const CLI::results_t& files) {
                   ov_opt.x_path = files.at(0);
                   ov_opt.y_path = files.at(1);
                   return true;
               }, "X and Y vector files")
        ->expected(2)
        ->required();
    gen_ov_cmd->add_option("--out", ov_opt.out, "Output prefix")->required();
    GenCliqueOptions clique_opt;
    auto* gen_clique_cmd = gen_cmd->add_subcommand("clique", "k-clique instance");
    gen_clique_cmd->add_option("--variant", clique_opt.variant, "l1-asym, l1-sym or linf-sym")
        ->required()
        ->check(CLI::IsMember({"l1-asym", "l1-sym", "linf-sym"}));
    gen_clique_cmd->add_option("--k", clique_opt.k, "Clique size")->required();
    gen_clique_cmd->add_option("--graph", clique_opt.graph, "Graph file")->required();
    gen_clique_cmd->add_option("--out", clique_opt.out, "Output prefix")->required();

    auto* bench_cmd = app.add_subcommand("bench", "Time the sweep on random instances and print CSV");
    bench_cmd->require_subcommand(1);
    BenchOptions bench_opt;
    auto* bench_sweep_cmd = bench_cmd->add_subcommand("sweep", "n = m random integer instances");
    bench_sweep_cmd->add_option("--sizes", bench_opt.sizes, "Comma-separated sizes")
        ->delimiter(',')
        ->capture_default_str();
    bench_sweep_cmd->add_option("--seed", bench_opt.seed, "Instance seed")->capture_default_str();
    bench_sweep_cmd->add_option("--reps", bench_opt.reps, "Timed runs per size; the fastest is reported")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (solve_cmd->parsed()) {
            std::cout << solve(solve_opt).dump(2) << '\n';
        } else if (gen_ov_cmd->parsed()) {
            std::cout << gen_ov(ov_opt).dump(2) << '\n';
        } else if (gen_clique_cmd->parsed()) {
            std::cout << gen_clique(clique_opt).dump(2) << '\n';
        } else if (bench_sweep_cmd->parsed()) {
            bench_sweep(bench_opt, std::cout);
        }
    } catch (const emdut::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
