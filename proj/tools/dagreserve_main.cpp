#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dagreserve/cli_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Schedulability toolkit for probabilistic conditional DAG tasks "
                 "on reservation systems"};
    app.require_subcommand(1);

    using namespace dagreserve::cli;

    std::string validate_input;
    CLI::App* validate = app.add_subcommand("validate", "Check a task-set file");
    validate->add_option("--input", validate_input, "task-set JSON file")->required();

    EnumerateArgs enum_args;
    std::string expect_file;
    CLI::App* enumerate = app.add_subcommand("enumerate", "List the DAG realizations of a task");
    enumerate->add_option("--input", enum_args.input, "task-set JSON file")->required();
    enumerate->add_option("--task", enum_args.task, "task name")->required();
    enumerate->add_flag("--json", enum_args.json_output, "machine-readable output");
    bool table = false;
    enumerate->add_flag("--table", table, "fixed-width table output (default)");
    enumerate->add_option("--expect", expect_file,
                          "reference rows; mismatching lengths are footnoted");

    AnalyzeArgs analyze_args;
    double analyze_p = 0.0;
    CLI::App* analyze = app.add_subcommand("analyze", "Miss-probability bounds for one config");
    analyze->add_option("--input", analyze_args.input, "task-set JSON file")->required();
    analyze->add_option("--task", analyze_args.task, "task name")->required();
    analyze->add_option("--m", analyze_args.m, "in-parallel reservations")->required();
    analyze->add_option("--e", analyze_args.e, "service budget E")->required();
    CLI::Option* analyze_p_opt =
        analyze->add_option("--p", analyze_p, "replenishment period (default: task period)");

    OptimizeArgs optimize_args;
    double optimize_eps = 0.0;
    CLI::App* optimize = app.add_subcommand("optimize", "Synthesize minimal reservations");
    optimize->add_option("--input", optimize_args.input, "task-set JSON file")->required();
    optimize->add_option("--output", optimize_args.output, "result JSON file")->required();
    optimize->add_flag("--tight-bound", optimize_args.tight_bound,
                       "use the chain bound instead of the power bound");
    CLI::Option* optimize_eps_opt =
        optimize->add_option("--eps", optimize_eps, "binary-search bracket width");

    SimulateArgs sim_args;
    double sim_p = 0.0;
    std::uint64_t sim_seed = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Discrete-event simulation of one task");
    simulate->add_option("--input", sim_args.input, "task-set JSON file")->required();
    simulate->add_option("--task", sim_args.task, "task name")->required();
    simulate->add_option("--m", sim_args.m, "in-parallel reservations")->required();
    simulate->add_option("--e", sim_args.e, "service budget E")->required();
    CLI::Option* sim_p_opt =
        simulate->add_option("--p", sim_p, "replenishment period (default: task period)");
    simulate->add_option("--jobs", sim_args.jobs, "number of jobs")->required();
    CLI::Option* sim_seed_opt =
        simulate->add_option("--seed", sim_seed, "RNG seed (fallback: DAGRESERVE_SEED)");
    simulate->add_option("--supply", sim_args.supply, "front|back|worst_case");
    simulate->add_flag("--check-lemma", sim_args.check_lemma,
                       "verify the work/service inequality on the trace");
    simulate->add_option("--output", sim_args.output, "NDJSON trace file")->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(validate_input, std::cout, std::cerr);
    if (enumerate->parsed()) {
        if (!expect_file.empty()) enum_args.expect_file = expect_file;
        return cmd_enumerate(enum_args, std::cout, std::cerr);
    }
    if (analyze->parsed()) {
        if (analyze_p_opt->count() > 0) analyze_args.p = analyze_p;
        return cmd_analyze(analyze_args, std::cout, std::cerr);
    }
    if (optimize->parsed()) {
        if (optimize_eps_opt->count() > 0) optimize_args.eps = optimize_eps;
        return cmd_optimize(optimize_args, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
        if (sim_p_opt->count() > 0) sim_args.p = sim_p;
        if (sim_seed_opt->count() > 0) sim_args.seed = sim_seed;
        return cmd_simulate(sim_args, std::cout, std::cerr);
    }
    return 0;
}
