// seqopt command-line driver.
//
// Subcommands:
//   validate    check a config file and its design space
//   oracle      run the full-factorial search and export the global front
//   sequential  run the grouping x bound sequential grid
//   nsga2       run the repeated NSGA-II protocol
//   morris      run the elementary-effects screening
//   suite       everything above plus the report tables
//   report      regenerate report files from an existing summary.json
//
// Exit codes: 0 success, 2 config error, 3 budget refusal, 4 backend error.

#include <exception>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqopt/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::string out_dir;
    std::optional<std::string> count_mode;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    cmd->add_option("--config", args.config_path, "experiment config file (JSON)")
        ->required(config_required);
    cmd->add_option("--seed", args.seed, "override the config's root seed");
    cmd->add_option("--jobs", args.jobs, "worker threads for evaluation batches")
        ->check(CLI::Range(1u, 256u));
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--count-mode", args.count_mode, "evaluation counter for metrics")
        ->check(CLI::IsMember({"unique", "raw"}));
}

seqopt::ExperimentConfig load(const CommonArgs& args) {
    seqopt::ExperimentConfig cfg = seqopt::load_config(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.count_mode) cfg.count_mode = *args.count_mode == "raw" ? seqopt::CountMode::raw
                                                                    : seqopt::CountMode::unique;
    return cfg;
}

void print_rows(const seqopt::SuiteReport& report) {
    for (const seqopt::SequentialRow& row : report.rows) {
        std::cout << "  " << row.grouping << " / " << row.bound << " / " << row.run
                  << ": pareto=" << row.final_set.size() << " unique=" << row.counts.unique_evaluations
                  << " raw=" << row.counts.raw_requests;
        if (row.metrics)
            std::cout << " global=" << row.metrics->n_global_found << "/"
                      << row.metrics->n_global_total
                      << " load=" << seqopt::format_fixed(100.0 * row.metrics->computational_load, 1)
                      << "%";
        std::cout << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"sequential multi-objective design optimization toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* c_validate = app.add_subcommand("validate", "validate a config file");
    CLI::App* c_oracle = app.add_subcommand("oracle", "full-factorial global Pareto set");
    CLI::App* c_sequential = app.add_subcommand("sequential", "sequential search grid");
    CLI::App* c_nsga2 = app.add_subcommand("nsga2", "NSGA-II repeated-run protocol");
    CLI::App* c_morris = app.add_subcommand("morris", "Morris elementary-effects screening");
    CLI::App* c_suite = app.add_subcommand("suite", "full benchmark suite with report files");
    CLI::App* c_report = app.add_subcommand("report", "regenerate report files from summary.json");
    for (CLI::App* cmd : {c_validate, c_oracle, c_sequential, c_nsga2, c_morris, c_suite})
        add_common(cmd, args);
    std::string summary_path;
    c_report->add_option("--summary", summary_path, "existing summary.json")->required();
    c_report->add_option("--out", args.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (c_report->parsed()) {
        auto [space, report] = seqopt::load_suite_report(summary_path);
        auto files = seqopt::export_report(report, space, args.out_dir);
        std::cout << "wrote " << files.size() << " files to " << args.out_dir << "\n";
        return 0;
    }

    if (c_validate->parsed()) {
        seqopt::ExperimentConfig cfg = load(args); // throws ConfigError on violations
        auto combos = cfg.space.combination_count();
        std::cout << "config ok: " << cfg.space.variable_count() << " variables, ";
        if (combos) std::cout << *combos << " combinations";
        else std::cout << "combination count exceeds 2^64";
        std::cout << ", " << cfg.groupings.size() << " groupings, " << cfg.bounds.size()
                  << " bounds\n";
        return 0;
    }

    seqopt::ExperimentConfig cfg = load(args);
    if (c_oracle->parsed()) {
        cfg.nsga2.enabled = false;
        cfg.morris.enabled = false;
        cfg.groupings.clear();
        cfg.bounds.clear();
        cfg.full_factorial.enabled = true;
        seqopt::SuiteReport report = seqopt::run_suite(cfg, args.jobs);
        std::cout << "global Pareto set: " << report.global_set->size() << " solutions, "
                  << report.oracle_counts.unique_evaluations << " evaluations\n";
        seqopt::export_report(report, cfg.space, cfg.output_dir);
        return 0;
    }
    if (c_sequential->parsed()) {
        cfg.nsga2.enabled = false;
        cfg.morris.enabled = false;
        seqopt::SuiteReport report = seqopt::run_suite(cfg, args.jobs);
        print_rows(report);
        seqopt::export_report(report, cfg.space, cfg.output_dir);
        return 0;
    }
    if (c_nsga2->parsed()) {
        cfg.morris.enabled = false;
        seqopt::SuiteReport report = seqopt::run_suite(cfg, args.jobs);
        std::cout << "NSGA-II budget " << report.nsga2_budget << ", kept " << report.nsga2_kept.size()
                  << " of " << report.nsga2_runs << " runs\n";
        for (const seqopt::Nsga2RunReport& run : report.nsga2_kept) {
            std::cout << "  seed " << run.seed << ": front=" << run.front.size();
            if (run.global_found) std::cout << " global=" << *run.global_found;
            std::cout << "\n";
        }
        seqopt::export_report(report, cfg.space, cfg.output_dir);
        return 0;
    }
    if (c_morris->parsed()) {
        cfg.nsga2.enabled = false;
        cfg.full_factorial.enabled = false;
        cfg.groupings.clear();
        cfg.bounds.clear();
        seqopt::SuiteReport report = seqopt::run_suite(cfg, args.jobs);
        for (const seqopt::MorrisVariableResult& v : report.morris->variables) {
            std::cout << "  " << v.variable << ":";
            for (std::size_t k = 0; k < v.mu_star.size(); ++k)
                std::cout << " mu*=" << v.mu_star[k] << " sigma=" << v.sigma[k];
            std::cout << "\n";
        }
        seqopt::export_report(report, cfg.space, cfg.output_dir);
        return 0;
    }
    // suite
    seqopt::SuiteReport report = seqopt::run_suite(cfg, args.jobs);
    if (report.global_set)
        std::cout << "oracle: " << report.global_set->size() << " global optima over "
                  << report.space_combinations << " combinations\n";
    print_rows(report);
    if (report.nsga2_enabled)
        std::cout << "NSGA-II: budget " << report.nsga2_budget << ", kept "
                  << report.nsga2_kept.size() << " runs\n";
    auto files = seqopt::export_report(report, cfg.space, cfg.output_dir);
    std::cout << "wrote " << files.size() << " files to " << cfg.output_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const seqopt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const seqopt::BudgetError& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return 3;
    } catch (const seqopt::BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
