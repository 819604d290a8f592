// main.cpp — bandrelax command line: single runs, size sweeps, regime and
// Hilbert-average checks. Exit codes: 0 success, 2 usage error, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandrelax/experiment.hpp"
#include "bandrelax/rng.hpp"

namespace {

using bandrelax::RunConfig;
using nlohmann::json;

struct CliOptions {
    RunConfig config;
    std::string config_file;
    bool samples_means_draws = false;  // hsa-check: --samples sets the MC draw count

    CLI::Option* n1 = nullptr;
    CLI::Option* n0 = nullptr;
    CLI::Option* spacing_upper = nullptr;
    CLI::Option* spacing_lower = nullptr;
    CLI::Option* coupling = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* seeds = nullptr;
    CLI::Option* t_max = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* sizes = nullptr;
    CLI::Option* complex_coupling = nullptr;
    CLI::Option* tau = nullptr;
    CLI::Option* p_ex = nullptr;
    CLI::Option* threads = nullptr;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
    o.n1 = cmd->add_option("--n1", o.config.params.n_upper,
                           "levels in the upper container band");
    o.n0 = cmd->add_option("--n0", o.config.params.n_lower,
                           "levels in the lower container band");
    o.spacing_upper = cmd->add_option("--spacing-upper", o.config.params.spacing_upper,
                                      "level spacing in the upper band");
    o.spacing_lower = cmd->add_option("--spacing-lower", o.config.params.spacing_lower,
                                      "level spacing in the lower band");
    o.coupling = cmd->add_option("--coupling", o.config.params.coupling_scale,
                                 "rms interaction matrix element");
    o.seed = cmd->add_option("--seed", o.config.params.seed, "master seed");
    o.seeds = cmd->add_option("--seeds", o.config.n_seeds, "seeds per sweep size");
    o.t_max = cmd->add_option("--t-max", o.config.t_max,
                              "trajectory length (default: five relaxation times)");
    o.samples = cmd->add_option(
        "--samples", o.samples_means_draws ? o.config.hsa_samples : o.config.n_samples,
        "sample count (trajectory points, or Monte-Carlo draws for hsa-check)");
    o.out = cmd->add_option("--out", o.config.output_path,
                            "output CSV file (run) or directory (sweep)");
    o.sizes = cmd->add_option("--sizes", o.config.sizes,
                              "upper-band sizes for the sweep")
                  ->delimiter(',');
    o.complex_coupling = cmd->add_flag("--complex-coupling",
                                       o.config.params.complex_coupling,
                                       "sample complex Gaussian coupling entries");
    o.tau = cmd->add_option("--tau", o.config.hsa_tau,
                            "step length for hsa-check (default: 3 tau1)");
    o.p_ex = cmd->add_option("--p-ex", o.config.hsa_p_ex,
                             "fixed excitation probability for hsa-check");
    o.threads = cmd->add_option("--threads", o.config.max_threads,
                                "worker threads for sweeps (default: all cores)");
    cmd->add_option("--config", o.config_file,
                    "JSON config file; command-line flags take precedence");
}

// Values from the config file apply only where no flag was given.
void apply_config_file(CliOptions& o) {
    if (o.config_file.empty()) return;
    std::ifstream in(o.config_file);
    if (!in) throw bandrelax::IoError("cannot open config file " + o.config_file);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file " + o.config_file + ": " + e.what());
    }

    auto take = [&](const CLI::Option* opt, const char* key, auto& field) {
        if (opt->count() == 0 && j.contains(key)) {
            j.at(key).get_to(field);
        }
    };
    take(o.n1, "n1", o.config.params.n_upper);
    take(o.n0, "n0", o.config.params.n_lower);
    take(o.spacing_upper, "spacing_upper", o.config.params.spacing_upper);
    take(o.spacing_lower, "spacing_lower", o.config.params.spacing_lower);
    take(o.coupling, "coupling", o.config.params.coupling_scale);
    take(o.seed, "seed", o.config.params.seed);
    take(o.seeds, "seeds", o.config.n_seeds);
    take(o.t_max, "t_max", o.config.t_max);
    if (o.samples_means_draws) {
        take(o.samples, "samples", o.config.hsa_samples);
    } else {
        take(o.samples, "samples", o.config.n_samples);
    }
    take(o.out, "out", o.config.output_path);
    take(o.sizes, "sizes", o.config.sizes);
    take(o.complex_coupling, "complex_coupling", o.config.params.complex_coupling);
    take(o.tau, "tau", o.config.hsa_tau);
    take(o.p_ex, "p_ex", o.config.hsa_p_ex);
    take(o.threads, "threads", o.config.max_threads);
}

void print_regime_warnings(const bandrelax::RegimeReport& r) {
    if (r.all_pass()) return;
    std::cerr << "warning: rate-theory validity conditions not all met:\n";
    auto line = [](const char* name, double value, bool pass, const char* want) {
        if (!pass) {
            std::cerr << "  " << name << " = " << value << " (want " << want << ")\n";
        }
    };
    line("cond_330", r.cond_330, r.pass_330, "<< 1");
    line("cond_301", r.cond_301, r.pass_301, "<< 1");
    line("cond_302", r.cond_302, r.pass_302, ">= 1");
    line("cond_320", r.cond_320, r.pass_320, ">= 1");
}

int do_run(CliOptions& o) {
    if (o.config.output_path.empty()) o.config.output_path = "run.csv";
    o.config.store_states = false;
    const bandrelax::RegimeReport report = bandrelax::regime_report(o.config.params);
    std::cout << bandrelax::regime_json(report);
    print_regime_warnings(report);
    const bandrelax::RunResult res = bandrelax::run_single(o.config);
    std::cout << "wrote " << res.csv_path << " and " << res.json_path << "\n"
              << "fitted rate " << res.fit.rate << " vs theory "
              << res.theory.total_rate() << ", equilibrium mean p_gr "
              << res.eq_mean_p_gr << " vs theory "
              << bandrelax::equilibrium(res.params.n_upper, res.params.n_lower).gr
              << "\n";
    return 0;
}

int do_sweep(CliOptions& o) {
    if (o.config.output_path.empty()) o.config.output_path = "sweep_out";
    const bandrelax::SweepResult sweep = bandrelax::run_sweep(o.config);
    std::cout << "wrote " << sweep.summary_path << "\n";
    for (const auto& s : sweep.summaries) {
        std::cout << "n1 = " << s.n_upper << ": mean max deviation from theory "
                  << s.mean_max_dev << ", mean fitted rate " << s.mean_fit_rate
                  << ", equilibrium mean p_gr " << s.mean_eq_p_gr << "\n";
    }
    return 0;
}

int do_regime(CliOptions& o) {
    o.config.params.validate();
    const bandrelax::RegimeReport report = bandrelax::regime_report(o.config.params);
    const std::string text = bandrelax::regime_json(report);
    std::cout << text;
    print_regime_warnings(report);
    if (!o.config.output_path.empty()) {
        bandrelax::write_text_file(o.config.output_path, text);
    }
    return 0;  // informational: pass/fail does not change the exit code
}

int do_hsa_check(CliOptions& o) {
    o.config.validate();
    bandrelax::ModelParams params = o.config.params;
    params.seed = bandrelax::rng::derive_seed(o.config.params.seed, 0);
    const bandrelax::Hamiltonian h = bandrelax::build_hamiltonian(params);
    const bandrelax::RateTheory theory = bandrelax::rate_constant(params);
    const double tau = o.config.hsa_tau > 0.0 ? o.config.hsa_tau : 3.0 * theory.tau1;
    const auto check = bandrelax::hilbert_average_check(
        h, tau, o.config.hsa_p_ex, o.config.hsa_samples,
        bandrelax::rng::derive_seed(o.config.params.seed, 1));
    const std::string text = bandrelax::hsa_check_json(check, params);
    std::cout << text;
    if (!o.config.output_path.empty()) {
        bandrelax::write_text_file(o.config.output_path, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bandrelax: exact relaxation dynamics of a two-level system "
                 "coupled to a two-band random-matrix environment"};
    app.require_subcommand(1);

    CliOptions run_opts, sweep_opts, regime_opts, hsa_opts;
    CLI::App* run_cmd =
        app.add_subcommand("run", "single trajectory, CSV + JSON sidecar");
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "convergence sweep over container sizes");
    CLI::App* regime_cmd =
        app.add_subcommand("regime", "print the rate-theory validity report");
    CLI::App* hsa_cmd = app.add_subcommand(
        "hsa-check", "Monte-Carlo verification of the sector averages");
    hsa_opts.samples_means_draws = true;
    add_common_options(run_cmd, run_opts);
    add_common_options(sweep_cmd, sweep_opts);
    add_common_options(regime_cmd, regime_opts);
    add_common_options(hsa_cmd, hsa_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) {
            apply_config_file(run_opts);
            run_opts.config.validate();
            return do_run(run_opts);
        }
        if (sweep_cmd->parsed()) {
            apply_config_file(sweep_opts);
            sweep_opts.config.validate();
            return do_sweep(sweep_opts);
        }
        if (regime_cmd->parsed()) {
            apply_config_file(regime_opts);
            return do_regime(regime_opts);
        }
        if (hsa_cmd->parsed()) {
            apply_config_file(hsa_opts);
            return do_hsa_check(hsa_opts);
        }
    } catch (const bandrelax::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
