// experiment.hpp — Run orchestration: configs, single runs, size sweeps, output files

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandrelax/hsa.hpp"
#include "bandrelax/model.hpp"
#include "bandrelax/propagator.hpp"

namespace bandrelax {

// Output-path problems map to a dedicated exit code in the CLI.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams params;
    double t_max{-1.0};  // <= 0: auto, five relaxation times
    int n_samples{500};
    int n_seeds{4};
    std::vector<int> sizes{50, 100, 200, 400, 800};  // upper-band sizes for sweeps
    std::string output_path;  // CSV file for run, directory for sweep
    bool store_states{false};
    int max_threads{0};  // 0: hardware concurrency

    double hsa_tau{-1.0};  // <= 0: auto, 3 * tau1
    double hsa_p_ex{0.3};
    int hsa_samples{1000};

    void validate() const;
    double resolved_t_max(const RateTheory& theory) const;
};

// Uniform grid over [0, t_max] with n_samples points.
std::vector<double> make_time_grid(double t_max, int n_samples);

struct FitResult {
    double rate{0.0};
    double log_amplitude{0.0};
    double window_end{0.0};
    int n_points{0};
};

// Log-linear least squares of p_gr(t) - p_gr_inf over t <= window_end.
// Samples at or below p_gr_inf are skipped; fewer than two usable points
// yield rate 0 with n_points reporting the shortfall.
FitResult fit_decay_rate(const std::vector<double>& times,
                         const std::vector<double>& p_gr, double p_gr_inf,
                         double window_end);

// Everything one trajectory produces. Deviation and equilibrium metrics use
// the relaxation time T = 1/(C (n_lower + n_upper)): max deviation from the
// rate-equation curve over [0, 3T], window averages over [3T, 5T], fit window
// [0, 2T]. When the decay rate is zero, T falls back to t_max / 5.
struct RunResult {
    ModelParams params;
    std::uint64_t run_seed{0};
    std::uint64_t coupling_seed{0};
    std::uint64_t state_seed{0};
    double t_max{0.0};
    RateTheory theory;
    RegimeReport regime;
    Trajectory trajectory;
    FitResult fit;
    double max_dev_theory{0.0};
    double eq_mean_p_gr{0.0};
    double eq_mean_eta{0.0};
    double eq_mean_bound{0.0};
    double final_eta{0.0};
    double stationary_bound_final{0.0};  // P_s(0)/P_s(end) - 1
    double p_r_drift{0.0};               // |P_r(end)/P_r(0) - 1|
    double max_norm_err{0.0};
    double max_energy_drift{0.0};  // relative to the energy scale
    double max_prob_sum_err{0.0};
    std::string csv_path;
    std::string json_path;
};

// One trajectory at config.params. Seeding contract: run_seed is
// config.params.seed; the coupling matrix uses derive_seed(run_seed, 0) and
// the initial container superposition derive_seed(run_seed, 1). Writes a CSV
// plus a JSON sidecar when output_path is set.
RunResult run_single(const RunConfig& config);

struct SweepSizeSummary {
    int n_upper{0};
    int n_lower{0};
    double mean_max_dev{0.0};
    double mean_fit_rate{0.0};
    double mean_eq_p_gr{0.0};
};

struct SweepResult {
    std::vector<RunResult> runs;  // sizes-major, seed-minor order
    std::vector<SweepSizeSummary> summaries;
    std::string summary_path;
};

// Convergence sweep over container sizes: for each n1 in config.sizes (must
// be even) runs n_seeds trajectories with n_upper = n1, n_lower = n1/2 and
// the configured spacings held fixed. Entry (i, j) derives its run seed as
// derive_seed(master, i * n_seeds + j). Entries execute in parallel; outputs
// are deterministic functions of the config. Writes per-run CSV/JSON into
// output_path (a directory) and a sweep_summary.json.
SweepResult run_sweep(const RunConfig& config);

// --- serialization (shared between library, CLI and tests) ---

// Header: t,p_ex,p_gr,p_ex_theory,p_gr_theory,purity_s,purity_r,p_c,eta,norm_err
// Values as decimal ASCII with 12 significant digits.
std::string trajectory_csv(const Trajectory& traj, const RateTheory& theory,
                           double p_ex0);
std::string regime_json(const RegimeReport& report);
std::string run_json(const RunResult& result);
std::string sweep_json(const SweepResult& sweep, const RunConfig& config);
std::string hsa_check_json(const HilbertAverageCheck& check, const ModelParams& params);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bandrelax
