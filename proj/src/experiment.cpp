// experiment.cpp — Orchestration, metrics, CSV/JSON emission

#include "bandrelax/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "bandrelax/rng.hpp"

namespace bandrelax {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    params.validate();
    if (n_samples < 2) throw std::invalid_argument("RunConfig: n_samples must be >= 2");
    if (n_seeds < 1) throw std::invalid_argument("RunConfig: n_seeds must be >= 1");
    if (hsa_samples < 2) throw std::invalid_argument("RunConfig: hsa_samples must be >= 2");
    if (hsa_p_ex < 0.0 || hsa_p_ex > 1.0) {
        throw std::invalid_argument("RunConfig: hsa_p_ex must lie in [0, 1]");
    }
}

double RunConfig::resolved_t_max(const RateTheory& theory) const {
    if (t_max > 0.0) return t_max;
    if (theory.total_rate() > 0.0) return 5.0 / theory.total_rate();
    throw std::invalid_argument(
        "RunConfig: t_max must be given explicitly when the decay rate is zero");
}

std::vector<double> make_time_grid(double t_max, int n_samples) {
    if (!(t_max > 0.0)) throw std::invalid_argument("make_time_grid: t_max must be > 0");
    if (n_samples < 2) throw std::invalid_argument("make_time_grid: need >= 2 samples");
    std::vector<double> times(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        times[i] = t_max * static_cast<double>(i) / (n_samples - 1);
    }
    return times;
}

FitResult fit_decay_rate(const std::vector<double>& times,
                         const std::vector<double>& p_gr, double p_gr_inf,
                         double window_end) {
    FitResult fit;
    fit.window_end = window_end;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < times.size() && times[i] <= window_end; ++i) {
        const double y = p_gr[i] - p_gr_inf;
        if (y <= 0.0) continue;
        const double ly = std::log(y);
        sx += times[i];
        sy += ly;
        sxx += times[i] * times[i];
        sxy += times[i] * ly;
        ++n;
    }
    fit.n_points = n;
    if (n < 2) return fit;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return fit;
    const double slope = (n * sxy - sx * sy) / denom;
    fit.rate = -slope;
    fit.log_amplitude = (sy - slope * sx) / n;
    return fit;
}

namespace {

double window_mean(const Trajectory& traj, double t_lo, double t_hi,
                   double (*value)(const ObservableRecord&)) {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : traj.records) {
        if (r.t < t_lo || r.t > t_hi) continue;
        sum += value(r);
        ++n;
    }
    return n > 0 ? sum / n : 0.0;
}

RunResult execute_run(const ModelParams& run_params, std::uint64_t run_seed,
                      const RunConfig& config, const std::string& csv_path) {
    RunResult res;
    res.params = run_params;
    res.run_seed = run_seed;
    res.coupling_seed = rng::derive_seed(run_seed, 0);
    res.state_seed = rng::derive_seed(run_seed, 1);

    ModelParams params = run_params;
    params.seed = res.coupling_seed;
    const Hamiltonian h = build_hamiltonian(params);
    const PureState psi0 = initial_state(params, res.state_seed);

    res.theory = rate_constant(params);
    res.regime = regime_report(params);
    res.t_max = config.resolved_t_max(res.theory);

    const std::vector<double> times = make_time_grid(res.t_max, config.n_samples);
    res.trajectory = evolve_exact(h, psi0, times, config.store_states);
    const auto& records = res.trajectory.records;

    const double relax_time = res.theory.total_rate() > 0.0
                                  ? 1.0 / res.theory.total_rate()
                                  : res.t_max / 5.0;
    const double p_ex0 = records.front().p_ex;
    const SectorProbabilities eq = equilibrium(params.n_upper, params.n_lower);

    for (const auto& r : records) {
        if (r.t <= 3.0 * relax_time) {
            const double dev =
                std::abs(r.p_gr - rate_solution(res.theory, p_ex0, r.t).gr);
            res.max_dev_theory = std::max(res.max_dev_theory, dev);
        }
        res.max_norm_err = std::max(res.max_norm_err, r.norm_err);
        res.max_prob_sum_err =
            std::max(res.max_prob_sum_err, std::abs(r.p_ex + r.p_gr - 1.0));
    }

    const double energy_scale =
        std::max({std::abs(res.trajectory.energies.front()),
                  h.diag.cwiseAbs().maxCoeff(), params.coupling_scale});
    for (double e : res.trajectory.energies) {
        const double drift = std::abs(e - res.trajectory.energies.front());
        res.max_energy_drift =
            std::max(res.max_energy_drift, energy_scale > 0.0 ? drift / energy_scale : drift);
    }

    const double eq_lo = 3.0 * relax_time;
    const double eq_hi = 5.0 * relax_time;
    res.eq_mean_p_gr =
        window_mean(res.trajectory, eq_lo, eq_hi, [](const ObservableRecord& r) { return r.p_gr; });
    res.eq_mean_eta =
        window_mean(res.trajectory, eq_lo, eq_hi, [](const ObservableRecord& r) { return r.eta; });
    res.eq_mean_bound = window_mean(res.trajectory, eq_lo, eq_hi, record_eta_bound);

    std::vector<double> p_gr(records.size());
    std::transform(records.begin(), records.end(), p_gr.begin(),
                   [](const ObservableRecord& r) { return r.p_gr; });
    res.fit = fit_decay_rate(times, p_gr, eq.gr, std::min(2.0 * relax_time, res.t_max));

    res.final_eta = records.back().eta;
    res.stationary_bound_final =
        records.front().purity_s / records.back().purity_s - 1.0;
    res.p_r_drift =
        std::abs(records.back().purity_r / records.front().purity_r - 1.0);

    if (!csv_path.empty()) {
        write_text_file(csv_path, trajectory_csv(res.trajectory, res.theory, p_ex0));
        res.csv_path = csv_path;
        res.json_path = fs::path(csv_path).replace_extension(".json").string();
        write_text_file(res.json_path, run_json(res));
    }
    return res;
}

}  // namespace

RunResult run_single(const RunConfig& config) {
    config.validate();
    return execute_run(config.params, config.params.seed, config, config.output_path);
}

SweepResult run_sweep(const RunConfig& config) {
    config.validate();
    if (config.sizes.empty()) {
        throw std::invalid_argument("run_sweep: size list must not be empty");
    }
    for (int n1 : config.sizes) {
        if (n1 < 2 || n1 % 2 != 0) {
            throw std::invalid_argument(
                "run_sweep: sizes must be even and >= 2 (n_lower = n_upper/2)");
        }
    }
    if (!config.output_path.empty()) {
        std::error_code ec;
        fs::create_directories(config.output_path, ec);
        if (ec) throw IoError("cannot create output directory " + config.output_path);
    }

    const int n_entries = static_cast<int>(config.sizes.size()) * config.n_seeds;
    std::vector<RunResult> runs(n_entries);

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n_entries; i = next.fetch_add(1)) {
            try {
                const int size_idx = i / config.n_seeds;
                const int seed_idx = i % config.n_seeds;
                ModelParams params = config.params;
                params.n_upper = config.sizes[size_idx];
                params.n_lower = config.sizes[size_idx] / 2;
                params.seed = rng::derive_seed(config.params.seed,
                                               static_cast<std::uint64_t>(i));
                std::string csv;
                if (!config.output_path.empty()) {
                    char name[64];
                    std::snprintf(name, sizeof(name), "run_n1-%04d_seed-%d.csv",
                                  params.n_upper, seed_idx);
                    csv = (fs::path(config.output_path) / name).string();
                }
                RunConfig entry = config;
                entry.store_states = false;
                runs[i] = execute_run(params, params.seed, entry, csv);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    int n_threads = config.max_threads > 0
                        ? config.max_threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, n_entries));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    SweepResult sweep;
    sweep.runs = std::move(runs);
    for (std::size_t s = 0; s < config.sizes.size(); ++s) {
        SweepSizeSummary sum;
        sum.n_upper = config.sizes[s];
        sum.n_lower = config.sizes[s] / 2;
        for (int j = 0; j < config.n_seeds; ++j) {
            const RunResult& r = sweep.runs[s * config.n_seeds + j];
            sum.mean_max_dev += r.max_dev_theory;
            sum.mean_fit_rate += r.fit.rate;
            sum.mean_eq_p_gr += r.eq_mean_p_gr;
        }
        sum.mean_max_dev /= config.n_seeds;
        sum.mean_fit_rate /= config.n_seeds;
        sum.mean_eq_p_gr /= config.n_seeds;
        sweep.summaries.push_back(sum);
    }

    if (!config.output_path.empty()) {
        sweep.summary_path =
            (fs::path(config.output_path) / "sweep_summary.json").string();
        write_text_file(sweep.summary_path, sweep_json(sweep, config));
    }
    return sweep;
}

// --- serialization ---

namespace {

void append_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

json theory_json(const RateTheory& t) {
    return {{"c", t.c},
            {"tau1", t.tau1},
            {"tau2", t.tau2},
            {"total_rate", t.total_rate()},
            {"p_ex_inf", equilibrium(t.n_upper, t.n_lower).ex},
            {"p_gr_inf", equilibrium(t.n_upper, t.n_lower).gr}};
}

json params_json(const ModelParams& p) {
    return {{"n_upper", p.n_upper},
            {"n_lower", p.n_lower},
            {"spacing_upper", p.spacing_upper},
            {"spacing_lower", p.spacing_lower},
            {"coupling_scale", p.coupling_scale},
            {"complex_coupling", p.complex_coupling}};
}

json regime_to_json(const RegimeReport& r) {
    return {{"cond_330", r.cond_330}, {"pass_330", r.pass_330},
            {"cond_301", r.cond_301}, {"pass_301", r.pass_301},
            {"cond_302", r.cond_302}, {"pass_302", r.pass_302},
            {"cond_320", r.cond_320}, {"pass_320", r.pass_320},
            {"tau1", r.tau1},         {"tau2", r.tau2},
            {"c", r.c},               {"all_pass", r.all_pass()}};
}

json stats_json(const SampleStats& s) {
    return {{"mean", s.mean}, {"std_dev", s.std_dev}, {"std_err", s.std_err}};
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const RateTheory& theory,
                           double p_ex0) {
    std::string out =
        "t,p_ex,p_gr,p_ex_theory,p_gr_theory,purity_s,purity_r,p_c,eta,norm_err\n";
    out.reserve(out.size() + traj.records.size() * 160);
    for (const auto& r : traj.records) {
        const SectorProbabilities th = rate_solution(theory, p_ex0, r.t);
        const double row[10] = {r.t,   r.p_ex,     r.p_gr,     th.ex,  th.gr,
                                r.purity_s, r.purity_r, r.p_c, r.eta, r.norm_err};
        for (int k = 0; k < 10; ++k) {
            if (k > 0) out += ',';
            append_value(out, row[k]);
        }
        out += '\n';
    }
    return out;
}

std::string regime_json(const RegimeReport& report) {
    return regime_to_json(report).dump(2) + "\n";
}

std::string run_json(const RunResult& r) {
    json j;
    j["params"] = params_json(r.params);
    j["seeds"] = {{"run", r.run_seed},
                  {"coupling", r.coupling_seed},
                  {"state", r.state_seed}};
    j["grid"] = {{"t_max", r.t_max},
                 {"n_samples", r.trajectory.times.size()}};
    j["theory"] = theory_json(r.theory);
    j["regime"] = regime_to_json(r.regime);
    j["fit"] = {{"rate", r.fit.rate},
                {"theory_rate", r.theory.total_rate()},
                {"window_end", r.fit.window_end},
                {"n_points", r.fit.n_points}};
    j["equilibrium"] = {{"mean_p_gr", r.eq_mean_p_gr},
                        {"theory_p_gr", equilibrium(r.params.n_upper, r.params.n_lower).gr},
                        {"max_dev_theory", r.max_dev_theory}};
    j["correlations"] = {{"eq_mean_eta", r.eq_mean_eta},
                         {"eq_mean_bound", r.eq_mean_bound},
                         {"final_eta", r.final_eta},
                         {"stationary_bound_final", r.stationary_bound_final},
                         {"p_r_drift", r.p_r_drift}};
    j["conservation"] = {{"max_norm_err", r.max_norm_err},
                         {"max_energy_drift", r.max_energy_drift},
                         {"max_prob_sum_err", r.max_prob_sum_err}};
    j["output"] = {{"csv", r.csv_path}};
    return j.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& sweep, const RunConfig& config) {
    json j;
    j["n_seeds"] = config.n_seeds;
    j["n_samples"] = config.n_samples;
    j["master_seed"] = config.params.seed;
    json sizes = json::array();
    for (std::size_t s = 0; s < sweep.summaries.size(); ++s) {
        const SweepSizeSummary& sum = sweep.summaries[s];
        json entry;
        entry["n_upper"] = sum.n_upper;
        entry["n_lower"] = sum.n_lower;
        entry["mean_max_dev"] = sum.mean_max_dev;
        entry["mean_fit_rate"] = sum.mean_fit_rate;
        entry["mean_eq_p_gr"] = sum.mean_eq_p_gr;
        const RunResult& first = sweep.runs[s * config.n_seeds];
        entry["theory"] = theory_json(first.theory);
        entry["regime"] = regime_to_json(first.regime);
        json runs = json::array();
        for (int k = 0; k < config.n_seeds; ++k) {
            const RunResult& r = sweep.runs[s * config.n_seeds + k];
            runs.push_back({{"seed_index", k},
                            {"run_seed", r.run_seed},
                            {"max_dev", r.max_dev_theory},
                            {"fit_rate", r.fit.rate},
                            {"eq_mean_p_gr", r.eq_mean_p_gr},
                            {"eq_mean_eta", r.eq_mean_eta},
                            {"eq_mean_bound", r.eq_mean_bound},
                            {"csv", r.csv_path}});
        }
        entry["runs"] = std::move(runs);
        sizes.push_back(std::move(entry));
    }
    j["sizes"] = std::move(sizes);
    return j.dump(2) + "\n";
}

std::string hsa_check_json(const HilbertAverageCheck& c, const ModelParams& params) {
    json j;
    j["params"] = params_json(params);
    j["n_samples"] = c.n_samples;
    j["p_ex_fixed"] = c.p_ex_fixed;
    j["tau"] = c.tau;
    j["cross_re"] = stats_json(c.cross_re);
    j["cross_im"] = stats_json(c.cross_im);
    j["second_ex"] = stats_json(c.second_ex);
    j["second_gr"] = stats_json(c.second_gr);
    j["predicted_second_ex"] = c.predicted_second_ex;
    j["predicted_second_gr"] = c.predicted_second_gr;
    j["trace_ex"] = c.trace_ex;
    j["trace_gr"] = c.trace_gr;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing " + path);
}

}  // namespace bandrelax
