// hsa.hpp — Rate theory from Hilbert-space averaging: rate constant, validity
// conditions, rate-equation solutions, and Monte-Carlo verification of the
// sector averages that justify the closed dynamics.
//
// Replacing state-specific matrix elements by their averages over all pure
// states with the same sector probabilities turns the truncated short-time
// step into a closed map on (p_ex, p_gr). In the linear regime of the trace
// growth this map iterates into a two-level rate equation with golden-rule
// rate constant C = 2 pi lambda^2 / band_width per target level.

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "bandrelax/model.hpp"
#include "bandrelax/propagator.hpp"

namespace bandrelax {

struct RateTheory {
    double c{0.0};    // transition rate per target level
    int n_upper{0};
    int n_lower{0};
    double tau1{0.0};  // onset of the linear regime, 4 pi / band_width
    double tau2{0.0};  // end of the linear regime, n_upper * tau1

    // decay rate of p_ex towards equilibrium
    double total_rate() const { return c * (n_upper + n_lower); }
    bool in_linear_regime(double tau) const { return tau > tau1 && tau < tau2; }
};

RateTheory rate_constant(const ModelParams& params);

// The four dimensionless validity numbers of the rate description, evaluated
// at the boundaries of the linear regime. Field names follow the CLI's JSON
// schema. The first pair must be small (single-step transfer stays
// perturbative at the regime onset), the second pair at least one (the regime
// window is wide enough to iterate in).
struct RegimeReport {
    double cond_330{0.0};  // 8 pi^2 (lambda/spacing_lower)^2 / n_lower,  << 1
    double cond_301{0.0};  // 8 pi^2 (lambda/spacing_upper)^2 / n_upper,  << 1
    double cond_302{0.0};  // 8 pi^2 (lambda/spacing_lower)^2,            >= 1
    double cond_320{0.0};  // 8 pi^2 (lambda/spacing_upper)^2,            >= 1
    bool pass_330{false};
    bool pass_301{false};
    bool pass_302{false};
    bool pass_320{false};
    double tau1{0.0};
    double tau2{0.0};
    double c{0.0};

    bool all_pass() const { return pass_330 && pass_301 && pass_302 && pass_320; }
};

// "Much less than one" is flagged as pass at <= 0.25; the raw numbers are
// always reported so callers can judge for themselves.
inline constexpr double kMuchLessThanOne = 0.25;

RegimeReport regime_report(const ModelParams& params);

// Solution of dp_ex/dt = C n_lower p_gr - C n_upper p_ex for an arbitrary
// initial p_ex; components sum to 1 exactly.
SectorProbabilities rate_solution(const RateTheory& theory, double p_ex0, double t);

// Long-time equilibrium (n_lower/(n_lower+n_upper), n_upper/(n_lower+n_upper)).
SectorProbabilities equilibrium(int n_upper, int n_lower);

// f(w) = sin^2(w tau / 2) / w^2, the golden-rule peak; f(0) = tau^2/4.
double peak_function(double omega, double tau);

// Linear-regime prediction for the sector trace of U1^2,
//   2 pi lambda^2 n_upper n_lower tau / band_width,
// symmetric under exchanging the bands. Warns on stderr when tau lies outside
// (tau1, tau2).
double u1_trace_prediction(const ModelParams& params, double tau);

// One step of the closed short-time map; preserves p_ex + p_gr exactly.
// Warns on stderr when C tau max(n_upper, n_lower) > 1 (step leaves [0,1]).
SectorProbabilities short_step_prediction(const RateTheory& theory, double p_ex0,
                                          double p_gr0, double tau);

struct SampleStats {
    double mean{0.0};
    double std_dev{0.0};
    double std_err{0.0};
};

struct HilbertAverageCheck {
    int n_samples{0};
    double p_ex_fixed{0.0};
    double tau{0.0};
    SampleStats cross_re;   // Re <psi_gr|U1|psi_ex>, predicted mean 0
    SampleStats cross_im;   // Im <psi_gr|U1|psi_ex>, predicted mean 0
    SampleStats second_ex;  // <psi_ex|U1^2|psi_ex>
    SampleStats second_gr;  // <psi_gr|U1^2|psi_gr>
    double predicted_second_ex{0.0};  // (p_ex / n_lower) tr_ex{U1^2}
    double predicted_second_gr{0.0};  // (p_gr / n_upper) tr_gr{U1^2}
    double trace_ex{0.0};  // direct summation over the excited sector
    double trace_gr{0.0};  // direct summation over the ground sector
};

// Monte-Carlo check of the sector averages: draws states Haar-uniform on each
// sector sphere with the sector norms fixed to (p_ex_fixed, 1 - p_ex_fixed)
// and compares sample means against the closed-form averages.
HilbertAverageCheck hilbert_average_check(const Hamiltonian& h, double tau,
                                          double p_ex_fixed, int n_samples,
                                          std::uint64_t seed);

}  // namespace bandrelax
