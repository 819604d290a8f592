// hsa.cpp — Rate theory closed forms and the Monte-Carlo average verification

#include "bandrelax/hsa.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "bandrelax/rng.hpp"

namespace bandrelax {

namespace {

SampleStats stats_of(const std::vector<double>& xs) {
    SampleStats s;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(ss / (n - 1.0));
    s.std_err = s.std_dev / std::sqrt(n);
    return s;
}

}  // namespace

RateTheory rate_constant(const ModelParams& params) {
    params.validate();
    RateTheory t;
    t.n_upper = params.n_upper;
    t.n_lower = params.n_lower;
    const double width = params.band_width();
    t.c = 2.0 * M_PI * params.coupling_scale * params.coupling_scale / width;
    t.tau1 = 4.0 * M_PI / width;
    t.tau2 = params.n_upper * t.tau1;
    return t;
}

RegimeReport regime_report(const ModelParams& params) {
    params.validate();
    const double lam_sq = params.coupling_scale * params.coupling_scale;
    const double pi_sq8 = 8.0 * M_PI * M_PI;
    const RateTheory t = rate_constant(params);

    RegimeReport r;
    r.cond_302 = pi_sq8 * lam_sq / (params.spacing_lower * params.spacing_lower);
    r.cond_320 = pi_sq8 * lam_sq / (params.spacing_upper * params.spacing_upper);
    r.cond_330 = r.cond_302 / params.n_lower;
    r.cond_301 = r.cond_320 / params.n_upper;
    r.pass_330 = r.cond_330 <= kMuchLessThanOne;
    r.pass_301 = r.cond_301 <= kMuchLessThanOne;
    r.pass_302 = r.cond_302 >= 1.0;
    r.pass_320 = r.cond_320 >= 1.0;
    r.tau1 = t.tau1;
    r.tau2 = t.tau2;
    r.c = t.c;
    return r;
}

SectorProbabilities rate_solution(const RateTheory& theory, double p_ex0, double t) {
    if (p_ex0 < 0.0 || p_ex0 > 1.0) {
        throw std::invalid_argument("rate_solution: p_ex0 must lie in [0, 1]");
    }
    const SectorProbabilities eq = equilibrium(theory.n_upper, theory.n_lower);
    const double p_ex = eq.ex + (p_ex0 - eq.ex) * std::exp(-theory.total_rate() * t);
    return {p_ex, 1.0 - p_ex};
}

SectorProbabilities equilibrium(int n_upper, int n_lower) {
    if (n_upper < 1 || n_lower < 1) {
        throw std::invalid_argument("equilibrium: band sizes must be >= 1");
    }
    const double total = static_cast<double>(n_upper + n_lower);
    return {n_lower / total, n_upper / total};
}

double peak_function(double omega, double tau) {
    if (tau < 0.0) throw std::invalid_argument("peak_function: tau must be >= 0");
    if (omega == 0.0) return 0.25 * tau * tau;
    const double s = std::sin(0.5 * omega * tau);
    return s * s / (omega * omega);
}

double u1_trace_prediction(const ModelParams& params, double tau) {
    params.validate();
    const RateTheory t = rate_constant(params);
    if (!t.in_linear_regime(tau)) {
        std::cerr << "warning: u1_trace_prediction: tau = " << tau
                  << " outside the linear regime (" << t.tau1 << ", " << t.tau2
                  << ")\n";
    }
    return 2.0 * M_PI * params.coupling_scale * params.coupling_scale *
           params.n_upper * params.n_lower * tau / params.band_width();
}

SectorProbabilities short_step_prediction(const RateTheory& theory, double p_ex0,
                                          double p_gr0, double tau) {
    const double transfer =
        theory.c * tau * (theory.n_lower * p_gr0 - theory.n_upper * p_ex0);
    if (theory.c * tau * std::max(theory.n_upper, theory.n_lower) > 1.0) {
        std::cerr << "warning: short_step_prediction: step C tau max(N) = "
                  << theory.c * tau * std::max(theory.n_upper, theory.n_lower)
                  << " > 1; probabilities may leave [0, 1]\n";
    }
    return {p_ex0 + transfer, p_gr0 - transfer};
}

HilbertAverageCheck hilbert_average_check(const Hamiltonian& h, double tau,
                                          double p_ex_fixed, int n_samples,
                                          std::uint64_t seed) {
    if (p_ex_fixed < 0.0 || p_ex_fixed > 1.0) {
        throw std::invalid_argument("hilbert_average_check: p_ex_fixed must lie in [0, 1]");
    }
    if (n_samples < 2) {
        throw std::invalid_argument("hilbert_average_check: need at least 2 samples");
    }

    const Eigen::MatrixXcd block = u1_coupling_block(h, tau);
    const double p_gr_fixed = 1.0 - p_ex_fixed;
    const double trace = u1_squared_trace(block);

    std::vector<double> cross_re(n_samples), cross_im(n_samples);
    std::vector<double> second_ex(n_samples), second_gr(n_samples);

    for (int s = 0; s < n_samples; ++s) {
        rng::RandomStream stream(rng::derive_seed(seed, static_cast<std::uint64_t>(s)));
        const Eigen::VectorXcd a =
            std::sqrt(p_gr_fixed) * stream.haar_unit_vector(h.n_upper);
        const Eigen::VectorXcd b =
            std::sqrt(p_ex_fixed) * stream.haar_unit_vector(h.n_lower);
        const std::complex<double> cross = a.dot(block * b);
        cross_re[s] = cross.real();
        cross_im[s] = cross.imag();
        second_ex[s] = (block * b).squaredNorm();
        second_gr[s] = (block.adjoint() * a).squaredNorm();
    }

    HilbertAverageCheck out;
    out.n_samples = n_samples;
    out.p_ex_fixed = p_ex_fixed;
    out.tau = tau;
    out.cross_re = stats_of(cross_re);
    out.cross_im = stats_of(cross_im);
    out.second_ex = stats_of(second_ex);
    out.second_gr = stats_of(second_gr);
    out.trace_ex = trace;
    out.trace_gr = trace;
    out.predicted_second_ex = p_ex_fixed / h.n_lower * trace;
    out.predicted_second_gr = p_gr_fixed / h.n_upper * trace;
    return out;
}

}  // namespace bandrelax
