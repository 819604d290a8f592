// test_hsa.cpp — Rate theory closed forms, regime numbers, average verification

#include <doctest.h>

#include <cmath>
#include <vector>

#include "bandrelax/hsa.hpp"
#include "bandrelax/model.hpp"
#include "bandrelax/propagator.hpp"

using namespace bandrelax;

namespace {

ModelParams params_with(int n_upper, int n_lower, double spacing_upper,
                        double coupling) {
    ModelParams p;
    p.n_upper = n_upper;
    p.n_lower = n_lower;
    p.spacing_upper = spacing_upper;
    p.spacing_lower = spacing_upper * n_upper / n_lower;
    p.coupling_scale = coupling;
    p.seed = 1;
    return p;
}

// composite Simpson rule
double integrate(double (*f)(double, double), double tau, double lo, double hi,
                 int n_panels) {
    const double h = (hi - lo) / (2 * n_panels);
    double sum = f(lo, tau) + f(hi, tau);
    for (int k = 1; k < 2 * n_panels; ++k) {
        sum += f(lo + k * h, tau) * ((k % 2 == 1) ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("rate constant closed forms") {
    // band width 2 pi and unit coupling give C = 1
    const RateTheory unit = rate_constant(params_with(4, 2, M_PI / 2.0, 1.0));
    CHECK(unit.c == doctest::Approx(1.0).epsilon(1e-14));

    // band width 4 pi puts the regime onset at 1
    const RateTheory onset = rate_constant(params_with(4, 2, M_PI, 1.0));
    CHECK(onset.tau1 == doctest::Approx(1.0).epsilon(1e-14));

    // the regime window scales with the upper band size, exactly
    CHECK(onset.tau2 == 4 * onset.tau1);

    // production defaults
    ModelParams p;
    const RateTheory def = rate_constant(p);
    CHECK(def.c == doctest::Approx(2.0 * M_PI * 0.005 / 800.0).epsilon(1e-12));
    CHECK(def.total_rate() == doctest::Approx(3.0 * M_PI * 0.005).epsilon(1e-12));
}

TEST_CASE("regime report: worked values, thresholds, algebraic relations") {
    // lambda = spacing_upper, spacing_lower = 2 spacing_upper, n_lower = 100
    const ModelParams p = params_with(200, 100, 0.01, 0.01);
    const RegimeReport r = regime_report(p);
    CHECK(r.cond_330 == doctest::Approx(2.0 * M_PI * M_PI / 100.0).epsilon(1e-12));
    CHECK(r.pass_330);
    CHECK(r.cond_302 == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(r.pass_302);
    CHECK(r.cond_302 == doctest::Approx(r.cond_330 * p.n_lower).epsilon(1e-14));
    CHECK(r.cond_320 == doctest::Approx(r.cond_301 * p.n_upper).epsilon(1e-14));

    // default production set passes everything
    CHECK(regime_report(ModelParams{}).all_pass());

    // tiny bands at strong coupling fail the smallness conditions
    const RegimeReport tiny = regime_report(params_with(8, 4, 0.01, 0.01));
    CHECK(tiny.cond_330 == doctest::Approx(2.0 * M_PI * M_PI / 4.0).epsilon(1e-12));
    CHECK_FALSE(tiny.pass_330);

    // zero coupling violates the lower bounds
    const RegimeReport zero = regime_report(params_with(100, 50, 0.01, 0.0));
    CHECK(zero.cond_302 == 0.0);
    CHECK_FALSE(zero.pass_302);
    CHECK_FALSE(zero.pass_320);
    CHECK(zero.pass_330);
}

TEST_CASE("rate solution: endpoints, equilibria, and the defining ODE") {
    const RateTheory t800 = rate_constant(ModelParams{});

    const SectorProbabilities at0 = rate_solution(t800, 1.0, 0.0);
    CHECK(at0.ex == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at0.gr == doctest::Approx(0.0).epsilon(1e-14));

    const SectorProbabilities late = rate_solution(t800, 1.0, 1e6);
    CHECK(late.ex == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(late.gr == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const RateTheory sym = rate_constant(params_with(100, 100, 0.01, 0.01));
    const SectorProbabilities half = rate_solution(sym, 1.0, 1e6);
    CHECK(half.ex == doctest::Approx(0.5).epsilon(1e-12));

    // finite-difference residual of dp_ex/dt = C n0 p_gr - C n1 p_ex
    const double T = 1.0 / t800.total_rate();
    const double h = 1e-4 * T;
    for (double frac : {0.1, 0.7, 1.9, 4.2}) {
        const double t = frac * T;
        const double plus = rate_solution(t800, 0.0, t + h).ex;
        const double minus = rate_solution(t800, 0.0, t - h).ex;
        const SectorProbabilities mid = rate_solution(t800, 0.0, t);
        const double residual = (plus - minus) / (2.0 * h) -
                                t800.c * (t800.n_lower * mid.gr - t800.n_upper * mid.ex);
        CHECK(std::abs(residual) < 1e-6);
        CHECK(mid.ex + mid.gr == 1.0);
    }

    CHECK_THROWS_AS(rate_solution(t800, 1.2, 0.0), std::invalid_argument);
}

TEST_CASE("equilibrium values") {
    const SectorProbabilities fig = equilibrium(800, 400);
    CHECK(fig.ex == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(fig.gr == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(fig.ex + fig.gr == 1.0);

    const SectorProbabilities even = equilibrium(37, 37);
    CHECK(even.ex == 0.5);
    CHECK(even.gr == 0.5);

    const SectorProbabilities skew = equilibrium(1, 9);
    CHECK(skew.ex == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(skew.gr == doctest::Approx(0.1).epsilon(1e-15));

    CHECK_THROWS_AS(equilibrium(0, 5), std::invalid_argument);
}

TEST_CASE("peak function: height, zeros, and area") {
    const double tau = 2.6;
    CHECK(peak_function(0.0, tau) == doctest::Approx(tau * tau / 4.0).epsilon(1e-14));
    CHECK(peak_function(2.0 * M_PI / tau, tau) < 1e-20);

    // area over (-inf, inf) is pi tau / 2; truncate at |w| = 200/tau
    const double area =
        integrate(peak_function, tau, -200.0 / tau, 200.0 / tau, 400000);
    CHECK(area == doctest::Approx(M_PI * tau / 2.0).epsilon(0.01));
}

TEST_CASE("linear-regime trace prediction") {
    const ModelParams p = params_with(400, 200, 0.005, 0.005);
    const RateTheory theory = rate_constant(p);
    const double tau = 3.0 * theory.tau1;

    // linear in tau
    CHECK(u1_trace_prediction(p, 2.0 * tau) ==
          doctest::Approx(2.0 * u1_trace_prediction(p, tau)).epsilon(1e-12));

    // consistency with the rate constant: prediction = C n1 n0 tau
    CHECK(u1_trace_prediction(p, tau) ==
          doctest::Approx(theory.c * p.n_upper * p.n_lower * tau).epsilon(1e-12));

    // against the direct summation over the built operator
    const Hamiltonian h = build_hamiltonian(p);
    const double actual = u1_squared_trace(u1_coupling_block(h, tau));
    CHECK(actual == doctest::Approx(u1_trace_prediction(p, tau)).epsilon(0.25));
}

TEST_CASE("trace prediction is symmetric under band exchange") {
    const ModelParams p = params_with(60, 30, 0.01, 0.02);
    ModelParams swapped;
    swapped.n_upper = p.n_lower;
    swapped.n_lower = p.n_upper;
    swapped.spacing_upper = p.spacing_lower;
    swapped.spacing_lower = p.spacing_upper;
    swapped.coupling_scale = p.coupling_scale;
    const double tau = 25.0;  // inside the linear regime for both orderings
    CHECK(u1_trace_prediction(p, tau) ==
          doctest::Approx(u1_trace_prediction(swapped, tau)).epsilon(1e-12));
}

TEST_CASE("short step: fixed point, identity, and first-order consistency") {
    const RateTheory theory = rate_constant(ModelParams{});
    const SectorProbabilities eq = equilibrium(theory.n_upper, theory.n_lower);

    const SectorProbabilities fixed = short_step_prediction(theory, eq.ex, eq.gr, 7.0);
    CHECK(fixed.ex == doctest::Approx(eq.ex).epsilon(1e-15));
    CHECK(fixed.gr == doctest::Approx(eq.gr).epsilon(1e-15));

    const SectorProbabilities still = short_step_prediction(theory, 0.2, 0.8, 0.0);
    CHECK(still.ex == 0.2);
    CHECK(still.gr == 0.8);

    // iterating the map converges to the exponential solution at first order
    const double t_final = 2.0 / theory.total_rate();
    std::vector<double> log_tau, log_err;
    for (int k = 2; k <= 9; ++k) {
        const int n_steps = 1u << k;
        const double tau = t_final / n_steps;
        SectorProbabilities p{0.0, 1.0};
        for (int s = 0; s < n_steps; ++s) {
            p = short_step_prediction(theory, p.ex, p.gr, tau);
            CHECK(std::abs(p.ex + p.gr - 1.0) < 1e-14);
        }
        const double err = std::abs(p.ex - rate_solution(theory, 0.0, t_final).ex);
        log_tau.push_back(std::log(tau));
        log_err.push_back(std::log(err));
    }
    const double slope = regression_slope(log_tau, log_err);
    CHECK(slope > 0.9);
    CHECK(slope < 1.1);
}

TEST_CASE("Hilbert-space averages: empty sector and sampled moments") {
    const ModelParams p = params_with(100, 50, 0.005, 0.005);
    const Hamiltonian h = build_hamiltonian(p);
    const double tau = 3.0 * rate_constant(p).tau1;

    const HilbertAverageCheck empty = hilbert_average_check(h, tau, 0.0, 50, 5);
    CHECK(empty.second_ex.mean == 0.0);
    CHECK(empty.cross_re.mean == 0.0);
    CHECK(empty.predicted_second_ex == 0.0);

    const HilbertAverageCheck check = hilbert_average_check(h, tau, 0.3, 1000, 5);
    CHECK(std::abs(check.cross_re.mean) <= 3.0 * check.cross_re.std_err);
    CHECK(std::abs(check.cross_im.mean) <= 3.0 * check.cross_im.std_err);
    CHECK(std::abs(check.second_ex.mean - check.predicted_second_ex) <=
          3.0 * check.second_ex.std_err);
    CHECK(std::abs(check.second_gr.mean - check.predicted_second_gr) <=
          3.0 * check.second_gr.std_err);
    // the two sector traces coincide
    CHECK(check.trace_ex == check.trace_gr);

    CHECK_THROWS_AS(hilbert_average_check(h, tau, -0.1, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(hilbert_average_check(h, tau, 0.5, 1, 1), std::invalid_argument);
}
