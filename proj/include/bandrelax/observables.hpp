// observables.hpp — Reduced states, purities, and the correlation measure eta
//
// For a pure full state rho = |psi><psi| on the gas x container product space,
// the correlation part is rho_c = rho - rho_s x rho_r with rho_s, rho_r the
// reduced states. Operator sizes are measured by P_x = sqrt(Tr{rho_x^2}), and
// eta = P_c / (P_s P_r) compares correlations against the product part.
// States on the resonant subspace embed into the product space with zeros on
// the off-resonant sectors; all contractions below exploit that structure.

#pragma once

#include <Eigen/Dense>

#include "bandrelax/model.hpp"

namespace bandrelax {

// One sample row of a trajectory; also the CSV row schema of the CLI.
struct ObservableRecord {
    double t{0.0};
    double p_ex{0.0};
    double p_gr{0.0};
    double purity_s{0.0};  // two-level gas purity P_s, in [1/sqrt(2), 1]
    double purity_r{0.0};  // container purity P_r
    double p_c{0.0};       // size of the correlation part
    double eta{0.0};       // P_c / (P_s P_r)
    double norm_err{0.0};  // | ||psi|| - 1 |
};

SectorProbabilities sector_probabilities(const PureState& psi);

struct ReducedStates {
    Eigen::Matrix2cd system;     // diag(p_gr, p_ex) for resonant-subspace states
    Eigen::MatrixXcd container;  // block diagonal: upper-band block + lower-band block
};

// Partial traces of |psi><psi| over the 2 x (n_upper + n_lower) product space.
ReducedStates reduced_states(const PureState& psi);

struct CorrelationMeasures {
    double p{0.0};        // P, purity of the full state (1 for normalized psi)
    double p_s{0.0};      // gas purity
    double p_r{0.0};      // container purity
    double overlap{0.0};  // Tr{rho (rho_s x rho_r)}
    double p_c{0.0};      // P_c
    double eta{0.0};      // P_c / (P_s P_r)
    double bound{0.0};    // max(0, 1/(P_s P_r) - 1), lower bound on eta
};

CorrelationMeasures correlation_measures(const PureState& psi);

ObservableRecord make_record(const PureState& psi, double t);

// Lower bound on eta implied by the recorded purities.
inline double record_eta_bound(const ObservableRecord& r) {
    return std::max(0.0, 1.0 / (r.purity_s * r.purity_r) - 1.0);
}

}  // namespace bandrelax
