// observables.cpp — Purity and correlation contractions for resonant-subspace states
//
// With a = ground slice and b = excited slice of psi (disjoint container
// support), the reduced states are rho_s = diag(p_gr, p_ex) and
// rho_r = a a^dag (+) b b^dag, so every trace below collapses to sector-norm
// arithmetic:
//   Tr{rho_s^2}           = p_gr^2 + p_ex^2
//   Tr{rho_r^2}           = ||a||^4 + ||b||^4 = p_gr^2 + p_ex^2
//   <psi| rho_s x rho_r |psi> = p_gr |a^dag a|^2 + p_ex |b^dag b|^2
//                             = p_gr^3 + p_ex^3
// These identities hold for any amplitudes, normalized or not; the unit tests
// check them against a dense density-matrix reference on small instances.

#include "bandrelax/observables.hpp"

#include <algorithm>
#include <cmath>

namespace bandrelax {

SectorProbabilities sector_probabilities(const PureState& psi) {
    return {psi.excited().squaredNorm(), psi.ground().squaredNorm()};
}

ReducedStates reduced_states(const PureState& psi) {
    const auto a = psi.ground();
    const auto b = psi.excited();
    ReducedStates r;
    r.system.setZero();
    r.system(0, 0) = a.squaredNorm();
    r.system(1, 1) = b.squaredNorm();
    // off-diagonals vanish: the two sectors occupy disjoint container levels
    r.container = Eigen::MatrixXcd::Zero(psi.dim(), psi.dim());
    r.container.topLeftCorner(psi.n_upper, psi.n_upper) = a * a.adjoint();
    r.container.bottomRightCorner(psi.n_lower(), psi.n_lower()) = b * b.adjoint();
    return r;
}

CorrelationMeasures correlation_measures(const PureState& psi) {
    const double p_gr = psi.ground().squaredNorm();
    const double p_ex = psi.excited().squaredNorm();

    CorrelationMeasures m;
    m.p = p_gr + p_ex;  // sqrt(Tr{rho^2}) = ||psi||^2
    m.p_s = std::sqrt(p_gr * p_gr + p_ex * p_ex);
    m.p_r = m.p_s;  // both container blocks are rank one
    m.overlap = p_gr * p_gr * p_gr + p_ex * p_ex * p_ex;
    const double pc_sq =
        m.p * m.p - 2.0 * m.overlap + m.p_s * m.p_s * m.p_r * m.p_r;
    m.p_c = std::sqrt(std::max(0.0, pc_sq));
    m.eta = m.p_c / (m.p_s * m.p_r);
    m.bound = std::max(0.0, 1.0 / (m.p_s * m.p_r) - 1.0);
    return m;
}

ObservableRecord make_record(const PureState& psi, double t) {
    const CorrelationMeasures m = correlation_measures(psi);
    ObservableRecord r;
    r.t = t;
    r.p_gr = psi.ground().squaredNorm();
    r.p_ex = psi.excited().squaredNorm();
    r.purity_s = m.p_s;
    r.purity_r = m.p_r;
    r.p_c = m.p_c;
    r.eta = m.eta;
    r.norm_err = std::abs(psi.norm() - 1.0);
    return r;
}

}  // namespace bandrelax
