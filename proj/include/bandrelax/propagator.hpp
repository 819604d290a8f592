// propagator.hpp — Exact Schrödinger propagation and the truncated short-time step
//
// Exact evolution diagonalizes H once and rotates phases in the eigenbasis,
// giving machine-precision unitarity for the dense dimensions this model
// targets (d up to ~1600). The short-time step is the second-order expansion
// of the propagator in the interaction picture; its first time-ordered
// integral U1 has an elementwise closed form, and the second integral never
// needs materializing because probability conservation expresses its sector
// expectation values through U1^2.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bandrelax/model.hpp"
#include "bandrelax/observables.hpp"

namespace bandrelax {

struct Trajectory {
    std::vector<double> times;
    std::vector<PureState> states;  // empty when state storage is disabled
    std::vector<ObservableRecord> records;
    std::vector<double> energies;  // <psi|H|psi> per sample
};

// Dense spectral decomposition of H, built once. Uses the real-symmetric
// solver when the coupling is real (the default ensemble), the complex
// Hermitian one otherwise.
class ExactPropagator {
public:
    explicit ExactPropagator(const Hamiltonian& h);

    // psi(t) = exp(-i H t) psi0
    PureState at(const PureState& psi0, double t) const;

    int dim() const { return static_cast<int>(eigenvalues_.size()); }

private:
    int n_upper_{0};
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXcd eigenvectors_;
};

// Exact trajectory on the given sample grid (strictly increasing times).
// Records and energies are always filled; states only if store_states.
Trajectory evolve_exact(const Hamiltonian& h, const PureState& psi0,
                        const std::vector<double>& times, bool store_states = true);

struct DysonOperators {
    Eigen::MatrixXcd u1;  // Hermitian, same off-diagonal block form as V
    double tau{0.0};
};

// Upper-right block of U1 (rows: ground sector, cols: excited sector),
//   B_ij = V_ij * g(E_i - E_j)  with  g(w) = sin(w tau)/w + 2i sin^2(w tau/2)/w
// and g(0) = tau at the removable singularity. |g(w)|^2 = 4 sin^2(w tau/2)/w^2,
// the golden-rule weight.
Eigen::MatrixXcd u1_coupling_block(const Hamiltonian& h, double tau);

DysonOperators build_u1(const Hamiltonian& h, double tau);

// Trace of U1^2 restricted to either sector, by direct summation of squared
// column norms. The two sector traces coincide (Tr B^dag B = Tr B B^dag).
double u1_squared_trace(const Eigen::MatrixXcd& u1_block);

// One truncated second-order step of length tau applied to the actual state:
// returns the sector probabilities after the step. Their sum equals the
// initial sum exactly, by construction.
SectorProbabilities dyson_step(const Hamiltonian& h, const PureState& psi, double tau);

}  // namespace bandrelax
