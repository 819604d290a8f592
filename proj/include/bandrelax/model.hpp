// model.hpp — Two-band system–environment model: parameters, Hamiltonian, pure states
//
// A two-level "gas" system is coupled to a many-level "container" whose
// relevant spectrum consists of two bands of equal width: an upper band of
// n_upper equidistant levels and a lower band of n_lower levels. Energy
// conservation restricts the dynamics to the resonant subspace spanned by
//   |gas ground>  x |upper band level i>   (ground sector)
//   |gas excited> x |lower band level j>   (excited sector)
// State vectors carry the ground sector first. Units: hbar = 1 and the gas
// gap sets the energy scale, so times are in units of hbar/gap.

#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace bandrelax {

// All scalar knobs of the model. Both bands must have the same total width,
// n_upper * spacing_upper == n_lower * spacing_lower.
struct ModelParams {
    int n_upper{800};              // levels in the upper container band
    int n_lower{400};              // levels in the lower container band
    double spacing_upper{0.005};   // level spacing within the upper band
    double spacing_lower{0.01};    // level spacing within the lower band
    double coupling_scale{0.005};  // rms interaction matrix element (lambda)
    std::uint64_t seed{1};         // stream for the coupling matrix
    bool complex_coupling{false};  // complex Gaussian entries instead of real

    int dim() const { return n_upper + n_lower; }
    double band_width() const { return n_upper * spacing_upper; }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

// Diagonal free part plus one coupling block. The full matrix is
//   H = diag(diag) + [[0, V], [V^dag, 0]]
// with V = coupling (n_upper x n_lower), rows indexing the ground sector and
// columns the excited sector. The sector ladders both start at offset 0:
// diag = (0, s_u, 2 s_u, ..., 0, s_l, 2 s_l, ...).
struct Hamiltonian {
    int n_upper{0};
    int n_lower{0};
    Eigen::VectorXd diag;
    Eigen::MatrixXcd coupling;

    int dim() const { return n_upper + n_lower; }
    bool is_real() const;

    Eigen::MatrixXcd dense() const;
    Eigen::MatrixXcd dense_interaction() const;  // off-diagonal blocks only

    // Mean squared matrix element of the coupling block,
    // lambda^2 = (1/(n_upper n_lower)) sum_ij |V_ij|^2.
    double empirical_coupling_sq() const;
};

// n_upper x n_lower matrix of i.i.d. Gaussian entries (mean zero), rescaled
// so the mean squared element equals coupling_scale^2 exactly rather than in
// expectation only. Deterministic given the seed.
Eigen::MatrixXcd sample_coupling(int n_upper, int n_lower, double coupling_scale,
                                 std::uint64_t seed, bool complex_entries = false);

Hamiltonian build_hamiltonian(const ModelParams& params);

// Complex amplitude vector over the resonant subspace, ground sector first:
// indices [0, n_upper) hold the ground sector, [n_upper, dim) the excited one.
struct PureState {
    int n_upper{0};
    Eigen::VectorXcd amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    int n_lower() const { return dim() - n_upper; }
    auto ground() const { return amplitudes.head(n_upper); }
    auto excited() const { return amplitudes.tail(n_lower()); }
    double norm() const { return amplitudes.norm(); }
};

// Probabilities to find the gas system excited / in the ground state (the
// squared sector norms).
struct SectorProbabilities {
    double ex{0.0};
    double gr{0.0};
};

// Gas in its ground state, container in a Haar-random superposition of upper
// band levels: a normalized product state with p_ex = 0.
PureState initial_state(const ModelParams& params, std::uint64_t seed);

}  // namespace bandrelax
