// model.cpp — Model construction: validation, coupling sampling, initial states

#include "bandrelax/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bandrelax/rng.hpp"

namespace bandrelax {

void ModelParams::validate() const {
    if (n_upper < 1 || n_lower < 1) {
        throw std::invalid_argument("ModelParams: band sizes must be >= 1");
    }
    if (!(spacing_upper > 0.0) || !(spacing_lower > 0.0)) {
        throw std::invalid_argument("ModelParams: level spacings must be > 0");
    }
    if (!(coupling_scale >= 0.0)) {
        throw std::invalid_argument("ModelParams: coupling scale must be >= 0");
    }
    const double w_upper = n_upper * spacing_upper;
    const double w_lower = n_lower * spacing_lower;
    if (std::abs(w_upper - w_lower) > 1e-12 * std::max(w_upper, w_lower)) {
        throw std::invalid_argument(
            "ModelParams: band widths differ (n_upper*spacing_upper = " +
            std::to_string(w_upper) + ", n_lower*spacing_lower = " +
            std::to_string(w_lower) + ")");
    }
}

bool Hamiltonian::is_real() const {
    if (coupling.size() == 0) return true;
    return coupling.imag().cwiseAbs().maxCoeff() == 0.0;
}

Eigen::MatrixXcd Hamiltonian::dense() const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim(), dim());
    h.diagonal() = diag.cast<std::complex<double>>();
    h.topRightCorner(n_upper, n_lower) = coupling;
    h.bottomLeftCorner(n_lower, n_upper) = coupling.adjoint();
    return h;
}

Eigen::MatrixXcd Hamiltonian::dense_interaction() const {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim(), dim());
    v.topRightCorner(n_upper, n_lower) = coupling;
    v.bottomLeftCorner(n_lower, n_upper) = coupling.adjoint();
    return v;
}

double Hamiltonian::empirical_coupling_sq() const {
    if (coupling.size() == 0) return 0.0;
    return coupling.squaredNorm() / static_cast<double>(coupling.size());
}

Eigen::MatrixXcd sample_coupling(int n_upper, int n_lower, double coupling_scale,
                                 std::uint64_t seed, bool complex_entries) {
    if (n_upper < 1 || n_lower < 1) {
        throw std::invalid_argument("sample_coupling: dimensions must be >= 1");
    }
    if (!(coupling_scale >= 0.0)) {
        throw std::invalid_argument("sample_coupling: coupling scale must be >= 0");
    }
    Eigen::MatrixXcd v(n_upper, n_lower);
    if (coupling_scale == 0.0) {
        v.setZero();
        return v;
    }
    rng::RandomStream stream(seed);
    for (int i = 0; i < n_upper; ++i) {
        for (int j = 0; j < n_lower; ++j) {
            v(i, j) = complex_entries
                          ? stream.complex_normal() / std::sqrt(2.0)
                          : std::complex<double>(stream.normal(), 0.0);
        }
    }
    // Rescale so the empirical mean squared element hits coupling_scale^2
    // exactly; this removes sample-to-sample drift of the decay rate.
    const double mean_sq = v.squaredNorm() / static_cast<double>(v.size());
    v *= coupling_scale / std::sqrt(mean_sq);
    return v;
}

Hamiltonian build_hamiltonian(const ModelParams& params) {
    params.validate();
    Hamiltonian h;
    h.n_upper = params.n_upper;
    h.n_lower = params.n_lower;
    h.diag.resize(params.dim());
    for (int i = 0; i < params.n_upper; ++i) h.diag(i) = i * params.spacing_upper;
    for (int j = 0; j < params.n_lower; ++j) {
        h.diag(params.n_upper + j) = j * params.spacing_lower;
    }
    h.coupling = sample_coupling(params.n_upper, params.n_lower,
                                 params.coupling_scale, params.seed,
                                 params.complex_coupling);
    return h;
}

PureState initial_state(const ModelParams& params, std::uint64_t seed) {
    params.validate();
    rng::RandomStream stream(seed);
    PureState psi;
    psi.n_upper = params.n_upper;
    psi.amplitudes = Eigen::VectorXcd::Zero(params.dim());
    psi.amplitudes.head(params.n_upper) = stream.haar_unit_vector(params.n_upper);
    return psi;
}

}  // namespace bandrelax
