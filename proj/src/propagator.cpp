// propagator.cpp — Spectral propagation, U1 closed form, truncated step

#include "bandrelax/propagator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace bandrelax {

namespace {

constexpr double kNormTol = 1e-9;

using std::complex;

// integral of exp(i w t) over [0, tau], cancellation-free form
complex<double> phase_integral(double w, double tau) {
    if (w == 0.0) return {tau, 0.0};
    const double half = 0.5 * w * tau;
    const double s = std::sin(half);
    return {std::sin(w * tau) / w, 2.0 * s * s / w};
}

}  // namespace

ExactPropagator::ExactPropagator(const Hamiltonian& h) : n_upper_(h.n_upper) {
    if (h.is_real()) {
        Eigen::MatrixXd hr = Eigen::MatrixXd::Zero(h.dim(), h.dim());
        hr.diagonal() = h.diag;
        hr.topRightCorner(h.n_upper, h.n_lower) = h.coupling.real();
        hr.bottomLeftCorner(h.n_lower, h.n_upper) = h.coupling.real().transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hr);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("ExactPropagator: eigendecomposition failed");
        }
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors().cast<complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense());
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("ExactPropagator: eigendecomposition failed");
        }
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    }
}

PureState ExactPropagator::at(const PureState& psi0, double t) const {
    Eigen::VectorXcd c = eigenvectors_.adjoint() * psi0.amplitudes;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        const double phase = -eigenvalues_(k) * t;
        c(k) *= complex<double>(std::cos(phase), std::sin(phase));
    }
    PureState psi;
    psi.n_upper = n_upper_;
    psi.amplitudes = eigenvectors_ * c;
    return psi;
}

Trajectory evolve_exact(const Hamiltonian& h, const PureState& psi0,
                        const std::vector<double>& times, bool store_states) {
    if (psi0.dim() != h.dim() || psi0.n_upper != h.n_upper) {
        throw std::invalid_argument("evolve_exact: state/Hamiltonian shape mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > kNormTol) {
        throw std::invalid_argument("evolve_exact: initial state not normalized");
    }
    if (times.empty()) {
        throw std::invalid_argument("evolve_exact: empty time grid");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("evolve_exact: times must be strictly increasing");
        }
    }

    const ExactPropagator prop(h);
    const Eigen::MatrixXcd hd = h.dense();

    Trajectory traj;
    traj.times = times;
    traj.records.reserve(times.size());
    traj.energies.reserve(times.size());
    if (store_states) traj.states.reserve(times.size());

    for (double t : times) {
        PureState psi = prop.at(psi0, t);
        traj.records.push_back(make_record(psi, t));
        traj.energies.push_back(psi.amplitudes.dot(hd * psi.amplitudes).real());
        if (store_states) traj.states.push_back(std::move(psi));
    }
    return traj;
}

Eigen::MatrixXcd u1_coupling_block(const Hamiltonian& h, double tau) {
    if (tau < 0.0) throw std::invalid_argument("u1_coupling_block: tau must be >= 0");
    Eigen::MatrixXcd block(h.n_upper, h.n_lower);
    for (int i = 0; i < h.n_upper; ++i) {
        for (int j = 0; j < h.n_lower; ++j) {
            const double w = h.diag(i) - h.diag(h.n_upper + j);
            block(i, j) = h.coupling(i, j) * phase_integral(w, tau);
        }
    }
    return block;
}

DysonOperators build_u1(const Hamiltonian& h, double tau) {
    const Eigen::MatrixXcd block = u1_coupling_block(h, tau);
    DysonOperators ops;
    ops.tau = tau;
    ops.u1 = Eigen::MatrixXcd::Zero(h.dim(), h.dim());
    ops.u1.topRightCorner(h.n_upper, h.n_lower) = block;
    ops.u1.bottomLeftCorner(h.n_lower, h.n_upper) = block.adjoint();
    return ops;
}

double u1_squared_trace(const Eigen::MatrixXcd& u1_block) {
    double tr = 0.0;
    for (Eigen::Index j = 0; j < u1_block.cols(); ++j) {
        tr += u1_block.col(j).squaredNorm();
    }
    return tr;
}

SectorProbabilities dyson_step(const Hamiltonian& h, const PureState& psi, double tau) {
    const Eigen::MatrixXcd block = u1_coupling_block(h, tau);
    const auto a = psi.ground();
    const auto b = psi.excited();

    const complex<double> cross = a.dot(block * b);  // <psi_gr|U1|psi_ex>
    const double second_gr = (block.adjoint() * a).squaredNorm();
    const double second_ex = (block * b).squaredNorm();
    const double first_order = -2.0 * cross.imag();  // i<gr|U1|ex> + c.c.

    SectorProbabilities p;
    p.ex = b.squaredNorm() + first_order + second_gr - second_ex;
    p.gr = a.squaredNorm() - first_order + second_ex - second_gr;
    return p;
}

}  // namespace bandrelax
