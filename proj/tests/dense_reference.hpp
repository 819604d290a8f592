// dense_reference.hpp — Brute-force density-matrix reference for the tests.
//
// Embeds a resonant-subspace state into the full 2 x (n_upper + n_lower)
// product space, materializes rho = |psi><psi|, and evaluates reduced states,
// purities and correlation sizes by explicit index loops. Deliberately
// independent of the library's contraction shortcuts.

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "bandrelax/model.hpp"

namespace dense_ref {

// full index = s * n_container + c; container levels ordered upper band first
inline Eigen::VectorXcd embed(const bandrelax::PureState& psi) {
    const int nc = psi.dim();
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(2 * nc);
    for (int i = 0; i < psi.n_upper; ++i) full(i) = psi.amplitudes(i);
    for (int j = 0; j < psi.n_lower(); ++j) {
        full(nc + psi.n_upper + j) = psi.amplitudes(psi.n_upper + j);
    }
    return full;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

struct Reference {
    Eigen::MatrixXcd rho;
    Eigen::MatrixXcd rho_s;  // 2 x 2
    Eigen::MatrixXcd rho_r;  // nc x nc
    double p{0.0};
    double p_s{0.0};
    double p_r{0.0};
    double overlap{0.0};       // Tr{rho (rho_s x rho_r)}
    double p_c_frobenius{0.0};  // ||rho - rho_s x rho_r||_F
    double p_c_formula{0.0};    // sqrt(P^2 - 2 overlap + (P_s P_r)^2)
};

inline Reference compute(const bandrelax::PureState& psi) {
    const int nc = psi.dim();
    const Eigen::VectorXcd full = embed(psi);

    Reference ref;
    ref.rho = full * full.adjoint();

    ref.rho_s = Eigen::MatrixXcd::Zero(2, 2);
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            for (int c = 0; c < nc; ++c) {
                ref.rho_s(s, sp) += ref.rho(s * nc + c, sp * nc + c);
            }
        }
    }
    ref.rho_r = Eigen::MatrixXcd::Zero(nc, nc);
    for (int c = 0; c < nc; ++c) {
        for (int cp = 0; cp < nc; ++cp) {
            for (int s = 0; s < 2; ++s) {
                ref.rho_r(c, cp) += ref.rho(s * nc + c, s * nc + cp);
            }
        }
    }

    ref.p = std::sqrt((ref.rho * ref.rho).trace().real());
    ref.p_s = std::sqrt((ref.rho_s * ref.rho_s).trace().real());
    ref.p_r = std::sqrt((ref.rho_r * ref.rho_r).trace().real());

    const Eigen::MatrixXcd product = kron(ref.rho_s, ref.rho_r);
    ref.overlap = (ref.rho * product).trace().real();
    ref.p_c_frobenius = (ref.rho - product).norm();
    const double pc_sq = ref.p * ref.p - 2.0 * ref.overlap +
                         ref.p_s * ref.p_s * ref.p_r * ref.p_r;
    ref.p_c_formula = std::sqrt(std::max(0.0, pc_sq));
    return ref;
}

}  // namespace dense_ref
