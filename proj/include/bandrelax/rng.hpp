// rng.hpp — Deterministic random streams: seed mixing, Gaussian draws, Haar vectors

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace bandrelax::rng {

// SplitMix64 finalizer. Used to whiten raw seeds and to derive independent
// per-task streams from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// seed_i = master XOR splitmix64(i + 1). Distinct indices give decorrelated
// streams; the mapping is the documented seeding contract of the CLI.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return master ^ splitmix64(index + 1);
}

// mt19937_64 stream with hand-coded uniform and Box-Muller normal draws, so
// emitted values depend only on the engine (pinned bit-for-bit by the
// standard), not on library distribution internals.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // uniform in the open interval (0, 1)
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    Eigen::VectorXcd complex_normal_vector(Eigen::Index n) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
        return v;
    }

    // Uniform on the unit sphere of C^n
    Eigen::VectorXcd haar_unit_vector(Eigen::Index n) {
        Eigen::VectorXcd v = complex_normal_vector(n);
        double nrm = v.norm();
        while (nrm == 0.0) {  // unreachable in practice
            v = complex_normal_vector(n);
            nrm = v.norm();
        }
        return v / nrm;
    }

private:
    std::mt19937_64 gen_;
    double spare_{0.0};
    bool have_spare_{false};
};

}  // namespace bandrelax::rng
