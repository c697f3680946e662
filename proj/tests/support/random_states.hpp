#pragma once

#include <random>

#include "epr/states.hpp"

namespace epr::testsupport {

// Haar-ish random pure two-qubit state: complex-normal 4-vector, normalized.
inline Eigen::Vector4cd random_ket(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) {
        v(i) = std::complex<double>(normal(rng), normal(rng));
    }
    return v / v.norm();
}

// Random mixture of 1..4 random pure states with random weights.
inline DensityMatrix random_density_matrix(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> rank_dist(1, 4);
    std::uniform_real_distribution<double> weight_dist(0.05, 1.0);
    const int rank = rank_dist(rng);
    Matrix4c m = Matrix4c::Zero();
    double total = 0.0;
    for (int i = 0; i < rank; ++i) {
        const double w = weight_dist(rng);
        const Eigen::Vector4cd v = random_ket(rng);
        m += w * (v * v.adjoint());
        total += w;
    }
    return DensityMatrix::from_matrix(m / total);
}

}  // namespace epr::testsupport
