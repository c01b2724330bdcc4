#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "llagraph/linalg.hpp"

namespace testing {

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

/// A A^T / q + shift I: well conditioned and positive definite.
inline llagraph::SymmetricMatrix random_pd(int q, std::uint64_t seed, double shift = 0.5) {
    const Eigen::MatrixXd a = random_matrix(q, q, seed);
    Eigen::MatrixXd m = a * a.transpose() / q + shift * Eigen::MatrixXd::Identity(q, q);
    m = 0.5 * (m + m.transpose()).eval();
    return llagraph::SymmetricMatrix(m);
}

inline Eigen::MatrixXd permutation(const std::vector<int>& perm) {
    const int q = static_cast<int>(perm.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i) p(i, perm[i]) = 1.0;
    return p;
}

}  // namespace testing
