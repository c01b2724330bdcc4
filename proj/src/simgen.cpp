#include "llagraph/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "llagraph/error.hpp"

namespace llagraph {

std::string to_string(StructureKind kind) {
    return kind == StructureKind::hubs ? "hubs" : "random";
}

StructureKind parse_structure_kind(const std::string& s) {
    if (s == "hubs") return StructureKind::hubs;
    if (s == "random") return StructureKind::random;
    throw InputError("unknown structure kind: " + s);
}

void StructureSpec::validate() const {
    if (q < 2) throw InputError("q must be >= 2");
    if (!(diagonal_target > 0.0)) throw InputError("diagonal_target must be > 0");
    if (kind == StructureKind::hubs) {
        if (hub_group_size < 2) throw InputError("hub_group_size must be >= 2");
        if (!std::isfinite(edge_value)) throw InputError("edge_value must be finite");
    } else {
        if (!(edge_prob >= 0.0 && edge_prob < 1.0)) throw InputError("edge_prob must lie in [0, 1)");
        if (!(value_lo >= 0.0 && value_lo <= value_hi && std::isfinite(value_hi))) {
            throw InputError("value range must satisfy 0 <= lo <= hi");
        }
    }
}

SymmetricMatrix generate_precision(const StructureSpec& spec) {
    spec.validate();
    const int q = spec.q;
    SymmetricMatrix omega(q);

    if (spec.kind == StructureKind::hubs) {
        // A star with k leaves, diagonal d and edge weight e has eigenvalues
        // d +- |e| sqrt(k) and d, so the largest group decides definiteness.
        const int largest = std::min(spec.hub_group_size, q);
        const double bound = spec.diagonal_target - std::abs(spec.edge_value) * std::sqrt(largest - 1.0);
        if (!(bound > 0.0)) {
            std::ostringstream msg;
            msg << "hubs spec is not positive definite: diagonal_target - |edge_value| * sqrt(group - 1) = "
                << bound << " <= 0";
            throw ConstructionError(msg.str());
        }
        for (int start = 0; start < q; start += spec.hub_group_size) {
            const int end = std::min(start + spec.hub_group_size, q);
            for (int j = start + 1; j < end; ++j) omega.set(start, j, spec.edge_value);
        }
        for (int i = 0; i < q; ++i) omega.set(i, i, spec.diagonal_target);
    } else {
        std::mt19937_64 rng(spec.seed);
        std::bernoulli_distribution edge(spec.edge_prob);
        std::uniform_real_distribution<double> magnitude(spec.value_lo, spec.value_hi);
        std::bernoulli_distribution negative(0.5);
        Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(q);
        for (int j = 1; j < q; ++j) {
            for (int i = 0; i < j; ++i) {
                if (!edge(rng)) continue;
                double v = magnitude(rng);
                if (negative(rng)) v = -v;
                omega.set(i, j, v);
                row_abs(i) += std::abs(v);
                row_abs(j) += std::abs(v);
            }
        }
        for (int i = 0; i < q; ++i) omega.set(i, i, spec.diagonal_target + row_abs(i));
    }

    if (!is_positive_definite(omega)) {
        throw ConstructionError("generated precision matrix is not positive definite");
    }
    return omega;
}

int count_edges(const SymmetricMatrix& m) {
    int count = 0;
    for (int j = 1; j < m.dim(); ++j) {
        for (int i = 0; i < j; ++i) count += (m(i, j) != 0.0);
    }
    return count;
}

Dataset sample_gaussian(const SymmetricMatrix& omega0, int n, std::uint64_t seed) {
    if (n < 1) throw InputError("sample count must be >= 1");
    Eigen::LLT<Eigen::MatrixXd> llt(omega0.dense());
    if (llt.info() != Eigen::Success) {
        throw InputError("sample_gaussian: precision matrix is not positive definite");
    }
    const int q = omega0.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(q, n);
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < q; ++i) z(i, r) = normal(rng);
    }
    // omega0 = L L^T; x = L^{-T} z has covariance omega0^{-1}.
    llt.matrixU().solveInPlace(z);
    return Dataset(z.transpose());
}

}  // namespace llagraph
