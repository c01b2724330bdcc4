#pragma once

#include <cstdint>
#include <string>

#include "llagraph/linalg.hpp"

namespace llagraph {

enum class StructureKind { hubs, random };

std::string to_string(StructureKind kind);
StructureKind parse_structure_kind(const std::string& s);

struct StructureSpec {
    StructureKind kind = StructureKind::hubs;
    int q = 100;
    // hubs
    int hub_group_size = 10;
    double edge_value = 0.25;
    // random
    double edge_prob = 0.01;
    double value_lo = 0.2;
    double value_hi = 1.0;

    double diagonal_target = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Hubs: consecutive groups whose first node links to the rest of the group.
/// Random: independent Bernoulli edges with magnitudes uniform on
/// [value_lo, value_hi] and a random sign, made positive definite by
/// diagonal dominance. Throws ConstructionError for a non-PD hubs spec.
SymmetricMatrix generate_precision(const StructureSpec& spec);

/// Number of nonzero entries strictly above the diagonal.
int count_edges(const SymmetricMatrix& m);

/// n draws from N(0, omega0^{-1}).
Dataset sample_gaussian(const SymmetricMatrix& omega0, int n, std::uint64_t seed);

}  // namespace llagraph
