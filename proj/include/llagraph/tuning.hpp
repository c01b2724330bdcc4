#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "llagraph/linalg.hpp"
#include "llagraph/solver.hpp"

namespace llagraph {

struct CVConfig {
    int folds = 5;
    /// Candidate penalty scales (tau or rho), strictly increasing.
    std::vector<double> grid;
    std::uint64_t seed = 0;
    /// Template for every fold fit; its penalty scale is replaced by each grid value.
    /// Fold fits always use a single start.
    SolverConfig solver;

    void validate(int n) const;
};

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// Default candidates: tau on [1e-3, 1]; rho on n * [1e-3, 1].
std::vector<double> default_grid(PenaltyFamily family, int n);

struct CVCell {
    double scale = 0.0;
    int fold = 0;
    double heldout_nll = 0.0;
    bool converged = false;
    bool failed = false;
};

struct CVResult {
    double selected = 0.0;
    /// Row-major by (grid index, fold index).
    std::vector<CVCell> table;
    /// Mean held-out score per grid value; NaN for disqualified values.
    std::vector<double> mean_scores;
    std::vector<int> fold_sizes;
};

/// Fold id per row: a seeded shuffle dealt round-robin into `folds` groups.
std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed);

/// Picks the grid value with the lowest mean held-out Gaussian NLL; ties go to
/// the larger scale. A value with any failed fold fit is disqualified.
CVResult cv_select(const Dataset& data, const CVConfig& cfg, int threads = 1);

void write_cv_table_csv(std::ostream& out, const CVResult& result);

}  // namespace llagraph
