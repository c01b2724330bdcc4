#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "llagraph/linalg.hpp"
#include "llagraph/penalty.hpp"

namespace llagraph {

enum class StartKind {
    identity,
    /// diag(u_1, ..., u_q), u_i ~ U[0.5, 2].
    scaled_diagonal_random,
    /// (nS/n + delta I)^{-1}, delta = ridge_factor * mean(diag(nS/n)).
    ridge,
    /// (nS/n + delta diag(u))^{-1}, u_i ~ U[0.5, 2]; dense and different for every start.
    ridge_random,
    user_supplied,
};

std::string to_string(StartKind kind);
StartKind parse_start_kind(const std::string& s);

struct SolverConfig {
    /// Stop when the Frobenius norm of a full sweep's change drops below tol.
    double tol = 1e-3;
    int max_outer_iters = 200;
    PenaltyConfig penalty;
    StartKind start = StartKind::ridge_random;
    std::optional<SymmetricMatrix> user_start;
    double ridge_factor = 0.5;
    int n_starts = 1;
    std::uint64_t seed = 0;
    /// Cholesky check after every column write-back (slow; for tests).
    bool check_pd_each_column = false;

    void validate() const;
};

struct SolverResult {
    SymmetricMatrix estimate;
    int outer_iters = 0;
    bool converged = false;
    /// Penalized objective at the start followed by one value per outer iteration.
    std::vector<double> objective_trace;
    /// Frobenius change of the last sweep.
    double last_change = 0.0;
    double wall_time = 0.0;
};

/// Per-column quantities of the blockwise update. `others` lists the remaining
/// indices in the order they occupy after swapping the active column into the
/// last position; coordinates are visited in that order.
struct ColumnWorkspace {
    std::vector<int> others;
    Eigen::MatrixXd omega11_inv;
    Eigen::VectorXd beta;
    /// omega11_inv * beta, kept current as coordinates change.
    Eigen::VectorXd inv_beta;
    Eigen::VectorXd s12;
    Eigen::VectorXd g_weights;
    double s22 = 0.0;
    double gamma = 0.0;
};

/// Iterate plus its inverse; the inverse is maintained through column updates
/// and refreshed by a full Cholesky inversion after every sweep.
struct SolverState {
    SymmetricMatrix omega;
    Eigen::MatrixXd inverse;

    explicit SolverState(SymmetricMatrix start);
    void refresh_inverse();
};

/// Scalar lasso step: sign(-omega_hat) * max(|omega_hat| - eta, 0).
double soft_threshold_coord(double omega_hat, double eta);

/// One blockwise update of column `col`: weights are frozen at the current
/// column values, each off-diagonal coordinate is soft-thresholded in turn,
/// then gamma = n / s22 and the diagonal is written back. Throws
/// DegeneracyError when s22 or a conditional variance is not positive.
void update_column(SolverState& state, const ScatterMatrix& scatter, int col,
                   const Penalty& penalty, ColumnWorkspace& ws, int n);

/// Negative log-likelihood plus sum_{i<j} 2 pen(|omega_ij|); diagonal unpenalized.
double objective_eval(const SymmetricMatrix& omega, const ScatterMatrix& scatter, int n,
                      const Penalty& penalty);
double objective_eval(const SymmetricMatrix& omega, const ScatterMatrix& scatter, int n,
                      const PenaltyConfig& penalty);

/// Start matrix for run `start_index` under cfg.start.
SymmetricMatrix make_start(const SolverConfig& cfg, const ScatterMatrix& scatter, int n,
                           int start_index);

/// LLA sweeps from an explicit start: columns visited q-1 down to 0.
SolverResult lla_solve_from(const ScatterMatrix& scatter, int n, const SolverConfig& cfg,
                            const SymmetricMatrix& start);

/// LLA from make_start(cfg, scatter, n, 0).
SolverResult lla_solve(const ScatterMatrix& scatter, int n, const SolverConfig& cfg);

using SupportMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct MultistartResult {
    /// Elementwise mean of the successful runs' estimates.
    SymmetricMatrix average;
    /// Run with the lowest final objective.
    SolverResult best;
    int best_index = 0;
    /// Off-diagonals nonzero in strictly more than half the successful runs.
    SupportMask support;
    Eigen::MatrixXd support_frequency;
    std::vector<SolverResult> runs;
    std::vector<std::string> failures;
    int total_outer_iters = 0;
    bool all_converged = false;
    double wall_time = 0.0;
};

/// Runs cfg.n_starts independent solves (start i uses make_start(..., i)).
/// Throws when every start fails.
MultistartResult multistart_estimate(const ScatterMatrix& scatter, int n, const SolverConfig& cfg,
                                     int threads = 1);

/// Mask of nonzero off-diagonal entries.
SupportMask support_of(const SymmetricMatrix& m, double zero_tol = 0.0);

}  // namespace llagraph
