#include "llagraph/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "llagraph/error.hpp"
#include "llagraph/parallel.hpp"
#include "llagraph/random.hpp"

namespace llagraph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd uniform_scales(std::uint64_t seed, int q) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    Eigen::VectorXd u(q);
    for (int i = 0; i < q; ++i) u(i) = unif(rng);
    return u;
}

}  // namespace

std::string to_string(StartKind kind) {
    switch (kind) {
        case StartKind::identity: return "identity";
        case StartKind::scaled_diagonal_random: return "diag-random";
        case StartKind::ridge: return "ridge";
        case StartKind::ridge_random: return "ridge-random";
        case StartKind::user_supplied: return "user";
    }
    return "unknown";
}

StartKind parse_start_kind(const std::string& s) {
    if (s == "identity") return StartKind::identity;
    if (s == "diag-random") return StartKind::scaled_diagonal_random;
    if (s == "ridge") return StartKind::ridge;
    if (s == "ridge-random") return StartKind::ridge_random;
    if (s == "user") return StartKind::user_supplied;
    throw InputError("unknown start kind: " + s);
}

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw InputError("tol must be > 0");
    if (max_outer_iters < 1) throw InputError("max_outer_iters must be >= 1");
    if (n_starts < 1) throw InputError("n_starts must be >= 1");
    if (!(ridge_factor > 0.0)) throw InputError("ridge_factor must be > 0");
    if (start == StartKind::user_supplied && !user_start) {
        throw InputError("user_supplied start requires a start matrix");
    }
    penalty.validate();
}

SolverState::SolverState(SymmetricMatrix start) : omega(std::move(start)) {
    refresh_inverse();
}

void SolverState::refresh_inverse() {
    Eigen::LLT<Eigen::MatrixXd> llt(omega.dense());
    if (llt.info() != Eigen::Success) {
        throw DegeneracyError("iterate lost positive definiteness", -1);
    }
    inverse = llt.solve(Eigen::MatrixXd::Identity(omega.dim(), omega.dim()));
    inverse = 0.5 * (inverse + inverse.transpose()).eval();
}

double soft_threshold_coord(double omega_hat, double eta) {
    if (!std::isfinite(omega_hat) || !std::isfinite(eta)) {
        throw InputError("soft_threshold_coord requires finite inputs");
    }
    if (eta < 0.0) throw InputError("soft_threshold_coord requires eta >= 0");
    if (omega_hat < -eta) return -eta - omega_hat;
    if (omega_hat > eta) return eta - omega_hat;
    return 0.0;
}

void update_column(SolverState& state, const ScatterMatrix& scatter, int col,
                   const Penalty& penalty, ColumnWorkspace& ws, int n) {
    const int q = state.omega.dim();
    if (col < 0 || col >= q) throw InputError("column index out of range");
    const int m = q - 1;
    const Eigen::MatrixXd& ns = scatter.s.dense();
    Eigen::MatrixXd& w = state.inverse;

    ws.others.resize(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) ws.others[static_cast<std::size_t>(p)] = (p == col) ? q - 1 : p;

    ws.s22 = ns(col, col);
    if (!(ws.s22 > 0.0)) {
        throw DegeneracyError("scatter diagonal is not positive at column " + std::to_string(col) +
                                  " (constant zero variable?)",
                              col);
    }

    // Inverse of the leading block through the Schur identity on the full inverse.
    const double w_cc = w(col, col);
    Eigen::VectorXd w_oc(m);
    ws.beta.resize(m);
    ws.s12.resize(m);
    ws.g_weights.resize(m);
    for (int a = 0; a < m; ++a) {
        const int ia = ws.others[static_cast<std::size_t>(a)];
        w_oc(a) = w(ia, col);
        ws.beta(a) = state.omega(ia, col);
        ws.s12(a) = ns(ia, col);
        ws.g_weights(a) = penalty.deriv(ws.beta(a));
    }
    ws.omega11_inv = w(ws.others, ws.others);
    ws.omega11_inv.noalias() -= (w_oc / w_cc) * w_oc.transpose();

    ws.inv_beta.noalias() = ws.omega11_inv * ws.beta;
    for (int a = 0; a < m; ++a) {
        const double c22 = ws.omega11_inv(a, a);
        if (!(c22 > 0.0)) {
            throw DegeneracyError("non-positive conditional variance at column " + std::to_string(col),
                                  col);
        }
        const double cross = ws.inv_beta(a) - c22 * ws.beta(a);  // C12^T beta_{-k}
        const double denom = ws.s22 * c22;
        const double omega_hat = (ws.s12(a) + ws.s22 * cross) / denom;
        const double eta = 2.0 * ws.g_weights(a) / denom;
        const double updated = soft_threshold_coord(omega_hat, eta);
        const double delta = updated - ws.beta(a);
        if (delta != 0.0) {
            ws.inv_beta.noalias() += delta * ws.omega11_inv.col(a);
            ws.beta(a) = updated;
        }
    }

    ws.gamma = static_cast<double>(n) / ws.s22;
    for (int a = 0; a < m; ++a) {
        state.omega.set(ws.others[static_cast<std::size_t>(a)], col, ws.beta(a));
    }
    state.omega.set(col, col, ws.gamma + ws.beta.dot(ws.inv_beta));

    // Block inverse of the updated matrix.
    const double inv_gamma = 1.0 / ws.gamma;
    w(ws.others, ws.others) = ws.omega11_inv + (inv_gamma * ws.inv_beta) * ws.inv_beta.transpose();
    for (int a = 0; a < m; ++a) {
        const int ia = ws.others[static_cast<std::size_t>(a)];
        w(ia, col) = -ws.inv_beta(a) * inv_gamma;
        w(col, ia) = w(ia, col);
    }
    w(col, col) = inv_gamma;
}

double objective_eval(const SymmetricMatrix& omega, const ScatterMatrix& scatter, int n,
                      const Penalty& penalty) {
    double total = gaussian_nll(omega, scatter, n);
    const int q = omega.dim();
    const double at_zero = penalty.value(0.0);
    double pen = 0.0;
    for (int j = 1; j < q; ++j) {
        for (int i = 0; i < j; ++i) {
            const double v = omega(i, j);
            pen += (v == 0.0) ? at_zero : penalty.value(v);
        }
    }
    return total + 2.0 * pen;
}

double objective_eval(const SymmetricMatrix& omega, const ScatterMatrix& scatter, int n,
                      const PenaltyConfig& penalty) {
    return objective_eval(omega, scatter, n, Penalty(penalty));
}

SymmetricMatrix make_start(const SolverConfig& cfg, const ScatterMatrix& scatter, int n,
                           int start_index) {
    const int q = scatter.dim();
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(start_index));
    switch (cfg.start) {
        case StartKind::identity:
            return SymmetricMatrix::identity(q);
        case StartKind::scaled_diagonal_random:
            return SymmetricMatrix::diagonal(uniform_scales(seed, q));
        case StartKind::ridge:
        case StartKind::ridge_random: {
            const Eigen::MatrixXd cov = scatter.s.dense() / static_cast<double>(n);
            double delta = cfg.ridge_factor * cov.diagonal().mean();
            if (!(delta > 0.0)) delta = cfg.ridge_factor;
            Eigen::VectorXd shift = Eigen::VectorXd::Constant(q, delta);
            if (cfg.start == StartKind::ridge_random) shift = shift.cwiseProduct(uniform_scales(seed, q));
            Eigen::MatrixXd reg = cov;
            reg.diagonal() += shift;
            return inverse_pd(SymmetricMatrix(reg));
        }
        case StartKind::user_supplied:
            if (!cfg.user_start) throw InputError("user_supplied start requires a start matrix");
            return *cfg.user_start;
    }
    throw InputError("unknown start kind");
}

SolverResult lla_solve_from(const ScatterMatrix& scatter, int n, const SolverConfig& cfg,
                            const SymmetricMatrix& start) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (start.dim() != scatter.dim()) throw InputError("start and scatter dimensions differ");
    if (!is_positive_definite(start)) throw InputError("start matrix is not positive definite");

    const Penalty penalty(cfg.penalty);
    SolverState state(start);
    ColumnWorkspace ws;
    const int q = scatter.dim();

    SolverResult result{start, 0, false, {}, 0.0, 0.0};
    result.objective_trace.push_back(objective_eval(state.omega, scatter, n, penalty));

    for (int t = 1; t <= cfg.max_outer_iters; ++t) {
        const Eigen::MatrixXd previous = state.omega.dense();
        try {
            for (int col = q - 1; col >= 0; --col) {
                update_column(state, scatter, col, penalty, ws, n);
                if (cfg.check_pd_each_column && !is_positive_definite(state.omega)) {
                    throw DegeneracyError("column write-back lost positive definiteness", col);
                }
            }
            state.refresh_inverse();
        } catch (const DegeneracyError& e) {
            throw DegeneracyError(std::string(e.what()) + " (outer iteration " + std::to_string(t) + ")",
                                  e.column());
        }
        result.outer_iters = t;
        result.last_change = (state.omega.dense() - previous).norm();
        result.objective_trace.push_back(objective_eval(state.omega, scatter, n, penalty));
        if (result.last_change < cfg.tol) {
            result.converged = true;
            break;
        }
    }
    result.estimate = state.omega;
    result.wall_time = seconds_since(t0);
    return result;
}

SolverResult lla_solve(const ScatterMatrix& scatter, int n, const SolverConfig& cfg) {
    cfg.validate();
    return lla_solve_from(scatter, n, cfg, make_start(cfg, scatter, n, 0));
}

SupportMask support_of(const SymmetricMatrix& m, double zero_tol) {
    SupportMask mask = (m.dense().array().abs() > zero_tol).matrix();
    mask.diagonal().setConstant(false);
    return mask;
}

MultistartResult multistart_estimate(const ScatterMatrix& scatter, int n, const SolverConfig& cfg,
                                     int threads) {
    const auto t0 = Clock::now();
    cfg.validate();
    const int starts = cfg.n_starts;
    std::vector<std::optional<SolverResult>> runs(static_cast<std::size_t>(starts));
    std::vector<std::string> errors(static_cast<std::size_t>(starts));

    parallel_for(starts, threads, [&](int i) {
        try {
            runs[static_cast<std::size_t>(i)] =
                lla_solve_from(scatter, n, cfg, make_start(cfg, scatter, n, i));
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = "start " + std::to_string(i) + ": " + e.what();
        }
    });

    const int q = scatter.dim();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(q, q);
    MultistartResult out{SymmetricMatrix(q), SolverResult{SymmetricMatrix(q), 0, false, {}, 0.0, 0.0}, 0, SupportMask(), {}, {}, {}, 0,
                         true, 0.0};
    double best_obj = std::numeric_limits<double>::infinity();
    for (int i = 0; i < starts; ++i) {
        auto& run = runs[static_cast<std::size_t>(i)];
        if (!run) {
            out.failures.push_back(errors[static_cast<std::size_t>(i)]);
            continue;
        }
        sum += run->estimate.dense();
        counts += support_of(run->estimate).cast<double>();
        out.total_outer_iters += run->outer_iters;
        out.all_converged = out.all_converged && run->converged;
        if (run->objective_trace.back() < best_obj) {
            best_obj = run->objective_trace.back();
            out.best_index = i;
        }
        out.runs.push_back(std::move(*run));
    }
    if (out.runs.empty()) {
        std::string msg = "all " + std::to_string(starts) + " starts failed";
        if (!out.failures.empty()) msg += "; first: " + out.failures.front();
        throw DegeneracyError(msg, -1);
    }
    const double successes = static_cast<double>(out.runs.size());
    out.average = SymmetricMatrix(Eigen::MatrixXd(sum / successes));
    out.support_frequency = counts / successes;
    out.support = (out.support_frequency.array() > 0.5).matrix();
    for (std::size_t r = 0; r < out.runs.size(); ++r) {
        if (out.runs[r].objective_trace.back() == best_obj) {
            out.best = out.runs[r];
            break;
        }
    }
    out.wall_time = seconds_since(t0);
    return out;
}

}  // namespace llagraph
