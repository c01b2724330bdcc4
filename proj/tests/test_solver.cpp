#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "llagraph/error.hpp"
#include "llagraph/oracle.hpp"
#include "llagraph/simgen.hpp"
#include "llagraph/solver.hpp"

using namespace llagraph;
using doctest::Approx;

namespace {

ScatterMatrix simulated_scatter(StructureKind kind, int q, int n, std::uint64_t seed) {
    StructureSpec spec;
    spec.kind = kind;
    spec.q = q;
    spec.hub_group_size = std::min(q, 10);
    spec.edge_prob = 0.1;
    spec.seed = seed;
    return sample_scatter(sample_gaussian(generate_precision(spec), n, seed + 1));
}

SolverConfig horseshoe_cfg(double tau) {
    SolverConfig cfg;
    cfg.penalty = PenaltyConfig::horseshoe(tau);
    return cfg;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("soft threshold cases") {
    CHECK(soft_threshold_coord(0.5, 1.0) == 0.0);
    CHECK(soft_threshold_coord(-3.0, 1.0) == 2.0);
    CHECK(soft_threshold_coord(3.0, 1.0) == -2.0);
    CHECK(soft_threshold_coord(1.0, 1.0) == 0.0);
    CHECK(soft_threshold_coord(-1.0, 1.0) == 0.0);
    CHECK(soft_threshold_coord(0.25, 0.0) == -0.25);
    CHECK_THROWS_AS(soft_threshold_coord(1.0, -0.1), InputError);
    CHECK_THROWS_AS(soft_threshold_coord(std::nan(""), 1.0), InputError);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = SolverConfig{};
    cfg.max_outer_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = SolverConfig{};
    cfg.n_starts = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = SolverConfig{};
    cfg.start = StartKind::user_supplied;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    CHECK(parse_start_kind("diag-random") == StartKind::scaled_diagonal_random);
    CHECK_THROWS_AS(parse_start_kind("zeros"), InputError);
}

TEST_CASE("update_column with overwhelming threshold") {
    const ScatterMatrix sc(SymmetricMatrix::diagonal(Eigen::Vector2d(2.0, 2.0)), 2);
    SolverState state(SymmetricMatrix::identity(2));
    ColumnWorkspace ws;
    const Penalty p(PenaltyConfig::constant(1e9));
    update_column(state, sc, 1, p, ws, 2);
    CHECK(state.omega(0, 1) == 0.0);
    CHECK(state.omega(1, 1) == 1.0);
    CHECK(ws.gamma == 1.0);
}

TEST_CASE("update_column reports a zero-variance column") {
    Eigen::MatrixXd ns = Eigen::MatrixXd::Identity(3, 3);
    ns(1, 1) = 0.0;
    const ScatterMatrix sc(SymmetricMatrix(ns), 3);
    SolverState state(SymmetricMatrix::identity(3));
    ColumnWorkspace ws;
    const Penalty p(PenaltyConfig::constant(0.1));
    try {
        update_column(state, sc, 1, p, ws, 3);
        FAIL("expected DegeneracyError");
    } catch (const DegeneracyError& e) {
        CHECK(e.column() == 1);
    }
}

TEST_CASE("q = 2 unpenalized column matches the MLE") {
    const auto sc = sample_scatter(Dataset(testing::random_matrix(40, 2, 8)));
    SolverConfig cfg;
    cfg.penalty = PenaltyConfig::constant(0.0);
    cfg.tol = 1e-12;
    cfg.start = StartKind::identity;
    const auto res = lla_solve(sc, 40, cfg);
    const Eigen::MatrixXd mle = 40.0 * sc.s.dense().inverse();
    CHECK(res.converged);
    CHECK(max_abs_diff(res.estimate.dense(), mle) < 1e-6);
}

TEST_CASE("update_column on column i equals swap, update last, swap back") {
    const auto sc = simulated_scatter(StructureKind::hubs, 6, 30, 21);
    const Penalty p(PenaltyConfig::horseshoe(0.3));
    const auto start = make_start(SolverConfig{}, sc, 30, 0);
    for (int col = 0; col < 6; ++col) {
        SolverState direct(start);
        ColumnWorkspace ws;
        update_column(direct, sc, col, p, ws, 30);

        SolverState swapped(swap_rowcol(start, col, 5));
        const ScatterMatrix sc_swapped(swap_rowcol(sc.s, col, 5), sc.n);
        update_column(swapped, sc_swapped, 5, p, ws, 30);
        const auto back = swap_rowcol(swapped.omega, col, 5);
        CAPTURE(col);
        CHECK(max_abs_diff(direct.omega.dense(), back.dense()) < 1e-12);
    }
}

TEST_CASE("maintained inverse tracks the iterate") {
    const auto sc = simulated_scatter(StructureKind::random, 8, 40, 5);
    const Penalty p(PenaltyConfig::horseshoe(0.2));
    SolverState state(make_start(SolverConfig{}, sc, 40, 0));
    ColumnWorkspace ws;
    for (int col = 7; col >= 0; --col) {
        update_column(state, sc, col, p, ws, 40);
        const Eigen::MatrixXd prod = state.inverse * state.omega.dense();
        CHECK(max_abs_diff(prod, Eigen::MatrixXd::Identity(8, 8)) < 1e-9);
    }
}

TEST_CASE("constant penalty objective arithmetic") {
    const auto sc = sample_scatter(Dataset(testing::random_matrix(10, 3, 4)));
    const auto omega = testing::random_pd(3, 6, 2.0);
    CHECK(objective_eval(omega, sc, 10, PenaltyConfig::constant(0.0)) ==
          Approx(gaussian_nll(omega, sc, 10)).epsilon(1e-14));

    auto shifted = omega;
    const double v = omega(0, 1);
    shifted.set(0, 1, v + (v >= 0 ? 1.0 : -1.0));
    if (!is_positive_definite(shifted)) shifted = omega;  // random_pd with shift 2 keeps this PD
    const auto cfg = PenaltyConfig::constant(2.0);
    const double delta_obj = objective_eval(shifted, sc, 10, cfg) - objective_eval(omega, sc, 10, cfg);
    const double delta_nll = gaussian_nll(shifted, sc, 10) - gaussian_nll(omega, sc, 10);
    CHECK(delta_obj == Approx(delta_nll + 4.0).epsilon(1e-12));

    Eigen::MatrixXd bad(3, 3);
    bad << 1, 2, 0, 2, 1, 0, 0, 0, 1;
    CHECK_THROWS_AS(objective_eval(SymmetricMatrix(bad), sc, 10, cfg), DomainError);
}

TEST_CASE("q = 2 horseshoe solution matches the exhaustive grid") {
    const int n = 50;
    Eigen::Matrix2d ns;
    ns << 1.0, 0.5, 0.5, 1.0;
    const ScatterMatrix sc(SymmetricMatrix(Eigen::MatrixXd(n * ns)), n);
    auto cfg = horseshoe_cfg(1.0);
    cfg.tol = 1e-10;
    const auto res = lla_solve(sc, n, cfg);
    REQUIRE(res.converged);
    // Box around the solver output, wide enough that the argmin is interior.
    const double a = res.estimate(0, 0), b = res.estimate(0, 1), c = res.estimate(1, 1);
    const oracle::GridSpec grid{{a - 0.05, a + 0.05}, {b - 0.05, b + 0.05}, {c - 0.05, c + 0.05}, 1e-3};
    const auto g = oracle::grid_map_2x2(sc, n, cfg.penalty, grid);
    CHECK_FALSE(g.on_boundary);
    CHECK(max_abs_diff(res.estimate.dense(), g.argmin.dense()) < 1e-2);
    // The solver never beats the grid by more than discretization error.
    CHECK(objective_eval(res.estimate, sc, n, cfg.penalty) <= g.objective + 1e-6);
    CHECK(g.objective <= objective_eval(res.estimate, sc, n, cfg.penalty) + 1e-3);
}

TEST_CASE("MLE recovery with rho = 0") {
    const auto sc = sample_scatter(Dataset(testing::random_matrix(200, 6, 17)));
    SolverConfig cfg;
    cfg.penalty = PenaltyConfig::constant(0.0);
    cfg.tol = 1e-10;
    const auto res = lla_solve(sc, 200, cfg);
    CHECK(max_abs_diff(res.estimate.dense(), 200.0 * sc.s.dense().inverse()) < 1e-5);
}

TEST_CASE("iterates stay PD and the objective never increases") {
    for (int trial = 0; trial < 6; ++trial) {
        const auto kind = trial % 2 ? StructureKind::random : StructureKind::hubs;
        const int q = 10 + 5 * (trial % 3);
        const auto sc = simulated_scatter(kind, q, 3 * q, 300 + trial);
        auto cfg = trial < 3 ? horseshoe_cfg(0.1 + 0.1 * trial) : SolverConfig{};
        if (trial >= 3) cfg.penalty = PenaltyConfig::constant(0.05 * 3 * q);
        cfg.check_pd_each_column = true;
        cfg.seed = trial;
        const auto res = lla_solve(sc, 3 * q, cfg);
        CHECK(is_positive_definite(res.estimate));
        for (std::size_t t = 1; t < res.objective_trace.size(); ++t) {
            const double prev = res.objective_trace[t - 1];
            CHECK(res.objective_trace[t] <= prev + 1e-8 * std::abs(prev));
        }
    }
}

TEST_CASE("horseshoe estimates are sparse") {
    const auto sc = simulated_scatter(StructureKind::hubs, 20, 60, 77);
    for (double tau : {0.05, 0.5, 1.0}) {
        const auto res = lla_solve(sc, 60, horseshoe_cfg(tau));
        CHECK(support_of(res.estimate).count() < 20 * 19);
    }
}

TEST_CASE("converged estimate is a fixed point") {
    const auto sc = simulated_scatter(StructureKind::hubs, 15, 45, 12);
    const auto cfg = horseshoe_cfg(0.2);
    const auto first = lla_solve(sc, 45, cfg);
    REQUIRE(first.converged);
    const auto again = lla_solve_from(sc, 45, cfg, first.estimate);
    CHECK(again.converged);
    CHECK(again.outer_iters <= 2);
}

TEST_CASE("diagonal starts are fixed points of the horseshoe iteration") {
    const auto sc = simulated_scatter(StructureKind::hubs, 10, 30, 3);
    auto cfg = horseshoe_cfg(0.5);
    cfg.start = StartKind::identity;
    const auto res = lla_solve(sc, 30, cfg);
    CHECK(support_of(res.estimate).count() == 0);
}

TEST_CASE("permutation equivariance") {
    // Column sweeps make the horseshoe limit order dependent when several local minima exist,
    // so it is checked where the data pin down a single basin.
    const std::vector<int> perm{3, 7, 0, 5, 1, 6, 2, 4};
    const auto p = testing::permutation(perm);
    const std::vector<std::pair<PenaltyConfig, int>> cases{{PenaltyConfig::constant(4.0), 80},
                                                           {PenaltyConfig::horseshoe(0.3), 2000}};
    for (const auto& [pen, n] : cases) {
        const auto sc = simulated_scatter(StructureKind::hubs, 8, n, 41);
        const ScatterMatrix sc_p(SymmetricMatrix(Eigen::MatrixXd(p * sc.s.dense() * p.transpose())), n);
        SolverConfig cfg;
        cfg.penalty = pen;
        cfg.tol = 1e-12;
        cfg.max_outer_iters = 2000;
        cfg.start = StartKind::ridge;
        const auto a = lla_solve(sc, n, cfg);
        const auto b = lla_solve(sc_p, n, cfg);
        REQUIRE(a.converged);
        REQUIRE(b.converged);
        const Eigen::MatrixXd expected = p * a.estimate.dense() * p.transpose();
        CHECK(max_abs_diff(b.estimate.dense(), expected) < 1e-6);
    }
}

TEST_CASE("non-PD start and dimension mismatch are input errors") {
    const auto sc = simulated_scatter(StructureKind::hubs, 4, 12, 1);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
    bad(0, 1) = bad(1, 0) = 2.0;
    CHECK_THROWS_AS(lla_solve_from(sc, 12, SolverConfig{}, SymmetricMatrix(bad)), InputError);
    CHECK_THROWS_AS(lla_solve_from(sc, 12, SolverConfig{}, SymmetricMatrix::identity(3)), InputError);
}

TEST_CASE("max iteration stop is reported") {
    const auto sc = simulated_scatter(StructureKind::hubs, 20, 40, 9);
    auto cfg = horseshoe_cfg(0.3);
    cfg.max_outer_iters = 1;
    cfg.tol = 1e-12;
    const auto res = lla_solve(sc, 40, cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.outer_iters == 1);
    CHECK(res.objective_trace.size() == 2);
}

TEST_CASE("starts: kinds, determinism and user matrices") {
    const auto sc = simulated_scatter(StructureKind::hubs, 5, 20, 2);
    SolverConfig cfg;
    cfg.start = StartKind::scaled_diagonal_random;
    cfg.seed = 4;
    const auto d0 = make_start(cfg, sc, 20, 0);
    CHECK(d0 == make_start(cfg, sc, 20, 0));
    CHECK_FALSE(d0 == make_start(cfg, sc, 20, 1));
    for (int i = 0; i < 5; ++i) {
        CHECK(d0(i, i) >= 0.5);
        CHECK(d0(i, i) <= 2.0);
    }
    cfg.start = StartKind::ridge_random;
    const auto r0 = make_start(cfg, sc, 20, 0);
    CHECK(is_positive_definite(r0));
    CHECK_FALSE(r0 == make_start(cfg, sc, 20, 3));
    cfg.start = StartKind::user_supplied;
    cfg.user_start = SymmetricMatrix::identity(5);
    CHECK(make_start(cfg, sc, 20, 7) == SymmetricMatrix::identity(5));
}

TEST_CASE("multistart with one start equals a single solve") {
    const auto sc = simulated_scatter(StructureKind::hubs, 12, 36, 31);
    auto cfg = horseshoe_cfg(0.2);
    cfg.seed = 5;
    const auto single = lla_solve(sc, 36, cfg);
    const auto multi = multistart_estimate(sc, 36, cfg);
    CHECK(multi.average == single.estimate);
    CHECK(multi.best.estimate == single.estimate);
    CHECK(multi.support == support_of(single.estimate));
}

TEST_CASE("multistart agreement, averaging and thread independence") {
    const auto sc = simulated_scatter(StructureKind::hubs, 12, 36, 32);
    auto cfg = horseshoe_cfg(0.2);
    cfg.n_starts = 6;
    cfg.seed = 9;
    const auto one = multistart_estimate(sc, 36, cfg, 1);
    const auto many = multistart_estimate(sc, 36, cfg, 3);
    CHECK(one.average == many.average);
    CHECK(one.best_index == many.best_index);
    CHECK(one.runs.size() == 6);

    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(12, 12);
    for (const auto& r : one.runs) mean += r.estimate.dense() / 6.0;
    CHECK(max_abs_diff(mean, one.average.dense()) < 1e-14);
    for (const auto& r : one.runs) CHECK(one.best.objective_trace.back() <= r.objective_trace.back());
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            CHECK(one.support(i, j) == (i != j && one.support_frequency(i, j) > 0.5));

    // Identical starts converge to the same point: the average is that point.
    cfg.start = StartKind::ridge;
    const auto same = multistart_estimate(sc, 36, cfg);
    CHECK(max_abs_diff(same.average.dense(), same.runs.front().estimate.dense()) < 1e-14);
    CHECK(same.support == support_of(same.runs.front().estimate));
}

TEST_CASE("identity and random starts agree for the constant penalty") {
    const auto sc = simulated_scatter(StructureKind::hubs, 20, 60, 55);
    SolverConfig cfg;
    cfg.penalty = PenaltyConfig::constant(6.0);
    cfg.tol = 1e-6;
    cfg.start = StartKind::identity;
    const auto a = lla_solve(sc, 60, cfg);
    cfg.start = StartKind::scaled_diagonal_random;
    const auto b = lla_solve(sc, 60, cfg);
    const auto sa = support_of(a.estimate), sb = support_of(b.estimate);
    const double inter = (sa.array() && sb.array()).count();
    const double uni = (sa.array() || sb.array()).count();
    CHECK(inter / uni >= 0.8);
    CHECK(std::abs(a.objective_trace.back() - b.objective_trace.back()) <=
          0.01 * std::abs(a.objective_trace.back()));
}

}
