#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llagraph/error.hpp"
#include "llagraph/simgen.hpp"
#include "llagraph/tuning.hpp"

using namespace llagraph;

namespace {

Dataset hubs_data(int q, int n, std::uint64_t seed) {
    StructureSpec spec;
    spec.q = q;
    spec.hub_group_size = 10;
    spec.edge_value = 0.3;
    return sample_gaussian(generate_precision(spec), n, seed);
}

CVConfig constant_cv(std::vector<double> grid) {
    CVConfig cfg;
    cfg.grid = std::move(grid);
    cfg.seed = 3;
    cfg.solver.penalty = PenaltyConfig::constant(1.0);
    cfg.solver.start = StartKind::ridge;
    return cfg;
}

}  // namespace

TEST_SUITE("tuning") {

TEST_CASE("fold assignment is a balanced partition") {
    for (int n : {5, 24, 120, 121, 137}) {
        for (int folds : {2, 5, 7}) {
            if (folds > n) continue;
            const auto f = fold_assignment(n, folds, 11);
            REQUIRE(static_cast<int>(f.size()) == n);
            std::vector<int> sizes(folds, 0);
            for (int id : f) {
                REQUIRE(id >= 0);
                REQUIRE(id < folds);
                ++sizes[id];
            }
            const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
            CHECK(*hi - *lo <= 1);
        }
    }
    CHECK(fold_assignment(50, 5, 1) == fold_assignment(50, 5, 1));
    CHECK(fold_assignment(50, 5, 1) != fold_assignment(50, 5, 2));
}

TEST_CASE("grids") {
    const auto g = log_grid(1e-3, 1.0, 10);
    REQUIRE(g.size() == 10);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(10.0, 1.0 / 3.0)));
    CHECK(default_grid(PenaltyFamily::horseshoe, 120) == g);
    CHECK(default_grid(PenaltyFamily::constant, 120).back() == doctest::Approx(120.0));
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), InputError);
}

TEST_CASE("single value grid") {
    const auto data = hubs_data(10, 40, 1);
    const auto res = cv_select(data, constant_cv({2.5}));
    CHECK(res.selected == 2.5);
    CHECK(res.table.size() == 5);
    CHECK(res.fold_sizes == std::vector<int>{8, 8, 8, 8, 8});
}

TEST_CASE("five folds on n = 120 give 24 rows each") {
    const auto data = hubs_data(10, 120, 2);
    const auto res = cv_select(data, constant_cv({1.0}));
    CHECK(res.fold_sizes == std::vector<int>{24, 24, 24, 24, 24});
}

TEST_CASE("total shrinkage scores worse than moderate shrinkage") {
    const auto data = hubs_data(20, 120, 4);
    const auto res = cv_select(data, constant_cv({5.0, 1e6}));
    CHECK(res.mean_scores[0] < res.mean_scores[1]);
    CHECK(res.selected == 5.0);
    for (const auto& cell : res.table) {
        if (cell.converged) CHECK(std::isfinite(cell.heldout_nll));
    }
}

TEST_CASE("selection is deterministic and ignores threads") {
    const auto data = hubs_data(10, 60, 5);
    auto cfg = constant_cv({0.5, 2.0, 8.0, 32.0});
    const auto a = cv_select(data, cfg, 1);
    const auto b = cv_select(data, cfg, 3);
    CHECK(a.selected == b.selected);
    REQUIRE(a.table.size() == b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i) CHECK(a.table[i].heldout_nll == b.table[i].heldout_nll);
}

TEST_CASE("selection does not depend on grid order") {
    const auto data = hubs_data(10, 60, 6);
    auto cfg = constant_cv({0.5, 2.0, 8.0, 32.0});
    const auto full = cv_select(data, cfg);
    // The grid must be increasing, so reorderings are expressed by evaluating subsets
    // that keep the winner; the winner must survive every one of them.
    for (std::size_t drop = 0; drop < cfg.grid.size(); ++drop) {
        if (cfg.grid[drop] == full.selected) continue;
        auto sub = cfg;
        sub.grid.erase(sub.grid.begin() + static_cast<long>(drop));
        CHECK(cv_select(data, sub).selected == full.selected);
    }
}

TEST_CASE("ties go to the larger scale") {
    // Every grid value thresholds everything, so all scores are equal.
    const auto data = hubs_data(10, 40, 7);
    const auto res = cv_select(data, constant_cv({1e7, 1e8, 1e9}));
    CHECK(res.mean_scores[0] == res.mean_scores[2]);
    CHECK(res.selected == 1e9);
}

TEST_CASE("validation and the CSV table") {
    const auto data = hubs_data(10, 20, 8);
    auto cfg = constant_cv({2.0, 1.0});
    CHECK_THROWS_AS(cv_select(data, cfg), InputError);
    cfg.grid = {};
    CHECK_THROWS_AS(cv_select(data, cfg), InputError);
    cfg.grid = {1.0};
    cfg.folds = 21;
    CHECK_THROWS_AS(cv_select(data, cfg), InputError);
    cfg.folds = 1;
    CHECK_THROWS_AS(cv_select(data, cfg), InputError);

    cfg.folds = 4;
    const auto res = cv_select(data, cfg);
    std::ostringstream out;
    write_cv_table_csv(out, res);
    const std::string text = out.str();
    CHECK(text.rfind("scale,fold,heldout_nll,converged\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

}
