#include "llagraph/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "llagraph/error.hpp"
#include "llagraph/io.hpp"
#include "llagraph/parallel.hpp"

namespace llagraph {

void CVConfig::validate(int n) const {
    if (folds < 2) throw InputError("folds must be >= 2");
    if (folds > n) throw InputError("folds must not exceed the sample count");
    if (grid.empty()) throw InputError("CV grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InputError("CV grid values must be finite and > 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("CV grid must be strictly increasing");
    }
    solver.validate();
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw InputError("invalid log grid");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + i * step);
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> default_grid(PenaltyFamily family, int n) {
    if (family == PenaltyFamily::horseshoe) return log_grid(1e-3, 1.0, 10);
    return log_grid(1e-3 * n, 1.0 * n, 10);
}

std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> fold(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) fold[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos % folds;
    return fold;
}

CVResult cv_select(const Dataset& data, const CVConfig& cfg, int threads) {
    cfg.validate(data.n());
    const int folds = cfg.folds;
    const int grid_size = static_cast<int>(cfg.grid.size());
    const auto fold_of = fold_assignment(data.n(), folds, cfg.seed);

    std::vector<ScatterMatrix> train;
    std::vector<ScatterMatrix> test;
    CVResult result;
    for (int f = 0; f < folds; ++f) {
        std::vector<int> train_rows;
        std::vector<int> test_rows;
        for (int r = 0; r < data.n(); ++r) {
            (fold_of[static_cast<std::size_t>(r)] == f ? test_rows : train_rows).push_back(r);
        }
        train.push_back(sample_scatter(data.subset(train_rows)));
        test.push_back(sample_scatter(data.subset(test_rows)));
        result.fold_sizes.push_back(static_cast<int>(test_rows.size()));
    }

    result.table.resize(static_cast<std::size_t>(grid_size * folds));
    parallel_for(grid_size * folds, threads, [&](int cell_index) {
        const int g = cell_index / folds;
        const int f = cell_index % folds;
        CVCell& cell = result.table[static_cast<std::size_t>(cell_index)];
        cell.scale = cfg.grid[static_cast<std::size_t>(g)];
        cell.fold = f;
        SolverConfig solver = cfg.solver;
        solver.penalty.scale = cell.scale;
        solver.n_starts = 1;
        try {
            const auto& tr = train[static_cast<std::size_t>(f)];
            const auto& te = test[static_cast<std::size_t>(f)];
            const auto fit = lla_solve(tr, tr.n, solver);
            cell.heldout_nll = gaussian_nll(fit.estimate, te, te.n);
            cell.converged = fit.converged;
            cell.failed = !std::isfinite(cell.heldout_nll);
        } catch (const std::exception&) {
            cell.failed = true;
            cell.heldout_nll = std::numeric_limits<double>::quiet_NaN();
        }
    });

    result.mean_scores.assign(static_cast<std::size_t>(grid_size), std::numeric_limits<double>::quiet_NaN());
    int best = -1;
    for (int g = 0; g < grid_size; ++g) {
        double sum = 0.0;
        bool ok = true;
        for (int f = 0; f < folds; ++f) {
            const auto& cell = result.table[static_cast<std::size_t>(g * folds + f)];
            ok = ok && !cell.failed;
            sum += cell.heldout_nll;
        }
        if (!ok) continue;
        const double mean = sum / folds;
        result.mean_scores[static_cast<std::size_t>(g)] = mean;
        // Grid is increasing, so <= moves ties toward the larger scale.
        if (best < 0 || mean <= result.mean_scores[static_cast<std::size_t>(best)]) best = g;
    }
    if (best < 0) throw DegeneracyError("cross-validation: every grid value had a failed fold fit", -1);
    result.selected = cfg.grid[static_cast<std::size_t>(best)];
    return result;
}

void write_cv_table_csv(std::ostream& out, const CVResult& result) {
    out << "scale,fold,heldout_nll,converged\n";
    for (const auto& cell : result.table) {
        out << io::format_double(cell.scale) << ',' << cell.fold << ','
            << (cell.failed ? std::string("NA") : io::format_double(cell.heldout_nll)) << ','
            << (cell.converged ? "true" : "false") << '\n';
    }
}

}  // namespace llagraph
