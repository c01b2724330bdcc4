#include "llagraph/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "llagraph/error.hpp"

namespace llagraph::oracle {

namespace {

std::vector<double> grid_points(const Interval& iv, double step) {
    std::vector<double> pts;
    const long count = static_cast<long>(std::floor((iv.hi - iv.lo) / step + 1e-9)) + 1;
    pts.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) pts.push_back(iv.lo + static_cast<double>(k) * step);
    return pts;
}

}  // namespace

void GridSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw InputError("grid step must be > 0");
    for (const auto* iv : {&diag1, &offdiag, &diag2}) {
        if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi) || iv->hi < iv->lo) {
            throw InputError("grid box bounds must be finite with lo <= hi");
        }
    }
}

double objective_2x2(const ScatterMatrix& scatter, int n, const Penalty& penalty, double a, double b,
                     double c) {
    const double det = a * c - b * b;
    const double s11 = scatter.s(0, 0);
    const double s12 = scatter.s(0, 1);
    const double s22 = scatter.s(1, 1);
    return -0.5 * n * std::log(det) + 0.5 * (s11 * a + 2.0 * s12 * b + s22 * c) +
           2.0 * penalty.value(b);
}

GridArgmin grid_map_2x2(const ScatterMatrix& scatter, int n, const PenaltyConfig& penalty_cfg,
                        const GridSpec& grid) {
    if (scatter.dim() != 2) throw InputError("grid_map_2x2 requires a 2x2 scatter");
    grid.validate();
    const Penalty penalty(penalty_cfg);
    const auto as = grid_points(grid.diag1, grid.step);
    const auto bs = grid_points(grid.offdiag, grid.step);
    const auto cs = grid_points(grid.diag2, grid.step);

    const double s11 = scatter.s(0, 0);
    const double s12 = scatter.s(0, 1);
    const double s22 = scatter.s(1, 1);

    double best = std::numeric_limits<double>::infinity();
    std::size_t ia_best = 0, ib_best = 0, ic_best = 0;
    long evaluated = 0;
    for (std::size_t ib = 0; ib < bs.size(); ++ib) {
        const double b = bs[ib];
        const double b_part = s12 * b + 2.0 * penalty.value(b);
        for (std::size_t ia = 0; ia < as.size(); ++ia) {
            const double a = as[ia];
            if (!(a > 0.0)) continue;
            for (std::size_t ic = 0; ic < cs.size(); ++ic) {
                const double c = cs[ic];
                const double det = a * c - b * b;
                if (!(c > 0.0) || !(det > 0.0)) continue;
                ++evaluated;
                const double f = -0.5 * n * std::log(det) + 0.5 * (s11 * a + s22 * c) + b_part;
                if (f < best) {
                    best = f;
                    ia_best = ia;
                    ib_best = ib;
                    ic_best = ic;
                }
            }
        }
    }
    if (evaluated == 0) throw InputError("grid contains no positive definite point");

    Eigen::MatrixXd m(2, 2);
    m << as[ia_best], bs[ib_best], bs[ib_best], cs[ic_best];
    const bool boundary = ia_best == 0 || ia_best + 1 == as.size() || ic_best == 0 ||
                          ic_best + 1 == cs.size() ||
                          ((ib_best == 0 || ib_best + 1 == bs.size()) && bs.size() > 1);
    return {SymmetricMatrix(m), best, boundary, evaluated};
}

MonteCarloEstimate mc_penalty_deriv(double x, double tau, long draws, std::uint64_t seed) {
    if (!(std::abs(x) > 0.0) || !std::isfinite(x)) throw InputError("mc_penalty_deriv requires finite x != 0");
    if (!(tau > 0.0)) throw InputError("mc_penalty_deriv requires tau > 0");
    if (draws < 100000) throw InputError("mc_penalty_deriv requires at least 1e5 draws");

    const double ax = std::abs(x);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Weights are computed relative to the density peak (scale = |x|) to avoid underflow.
    const double log_ref = -0.5 - std::log(ax);
    double sum_w = 0.0, sum_w2 = 0.0, sum_wv = 0.0, sum_wv2 = 0.0, sum_w2v = 0.0;
    for (long d = 0; d < draws; ++d) {
        double u = unif(rng);
        while (u == 0.0) u = unif(rng);
        const double lambda = std::tan(0.5 * std::numbers::pi * u);
        const double scale = lambda * tau;
        const double r = ax / scale;
        const double w = std::exp(-0.5 * r * r - std::log(scale) - log_ref);
        const double v = 1.0 / (scale * scale);
        sum_w += w;
        sum_w2 += w * w;
        sum_wv += w * v;
        sum_wv2 += w * w * v * v;
        sum_w2v += w * w * v;
    }
    if (!(sum_w > 0.0)) throw DomainError("mc_penalty_deriv: all importance weights vanished");
    const double ess = sum_w * sum_w / sum_w2;
    if (ess < 100.0) throw DomainError("mc_penalty_deriv: effective sample size below 100");

    const double ratio = sum_wv / sum_w;
    // Delta-method variance of the self-normalized ratio: sum w^2 (v - ratio)^2 / (sum w)^2.
    const double resid = sum_wv2 - 2.0 * ratio * sum_w2v + ratio * ratio * sum_w2;
    const double se_ratio = std::sqrt(std::max(resid, 0.0)) / sum_w;
    return {ax * ratio, ax * se_ratio, ess};
}

double finite_diff(const std::function<double(double)>& f, double x, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("finite_diff requires h > 0");
    const double up = f(x + h);
    const double down = f(x - h);
    if (!std::isfinite(up) || !std::isfinite(down)) throw DomainError("finite_diff: non-finite evaluation");
    return (up - down) / (2.0 * h);
}

}  // namespace llagraph::oracle
