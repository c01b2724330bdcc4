#pragma once

#include <cstdint>
#include <functional>

#include "llagraph/linalg.hpp"
#include "llagraph/penalty.hpp"

// Brute-force reference computations for verification. They are slow on
// purpose and avoid the solver's linear algebra.
namespace llagraph::oracle {

struct Interval {
    double lo;
    double hi;
};

/// Box over (omega_11, omega_12, omega_22) with a common step.
struct GridSpec {
    Interval diag1;
    Interval offdiag;
    Interval diag2;
    double step;

    void validate() const;
};

struct GridArgmin {
    SymmetricMatrix argmin;
    double objective;
    /// True when the minimizer sits on a face of the box (box too small).
    bool on_boundary;
    long evaluated_points;
};

/// Exhaustive minimization of -(n/2) log det + (1/2) tr(nS omega) + 2 pen(|omega_12|)
/// over the positive definite points of the grid.
GridArgmin grid_map_2x2(const ScatterMatrix& scatter, int n, const PenaltyConfig& penalty,
                        const GridSpec& grid);

/// The 2x2 objective from scalar arithmetic only.
double objective_2x2(const ScatterMatrix& scatter, int n, const Penalty& penalty, double a, double b,
                     double c);

struct MonteCarloEstimate {
    double estimate;
    double std_error;
    double effective_sample_size;
};

/// Self-normalized importance sampling of pen'(|x|) over half-Cauchy local
/// scales. Requires draws >= 1e5; throws DomainError when the effective
/// sample size falls below 100.
MonteCarloEstimate mc_penalty_deriv(double x, double tau, long draws, std::uint64_t seed);

/// (f(x + h) - f(x - h)) / (2h).
double finite_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace llagraph::oracle
