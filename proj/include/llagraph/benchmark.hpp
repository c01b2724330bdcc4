#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llagraph/metrics.hpp"
#include "llagraph/simgen.hpp"
#include "llagraph/solver.hpp"

namespace llagraph {

enum class Method { lla_horseshoe_cauchy, lla_horseshoe_laplace, lla_constant };

std::string to_string(Method m);
Method parse_method(const std::string& s);

/// Penalty configuration a method fits with, at the given scale.
PenaltyConfig method_penalty(Method m, double scale);

struct BenchmarkConfig {
    StructureSpec structure;
    int n = 120;
    int reps = 1;
    std::vector<Method> methods{Method::lla_horseshoe_cauchy, Method::lla_constant};
    /// Cross-validate the scale per replicate; otherwise use the fixed scales below.
    bool tune = true;
    int folds = 5;
    /// Overrides the default CV grids when non-empty.
    std::vector<double> tau_grid;
    std::vector<double> rho_grid;
    double fixed_tau = 0.1;
    double fixed_rho = 10.0;
    /// Solver settings shared by every fit (its penalty is replaced per method).
    SolverConfig solver;
    /// Replicate r draws its data from derive_seed(seed, r).
    std::uint64_t seed = 0;
    int threads = 1;
    FrobeniusReference frobenius_reference = FrobeniusReference::precision;

    void validate() const;
};

struct BenchmarkRow {
    int replicate = 0;
    Method method = Method::lla_constant;
    bool ok = false;
    std::string error;
    double scale = 0.0;
    EvaluationReport report;
    int outer_iters = 0;
    bool converged = false;
    double cv_time = 0.0;
};

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0;
    int count = 0;
};

struct MethodSummary {
    Method method;
    int successes = 0;
    int failures = 0;
    MetricSummary steins_loss, frobenius_error, tpr, fpr, mcc, wall_time;
};

struct BenchmarkResult {
    SymmetricMatrix truth;
    int edges = 0;
    /// Ordered by (replicate, method position in the config).
    std::vector<BenchmarkRow> rows;
    std::vector<MethodSummary> summary;
};

/// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
MetricSummary summarize(const std::vector<double>& values);

std::vector<MethodSummary> summarize_rows(const std::vector<BenchmarkRow>& rows,
                                          const std::vector<Method>& methods);

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);

void write_report_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
nlohmann::json summary_json(const BenchmarkResult& result, const BenchmarkConfig& cfg);

}  // namespace llagraph
