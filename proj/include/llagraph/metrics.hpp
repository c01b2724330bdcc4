#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "llagraph/linalg.hpp"
#include "llagraph/solver.hpp"

namespace llagraph {

/// tr(est truth^{-1}) - log det(est truth^{-1}) - q, via Cholesky solves.
double steins_loss(const SymmetricMatrix& est, const SymmetricMatrix& truth);

enum class FrobeniusReference {
    /// ||est - truth||_F
    precision,
    /// ||est - truth^{-1}||_F, the literal reading of the tables' "F norm" caption.
    covariance,
};

double frobenius_error(const SymmetricMatrix& est, const SymmetricMatrix& truth,
                       FrobeniusReference ref = FrobeniusReference::precision);

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
};

/// Rates over the strict upper triangle. tpr is empty when the truth has no
/// edges, fpr when it has no non-edges. mcc is 0 when any marginal is empty.
struct SupportMetrics {
    ConfusionCounts counts;
    std::optional<double> tpr;
    std::optional<double> fpr;
    double mcc = 0.0;
};

SupportMetrics support_metrics_from_counts(const ConfusionCounts& counts);
SupportMetrics support_metrics(const SupportMask& est_support, const SymmetricMatrix& truth);
SupportMetrics support_metrics(const SymmetricMatrix& est, const SymmetricMatrix& truth,
                               double zero_tol = 0.0);

struct EvaluationReport {
    double steins_loss = 0.0;
    double frobenius_error = 0.0;
    std::optional<double> tpr;
    std::optional<double> fpr;
    double mcc = 0.0;
    double wall_time = 0.0;
};

/// Loss metrics from `est`, support metrics from `est_support`.
EvaluationReport evaluate(const SymmetricMatrix& est, const SupportMask& est_support,
                          const SymmetricMatrix& truth, double wall_time,
                          FrobeniusReference ref = FrobeniusReference::precision);

nlohmann::json to_json(const EvaluationReport& report);
std::string csv_header(const EvaluationReport&);
std::string to_csv_row(const EvaluationReport& report);

}  // namespace llagraph
