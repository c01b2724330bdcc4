#include "llagraph/metrics.hpp"

#include <cmath>
#include <sstream>

#include "llagraph/error.hpp"
#include "llagraph/io.hpp"

namespace llagraph {

namespace {

void require_same_dim(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.dim() != b.dim()) throw InputError("matrices have different dimensions");
}

std::string optional_csv(const std::optional<double>& v) {
    return v ? io::format_double(*v) : std::string("NA");
}

}  // namespace

double steins_loss(const SymmetricMatrix& est, const SymmetricMatrix& truth) {
    require_same_dim(est, truth);
    Eigen::LLT<Eigen::MatrixXd> truth_llt(truth.dense());
    if (truth_llt.info() != Eigen::Success) throw DomainError("truth is not positive definite");
    // tr(est truth^{-1}) = tr(L^{-1} est L^{-T}) with truth = L L^T.
    Eigen::MatrixXd m = truth_llt.matrixL().solve(est.dense());
    m = truth_llt.matrixL().solve(Eigen::MatrixXd(m.transpose()));
    const double log_det_truth = 2.0 * truth_llt.matrixLLT().diagonal().array().log().sum();
    return m.trace() - (log_det_pd(est) - log_det_truth) - est.dim();
}

double frobenius_error(const SymmetricMatrix& est, const SymmetricMatrix& truth, FrobeniusReference ref) {
    require_same_dim(est, truth);
    if (ref == FrobeniusReference::covariance) {
        return (est.dense() - inverse_pd(truth).dense()).norm();
    }
    return (est.dense() - truth.dense()).norm();
}

SupportMetrics support_metrics_from_counts(const ConfusionCounts& c) {
    SupportMetrics out;
    out.counts = c;
    if (c.tp + c.fn > 0) out.tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (c.fp + c.tn > 0) out.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
    const double denom = static_cast<double>(c.tp + c.fp) * static_cast<double>(c.tp + c.fn) *
                         static_cast<double>(c.tn + c.fp) * static_cast<double>(c.tn + c.fn);
    if (denom > 0.0) {
        const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                           static_cast<double>(c.fp) * static_cast<double>(c.fn);
        out.mcc = num / std::sqrt(denom);
    }
    return out;
}

SupportMetrics support_metrics(const SupportMask& est_support, const SymmetricMatrix& truth) {
    const int q = truth.dim();
    if (est_support.rows() != q || est_support.cols() != q) {
        throw InputError("support mask and truth have different dimensions");
    }
    ConfusionCounts c;
    for (int j = 1; j < q; ++j) {
        for (int i = 0; i < j; ++i) {
            const bool predicted = est_support(i, j);
            const bool actual = truth(i, j) != 0.0;
            if (predicted && actual) ++c.tp;
            else if (predicted) ++c.fp;
            else if (actual) ++c.fn;
            else ++c.tn;
        }
    }
    return support_metrics_from_counts(c);
}

SupportMetrics support_metrics(const SymmetricMatrix& est, const SymmetricMatrix& truth, double zero_tol) {
    require_same_dim(est, truth);
    if (!(zero_tol >= 0.0)) throw InputError("zero_tol must be >= 0");
    return support_metrics(support_of(est, zero_tol), truth);
}

EvaluationReport evaluate(const SymmetricMatrix& est, const SupportMask& est_support,
                          const SymmetricMatrix& truth, double wall_time, FrobeniusReference ref) {
    EvaluationReport r;
    r.steins_loss = steins_loss(est, truth);
    r.frobenius_error = frobenius_error(est, truth, ref);
    const auto sm = support_metrics(est_support, truth);
    r.tpr = sm.tpr;
    r.fpr = sm.fpr;
    r.mcc = sm.mcc;
    r.wall_time = wall_time;
    return r;
}

nlohmann::json to_json(const EvaluationReport& r) {
    nlohmann::json j;
    j["steins_loss"] = r.steins_loss;
    j["frobenius_error"] = r.frobenius_error;
    j["tpr"] = r.tpr ? nlohmann::json(*r.tpr) : nlohmann::json(nullptr);
    j["fpr"] = r.fpr ? nlohmann::json(*r.fpr) : nlohmann::json(nullptr);
    j["mcc"] = r.mcc;
    j["wall_time"] = r.wall_time;
    return j;
}

std::string csv_header(const EvaluationReport&) {
    return "steins_loss,frobenius_error,tpr,fpr,mcc,wall_time";
}

std::string to_csv_row(const EvaluationReport& r) {
    std::ostringstream out;
    out << io::format_double(r.steins_loss) << ',' << io::format_double(r.frobenius_error) << ','
        << optional_csv(r.tpr) << ',' << optional_csv(r.fpr) << ',' << io::format_double(r.mcc) << ','
        << io::format_double(r.wall_time);
    return out.str();
}

}  // namespace llagraph
