#include "llagraph/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "llagraph/error.hpp"
#include "llagraph/io.hpp"
#include "llagraph/parallel.hpp"
#include "llagraph/random.hpp"
#include "llagraph/tuning.hpp"

namespace llagraph {

namespace {

constexpr int kSchemaVersion = 1;

std::string optional_field(const std::optional<double>& v) {
    return v ? io::format_double(*v) : std::string("NA");
}

nlohmann::json metric_json(const MetricSummary& m) {
    return {{"mean", m.mean}, {"sd", m.sd}, {"count", m.count}};
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::lla_horseshoe_cauchy: return "lla_horseshoe_cauchy";
        case Method::lla_horseshoe_laplace: return "lla_horseshoe_laplace";
        case Method::lla_constant: return "lla_constant";
    }
    return "unknown";
}

Method parse_method(const std::string& s) {
    if (s == "lla_horseshoe_cauchy") return Method::lla_horseshoe_cauchy;
    if (s == "lla_horseshoe_laplace") return Method::lla_horseshoe_laplace;
    if (s == "lla_constant") return Method::lla_constant;
    throw InputError("unknown method: " + s);
}

PenaltyConfig method_penalty(Method m, double scale) {
    switch (m) {
        case Method::lla_horseshoe_cauchy:
            return PenaltyConfig::horseshoe(scale, HorseshoeBackend::cauchy_mixture_quadrature);
        case Method::lla_horseshoe_laplace:
            return PenaltyConfig::horseshoe(scale, HorseshoeBackend::laplace_mixture_quadrature);
        case Method::lla_constant:
            return PenaltyConfig::constant(scale);
    }
    throw InputError("unknown method");
}

void BenchmarkConfig::validate() const {
    structure.validate();
    if (n < 2) throw InputError("benchmark n must be >= 2");
    if (reps < 1) throw InputError("reps must be >= 1");
    if (methods.empty()) throw InputError("benchmark needs at least one method");
    if (tune && folds > n) throw InputError("folds must not exceed n");
    solver.validate();
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    s.count = static_cast<int>(values.size());
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.count;
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (s.count - 1));
    }
    return s;
}

std::vector<MethodSummary> summarize_rows(const std::vector<BenchmarkRow>& rows,
                                          const std::vector<Method>& methods) {
    std::vector<MethodSummary> out;
    for (Method m : methods) {
        MethodSummary ms;
        ms.method = m;
        std::vector<double> stein, frob, tpr, fpr, mcc, time;
        for (const auto& row : rows) {
            if (row.method != m) continue;
            if (!row.ok) {
                ++ms.failures;
                continue;
            }
            ++ms.successes;
            stein.push_back(row.report.steins_loss);
            frob.push_back(row.report.frobenius_error);
            if (row.report.tpr) tpr.push_back(*row.report.tpr);
            if (row.report.fpr) fpr.push_back(*row.report.fpr);
            mcc.push_back(row.report.mcc);
            time.push_back(row.report.wall_time);
        }
        ms.steins_loss = summarize(stein);
        ms.frobenius_error = summarize(frob);
        ms.tpr = summarize(tpr);
        ms.fpr = summarize(fpr);
        ms.mcc = summarize(mcc);
        ms.wall_time = summarize(time);
        out.push_back(ms);
    }
    return out;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
    cfg.validate();
    BenchmarkResult result{generate_precision(cfg.structure), 0, {}, {}};
    result.edges = count_edges(result.truth);
    const int methods = static_cast<int>(cfg.methods.size());
    result.rows.resize(static_cast<std::size_t>(cfg.reps * methods));

    parallel_for(cfg.reps, cfg.threads, [&](int rep) {
        const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
        std::optional<Dataset> data;
        std::string data_error;
        try {
            data = sample_gaussian(result.truth, cfg.n, rep_seed);
        } catch (const std::exception& e) {
            data_error = e.what();
        }
        for (int mi = 0; mi < methods; ++mi) {
            BenchmarkRow& row = result.rows[static_cast<std::size_t>(rep * methods + mi)];
            row.replicate = rep;
            row.method = cfg.methods[static_cast<std::size_t>(mi)];
            if (!data) {
                row.error = data_error;
                continue;
            }
            try {
                const bool horseshoe = row.method != Method::lla_constant;
                row.scale = horseshoe ? cfg.fixed_tau : cfg.fixed_rho;
                SolverConfig solver = cfg.solver;
                solver.seed = rep_seed;
                if (cfg.tune) {
                    const auto t0 = std::chrono::steady_clock::now();
                    CVConfig cv;
                    cv.folds = cfg.folds;
                    cv.seed = rep_seed;
                    cv.grid = horseshoe ? cfg.tau_grid : cfg.rho_grid;
                    if (cv.grid.empty()) {
                        cv.grid = default_grid(horseshoe ? PenaltyFamily::horseshoe : PenaltyFamily::constant, cfg.n);
                    }
                    cv.solver = solver;
                    cv.solver.penalty = method_penalty(row.method, cv.grid.front());
                    cv.solver.start = StartKind::ridge;
                    row.scale = cv_select(*data, cv, 1).selected;
                    row.cv_time =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                }
                solver.penalty = method_penalty(row.method, row.scale);
                const auto scatter = sample_scatter(*data);
                const auto fit = multistart_estimate(scatter, cfg.n, solver, 1);
                row.report = evaluate(fit.average, fit.support, result.truth, fit.wall_time,
                                      cfg.frobenius_reference);
                row.outer_iters = fit.total_outer_iters;
                row.converged = fit.all_converged;
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
        }
    });

    result.summary = summarize_rows(result.rows, cfg.methods);
    return result;
}

void write_report_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "replicate,method,status,scale,steins_loss,frobenius_error,tpr,fpr,mcc,wall_time,outer_iters,"
           "converged,cv_time,error\n";
    for (const auto& r : rows) {
        out << r.replicate << ',' << to_string(r.method) << ',' << (r.ok ? "ok" : "failed") << ',';
        if (r.ok) {
            out << io::format_double(r.scale) << ',' << io::format_double(r.report.steins_loss) << ','
                << io::format_double(r.report.frobenius_error) << ',' << optional_field(r.report.tpr) << ','
                << optional_field(r.report.fpr) << ',' << io::format_double(r.report.mcc) << ','
                << io::format_double(r.report.wall_time) << ',' << r.outer_iters << ','
                << (r.converged ? "true" : "false") << ',' << io::format_double(r.cv_time) << ",";
        } else {
            out << "NA,NA,NA,NA,NA,NA,NA,NA,false,NA,";
        }
        std::string err = r.error;
        for (char& ch : err) {
            if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
        }
        out << err << '\n';
    }
}

nlohmann::json summary_json(const BenchmarkResult& result, const BenchmarkConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["structure"] = {{"kind", to_string(cfg.structure.kind)},
                      {"q", cfg.structure.q},
                      {"seed", cfg.structure.seed},
                      {"edges", result.edges}};
    j["n"] = cfg.n;
    j["reps"] = cfg.reps;
    j["tuned"] = cfg.tune;
    j["starts"] = cfg.solver.n_starts;
    j["frobenius_reference"] =
        cfg.frobenius_reference == FrobeniusReference::precision ? "precision" : "covariance";
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& ms : result.summary) {
        methods.push_back({{"method", to_string(ms.method)},
                           {"successes", ms.successes},
                           {"failures", ms.failures},
                           {"steins_loss", metric_json(ms.steins_loss)},
                           {"frobenius_error", metric_json(ms.frobenius_error)},
                           {"tpr", metric_json(ms.tpr)},
                           {"fpr", metric_json(ms.fpr)},
                           {"mcc", metric_json(ms.mcc)},
                           {"wall_time", metric_json(ms.wall_time)}});
    }
    j["methods"] = methods;
    return j;
}

}  // namespace llagraph
