#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "llagraph/benchmark.hpp"
#include "llagraph/error.hpp"
#include "llagraph/io.hpp"
#include "llagraph/metrics.hpp"
#include "llagraph/parallel.hpp"
#include "llagraph/random.hpp"
#include "llagraph/simgen.hpp"
#include "llagraph/solver.hpp"
#include "llagraph/tuning.hpp"

namespace llagraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct CommonSolverArgs {
    std::string penalty = "horseshoe";
    std::string backend = "expint";
    double tau = 0.1;
    double rho = 10.0;
    std::string start = "ridge-random";
    std::string start_file;
    int starts = 50;
    double tol = 1e-3;
    int max_iters = 200;
    double ridge_factor = 0.5;
};

struct StructureArgs {
    std::string kind = "hubs";
    StructureSpec spec;
};

void add_solver_options(CLI::App* cmd, CommonSolverArgs& a, bool with_start) {
    cmd->add_option("--penalty", a.penalty, "horseshoe | constant")->capture_default_str();
    cmd->add_option("--backend", a.backend, "horseshoe backend: cauchy | laplace | expint")->capture_default_str();
    cmd->add_option("--tol", a.tol, "stopping threshold on the sweep change (Frobenius)")->capture_default_str();
    cmd->add_option("--max-iters", a.max_iters, "maximum outer sweeps")->capture_default_str();
    cmd->add_option("--ridge-factor", a.ridge_factor, "ridge start shift relative to mean variance")
        ->capture_default_str();
    if (with_start) {
        cmd->add_option("--start", a.start, "identity | diag-random | ridge | ridge-random | user")
            ->capture_default_str();
        cmd->add_option("--start-file", a.start_file, "CSV start matrix for --start user");
        cmd->add_option("--starts", a.starts, "number of starts")->capture_default_str();
    }
}

void add_structure_options(CLI::App* cmd, StructureArgs& a) {
    cmd->add_option("--kind", a.kind, "hubs | random")->capture_default_str();
    cmd->add_option("--q", a.spec.q, "dimension")->capture_default_str();
    cmd->add_option("--hub-size", a.spec.hub_group_size, "hub group size")->capture_default_str();
    cmd->add_option("--edge-value", a.spec.edge_value, "hub edge value")->capture_default_str();
    cmd->add_option("--edge-prob", a.spec.edge_prob, "random edge probability")->capture_default_str();
    cmd->add_option("--value-lo", a.spec.value_lo, "random edge magnitude lower bound")->capture_default_str();
    cmd->add_option("--value-hi", a.spec.value_hi, "random edge magnitude upper bound")->capture_default_str();
    cmd->add_option("--diag", a.spec.diagonal_target, "diagonal target")->capture_default_str();
}

StructureSpec structure_from(const StructureArgs& a, std::uint64_t seed) {
    StructureSpec spec = a.spec;
    spec.kind = parse_structure_kind(a.kind);
    spec.seed = seed;
    spec.validate();
    return spec;
}

PenaltyConfig penalty_from(const CommonSolverArgs& a, double scale) {
    const auto family = parse_penalty_family(a.penalty);
    PenaltyConfig cfg = family == PenaltyFamily::horseshoe
                            ? PenaltyConfig::horseshoe(scale, parse_horseshoe_backend(a.backend))
                            : PenaltyConfig::constant(scale);
    cfg.validate();
    return cfg;
}

SolverConfig solver_from(const CommonSolverArgs& a, std::uint64_t seed) {
    SolverConfig cfg;
    const auto family = parse_penalty_family(a.penalty);
    cfg.penalty = penalty_from(a, family == PenaltyFamily::horseshoe ? a.tau : a.rho);
    cfg.tol = a.tol;
    cfg.max_outer_iters = a.max_iters;
    cfg.start = parse_start_kind(a.start);
    if (cfg.start == StartKind::user_supplied) {
        if (a.start_file.empty()) throw InputError("--start user requires --start-file");
        cfg.user_start = io::read_matrix_csv(a.start_file);
    }
    cfg.n_starts = a.starts;
    cfg.ridge_factor = a.ridge_factor;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

json penalty_json(const PenaltyConfig& p) {
    json j{{"family", to_string(p.family)}, {"scale", p.scale}};
    if (p.family == PenaltyFamily::horseshoe) {
        j["backend"] = to_string(p.backend);
        j["deriv_cap"] = p.deriv_cap;
        j["quadrature_rel_tol"] = p.quadrature_rel_tol;
    }
    return j;
}

json structure_json(const StructureSpec& s) {
    return {{"kind", to_string(s.kind)},       {"q", s.q},
            {"hub_group_size", s.hub_group_size}, {"edge_value", s.edge_value},
            {"edge_prob", s.edge_prob},        {"value_lo", s.value_lo},
            {"value_hi", s.value_hi},          {"diagonal_target", s.diagonal_target},
            {"seed", s.seed}};
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("invalid number in list: " + item);
        }
    }
    if (out.empty()) throw InputError("empty number list");
    return out;
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory " + dir);
    return fs::path(dir);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

/// Writes `<stem>.csv` or `<stem>.json` according to the format flag.
void write_matrix(const fs::path& dir, const std::string& stem, const Eigen::MatrixXd& m,
                  const std::string& format) {
    if (format == "json") {
        write_json(dir / (stem + ".json"), matrix_json(m));
    } else {
        io::write_matrix_csv(dir / (stem + ".csv"), m);
    }
}

int cmd_simulate(const StructureArgs& sa, int n, std::uint64_t seed, const std::string& out_dir,
                 const std::string& format, std::ostream& out) {
    const auto spec = structure_from(sa, seed);
    const auto omega0 = generate_precision(spec);
    const std::uint64_t data_seed = derive_seed(seed, 0);
    const auto data = sample_gaussian(omega0, n, data_seed);
    const auto dir = prepare_out_dir(out_dir);
    write_matrix(dir, "omega0", omega0.dense(), format);
    write_matrix(dir, "data", data.rows(), format);
    write_json(dir / "meta.json", json{{"schema_version", kSchemaVersion},
                                       {"command", "simulate"},
                                       {"seed", seed},
                                       {"data_seed", data_seed},
                                       {"n", n},
                                       {"q", spec.q},
                                       {"edges", count_edges(omega0)},
                                       {"structure", structure_json(spec)}});
    out << "wrote " << (dir / "omega0").string() << ", data and meta.json (edges=" << count_edges(omega0)
        << ")\n";
    return kOk;
}

int cmd_estimate(const std::string& data_path, const CommonSolverArgs& sa, std::uint64_t seed, int threads,
                 const std::string& out_dir, const std::string& format, std::ostream& out) {
    const auto data = io::read_dataset_csv(data_path);
    const auto cfg = solver_from(sa, seed);
    const auto scatter = sample_scatter(data);
    const auto fit = multistart_estimate(scatter, data.n(), cfg, resolve_threads(threads));
    const auto dir = prepare_out_dir(out_dir);

    write_matrix(dir, "omega_hat", fit.average.dense(), format);
    write_matrix(dir, "omega_best", fit.best.estimate.dense(), format);
    write_matrix(dir, "support", fit.support.cast<double>(), format);

    json runs = json::array();
    for (const auto& r : fit.runs) {
        runs.push_back({{"outer_iters", r.outer_iters},
                        {"converged", r.converged},
                        {"final_objective", r.objective_trace.back()},
                        {"last_change", r.last_change},
                        {"wall_time", r.wall_time}});
    }
    write_json(dir / "run.json", json{{"schema_version", kSchemaVersion},
                                      {"command", "estimate"},
                                      {"data", data_path},
                                      {"n", data.n()},
                                      {"q", data.q()},
                                      {"penalty", penalty_json(cfg.penalty)},
                                      {"start", to_string(cfg.start)},
                                      {"starts", cfg.n_starts},
                                      {"seed", seed},
                                      {"tol", cfg.tol},
                                      {"max_outer_iters", cfg.max_outer_iters},
                                      {"converged", fit.all_converged},
                                      {"best_start", fit.best_index},
                                      {"objective_trace", fit.best.objective_trace},
                                      {"support_edges", (fit.support.cast<int>().sum()) / 2},
                                      {"runs", runs},
                                      {"failures", fit.failures},
                                      {"wall_time", fit.wall_time}});
    out << "converged=" << (fit.all_converged ? "true" : "false")
        << " support_edges=" << fit.support.cast<int>().sum() / 2 << " wall_time=" << fit.wall_time << "s\n";
    return fit.all_converged ? kOk : kNotConverged;
}

int cmd_cv(const std::string& data_path, const CommonSolverArgs& sa, const std::string& grid_arg, int folds,
           std::uint64_t seed, int threads, const std::string& out_dir, std::ostream& out) {
    const auto data = io::read_dataset_csv(data_path);
    CVConfig cfg;
    cfg.folds = folds;
    cfg.seed = seed;
    const auto family = parse_penalty_family(sa.penalty);
    cfg.grid = grid_arg.empty() ? default_grid(family, data.n()) : parse_double_list(grid_arg);
    CommonSolverArgs fold_args = sa;
    fold_args.start = "ridge";
    fold_args.starts = 1;
    cfg.solver = solver_from(fold_args, seed);
    cfg.solver.penalty = penalty_from(sa, cfg.grid.front());
    const auto result = cv_select(data, cfg, resolve_threads(threads));

    const auto dir = prepare_out_dir(out_dir);
    std::ostringstream table;
    write_cv_table_csv(table, result);
    write_text(dir / "cv_table.csv", table.str());
    json means = json::array();
    for (double m : result.mean_scores) means.push_back(std::isnan(m) ? json(nullptr) : json(m));
    write_json(dir / "selected.json", json{{"schema_version", kSchemaVersion},
                                           {"command", "cv"},
                                           {"penalty", to_string(family)},
                                           {"selected", result.selected},
                                           {"grid", cfg.grid},
                                           {"mean_heldout_nll", means},
                                           {"folds", folds},
                                           {"fold_sizes", result.fold_sizes},
                                           {"seed", seed}});
    out << "selected=" << result.selected << "\n";
    return kOk;
}

int cmd_benchmark(const StructureArgs& st, const CommonSolverArgs& sa, int n, int reps,
                  const std::string& methods, bool no_tune, const std::string& tau_grid,
                  const std::string& rho_grid, int folds, std::uint64_t seed, int threads,
                  const std::string& frob_ref, const std::string& out_dir, const std::string& format,
                  std::ostream& out) {
    BenchmarkConfig cfg;
    cfg.structure = structure_from(st, seed);
    cfg.n = n;
    cfg.reps = reps;
    cfg.methods.clear();
    std::stringstream ms(methods);
    std::string item;
    while (std::getline(ms, item, ',')) cfg.methods.push_back(parse_method(item));
    cfg.tune = !no_tune;
    cfg.folds = folds;
    if (!tau_grid.empty()) cfg.tau_grid = parse_double_list(tau_grid);
    if (!rho_grid.empty()) cfg.rho_grid = parse_double_list(rho_grid);
    cfg.fixed_tau = sa.tau;
    cfg.fixed_rho = sa.rho;
    CommonSolverArgs base = sa;
    base.penalty = "horseshoe";
    cfg.solver = solver_from(base, seed);
    cfg.seed = seed;
    cfg.threads = resolve_threads(threads);
    if (frob_ref == "precision") cfg.frobenius_reference = FrobeniusReference::precision;
    else if (frob_ref == "covariance") cfg.frobenius_reference = FrobeniusReference::covariance;
    else throw InputError("--frobenius-reference must be precision or covariance");

    const auto result = run_benchmark(cfg);
    const auto dir = prepare_out_dir(out_dir);
    std::ostringstream report;
    write_report_csv(report, result.rows);
    write_text(dir / "report.csv", report.str());
    const auto summary = summary_json(result, cfg);
    write_json(dir / "summary.json", summary);
    if (format == "json") {
        json rows = json::array();
        for (const auto& r : result.rows) {
            json row = r.ok ? to_json(r.report) : json::object();
            row["replicate"] = r.replicate;
            row["method"] = to_string(r.method);
            row["status"] = r.ok ? "ok" : "failed";
            row["scale"] = r.scale;
            row["error"] = r.error;
            rows.push_back(row);
        }
        write_json(dir / "report.json", json{{"schema_version", kSchemaVersion}, {"rows", rows}});
    }

    int failures = 0;
    for (const auto& m : result.summary) {
        failures += m.failures;
        out << to_string(m.method) << ": stein=" << m.steins_loss.mean << " (" << m.steins_loss.sd << ")"
            << " fnorm=" << m.frobenius_error.mean << " tpr=" << m.tpr.mean << " fpr=" << m.fpr.mean
            << " mcc=" << m.mcc.mean << " time=" << m.wall_time.mean << "s failures=" << m.failures << "\n";
    }
    return failures == static_cast<int>(result.rows.size()) ? kDegenerate : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse precision matrix MAP estimation by local linear approximation"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = ".";
    std::string format = "csv";
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "random seed")->capture_default_str();
        cmd->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
        cmd->add_option("--format", format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
    };

    StructureArgs structure;
    CommonSolverArgs solver;
    int n = 120;
    std::string data_path;

    auto* simulate = app.add_subcommand("simulate", "generate a precision matrix and Gaussian samples");
    add_structure_options(simulate, structure);
    simulate->add_option("--n", n, "sample count")->capture_default_str();
    add_common(simulate);

    auto* estimate = app.add_subcommand("estimate", "multi-start LLA estimate from a data CSV");
    estimate->add_option("--data", data_path, "data CSV (one sample per row)")->required();
    add_solver_options(estimate, solver, true);
    estimate->add_option("--tau", solver.tau, "horseshoe global scale")->capture_default_str();
    estimate->add_option("--rho", solver.rho, "constant penalty weight")->capture_default_str();
    add_common(estimate);

    std::string grid;
    int folds = 5;
    auto* cv = app.add_subcommand("cv", "k-fold cross-validation of the penalty scale");
    cv->add_option("--data", data_path, "data CSV")->required();
    add_solver_options(cv, solver, false);
    cv->add_option("--grid", grid, "comma-separated candidate scales (default: family grid)");
    cv->add_option("--folds", folds, "number of folds")->capture_default_str();
    add_common(cv);

    int reps = 10;
    std::string methods = "lla_horseshoe_cauchy,lla_constant";
    bool no_tune = false;
    std::string tau_grid, rho_grid;
    std::string frob_ref = "precision";
    auto* bench = app.add_subcommand("benchmark", "simulate, tune, fit and score over replicates");
    add_structure_options(bench, structure);
    add_solver_options(bench, solver, true);
    bench->add_option("--n", n, "sample count")->capture_default_str();
    bench->add_option("--reps", reps, "replicates")->capture_default_str();
    bench->add_option("--methods", methods, "comma-separated methods")->capture_default_str();
    bench->add_flag("--no-tune", no_tune, "use --tau/--rho instead of cross-validation");
    bench->add_option("--tau", solver.tau, "fixed tau when --no-tune")->capture_default_str();
    bench->add_option("--rho", solver.rho, "fixed rho when --no-tune")->capture_default_str();
    bench->add_option("--tau-grid", tau_grid, "CV grid for horseshoe methods");
    bench->add_option("--rho-grid", rho_grid, "CV grid for the constant method");
    bench->add_option("--folds", folds, "CV folds")->capture_default_str();
    bench->add_option("--frobenius-reference", frob_ref, "precision | covariance")->capture_default_str();
    add_common(bench);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*simulate) return cmd_simulate(structure, n, seed, out_dir, format, out);
        if (*estimate) return cmd_estimate(data_path, solver, seed, threads, out_dir, format, out);
        if (*cv) return cmd_cv(data_path, solver, grid, folds, seed, threads, out_dir, out);
        if (*bench) {
            return cmd_benchmark(structure, solver, n, reps, methods, no_tune, tau_grid, rho_grid, folds, seed,
                                 threads, frob_ref, out_dir, format, out);
        }
    } catch (const DegeneracyError& e) {
        err << "numerical degeneracy: " << e.what() << "\n";
        return kDegenerate;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const ConstructionError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace llagraph::cli
