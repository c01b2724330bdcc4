#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "llagraph/error.hpp"
#include "llagraph/metrics.hpp"
#include "llagraph/penalty.hpp"
#include "llagraph/simgen.hpp"
#include "llagraph/solver.hpp"
#include "llagraph/tuning.hpp"

namespace py = pybind11;
using namespace llagraph;

namespace {

PenaltyConfig make_penalty(const std::string& family, double scale, const std::string& backend) {
    if (parse_penalty_family(family) == PenaltyFamily::constant) return PenaltyConfig::constant(scale);
    return PenaltyConfig::horseshoe(scale, parse_horseshoe_backend(backend));
}

SolverConfig make_solver(const std::string& penalty, double scale, const std::string& backend, double tol,
                         int max_iters, const std::string& start, int starts, std::uint64_t seed) {
    SolverConfig cfg;
    cfg.penalty = make_penalty(penalty, scale, backend);
    cfg.tol = tol;
    cfg.max_outer_iters = max_iters;
    cfg.start = parse_start_kind(start);
    cfg.n_starts = starts;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

Eigen::MatrixXd symmetric(const SymmetricMatrix& m) { return m.dense(); }

py::dict estimate(const Eigen::MatrixXd& data, const std::string& penalty, double scale, const std::string& backend,
                  double tol, int max_iters, const std::string& start, int starts, std::uint64_t seed, int threads) {
    const auto cfg = make_solver(penalty, scale, backend, tol, max_iters, start, starts, seed);
    const Dataset ds(data);
    const auto scatter = sample_scatter(ds);
    const auto res = [&] {
        py::gil_scoped_release release;
        return multistart_estimate(scatter, ds.n(), cfg, threads);
    }();
    py::dict out;
    out["omega"] = symmetric(res.average);
    out["omega_best"] = symmetric(res.best.estimate);
    out["support"] = Eigen::MatrixXi(res.support.cast<int>());
    out["converged"] = res.all_converged;
    out["objective_trace"] = res.best.objective_trace;
    out["outer_iters"] = res.total_outer_iters;
    out["wall_time"] = res.wall_time;
    return out;
}

py::dict cross_validate(const Eigen::MatrixXd& data, std::vector<double> grid, const std::string& penalty,
                        const std::string& backend, int folds, std::uint64_t seed, int threads) {
    const Dataset ds(data);
    CVConfig cfg;
    cfg.folds = folds;
    cfg.seed = seed;
    cfg.solver.penalty = make_penalty(penalty, 1.0, backend);
    cfg.solver.start = StartKind::ridge;
    cfg.grid = grid.empty() ? default_grid(cfg.solver.penalty.family, ds.n()) : std::move(grid);
    const auto res = [&] {
        py::gil_scoped_release release;
        return cv_select(ds, cfg, threads);
    }();
    py::dict out;
    out["selected"] = res.selected;
    out["grid"] = cfg.grid;
    out["mean_scores"] = res.mean_scores;
    out["fold_sizes"] = res.fold_sizes;
    return out;
}

Eigen::MatrixXd simulate_precision(const std::string& kind, int q, std::uint64_t seed, int hub_size,
                                   double edge_value, double edge_prob) {
    StructureSpec spec;
    spec.kind = parse_structure_kind(kind);
    spec.q = q;
    spec.seed = seed;
    spec.hub_group_size = hub_size;
    spec.edge_value = edge_value;
    spec.edge_prob = edge_prob;
    return generate_precision(spec).dense();
}

}  // namespace

PYBIND11_MODULE(llagraph, m) {
    m.doc() = "MAP estimation of sparse precision matrices under the graphical horseshoe penalty";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_ArithmeticError);
    py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);

    m.def(
        "pen_deriv",
        [](double x, double tau, const std::string& backend) {
            return pen_deriv(PenaltyConfig::horseshoe(tau, parse_horseshoe_backend(backend)), x);
        },
        py::arg("x"), py::arg("tau") = 1.0, py::arg("backend") = "expint");
    m.def(
        "pen_value",
        [](double x, double tau, const std::string& backend) {
            return pen_value(PenaltyConfig::horseshoe(tau, parse_horseshoe_backend(backend)), x);
        },
        py::arg("x"), py::arg("tau") = 1.0, py::arg("backend") = "expint");
    m.def(
        "pen_deriv_bounds",
        [](double x) {
            const auto b = pen_deriv_bounds(x);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("x"), "Lower and upper bounds on the tau = 1 derivative.");

    m.def("simulate_precision", &simulate_precision, py::arg("kind") = "hubs", py::arg("q") = 100,
          py::arg("seed") = 0, py::arg("hub_size") = 10, py::arg("edge_value") = 0.25, py::arg("edge_prob") = 0.01);
    m.def(
        "sample_gaussian",
        [](const Eigen::MatrixXd& omega, int n, std::uint64_t seed) {
            return sample_gaussian(SymmetricMatrix(omega), n, seed).rows();
        },
        py::arg("omega"), py::arg("n"), py::arg("seed") = 0);

    m.def("estimate", &estimate, py::arg("data"), py::arg("penalty") = "horseshoe", py::arg("scale") = 0.1,
          py::arg("backend") = "expint", py::arg("tol") = 1e-3, py::arg("max_iters") = 200,
          py::arg("start") = "ridge-random", py::arg("starts") = 1, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("cross_validate", &cross_validate, py::arg("data"), py::arg("grid") = std::vector<double>{},
          py::arg("penalty") = "horseshoe", py::arg("backend") = "expint", py::arg("folds") = 5,
          py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "steins_loss",
        [](const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
            return steins_loss(SymmetricMatrix(est), SymmetricMatrix(truth));
        },
        py::arg("est"), py::arg("truth"));
    m.def(
        "frobenius_error",
        [](const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
            return frobenius_error(SymmetricMatrix(est), SymmetricMatrix(truth));
        },
        py::arg("est"), py::arg("truth"));
    m.def(
        "support_metrics",
        [](const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
            const auto s = support_metrics(SymmetricMatrix(est), SymmetricMatrix(truth));
            py::dict out;
            out["tpr"] = s.tpr ? py::cast(*s.tpr) : py::none();
            out["fpr"] = s.fpr ? py::cast(*s.fpr) : py::none();
            out["mcc"] = s.mcc;
            return out;
        },
        py::arg("est"), py::arg("truth"));
}
