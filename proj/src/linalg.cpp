#include "llagraph/linalg.hpp"

#include <cmath>
#include <string>

#include "llagraph/error.hpp"

namespace llagraph {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTraceTol = 1e-10;

void check_dim(int dim) {
    if (dim < 2) {
        throw InputError("symmetric matrix dimension must be >= 2, got " + std::to_string(dim));
    }
}

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& m) {
    return Eigen::LLT<Eigen::MatrixXd>(m);
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(int dim) {
    check_dim(dim);
    m_ = Eigen::MatrixXd::Zero(dim, dim);
}

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& full) {
    if (full.rows() != full.cols()) {
        throw InputError("symmetric matrix must be square");
    }
    check_dim(static_cast<int>(full.rows()));
    if (!full.allFinite()) {
        throw InputError("symmetric matrix has non-finite entries");
    }
    const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
    if ((full - full.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
        throw InputError("matrix is not symmetric");
    }
    m_ = full.triangularView<Eigen::Lower>();
    m_.triangularView<Eigen::StrictlyUpper>() = m_.transpose().triangularView<Eigen::StrictlyUpper>();
}

SymmetricMatrix SymmetricMatrix::identity(int dim) {
    SymmetricMatrix out(dim);
    out.m_.setIdentity();
    return out;
}

SymmetricMatrix SymmetricMatrix::diagonal(const Eigen::VectorXd& diag) {
    SymmetricMatrix out(static_cast<int>(diag.size()));
    out.m_.diagonal() = diag;
    return out;
}

Dataset::Dataset(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 1 || rows_.cols() < 2) {
        throw InputError("dataset needs at least one row and two columns");
    }
    if (!rows_.allFinite()) {
        throw InputError("dataset contains non-finite entries");
    }
}

Dataset Dataset::subset(const std::vector<int>& row_indices) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(row_indices.size()), rows_.cols());
    for (std::size_t r = 0; r < row_indices.size(); ++r) {
        const int idx = row_indices[r];
        if (idx < 0 || idx >= n()) {
            throw InputError("row index out of range: " + std::to_string(idx));
        }
        out.row(static_cast<Eigen::Index>(r)) = rows_.row(idx);
    }
    return Dataset(std::move(out));
}

ScatterMatrix::ScatterMatrix(SymmetricMatrix s_in, int n_in) : s(std::move(s_in)), n(n_in) {
    if (n < 1) {
        throw InputError("scatter sample count must be positive");
    }
    const Eigen::MatrixXd& m = s.dense();
    if ((m.diagonal().array() < 0.0).any()) {
        throw InputError("scatter matrix has a negative diagonal entry");
    }
    const double eps = kPsdTraceTol * std::max(m.trace(), 1e-300);
    Eigen::MatrixXd shifted = m;
    shifted.diagonal().array() += eps;
    if (factor(shifted).info() != Eigen::Success) {
        throw InputError("scatter matrix is not positive semidefinite");
    }
}

ScatterMatrix sample_scatter(const Dataset& data) {
    const Eigen::MatrixXd& y = data.rows();
    Eigen::MatrixXd ns = Eigen::MatrixXd::Zero(y.cols(), y.cols());
    ns.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose());
    ns.triangularView<Eigen::StrictlyUpper>() = ns.transpose().triangularView<Eigen::StrictlyUpper>();
    return ScatterMatrix(SymmetricMatrix(ns), data.n());
}

bool is_positive_definite(const SymmetricMatrix& m) {
    return factor(m.dense()).info() == Eigen::Success;
}

double log_det_pd(const SymmetricMatrix& m) {
    const auto llt = factor(m.dense());
    if (llt.info() != Eigen::Success) {
        throw DomainError("matrix is not positive definite");
    }
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

SymmetricMatrix inverse_pd(const SymmetricMatrix& m) {
    const auto llt = factor(m.dense());
    if (llt.info() != Eigen::Success) {
        throw DomainError("matrix is not positive definite");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.dim(), m.dim()));
    return SymmetricMatrix(Eigen::MatrixXd(0.5 * (inv + inv.transpose())));
}

double gaussian_nll(const SymmetricMatrix& omega, const ScatterMatrix& scatter, int n) {
    if (omega.dim() != scatter.dim()) {
        throw InputError("omega and scatter dimensions differ");
    }
    const double trace = omega.dense().cwiseProduct(scatter.s.dense()).sum();
    return -0.5 * n * log_det_pd(omega) + 0.5 * trace;
}

void swap_rowcol_inplace(Eigen::MatrixXd& m, int i, int j) {
    if (i < 0 || j < 0 || i >= m.rows() || j >= m.rows()) {
        throw InputError("swap index out of range");
    }
    if (i == j) return;
    m.row(i).swap(m.row(j));
    m.col(i).swap(m.col(j));
}

SymmetricMatrix swap_rowcol(const SymmetricMatrix& m, int i, int j) {
    Eigen::MatrixXd out = m.dense();
    swap_rowcol_inplace(out, i, j);
    return SymmetricMatrix(out);
}

}  // namespace llagraph
