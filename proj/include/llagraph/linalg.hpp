#pragma once

#include <vector>

#include <Eigen/Dense>

namespace llagraph {

/// Dense symmetric matrix. Only writes through set() are allowed and each one
/// mirrors across the diagonal, so the two triangles never disagree.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int dim);

    /// Accepts a square matrix whose triangles agree to 1e-12 relative; the
    /// lower triangle is taken as canonical.
    explicit SymmetricMatrix(const Eigen::MatrixXd& full);

    static SymmetricMatrix identity(int dim);
    static SymmetricMatrix diagonal(const Eigen::VectorXd& diag);

    int dim() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    void set(int i, int j, double value) {
        m_(i, j) = value;
        m_(j, i) = value;
    }

    const Eigen::MatrixXd& dense() const { return m_; }

    friend bool operator==(const SymmetricMatrix& a, const SymmetricMatrix& b) {
        return a.m_ == b.m_;
    }

private:
    Eigen::MatrixXd m_;
};

/// n samples of a q-dimensional variable, one sample per row.
class Dataset {
public:
    explicit Dataset(Eigen::MatrixXd rows);

    int n() const { return static_cast<int>(rows_.rows()); }
    int q() const { return static_cast<int>(rows_.cols()); }
    const Eigen::MatrixXd& rows() const { return rows_; }

    /// The sub-dataset made of the given rows, in the given order.
    Dataset subset(const std::vector<int>& row_indices) const;

private:
    Eigen::MatrixXd rows_;
};

/// Unnormalized scatter nS = Y^T Y together with the sample count n.
struct ScatterMatrix {
    SymmetricMatrix s;
    int n;

    /// Validates positive semidefiniteness with tolerance 1e-10 * trace.
    ScatterMatrix(SymmetricMatrix s, int n);

    int dim() const { return s.dim(); }
};

ScatterMatrix sample_scatter(const Dataset& data);

bool is_positive_definite(const SymmetricMatrix& m);

/// log det of a positive definite matrix; throws DomainError otherwise.
double log_det_pd(const SymmetricMatrix& m);

/// Inverse of a positive definite matrix through its Cholesky factor.
SymmetricMatrix inverse_pd(const SymmetricMatrix& m);

/// -(n/2) log det(omega) + (1/2) tr(nS omega).
double gaussian_nll(const SymmetricMatrix& omega, const ScatterMatrix& scatter, int n);

/// P m P^T for the transposition of i and j (0-based).
SymmetricMatrix swap_rowcol(const SymmetricMatrix& m, int i, int j);

/// In-place variant of swap_rowcol.
void swap_rowcol_inplace(Eigen::MatrixXd& m, int i, int j);

}  // namespace llagraph
