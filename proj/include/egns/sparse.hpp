#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

namespace egns {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Row-compressed sparse matrix. Built from a triplet stream by a stable
/// sort, so duplicate entries are summed in their insertion order and the
/// result is identical no matter how the triplets were produced in parallel,
/// as long as the stream itself is deterministic.
class SparseMatrix {
  public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    double coeff(int row, int col) const;

    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
    Eigen::VectorXd transpose_times(const Eigen::VectorXd& x) const;

    /// Zero-copy Eigen view (row-major CSR); used to hand the matrix to the
    /// sparse direct solver and the dense diagnostics.
    Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> eigen_map() const;
    Eigen::MatrixXd to_dense() const;

  private:
    friend SparseMatrix csr_sum(const SparseMatrix& a, const SparseMatrix& b);
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Entrywise sum of two matrices of equal shape (structural union, row merge).
SparseMatrix csr_sum(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace egns
