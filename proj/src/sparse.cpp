#include "egns/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace egns {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::out_of_range("SparseMatrix::from_triplets: index out of range");

    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const int r = triplets[i].row, c = triplets[i].col;
        double v = 0.0;
        for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i)
            v += triplets[i].value;
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
        ++m.row_ptr_[r + 1];
    }
    for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

double SparseMatrix::coeff(int row, int col) const {
    for (int i = row_ptr_[row]; i < row_ptr_[row + 1]; ++i)
        if (col_idx_[i] == col) return values_[i];
    return 0.0;
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseMatrix: size mismatch in A*x");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) s += values_[i] * x[col_idx_[i]];
        y[r] = s;
    }
    return y;
}

Eigen::VectorXd SparseMatrix::transpose_times(const Eigen::VectorXd& x) const {
    if (x.size() != rows_) throw std::invalid_argument("SparseMatrix: size mismatch in A^T*x");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
    for (int r = 0; r < rows_; ++r)
        for (int i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) y[col_idx_[i]] += values_[i] * x[r];
    return y;
}

Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> SparseMatrix::eigen_map()
    const {
    return {rows_, cols_, static_cast<int>(values_.size()), row_ptr_.data(), col_idx_.data(),
            values_.data()};
}

SparseMatrix csr_sum(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("csr_sum: shape mismatch");
    SparseMatrix m;
    m.rows_ = a.rows();
    m.cols_ = a.cols();
    m.row_ptr_.assign(a.rows() + 1, 0);
    m.col_idx_.reserve(a.nnz() + b.nnz());
    m.values_.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.rows(); ++r) {
        int ia = a.row_ptr_[r], ib = b.row_ptr_[r];
        const int ea = a.row_ptr_[r + 1], eb = b.row_ptr_[r + 1];
        while (ia < ea || ib < eb) {
            int c;
            double v = 0.0;
            if (ib >= eb || (ia < ea && a.col_idx_[ia] <= b.col_idx_[ib])) {
                c = a.col_idx_[ia];
                v = a.values_[ia++];
                if (ib < eb && b.col_idx_[ib] == c) v += b.values_[ib++];
            } else {
                c = b.col_idx_[ib];
                v = b.values_[ib++];
            }
            m.col_idx_.push_back(c);
            m.values_.push_back(v);
            ++m.row_ptr_[r + 1];
        }
    }
    for (int r = 0; r < a.rows(); ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) d(r, col_idx_[i]) += values_[i];
    return d;
}

}  // namespace egns
