#include "nts/sparse.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

namespace nts {

SparseOperator SparseOperator::identity(int n) {
    SparseOperator op;
    op.rows = op.cols = n;
    op.row_ptr.resize(n + 1);
    op.col_idx.resize(n);
    op.values.assign(n, 1.0);
    for (int i = 0; i <= n; ++i) op.row_ptr[i] = i;
    for (int i = 0; i < n; ++i) op.col_idx[i] = i;
    return op;
}

SparseOperator::Builder::Builder(int rows, int cols) : rows_(rows), cols_(cols) {
    row_ptr_.reserve(rows + 1);
    row_ptr_.push_back(0);
}

void SparseOperator::Builder::start_row() {
    if (current_row_ >= rows_) throw std::logic_error("SparseOperator::Builder: too many rows");
    ++current_row_;
    row_ptr_.push_back(static_cast<int>(col_idx_.size()));
}

void SparseOperator::Builder::add(int col, double value) {
    if (value == 0.0) return;
    if (col < 0 || col >= cols_) throw std::out_of_range("SparseOperator::Builder: bad column");
    col_idx_.push_back(col);
    values_.push_back(value);
    row_ptr_.back() = static_cast<int>(col_idx_.size());
}

SparseOperator SparseOperator::Builder::finish() {
    while (current_row_ < rows_) start_row();
    SparseOperator op;
    op.rows = rows_;
    op.cols = cols_;
    op.row_ptr = std::move(row_ptr_);
    op.col_idx = std::move(col_idx_);
    op.values = std::move(values_);
    return op;
}

void SparseOperator::apply(const double* in, double* out) const {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) sum += values[k] * in[col_idx[k]];
        out[i] = sum;
    }
}

std::vector<double> SparseOperator::apply(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != cols)
        throw std::invalid_argument("SparseOperator::apply: size mismatch");
    std::vector<double> out(rows);
    apply(v.data(), out.data());
    return out;
}

std::vector<double> SparseOperator::dense() const {
    std::vector<double> d(static_cast<size_t>(rows) * cols, 0.0);
    for (int i = 0; i < rows; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            d[static_cast<size_t>(i) * cols + col_idx[k]] += values[k];
    return d;
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b, double sa, double sb) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("add: shape mismatch");
    SparseOperator::Builder builder(a.rows, a.cols);
    std::vector<double> accum(a.cols, 0.0);
    std::vector<int> touched;
    for (int i = 0; i < a.rows; ++i) {
        builder.start_row();
        touched.clear();
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            if (accum[a.col_idx[k]] == 0.0) touched.push_back(a.col_idx[k]);
            accum[a.col_idx[k]] += sa * a.values[k];
        }
        for (int k = b.row_ptr[i]; k < b.row_ptr[i + 1]; ++k) {
            if (accum[b.col_idx[k]] == 0.0) touched.push_back(b.col_idx[k]);
            accum[b.col_idx[k]] += sb * b.values[k];
        }
        std::sort(touched.begin(), touched.end());
        for (const int col : touched) {
            builder.add(col, accum[col]);
            accum[col] = 0.0;
        }
    }
    return builder.finish();
}

SparseOperator kron(const SparseOperator& slow, const SparseOperator& fast) {
    SparseOperator::Builder builder(slow.rows * fast.rows, slow.cols * fast.cols);
    for (int m2 = 0; m2 < slow.rows; ++m2) {
        for (int m1 = 0; m1 < fast.rows; ++m1) {
            builder.start_row();
            for (int ks = slow.row_ptr[m2]; ks < slow.row_ptr[m2 + 1]; ++ks) {
                for (int kf = fast.row_ptr[m1]; kf < fast.row_ptr[m1 + 1]; ++kf) {
                    builder.add(fast.col_idx[kf] + fast.cols * slow.col_idx[ks],
                                slow.values[ks] * fast.values[kf]);
                }
            }
        }
    }
    return builder.finish();
}

}  // namespace nts
