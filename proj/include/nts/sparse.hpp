#ifndef NTS_SPARSE_HPP
#define NTS_SPARSE_HPP

#include <vector>

namespace nts {

// Compressed sparse row matrix. No explicit zeros are stored.
struct SparseOperator {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows + 1
    std::vector<int> col_idx;
    std::vector<double> values;

    static SparseOperator identity(int n);

    // Triplets must be grouped by row in ascending order.
    struct Builder {
        explicit Builder(int rows, int cols);
        void start_row();
        void add(int col, double value);  // value 0 is skipped
        SparseOperator finish();

      private:
        int rows_ = 0;
        int cols_ = 0;
        std::vector<int> row_ptr_;
        std::vector<int> col_idx_;
        std::vector<double> values_;
        int current_row_ = 0;
    };

    void apply(const double* in, double* out) const;
    std::vector<double> apply(const std::vector<double>& v) const;

    std::vector<double> dense() const;  // row-major rows x cols
};

SparseOperator add(const SparseOperator& a, const SparseOperator& b, double sa = 1.0,
                   double sb = 1.0);

// Kronecker combination with the FIRST index fast: the result acts on vectors
// v[m1 + n1*m2], applying `fast` along m1 and `slow` along m2.
SparseOperator kron(const SparseOperator& slow, const SparseOperator& fast);

}  // namespace nts

#endif
