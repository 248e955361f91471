#pragma once

#include <vector>

namespace secvne::kernels {

// Compressed sparse columns. col_ptr has ncols+1 entries.
struct Csc {
    int nrows = 0;
    int ncols = 0;
    std::vector<int> col_ptr;
    std::vector<int> row_idx;
    std::vector<double> val;
};

// out[j] = sum_i y[row_idx] * val over column j, i.e. (A^T y)[j].
// This is the simplex pricing kernel; the omp variant parallelizes over
// columns, so both produce bitwise-identical results.
void transpose_apply_serial(const Csc& a, const double* y, double* out);
void transpose_apply_omp(const Csc& a, const double* y, double* out);
void transpose_apply(const Csc& a, const double* y, double* out);

}  // namespace secvne::kernels
