#include "secvne/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace secvne::kernels {

void transpose_apply_serial(const Csc& a, const double* y, double* out) {
    for (int j = 0; j < a.ncols; ++j) {
        double s = 0.0;
        for (int k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) s += y[a.row_idx[k]] * a.val[k];
        out[j] = s;
    }
}

void transpose_apply_omp(const Csc& a, const double* y, double* out) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < a.ncols; ++j) {
        double s = 0.0;
        for (int k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) s += y[a.row_idx[k]] * a.val[k];
        out[j] = s;
    }
}

void transpose_apply(const Csc& a, const double* y, double* out) {
#ifdef _OPENMP
    if (a.ncols >= 4096 && omp_get_max_threads() > 1) {
        transpose_apply_omp(a, y, out);
        return;
    }
#endif
    transpose_apply_serial(a, y, out);
}

}  // namespace secvne::kernels
