// Compares the serial and OpenMP variants of the sparse pricing kernel
// (A^T y over a CSC matrix) on problem shapes typical of the embedding MILPs:
// many more columns than rows, ~1-5% density.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "secvne/kernels.hpp"

using namespace secvne::kernels;

namespace {

Csc random_csc(std::mt19937_64& rng, int rows, int cols, double density) {
    Csc a;
    a.nrows = rows;
    a.ncols = cols;
    a.col_ptr.push_back(0);
    std::uniform_real_distribution<double> val(-10, 10), u(0, 1);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i)
            if (u(rng) < density) {
                a.row_idx.push_back(i);
                a.val.push_back(val(rng));
            }
        a.col_ptr.push_back(static_cast<int>(a.row_idx.size()));
    }
    return a;
}

template <typename F>
double time_ms(F&& f, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    std::mt19937_64 rng(1);
    struct Shape {
        int rows, cols;
        double density;
        int reps;
    };
    const Shape shapes[] = {
        {200, 2000, 0.05, 200}, {500, 20000, 0.02, 50}, {1000, 100000, 0.01, 10},
        {2000, 400000, 0.005, 3},
    };
    std::printf("%8s %8s %8s %10s %12s %12s %8s\n", "rows", "cols", "density", "nnz",
                "serial(ms)", "omp(ms)", "speedup");
    for (const auto& s : shapes) {
        Csc a = random_csc(rng, s.rows, s.cols, s.density);
        std::vector<double> y(s.rows);
        for (auto& v : y) v = std::uniform_real_distribution<double>(-5, 5)(rng);
        std::vector<double> out_s(s.cols), out_p(s.cols);
        double ts = time_ms([&] { transpose_apply_serial(a, y.data(), out_s.data()); }, s.reps);
        double tp = time_ms([&] { transpose_apply_omp(a, y.data(), out_p.data()); }, s.reps);
        if (out_s != out_p) {
            std::printf("MISMATCH at %dx%d\n", s.rows, s.cols);
            return 1;
        }
        std::printf("%8d %8d %8.3f %10zu %12.3f %12.3f %7.2fx\n", s.rows, s.cols, s.density,
                    a.val.size(), ts, tp, ts / tp);
    }
    return 0;
}
