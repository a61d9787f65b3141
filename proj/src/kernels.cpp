// SPDX-License-Identifier: Apache-2.0
#include "mude/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mude::kernels {

namespace {

int g_threads = 0;  // 0 = not initialized yet

constexpr int64_t kRowBlock = 16;
constexpr int64_t kColTile = 256;

// Rows [i0, i1) of C = A*B (optionally +=), j tiled for cache reuse. The
// per-element accumulation over k is always in ascending order, so results
// do not depend on the blocking or on which thread computes a row. Shared
// by the serial and parallel variants to keep them bitwise identical.
void matmul_rows(const double* a, const double* b, double* c, int64_t i0,
                 int64_t i1, int64_t k, int64_t n, bool accumulate) {
  if (!accumulate)
    for (int64_t r = i0; r < i1; ++r) std::fill(c + r * n, c + r * n + n, 0.0);
  for (int64_t j0 = 0; j0 < n; j0 += kColTile) {
    const int64_t j1 = std::min(n, j0 + kColTile);
    for (int64_t kk = 0; kk < k; ++kk) {
      const double* b_row = b + kk * n;
      for (int64_t r = i0; r < i1; ++r) {
        const double av = a[r * k + kk];
        if (av == 0.0) continue;
        double* c_row = c + r * n;
        for (int64_t j = j0; j < j1; ++j) c_row[j] += av * b_row[j];
      }
    }
  }
}

inline void softmax_row(const double* x, double* y, int64_t cols) {
  double mx = x[0];
  for (int64_t j = 1; j < cols; ++j) mx = std::max(mx, x[j]);
  double sum = 0.0;
  for (int64_t j = 0; j < cols; ++j) {
    y[j] = std::exp(x[j] - mx);
    sum += y[j];
  }
  const double inv = 1.0 / sum;
  for (int64_t j = 0; j < cols; ++j) y[j] *= inv;
}

}  // namespace

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }

int default_threads() {
  if (const char* env = std::getenv("MUDE_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int threads() {
  if (g_threads == 0) g_threads = default_threads();
  return g_threads;
}

void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k,
            int64_t n, bool accumulate) {
  const int64_t blocks = (m + kRowBlock - 1) / kRowBlock;
  const int nt = threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && blocks > 1)
#endif
  for (int64_t bi = 0; bi < blocks; ++bi) {
    const int64_t i0 = bi * kRowBlock;
    matmul_rows(a, b, c, i0, std::min(m, i0 + kRowBlock), k, n, accumulate);
  }
}

void bmm(const double* a, const double* b, double* c, int64_t batch, int64_t m,
         int64_t k, int64_t n, bool accumulate) {
  const int nt = threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && batch > 1)
#endif
  for (int64_t bi = 0; bi < batch; ++bi)
    matmul_rows(a + bi * m * k, b + bi * k * n, c + bi * m * n, 0, m, k, n,
                accumulate);
}

void transpose(const double* a, double* out, int64_t m, int64_t n) {
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out[j * m + i] = a[i * n + j];
}

void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols) {
  const int nt = threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && rows > 1)
#endif
  for (int64_t i = 0; i < rows; ++i) softmax_row(x + i * cols, y + i * cols, cols);
}

namespace serial {

void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k,
            int64_t n, bool accumulate) {
  for (int64_t i0 = 0; i0 < m; i0 += kRowBlock)
    matmul_rows(a, b, c, i0, std::min(m, i0 + kRowBlock), k, n, accumulate);
}

void bmm(const double* a, const double* b, double* c, int64_t batch, int64_t m,
         int64_t k, int64_t n, bool accumulate) {
  for (int64_t bi = 0; bi < batch; ++bi)
    matmul_rows(a + bi * m * k, b + bi * k * n, c + bi * m * n, 0, m, k, n,
                accumulate);
}

void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols) {
  for (int64_t i = 0; i < rows; ++i) softmax_row(x + i * cols, y + i * cols, cols);
}

}  // namespace serial

}  // namespace mude::kernels
