// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace mude::kernels {

// Thread count used by the OpenMP kernel variants. The parallel kernels
// split work over independent output rows only, so results are bitwise
// identical for any thread count (and identical to the serial reference).
void set_threads(int n);
int threads();

// Reads MUDE_THREADS if set, otherwise the OpenMP default.
int default_threads();

// C[m x n] = A[m x k] * B[k x n], row-major. When accumulate is set the
// product is added into C instead of overwriting it.
void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k,
            int64_t n, bool accumulate);

// Batched matmul: `batch` independent [m x k]*[k x n] products laid out
// contiguously.
void bmm(const double* a, const double* b, double* c, int64_t batch, int64_t m,
         int64_t k, int64_t n, bool accumulate);

// out[n x m] = transpose of a[m x n].
void transpose(const double* a, double* out, int64_t m, int64_t n);

// Row-wise softmax with max subtraction; safe for arbitrarily large logits.
void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols);

// Serial reference implementations. Same arithmetic order as the parallel
// kernels above; kept for the parity tests and the benchmark target.
namespace serial {
void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k,
            int64_t n, bool accumulate);
void bmm(const double* a, const double* b, double* c, int64_t batch, int64_t m,
         int64_t k, int64_t n, bool accumulate);
void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols);
}  // namespace serial

}  // namespace mude::kernels
