// SPDX-License-Identifier: Apache-2.0
//
// Central finite-difference oracle for gradient tests. Rebuilds the forward
// graph through a caller-provided closure, so it stays independent of the
// backward implementation it checks.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "mude/ops.hpp"
#include "mude/rng.hpp"

namespace mude::testing {

inline double numeric_derivative(const std::function<double()>& eval, double* slot, double step) {
  const double orig = *slot;
  *slot = orig + step;
  const double up = eval();
  *slot = orig - step;
  const double down = eval();
  *slot = orig;
  return (up - down) / (2.0 * step);
}

// Compares analytic gradients of a scalar-valued graph against central
// differences for every listed parameter. Large parameters are subsampled.
inline void check_gradients(const std::vector<Tensor*>& params,
                            const std::function<Tensor(Tape&)>& graph, double step = 1e-5,
                            double tol = 1e-4, size_t max_checks_per_param = 64) {
  for (Tensor* p : params) p->zero_grad();
  Tape tape;
  Tensor loss = graph(tape);
  tape.backward(loss);

  const auto eval = [&]() {
    Tape fwd;
    fwd.set_recording(false);
    return graph(fwd).item();
  };

  Rng pick(0x9d5f);
  for (Tensor* p : params) {
    const int64_t n = p->size();
    std::vector<int64_t> slots;
    if (static_cast<size_t>(n) <= max_checks_per_param) {
      for (int64_t i = 0; i < n; ++i) slots.push_back(i);
    } else {
      for (size_t k = 0; k < max_checks_per_param; ++k)
        slots.push_back(pick.next_int(0, n - 1));
    }
    for (int64_t i : slots) {
      const double analytic = p->grad()[i];
      const double numeric = numeric_derivative(eval, p->data() + i, step);
      const double err = std::abs(analytic - numeric);
      const double denom = std::max({1.0, std::abs(analytic), std::abs(numeric)});
      INFO("param size ", n, " slot ", i, " analytic ", analytic, " numeric ", numeric);
      REQUIRE(err / denom < tol);
    }
  }
}

inline Tensor random_param(Shape shape, Rng& rng, double range = 1.0) {
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.size(); ++i) t.data()[i] = rng.next_symmetric(range);
  t.set_requires_grad(true);
  return t;
}

}  // namespace mude::testing
