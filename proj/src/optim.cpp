// SPDX-License-Identifier: Apache-2.0
#include "mude/optim.hpp"

#include <cmath>

#include "mude/common.hpp"

namespace mude {

Tensor init_param(Shape shape, Rng& rng, int64_t fan_in) {
  if (fan_in <= 0) fan_in = shape.back();
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Tensor t(std::move(shape));
  double* p = t.data();
  const int64_t n = t.size();
  for (int64_t i = 0; i < n; ++i) p[i] = rng.next_symmetric(bound);
  t.set_requires_grad(true);
  return t;
}

double clip_grad_norm(ParamSet& params, double max_norm) {
  if (max_norm <= 0.0) throw ConfigError("clip_grad_norm: max_norm must be > 0");
  double sq = 0.0;
  for (auto& it : params.items()) {
    if (!it.tensor->has_grad()) continue;
    const auto& g = it.tensor->grad_vector();
    for (double v : g) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return 1.0;
  const double scale = max_norm / norm;
  for (auto& it : params.items()) {
    if (!it.tensor->has_grad()) continue;
    double* g = it.tensor->grad();
    const int64_t n = it.tensor->size();
    for (int64_t i = 0; i < n; ++i) g[i] *= scale;
  }
  return scale;
}

void rmsprop_step(Tensor& param, const double* grad, std::vector<double>& acc, double lr,
                  double rho, double eps) {
  // lr == 0 is allowed as a diagnostic no-op step.
  if (lr < 0.0 || rho <= 0.0 || rho >= 1.0 || eps <= 0.0)
    throw ConfigError("rmsprop_step: need lr >= 0, 0 < rho < 1, eps > 0");
  const int64_t n = param.size();
  if (static_cast<int64_t>(acc.size()) != n) acc.assign(static_cast<size_t>(n), 0.0);
  for (int64_t i = 0; i < n; ++i)
    if (!std::isfinite(grad[i])) throw NumericError("rmsprop_step: non-finite gradient");
  double* p = param.data();
  for (int64_t i = 0; i < n; ++i) {
    acc[static_cast<size_t>(i)] = rho * acc[static_cast<size_t>(i)] + (1.0 - rho) * grad[i] * grad[i];
    p[i] -= lr * grad[i] / (std::sqrt(acc[static_cast<size_t>(i)]) + eps);
  }
}

RmsProp::RmsProp(double lr, double rho, double eps) : lr_(lr), rho_(rho), eps_(eps) {
  if (lr < 0.0 || rho <= 0.0 || rho >= 1.0 || eps <= 0.0)
    throw ConfigError("RmsProp: need lr >= 0, 0 < rho < 1, eps > 0");
}

void RmsProp::step(ParamSet& params) {
  acc_.resize(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& t = *params.items()[i].tensor;
    rmsprop_step(t, t.grad(), acc_[i], lr_, rho_, eps_);
  }
}

}  // namespace mude
