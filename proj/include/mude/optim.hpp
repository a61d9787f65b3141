// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mude/rng.hpp"
#include "mude/tensor.hpp"

namespace mude {

// Insertion-ordered list of named parameters. The order defines the
// checkpoint layout and the optimizer state pairing, so it must be
// deterministic (models register parameters in a fixed order).
class ParamSet {
 public:
  void add(const std::string& name, Tensor& t) { items_.push_back({name, &t}); }

  struct Item {
    std::string name;
    Tensor* tensor;
  };

  std::vector<Item>& items() { return items_; }
  const std::vector<Item>& items() const { return items_; }
  size_t size() const { return items_.size(); }

  void zero_grad() {
    for (auto& it : items_) it.tensor->zero_grad();
  }

 private:
  std::vector<Item> items_;
};

// Fills a parameter with U[-1/sqrt(fan_in), +1/sqrt(fan_in)) and marks it
// trainable. fan_in defaults to the last extent.
Tensor init_param(Shape shape, Rng& rng, int64_t fan_in = 0);

// Global-norm gradient clipping. Returns the scale that was applied
// (1.0 when the norm is within bounds).
double clip_grad_norm(ParamSet& params, double max_norm);

// One RMSprop update for a single parameter:
//   acc <- rho * acc + (1 - rho) * g^2
//   p   <- p - lr * g / (sqrt(acc) + eps)
// Refuses non-finite gradients.
void rmsprop_step(Tensor& param, const double* grad, std::vector<double>& acc, double lr,
                  double rho, double eps);

// RMSprop over a ParamSet, holding one squared-gradient accumulator per
// parameter.
class RmsProp {
 public:
  RmsProp(double lr, double rho = 0.9, double eps = 1e-8);

  void step(ParamSet& params);

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }

  // Accumulator access for checkpointing, keyed by parameter order.
  std::vector<std::vector<double>>& state() { return acc_; }

 private:
  double lr_, rho_, eps_;
  std::vector<std::vector<double>> acc_;
};

}  // namespace mude
