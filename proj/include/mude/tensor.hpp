// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mude/common.hpp"

namespace mude {

using Shape = std::vector<int64_t>;

int64_t numel(const Shape& s);
std::string shape_str(const Shape& s);

// Dense row-major f64 tensor. Copies are shallow (shared storage); use
// clone() for an independent copy. Values are written once during a forward
// pass and treated as immutable afterwards; gradients accumulate in a
// parallel buffer owned by the same storage.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
  static Tensor full(Shape shape, double v);
  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  bool defined() const { return st_ != nullptr; }
  const Shape& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int64_t size() const { return static_cast<int64_t>(st_->x.size()); }

  double* data() { return st_->x.data(); }
  const double* data() const { return st_->x.data(); }
  std::vector<double>& values() { return st_->x; }
  const std::vector<double>& values() const { return st_->x; }

  // Value of a scalar (1-element) tensor.
  double item() const;

  bool requires_grad() const { return st_ && st_->requires_grad; }
  Tensor& set_requires_grad(bool b);

  // Gradient buffer, lazily allocated and zero-filled on first access.
  // Const because it mutates the shared storage, not this handle; backward
  // closures accumulate through captured copies.
  double* grad() const;
  const std::vector<double>& grad_vector() const;
  bool has_grad() const { return st_ && !st_->g.empty(); }
  void zero_grad();

  // New tensor sharing this storage with a different shape. Element count
  // must match; gradients are shared as well.
  Tensor reshaped(Shape shape) const;

  // Deep copy of the values; fresh (empty) gradient.
  Tensor clone() const;

  bool all_finite() const;

  // Id of the tape node that produced this tensor, -1 for leaves.
  int node() const { return node_; }

 private:
  struct Storage {
    std::vector<double> x;
    std::vector<double> g;  // empty until grad() is first called
    bool requires_grad = false;
  };

  Shape shape_;
  std::shared_ptr<Storage> st_;
  int node_ = -1;

  friend class Tape;
};

}  // namespace mude
