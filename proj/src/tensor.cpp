// SPDX-License-Identifier: Apache-2.0
#include "mude/tensor.hpp"

#include <cmath>
#include <sstream>

namespace mude {

int64_t numel(const Shape& s) {
  int64_t n = 1;
  for (int64_t d : s) n *= d;
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), st_(std::make_shared<Storage>()) {
  for (int64_t d : shape_)
    if (d <= 0) throw ShapeError("tensor extents must be positive: " + shape_str(shape_));
  st_->x.assign(static_cast<size_t>(numel(shape_)), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), st_(std::make_shared<Storage>()) {
  for (int64_t d : shape_)
    if (d <= 0) throw ShapeError("tensor extents must be positive: " + shape_str(shape_));
  if (static_cast<int64_t>(data.size()) != numel(shape_))
    throw ShapeError("data length " + std::to_string(data.size()) + " does not match shape " +
                     shape_str(shape_));
  st_->x = std::move(data);
}

Tensor Tensor::full(Shape shape, double v) {
  Tensor t(std::move(shape));
  std::fill(t.st_->x.begin(), t.st_->x.end(), v);
  return t;
}

double Tensor::item() const {
  if (!st_ || st_->x.size() != 1) throw ShapeError("item() requires a scalar tensor");
  return st_->x[0];
}

Tensor& Tensor::set_requires_grad(bool b) {
  st_->requires_grad = b;
  return *this;
}

double* Tensor::grad() const {
  if (st_->g.empty()) st_->g.assign(st_->x.size(), 0.0);
  return st_->g.data();
}

const std::vector<double>& Tensor::grad_vector() const {
  static const std::vector<double> kEmpty;
  return st_ && !st_->g.empty() ? st_->g : kEmpty;
}

void Tensor::zero_grad() {
  if (st_) std::fill(st_->g.begin(), st_->g.end(), 0.0);
}

Tensor Tensor::reshaped(Shape shape) const {
  if (numel(shape) != static_cast<int64_t>(st_->x.size()))
    throw ShapeError("reshape " + shape_str(shape_) + " -> " + shape_str(shape) +
                     " changes element count");
  Tensor t;
  t.shape_ = std::move(shape);
  t.st_ = st_;
  t.node_ = node_;
  return t;
}

Tensor Tensor::clone() const {
  Tensor t;
  t.shape_ = shape_;
  t.st_ = std::make_shared<Storage>();
  t.st_->x = st_->x;
  t.st_->requires_grad = st_->requires_grad;
  return t;
}

bool Tensor::all_finite() const {
  for (double v : st_->x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace mude
