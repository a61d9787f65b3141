// SPDX-License-Identifier: Apache-2.0
#include "mude/tape.hpp"

#include <cmath>

namespace mude {

void Tape::record(const char* kind, std::initializer_list<const Tensor*> inputs, Tensor& out,
                  std::function<void()> backward) {
  Node node;
  node.kind = kind;
  for (const Tensor* in : inputs) node.inputs.push_back(in->node());
  node.output = static_cast<int>(nodes_.size());
  node.back = std::move(backward);
  out.node_ = node.output;
  out.st_->requires_grad = true;
  nodes_.push_back(std::move(node));
}

bool Tape::wants(std::initializer_list<const Tensor*> inputs) const {
  if (!recording_) return false;
  for (const Tensor* in : inputs)
    if (in->requires_grad()) return true;
  return false;
}

void Tape::backward(Tensor& loss) {
  if (consumed_) throw ConfigError("tape already consumed; call reset() before backward()");
  if (loss.size() != 1) throw ShapeError("backward() requires a scalar loss");
  if (!std::isfinite(loss.item())) throw NumericError("backward() on non-finite loss");
  consumed_ = true;
  loss.grad()[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) it->back();
}

void Tape::reset() {
  nodes_.clear();
  consumed_ = false;
}

}  // namespace mude
