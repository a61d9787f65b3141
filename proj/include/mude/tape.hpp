// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "mude/tensor.hpp"

namespace mude {

// Reverse-mode autodiff tape. Ops append nodes in execution order, which is
// a topological order by construction; backward() replays the closures in
// reverse, visiting each node exactly once. A tape is single-owner: it is
// never shared across concurrent training steps.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // When recording is off, ops run forward-only (inference mode).
  void set_recording(bool b) { recording_ = b; }
  bool recording() const { return recording_; }

  // Called by ops. Assigns the output's node id and stores the backward
  // closure. Inputs are referenced by node id for inspection; leaves are -1.
  void record(const char* kind, std::initializer_list<const Tensor*> inputs, Tensor& out,
              std::function<void()> backward);

  // True when the op should record: recording is on and some input needs
  // gradients.
  bool wants(std::initializer_list<const Tensor*> inputs) const;

  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every reachable
  // tensor. The loss must be a finite scalar. A tape can be walked once;
  // call reset() before reuse.
  void backward(Tensor& loss);

  void reset();

  size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  struct Node {
    const char* kind;
    std::vector<int> inputs;
    int output;
    std::function<void()> back;
  };

  std::vector<Node> nodes_;
  bool recording_ = true;
  bool consumed_ = false;
};

}  // namespace mude
