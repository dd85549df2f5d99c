// Copyright 2026 The BPGNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bpgnn/tensor.hpp"

namespace bpgnn {

// Shift applied inside log_eps; keeps log finite when probabilities hit 0.
inline constexpr double kLogEps = 1e-12;

class Node;
using Var = std::shared_ptr<Node>;

// One vertex of the computation tape. Values are computed eagerly; the
// backward closure pulls this node's gradient into its parents. Gradients
// accumulate across uses; callers zero parameter grads between steps.
class Node {
 public:
  Tensor value;
  Tensor grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<Var> parents;
  std::function<void(Node&)> backward_fn;

  int rows() const { return value.rows; }
  int cols() const { return value.cols; }

  void accumulate_grad(const Tensor& g);
  void zero_grad();
  bool has_grad() const { return !grad.empty(); }
};

Var make_constant(Tensor value);
Var make_parameter(Tensor value);

// Same value, cut off from the tape.
Var detach(const Var& x);

Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
// Adds a 1 x c row vector to every row of a (m x c matrix).
Var add_rowvec(const Var& a, const Var& bias);
Var scale(const Var& a, double c);
Var relu(const Var& a);
Var exp(const Var& a);
// log(x + kLogEps); inputs must be >= 0 before the shift.
Var log_eps(const Var& a);
// Column concatenation. b may be null (the empty tensor), in which case a is
// returned unchanged.
Var concat_cols(const Var& a, const Var& b);
Var sum(const Var& a);
// sum_i w_i * x_i as a 1 x 1 tensor; w is a constant the same shape as x.
Var weighted_sum(const Var& a, Tensor weights);

// Mean over the masked rows of -log softmax(logits)[i, label[i]].
Var masked_cross_entropy(const Var& logits, const std::vector<int>& labels,
                         const std::vector<int>& mask_rows);

// Reverse pass from a 1 x 1 root. Topological order over the tape; each
// node's gradient is complete before its backward closure runs.
void backward(const Var& root);

void zero_grads(const std::vector<Var>& params);

}  // namespace bpgnn
