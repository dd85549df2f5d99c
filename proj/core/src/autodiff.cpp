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

#include "bpgnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace bpgnn {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Var make_result(Tensor value, std::vector<Var> parents, std::function<void(Node&)> bwd) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  bool needs = false;
  for (const auto& p : parents) needs = needs || (p && p->requires_grad);
  n->requires_grad = needs;
  if (needs) {
    n->parents = std::move(parents);
    n->backward_fn = std::move(bwd);
  }
  return n;
}

}  // namespace

void Node::accumulate_grad(const Tensor& g) {
  if (grad.empty()) grad = Tensor::zeros(value.rows, value.cols);
  check(grad.same_shape(g), "accumulate_grad: shape mismatch");
  for (size_t i = 0; i < grad.v.size(); ++i) grad.v[i] += g.v[i];
}

void Node::zero_grad() {
  if (!grad.empty())
    grad.fill(0.0);
}

Var make_constant(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = false;
  return n;
}

Var make_parameter(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = true;
  return n;
}

Var detach(const Var& x) { return make_constant(x->value); }

Var matmul(const Var& a, const Var& b) {
  check(a->cols() == b->rows(), "matmul: inner dimensions disagree");
  return make_result(matmul(a->value, b->value), {a, b}, [](Node& n) {
    const Var& a = n.parents[0];
    const Var& b = n.parents[1];
    if (a->requires_grad) a->accumulate_grad(matmul_nt(n.grad, b->value));
    if (b->requires_grad) b->accumulate_grad(matmul_tn(a->value, n.grad));
  });
}

Var add(const Var& a, const Var& b) {
  check(a->value.same_shape(b->value), "add: shape mismatch");
  Tensor out = a->value;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b->value.v[i];
  return make_result(std::move(out), {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad) n.parents[0]->accumulate_grad(n.grad);
    if (n.parents[1]->requires_grad) n.parents[1]->accumulate_grad(n.grad);
  });
}

Var add_rowvec(const Var& a, const Var& bias) {
  check(bias->rows() == 1 && bias->cols() == a->cols(), "add_rowvec: bias must be 1 x cols");
  Tensor out = a->value;
  for (int i = 0; i < out.rows; ++i) {
    double* r = out.row_ptr(i);
    for (int j = 0; j < out.cols; ++j) r[j] += bias->value.v[j];
  }
  return make_result(std::move(out), {a, bias}, [](Node& n) {
    if (n.parents[0]->requires_grad) n.parents[0]->accumulate_grad(n.grad);
    if (n.parents[1]->requires_grad) {
      Tensor g(1, n.cols());
      for (int i = 0; i < n.rows(); ++i) {
        const double* r = n.grad.row_ptr(i);
        for (int j = 0; j < n.cols(); ++j) g.v[j] += r[j];
      }
      n.parents[1]->accumulate_grad(g);
    }
  });
}

Var scale(const Var& a, double c) {
  Tensor out = a->value;
  for (double& x : out.v) x *= c;
  return make_result(std::move(out), {a}, [c](Node& n) {
    Tensor g = n.grad;
    for (double& x : g.v) x *= c;
    n.parents[0]->accumulate_grad(g);
  });
}

Var relu(const Var& a) {
  Tensor out = a->value;
  for (double& x : out.v) x = x > 0.0 ? x : 0.0;
  return make_result(std::move(out), {a}, [](Node& n) {
    Tensor g = n.grad;
    const Tensor& x = n.parents[0]->value;
    for (size_t i = 0; i < g.v.size(); ++i)
      if (x.v[i] <= 0.0) g.v[i] = 0.0;
    n.parents[0]->accumulate_grad(g);
  });
}

Var exp(const Var& a) {
  Tensor out = a->value;
  for (double& x : out.v) x = std::exp(x);
  return make_result(std::move(out), {a}, [](Node& n) {
    Tensor g = n.grad;
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] *= n.value.v[i];
    n.parents[0]->accumulate_grad(g);
  });
}

Var log_eps(const Var& a) {
  Tensor out = a->value;
  for (double& x : out.v) x = std::log(x + kLogEps);
  return make_result(std::move(out), {a}, [](Node& n) {
    Tensor g = n.grad;
    const Tensor& x = n.parents[0]->value;
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] /= (x.v[i] + kLogEps);
    n.parents[0]->accumulate_grad(g);
  });
}

Var concat_cols(const Var& a, const Var& b) {
  if (!b || b->value.empty()) return a;
  check(a->rows() == b->rows(), "concat_cols: row counts disagree");
  const int m = a->rows(), p = a->cols(), q = b->cols();
  Tensor out(m, p + q);
  for (int i = 0; i < m; ++i) {
    std::copy_n(a->value.row_ptr(i), p, out.row_ptr(i));
    std::copy_n(b->value.row_ptr(i), q, out.row_ptr(i) + p);
  }
  return make_result(std::move(out), {a, b}, [p, q](Node& n) {
    const int m = n.rows();
    if (n.parents[0]->requires_grad) {
      Tensor ga(m, p);
      for (int i = 0; i < m; ++i) std::copy_n(n.grad.row_ptr(i), p, ga.row_ptr(i));
      n.parents[0]->accumulate_grad(ga);
    }
    if (n.parents[1]->requires_grad) {
      Tensor gb(m, q);
      for (int i = 0; i < m; ++i) std::copy_n(n.grad.row_ptr(i) + p, q, gb.row_ptr(i));
      n.parents[1]->accumulate_grad(gb);
    }
  });
}

Var sum(const Var& a) {
  return make_result(Tensor::scalar(sum_all(a->value)), {a}, [](Node& n) {
    const double g = n.grad.v[0];
    Tensor ga(n.parents[0]->rows(), n.parents[0]->cols(), g);
    n.parents[0]->accumulate_grad(ga);
  });
}

Var weighted_sum(const Var& a, Tensor weights) {
  check(a->value.same_shape(weights), "weighted_sum: weight shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < weights.v.size(); ++i) s += weights.v[i] * a->value.v[i];
  auto w = std::make_shared<Tensor>(std::move(weights));
  return make_result(Tensor::scalar(s), {a}, [w](Node& n) {
    const double g = n.grad.v[0];
    Tensor ga = *w;
    for (double& x : ga.v) x *= g;
    n.parents[0]->accumulate_grad(ga);
  });
}

Var masked_cross_entropy(const Var& logits, const std::vector<int>& labels,
                         const std::vector<int>& mask_rows) {
  check(!mask_rows.empty(), "masked_cross_entropy: empty mask");
  check(static_cast<int>(labels.size()) == logits->rows(),
        "masked_cross_entropy: one label per row required");
  const int C = logits->cols();
  for (int i : mask_rows) {
    check(i >= 0 && i < logits->rows(), "masked_cross_entropy: mask row out of range");
    check(labels[i] >= 0 && labels[i] < C, "masked_cross_entropy: label out of range");
  }

  // Softmax probabilities for the masked rows only, kept for the backward.
  auto probs = std::make_shared<Tensor>(static_cast<int>(mask_rows.size()), C);
  auto rows = std::make_shared<std::vector<int>>(mask_rows);
  auto labs = std::make_shared<std::vector<int>>(labels);
  double loss = 0.0;
  for (size_t m = 0; m < mask_rows.size(); ++m) {
    const double* row = logits->value.row_ptr(mask_rows[m]);
    double mx = row[0];
    for (int j = 1; j < C; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    for (int j = 0; j < C; ++j) z += std::exp(row[j] - mx);
    const double logz = std::log(z) + mx;
    for (int j = 0; j < C; ++j) probs->at(static_cast<int>(m), j) = std::exp(row[j] - logz);
    loss += logz - row[labels[mask_rows[m]]];
  }
  loss /= static_cast<double>(mask_rows.size());

  return make_result(Tensor::scalar(loss), {logits}, [probs, rows, labs](Node& n) {
    const double g = n.grad.v[0] / static_cast<double>(rows->size());
    Tensor gl(n.parents[0]->rows(), n.parents[0]->cols());
    const int C = gl.cols;
    for (size_t m = 0; m < rows->size(); ++m) {
      const int i = (*rows)[m];
      double* gi = gl.row_ptr(i);
      for (int j = 0; j < C; ++j) gi[j] += g * probs->at(static_cast<int>(m), j);
      gi[(*labs)[i]] -= g;
    }
    n.parents[0]->accumulate_grad(gl);
  });
}

void backward(const Var& root) {
  check(root != nullptr, "backward: null root");
  check(root->rows() == 1 && root->cols() == 1, "backward: root must be scalar");
  if (!root->requires_grad) return;

  // Iterative postorder DFS; reversed postorder is a valid topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.get(), 0);
  seen.insert(root.get());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node* p = node->parents[idx++].get();
      if (p && p->requires_grad && !seen.count(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->accumulate_grad(Tensor::scalar(1.0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn && n->has_grad()) n->backward_fn(*n);
  }
}

void zero_grads(const std::vector<Var>& params) {
  for (const auto& p : params) p->zero_grad();
}

}  // namespace bpgnn
