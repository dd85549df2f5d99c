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

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace bpgnn {

/// Dense row-major matrix of doubles. The one value type used everywhere;
/// column vectors are n x 1 tensors, scalars are 1 x 1.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int r, int c, double fill = 0.0);

  static Tensor zeros(int r, int c) { return Tensor(r, c, 0.0); }
  static Tensor full(int r, int c, double value) { return Tensor(r, c, value); }
  static Tensor identity(int n);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> data);
  static Tensor scalar(double x);

  double& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
  double* row_ptr(int i) { return v.data() + static_cast<size_t>(i) * cols; }
  const double* row_ptr(int i) const { return v.data() + static_cast<size_t>(i) * cols; }

  size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  bool all_finite() const;
  void fill(double x);
};

// a (m x k) * b (k x n). Skips zero entries of a, so multiplying a sparse
// feature matrix by a weight matrix costs O(nnz * n) without a separate
// sparse representation.
Tensor matmul(const Tensor& a, const Tensor& b);

// a (m x k) * b^T, b is (n x k). Inner loop is a dot product over k.
Tensor matmul_nt(const Tensor& a, const Tensor& b);

// a^T * b, a is (k x m), b is (k x n).
Tensor matmul_tn(const Tensor& a, const Tensor& b);

// Plain dense GEMM through BLAS; no zero skipping. Used by the dense
// fallback path of the probabilistic Boolean product for timing.
Tensor matmul_blas(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& a);
double max_abs_diff(const Tensor& a, const Tensor& b);
double sum_all(const Tensor& a);

}  // namespace bpgnn
