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

#include "bpgnn/tensor.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpgnn {

namespace {
void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

Tensor::Tensor(int r, int c, double fill)
    : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {
  check(r >= 0 && c >= 0, "Tensor: negative dimension");
}

Tensor Tensor::identity(int n) {
  Tensor t(n, n);
  for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> data) {
  const int r = static_cast<int>(data.size());
  const int c = r == 0 ? 0 : static_cast<int>(data.begin()->size());
  Tensor t(r, c);
  int i = 0;
  for (const auto& row : data) {
    check(static_cast<int>(row.size()) == c, "Tensor::from_rows: ragged rows");
    int j = 0;
    for (double x : row) t.at(i, j++) = x;
    ++i;
  }
  return t;
}

Tensor Tensor::scalar(double x) {
  Tensor t(1, 1);
  t.v[0] = x;
  return t;
}

bool Tensor::all_finite() const {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void Tensor::fill(double x) { std::fill(v.begin(), v.end(), x); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  check(a.cols == b.rows, "matmul: inner dimensions disagree");
  Tensor c(a.rows, b.cols);
  const int m = a.rows, k = a.cols, n = b.cols;
#pragma omp parallel for schedule(static) if (static_cast<long long>(m) * k * n > (1 << 18))
  for (int i = 0; i < m; ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      if (aip == 0.0) continue;
      const double* bp = b.row_ptr(p);
      for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  check(a.cols == b.cols, "matmul_nt: inner dimensions disagree");
  Tensor c(a.rows, b.rows);
  const int m = a.rows, k = a.cols, n = b.rows;
#pragma omp parallel for schedule(static) if (static_cast<long long>(m) * k * n > (1 << 18))
  for (int i = 0; i < m; ++i) {
    const double* ai = a.row_ptr(i);
    double* ci = c.row_ptr(i);
    for (int j = 0; j < n; ++j) {
      const double* bj = b.row_ptr(j);
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] = acc;
    }
  }
  return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  check(a.rows == b.rows, "matmul_tn: inner dimensions disagree");
  Tensor c(a.cols, b.cols);
  const int m = a.cols, k = a.rows, n = b.cols;
  // Parallelize over output rows; each output row i reads column i of a.
#pragma omp parallel for schedule(static) if (static_cast<long long>(m) * k * n > (1 << 18))
  for (int i = 0; i < m; ++i) {
    double* ci = c.row_ptr(i);
    for (int p = 0; p < k; ++p) {
      const double api = a.at(p, i);
      if (api == 0.0) continue;
      const double* bp = b.row_ptr(p);
      for (int j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
  return c;
}

Tensor matmul_blas(const Tensor& a, const Tensor& b) {
  check(a.cols == b.rows, "matmul_blas: inner dimensions disagree");
  Tensor c(a.rows, b.cols);
  if (a.rows == 0 || b.cols == 0 || a.cols == 0) return c;
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, a.rows, b.cols, a.cols, 1.0,
              a.v.data(), a.cols, b.v.data(), b.cols, 0.0, c.v.data(), c.cols);
  return c;
}

Tensor transpose(const Tensor& a) {
  Tensor t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::fabs(a.v[i] - b.v[i]));
  return m;
}

double sum_all(const Tensor& a) {
  double s = 0.0;
  for (double x : a.v) s += x;
  return s;
}

}  // namespace bpgnn
