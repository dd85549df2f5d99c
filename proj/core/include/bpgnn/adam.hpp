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

#include <vector>

#include "bpgnn/autodiff.hpp"

namespace bpgnn {

struct AdamState {
  double lr = 5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Tensor> m;  // first moments, one per parameter
  std::vector<Tensor> v;  // second moments
};

AdamState make_adam_state(const std::vector<Var>& params, double lr);

// One Adam update with bias correction. Parameters with no accumulated
// gradient are treated as having zero gradient.
void adam_step(const std::vector<Var>& params, AdamState& state);

}  // namespace bpgnn
