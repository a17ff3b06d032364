// Copyright 2026 The kcpm Authors
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

// Full-batch Adam with a backtracking guard. Internal to the library.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace kcpm::optim {

/// Returns the loss at `params`; writes the gradient when `grad` is non-empty.
using Objective = std::function<double(std::span<const double> params, std::span<double> grad)>;

struct Settings {
  double learning_rate = 0.05;
  int epochs = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_backtracks = 30;
};

/// Every accepted step does not increase the loss, so the returned per-epoch
/// history is nonincreasing. A step that fails all backtracks is skipped.
inline std::vector<double> minimize(std::vector<double>& params, const Objective& f, const Settings& s) {
  const std::size_t n = params.size();
  std::vector<double> grad(n), m(n, 0.0), v(n, 0.0), trial(n), dir(n);
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(s.epochs));
  double scale = 1.0;
  double b1t = 1.0, b2t = 1.0;
  for (int epoch = 0; epoch < s.epochs; ++epoch) {
    const double loss = f(params, grad);
    b1t *= s.beta1;
    b2t *= s.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = s.beta1 * m[i] + (1 - s.beta1) * grad[i];
      v[i] = s.beta2 * v[i] + (1 - s.beta2) * grad[i] * grad[i];
      const double mh = m[i] / (1 - b1t), vh = v[i] / (1 - b2t);
      dir[i] = -mh / (std::sqrt(vh) + s.epsilon);
    }
    double accepted = loss;
    for (int k = 0; k <= s.max_backtracks; ++k) {
      const double step = s.learning_rate * scale;
      for (std::size_t i = 0; i < n; ++i) trial[i] = params[i] + step * dir[i];
      const double l = f(trial, {});
      if (std::isfinite(l) && l <= loss) {
        params.swap(trial);
        accepted = l;
        if (k == 0) scale = std::min(1.0, scale * 1.25);
        break;
      }
      scale *= 0.5;
    }
    history.push_back(accepted);
  }
  return history;
}

}  // namespace kcpm::optim
