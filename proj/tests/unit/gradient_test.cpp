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


// Finite-difference checks of the training objectives' gradients.

#include <gtest/gtest.h>

#include <random>

#include "training.hpp"

namespace kcpm {
namespace {

EventLog sample_log() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> act(0, 4), len(2, 5), ward(0, 1);
  std::vector<Trace> traces;
  for (int c = 0; c < 12; ++c) {
    Trace t;
    t.case_id = "c" + std::to_string(c);
    Instant ts = *parse_iso8601("2024-01-01T06:00:00Z") + std::chrono::hours(c);
    for (int i = 0, n = len(rng); i < n; ++i) {
      ts += std::chrono::minutes(13);
      t.events.push_back({t.case_id, std::string(1, static_cast<char>('a' + act(rng))), ts,
                          std::string(ward(rng) ? "r1" : "r2"), {{"ward", std::string(c % 2 ? "n" : "s")}}});
    }
    traces.push_back(std::move(t));
  }
  return EventLog(std::move(traces));
}

/// Largest mismatch between the analytic gradient and central differences
/// over `probes` random coordinates, relative to max(1, |g|).
double worst_gradient_error(const optim::Objective& f, std::vector<double> theta, int probes, std::uint64_t seed) {
  std::vector<double> grad(theta.size());
  f(theta, grad);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  double worst = 0;
  const double h = 1e-6;
  for (int n = 0; n < probes; ++n) {
    const std::size_t i = pick(rng);
    const double x = theta[i];
    theta[i] = x + h;
    const double up = f(theta, {});
    theta[i] = x - h;
    const double down = f(theta, {});
    theta[i] = x;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])));
  }
  return worst;
}

TEST(Gradient, TemporalScorer) {
  ScorerParams p;
  p.dimension = 6;
  p.time_buckets = 4;
  p.negatives = 3;
  auto pr = detail::scorer_problem(sample_log(), {}, p);
  EXPECT_LT(worst_gradient_error(pr.objective, pr.theta, 200, 1), 1e-5);
  // Also away from the initial point.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> jitter(0, 0.3);
  for (auto& v : pr.theta) v += jitter(rng);
  EXPECT_LT(worst_gradient_error(pr.objective, pr.theta, 200, 3), 1e-5);
}

TEST(Gradient, VariantModel) {
  EventLog log = sample_log();
  LpgOptions opt;
  opt.attribute_nodes = {"ward"};
  LabeledPropertyGraph g = build_lpg(log, {}, opt);
  CaseLabels labels;
  for (const auto& t : log.traces()) labels[t.case_id] = t.case_id.size() % 2 ? "odd" : "even";
  labels["c0"] = "zero";
  VariantParams p;
  p.dimension = 5;
  p.negatives = 2;
  auto pr = detail::variant_problem(g, labels, p, {});
  ASSERT_EQ(pr.blocks[6], pr.theta.size());
  EXPECT_LT(worst_gradient_error(pr.objective, pr.theta, 300, 4), 1e-5);

  // Probe each block at least once.
  std::vector<double> grad(pr.theta.size());
  pr.objective(pr.theta, grad);
  for (std::size_t b = 0; b + 1 < pr.blocks.size(); ++b) {
    const std::size_t i = pr.blocks[b];
    const double h = 1e-6, x = pr.theta[i];
    pr.theta[i] = x + h;
    const double up = pr.objective(pr.theta, {});
    pr.theta[i] = x - h;
    const double down = pr.objective(pr.theta, {});
    pr.theta[i] = x;
    EXPECT_NEAR((up - down) / (2 * h), grad[i], 1e-5 * std::max(1.0, std::abs(grad[i]))) << "block " << b;
  }
}

TEST(Gradient, OptimizerHistoryNonincreasing) {
  ScorerParams p;
  p.dimension = 4;
  auto pr = detail::scorer_problem(sample_log(), {}, p);
  optim::Settings s;
  s.epochs = 60;
  s.learning_rate = 0.5;  // aggressive on purpose; backtracking must hold the line
  auto history = optim::minimize(pr.theta, pr.objective, s);
  ASSERT_EQ(history.size(), 60u);
  for (std::size_t i = 1; i < history.size(); ++i) EXPECT_LE(history[i], history[i - 1]);
}

}  // namespace
}  // namespace kcpm
