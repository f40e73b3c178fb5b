#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "divgen/engine.hpp"

using namespace divgen;

TEST_CASE("parameter vector lengths match the model kind") {
  Rng rng(1);
  CHECK(sample_uniform(ModelKind::Default, rng).values.size() == 8);
  CHECK(sample_uniform(ModelKind::RecDepth5, rng).values.size() == 16);
}

TEST_CASE("degenerate categorical weights are deterministic") {
  auto p = midpoint_params(ModelKind::Default);
  p.values[0] = 1.0;
  p.values[1] = 0.0;
  Rng rng(2);
  const ChoicePoint cp{ExprGenerator::kOperandKind,
                       ChoiceKind::RuleSelection, 2, 0, false};
  for (int i = 0; i < 200; ++i) CHECK(decide(p, cp, rng) == 0);
}

TEST_CASE("equal operator weights are empirically uniform") {
  auto p = midpoint_params(ModelKind::Default);
  for (int i = 2; i <= 5; ++i) p.values[i] = 1.0;
  Rng rng(3);
  const ChoicePoint cp{ExprGenerator::kOperator, ChoiceKind::RuleSelection,
                       4, 0, false};
  const int n = 100000;
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) ++counts[decide(p, cp, rng)];
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(counts[k] / static_cast<double>(n) - 0.25) < 3 * sigma);
}

TEST_CASE("unknown choice point is a configuration error") {
  const auto p = midpoint_params(ModelKind::Default);
  Rng rng(4);
  const ChoicePoint bogus{17, ChoiceKind::RuleSelection, 2, 0, false};
  CHECK_THROWS_AS(decide(p, bogus, rng), std::invalid_argument);
}

TEST_CASE("depth-bucketed operand weights yield exactly nesting depth 1") {
  ChoiceModelParams p = midpoint_params(ModelKind::RecDepth5);
  p.values[0] = 0.0;  // bucket 0: always parenthesize
  p.values[1] = 1.0;
  p.values[2] = 1.0;  // bucket 1: always a number
  p.values[3] = 0.0;
  for (int b = 2; b <= 4; ++b) {
    p.values[2 * b] = 1.0;
    p.values[2 * b + 1] = 0.0;
  }
  p.values[15] = 0.0;  // single digits keep strings short
  Rng rng(5);
  const ExprGenerator gen = build_generator();
  for (int i = 0; i < 100; ++i) {
    const auto d = generate(gen, p, {}, rng);
    REQUIRE(d.feasible());
    int depth = 0, max_depth = 0;
    for (char c : *d.output) {
      if (c == '(') max_depth = std::max(max_depth, ++depth);
      if (c == ')') --depth;
    }
    CHECK(max_depth == 1);
  }
}

TEST_CASE("uniform sampling has the right component means") {
  Rng rng(6);
  const int n = 10000;
  std::vector<double> sums(8, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto p = sample_uniform(ModelKind::Default, rng);
    for (int k = 0; k < 8; ++k) sums[k] += p.values[k];
  }
  for (double s : sums) CHECK(std::abs(s / n - 0.5) < 0.02);
}

TEST_CASE("gaussian perturbation clamps and preserves kind") {
  Rng rng(7);
  ChoiceModelParams p{ModelKind::RecDepth5, std::vector<double>(16, 1.0)};
  for (int i = 0; i < 1000; ++i) {
    const auto q = perturb_gaussian(p, 0.05, rng);
    CHECK(q.kind == ModelKind::RecDepth5);
    for (double v : q.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK_THROWS_AS(perturb_gaussian(p, 0.0, rng), std::invalid_argument);
}

TEST_CASE("perturbation noise has the configured spread") {
  Rng rng(8);
  const auto center = midpoint_params(ModelKind::Default);
  const int n = 10000;
  std::vector<double> sum(8, 0.0), sumsq(8, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto q = perturb_gaussian(center, 0.05, rng);
    for (int k = 0; k < 8; ++k) {
      sum[k] += q.values[k];
      sumsq[k] += q.values[k] * q.values[k];
    }
  }
  for (int k = 0; k < 8; ++k) {
    const double mean = sum[k] / n;
    const double sd = std::sqrt((sumsq[k] - n * mean * mean) / (n - 1));
    CHECK(sd > 0.045);
    CHECK(sd < 0.055);
  }
}

TEST_CASE("tiny sigma leaves the vector essentially unchanged") {
  Rng rng(9);
  const auto center = midpoint_params(ModelKind::Default);
  const auto q = perturb_gaussian(center, 1e-12, rng);
  for (int k = 0; k < 8; ++k)
    CHECK(std::abs(q.values[k] - 0.5) < 1e-9);
}

TEST_CASE("latin hypercube batches are stratified per dimension") {
  Rng rng(10);
  for (int bins : {1, 10, 30}) {
    const auto batch = lhs_batch(ModelKind::Default, bins, rng);
    REQUIRE(batch.size() == static_cast<std::size_t>(bins));
    for (int d = 0; d < 8; ++d) {
      std::vector<int> hit(bins, 0);
      for (const auto& p : batch) {
        const double v = p.values[d];
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        ++hit[static_cast<int>(v * bins)];
      }
      for (int b = 0; b < bins; ++b) CHECK(hit[b] == 1);
    }
  }
  CHECK_THROWS_AS(lhs_batch(ModelKind::Default, 0, rng), std::invalid_argument);
}

TEST_CASE("aligned RecDepth5 parameters reproduce the Default model exactly") {
  Rng seed_rng(11);
  const auto def = sample_uniform(ModelKind::Default, seed_rng);
  ChoiceModelParams rec{ModelKind::RecDepth5, std::vector<double>(16, 0.0)};
  for (int b = 0; b <= 4; ++b) {
    rec.values[2 * b] = def.values[0];
    rec.values[2 * b + 1] = def.values[1];
  }
  for (int i = 0; i < 4; ++i) rec.values[10 + i] = def.values[2 + i];
  rec.values[14] = def.values[6];
  rec.values[15] = def.values[7];

  const ExprGenerator gen = build_generator();
  Rng a(12345), b(12345);
  for (int i = 0; i < 500; ++i) {
    const auto da = generate(gen, def, {}, a);
    const auto db = generate(gen, rec, {}, b);
    REQUIRE(da.trace.decisions == db.trace.decisions);
    REQUIRE(da.output == db.output);
  }
}
