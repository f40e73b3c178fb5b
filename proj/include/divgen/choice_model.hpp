#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "divgen/derivation.hpp"
#include "divgen/grammar.hpp"
#include "divgen/rng.hpp"

namespace divgen {

enum class ModelKind { Default, RecDepth5 };

inline int param_count(ModelKind kind) {
  return kind == ModelKind::Default ? 8 : 16;
}

/// Flat probability vector parameterizing a stochastic choice model.
///
/// Default layout (8): [0..1] operand-kind weights (number, subexpr),
/// [2..5] operator weights, [6] sign probability, [7] digit-continue
/// probability.
///
/// RecDepth5 layout (16): [0..9] operand-kind weight pairs per depth bucket
/// b = min(depth, 4) at (2b, 2b+1), [10..13] operator weights, [14] sign
/// probability, [15] digit-continue probability.
struct ChoiceModelParams {
  ModelKind kind = ModelKind::Default;
  std::vector<double> values;

  void check() const {
    if (static_cast<int>(values.size()) != param_count(kind))
      throw std::invalid_argument("parameter vector length does not match model kind");
    for (double v : values)
      if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("parameter outside [0,1]");
  }
};

namespace detail {

// One uniform draw per decision regardless of model kind, so that aligned
// Default/RecDepth5 parameter vectors produce identical decision sequences.
inline int sample_categorical(const double* w, int k, Rng& rng) {
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += w[i];
  const double u = rng.uniform01();
  if (sum <= 0.0) {
    const int i = static_cast<int>(u * k);
    return i >= k ? k - 1 : i;
  }
  double acc = 0.0;
  for (int i = 0; i < k - 1; ++i) {
    acc += w[i] / sum;
    if (u < acc) return i;
  }
  return k - 1;
}

inline int sample_boolean(double p, Rng& rng) {
  return rng.uniform01() < p ? 1 : 0;
}

}  // namespace detail

/// Samples a decision for a model-controlled choice point.
inline int decide(const ChoiceModelParams& params, const ChoicePoint& cp,
                  Rng& rng) {
  const bool rec = params.kind == ModelKind::RecDepth5;
  switch (cp.id) {
    case ExprGenerator::kOperandKind: {
      const int off = rec ? 2 * std::min(cp.depth, 4) : 0;
      return detail::sample_categorical(params.values.data() + off, 2, rng);
    }
    case ExprGenerator::kOperator:
      return detail::sample_categorical(params.values.data() + (rec ? 10 : 2),
                                        4, rng);
    case ExprGenerator::kSignPresent:
      return detail::sample_boolean(params.values[rec ? 14 : 6], rng);
    case ExprGenerator::kDigitContinue:
      return detail::sample_boolean(params.values[rec ? 15 : 7], rng);
    default:
      throw std::invalid_argument("decide(): unknown choice point");
  }
}

inline ChoiceModelParams sample_uniform(ModelKind kind, Rng& rng) {
  ChoiceModelParams p{kind, {}};
  p.values.resize(param_count(kind));
  for (double& v : p.values) v = rng.uniform01();
  return p;
}

inline ChoiceModelParams midpoint_params(ModelKind kind) {
  return {kind, std::vector<double>(param_count(kind), 0.5)};
}

/// Independent Gaussian noise per component, clamped back into [0,1].
inline ChoiceModelParams perturb_gaussian(const ChoiceModelParams& params,
                                          double sigma, Rng& rng) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be > 0");
  ChoiceModelParams out = params;
  for (double& v : out.values)
    v = std::clamp(v + rng.gaussian(0.0, sigma), 0.0, 1.0);
  return out;
}

/// Latin Hypercube batch: for each dimension the returned vectors hit each of
/// the `bins` equal-width subintervals of [0,1] exactly once, in a random
/// permutation per dimension.
inline std::vector<ChoiceModelParams> lhs_batch(ModelKind kind, int bins,
                                                Rng& rng) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  const int dims = param_count(kind);
  std::vector<ChoiceModelParams> batch(
      bins, ChoiceModelParams{kind, std::vector<double>(dims, 0.0)});
  std::vector<int> perm(bins);
  for (int d = 0; d < dims; ++d) {
    for (int i = 0; i < bins; ++i) perm[i] = i;
    for (int i = bins - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_below(i + 1)]);
    for (int i = 0; i < bins; ++i)
      batch[i].values[d] = (perm[i] + rng.uniform01()) / bins;
  }
  return batch;
}

}  // namespace divgen
