#pragma once

#include <memory>
#include <span>
#include <stdexcept>

#include "divgen/choice_model.hpp"
#include "divgen/derivation.hpp"
#include "divgen/grammar.hpp"

namespace divgen {

/// Policy that delegates every model-controlled decision to `params` and
/// draws digit values uniformly.
inline DecisionFn model_policy(ChoiceModelParams params) {
  params.check();
  return [params = std::move(params)](const ChoicePoint& cp, Rng& rng) -> int {
    if (cp.model_free) return static_cast<int>(rng.uniform_below(10));
    return decide(params, cp, rng);
  };
}

/// Policy that replays a recorded trace verbatim. Only valid for traces that
/// cover the whole derivation (complete traces replayed on the same
/// generator).
inline DecisionFn replay_policy(const DecisionTrace& trace) {
  auto next = std::make_shared<std::size_t>(0);
  return [&trace, next](const ChoicePoint& cp, Rng&) -> int {
    if (*next >= trace.decisions.size())
      throw std::logic_error("replay: trace exhausted before derivation ended");
    const Decision& d = trace.decisions[(*next)++];
    if (d.choice_point != cp.id)
      throw std::logic_error("replay: trace does not match generator structure");
    return d.alternative;
  };
}

/// Policy that replays a decision prefix and then delegates to a base choice
/// model (digit values uniform). Used for search-time rollouts.
inline DecisionFn prefix_policy(std::vector<Decision> prefix,
                                ChoiceModelParams base) {
  base.check();
  auto next = std::make_shared<std::size_t>(0);
  return [prefix = std::move(prefix), base = std::move(base),
          next](const ChoicePoint& cp, Rng& rng) -> int {
    if (*next < prefix.size()) {
      const Decision& d = prefix[(*next)++];
      if (d.choice_point != cp.id)
        throw std::logic_error("prefix replay does not match generator structure");
      return d.alternative;
    }
    if (cp.model_free) return static_cast<int>(rng.uniform_below(10));
    return decide(base, cp, rng);
  };
}

/// Runs one generation with all decisions delegated to the choice model.
/// Identical (model, limits, seed) yields identical output.
inline GeneratedDatum generate(const ExprGenerator& gen,
                               const ChoiceModelParams& model,
                               const ResourceLimits& limits, Rng& rng) {
  model.check();
  return gen.run(model_policy(model), limits, rng);
}

inline GeneratedDatum generate_with_policy(const ExprGenerator& gen,
                                           const DecisionFn& policy,
                                           const ResourceLimits& limits,
                                           Rng& rng) {
  return gen.run(policy, limits, rng);
}

/// Re-derives the output string of a complete trace. No randomness is
/// consumed: digit values are part of the trace.
inline GeneratedDatum replay(const ExprGenerator& gen,
                             const DecisionTrace& trace,
                             const ResourceLimits& limits) {
  if (!trace.complete)
    throw std::invalid_argument("replay requires a complete trace");
  Rng unused(0);
  return gen.run(replay_policy(trace), limits, unused);
}

}  // namespace divgen
