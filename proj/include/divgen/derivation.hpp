#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "divgen/feature_space.hpp"
#include "divgen/rng.hpp"

namespace divgen {

enum class ChoiceKind { RuleSelection, Boolean, RepetitionContinue };

/// One decision site as seen during a derivation. `id` identifies the static
/// site in the generator (stable across runs); `depth` is the parenthesis
/// nesting depth at the moment of the decision, i.e. the number of unclosed
/// '(' in the partial output.
struct ChoicePoint {
  int id = 0;
  ChoiceKind kind = ChoiceKind::RuleSelection;
  int num_alternatives = 0;
  int depth = 0;
  bool model_free = false;  // decided uniformly, outside the choice model
};

/// Static declaration of a decision site, forming the generator's schema.
struct ChoicePointDecl {
  int id;
  ChoiceKind kind;
  int num_alternatives;
  bool depth_contextual;
  bool model_free;
  const char* name;
};

struct Decision {
  int choice_point;
  int alternative;
  bool operator==(const Decision&) const = default;
};

struct DecisionTrace {
  std::vector<Decision> decisions;
  bool complete = false;
};

// Defaults are deliberately far above the preference hypercube (lengths up
// to 50): infeasibility stands for runaway recursion, not merely long
// output. A balanced (critical) model then goes infeasible only rarely,
// while models biased towards recursion still blow up reliably.
struct ResourceLimits {
  int max_nesting_depth = 1000;
  int max_output_length = 200000;
};

/// One generation attempt: the output string and features when feasible,
/// otherwise just the (incomplete) decision trace.
struct GeneratedDatum {
  std::optional<std::string> output;
  DecisionTrace trace;
  std::optional<FeatureVector> features;

  bool feasible() const { return output.has_value(); }
};

/// Per-decision callback: returns the chosen alternative index for a site.
using DecisionFn = std::function<int(const ChoicePoint&, Rng&)>;

}  // namespace divgen
