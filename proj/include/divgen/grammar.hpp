#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "divgen/derivation.hpp"

namespace divgen {

/// Grammar-as-program generator for arithmetic-expression strings:
///
///   expression -> operand operator operand
///   operand    -> number | '(' expression ')'
///   operator   -> '+' | '-' | '*' | '/'
///   number     -> ['-'] digit+
///
/// Every stochastic decision is routed through a DecisionFn. The four
/// model-controlled sites are enumerated in grammar-source order; digit
/// values are a fifth, model-free site (uniform over '0'..'9') so that a
/// recorded trace fully determines the output string.
class ExprGenerator {
 public:
  static constexpr int kOperandKind = 0;   // number | parenthesized subexpr
  static constexpr int kOperator = 1;      // + - * /
  static constexpr int kSignPresent = 2;   // leading '-' on a number
  static constexpr int kDigitContinue = 3; // emit another digit?
  static constexpr int kDigitValue = 4;    // model-free

  static const std::array<ChoicePointDecl, 4>& schema() {
    static const std::array<ChoicePointDecl, 4> s = {{
        {kOperandKind, ChoiceKind::RuleSelection, 2, true, false, "operand-kind"},
        {kOperator, ChoiceKind::RuleSelection, 4, false, false, "operator"},
        {kSignPresent, ChoiceKind::Boolean, 2, false, false, "sign-present"},
        {kDigitContinue, ChoiceKind::RepetitionContinue, 2, false, false,
         "digit-continue"},
    }};
    return s;
  }

  GeneratedDatum run(const DecisionFn& choose, const ResourceLimits& limits,
                     Rng& rng) const {
    if (limits.max_nesting_depth <= 0 || limits.max_output_length <= 0)
      throw std::invalid_argument("resource limits must be positive");
    State st{choose, limits, rng};
    GeneratedDatum datum;
    try {
      expression(st, 0);
      st.trace.complete = true;
      datum.output = std::move(st.out);
      datum.features = extract_features(*datum.output);
    } catch (const InfeasibleAbort&) {
      st.trace.complete = false;
    }
    datum.trace = std::move(st.trace);
    return datum;
  }

 private:
  struct InfeasibleAbort {};

  struct State {
    const DecisionFn& choose;
    const ResourceLimits& limits;
    Rng& rng;
    std::string out;
    DecisionTrace trace;
  };

  static int decide(State& st, int id, ChoiceKind kind, int alts, int depth,
                    bool model_free = false) {
    const ChoicePoint cp{id, kind, alts, depth, model_free};
    const int alt = st.choose(cp, st.rng);
    if (alt < 0 || alt >= alts)
      throw std::invalid_argument("decision out of range for choice point");
    st.trace.decisions.push_back({id, alt});
    return alt;
  }

  static void emit(State& st, char c) {
    if (static_cast<int>(st.out.size()) >= st.limits.max_output_length)
      throw InfeasibleAbort{};
    st.out.push_back(c);
  }

  static void expression(State& st, int depth) {
    operand(st, depth);
    const int op =
        decide(st, kOperator, ChoiceKind::RuleSelection, 4, depth);
    emit(st, "+-*/"[op]);
    operand(st, depth);
  }

  static void operand(State& st, int depth) {
    const int kind =
        decide(st, kOperandKind, ChoiceKind::RuleSelection, 2, depth);
    if (kind == 0) {
      number(st, depth);
    } else {
      if (depth + 1 > st.limits.max_nesting_depth) throw InfeasibleAbort{};
      emit(st, '(');
      expression(st, depth + 1);
      emit(st, ')');
    }
  }

  static void number(State& st, int depth) {
    if (decide(st, kSignPresent, ChoiceKind::Boolean, 2, depth) == 1)
      emit(st, '-');
    emit_digit(st, depth);
    while (decide(st, kDigitContinue, ChoiceKind::RepetitionContinue, 2,
                  depth) == 1)
      emit_digit(st, depth);
  }

  static void emit_digit(State& st, int depth) {
    const int d = decide(st, kDigitValue, ChoiceKind::RuleSelection, 10,
                         depth, /*model_free=*/true);
    emit(st, static_cast<char>('0' + d));
  }
};

inline ExprGenerator build_generator() { return ExprGenerator{}; }

}  // namespace divgen
