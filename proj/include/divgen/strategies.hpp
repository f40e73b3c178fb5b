#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "divgen/engine.hpp"
#include "divgen/feature_space.hpp"
#include "divgen/stats.hpp"

namespace divgen {

enum class Method {
  RandOnce,
  RandFreq,
  RandMFreq,
  RandMFreqLhs,
  NmcsDirect,
  NmcsBatch,
  HillClimb,
};

struct StrategyConfig {
  Method method = Method::RandOnce;
  ModelKind model = ModelKind::Default;
  int resample_period = 1;  // N for the freq/mfreq families
  int lhs_bins = 10;        // B
  int nmcs_samples = 2;     // S
  int hc_min = 4;
  int hc_max = 20;
  double sigma = 0.05;
  long budget = 10000;
  std::uint64_t seed = 0;

  void check() const {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (resample_period < 1) throw std::invalid_argument("N must be >= 1");
    if (lhs_bins < 1) throw std::invalid_argument("LHS bins must be >= 1");
    if (nmcs_samples < 1) throw std::invalid_argument("NMCS sample size must be >= 1");
    if (hc_min < 1 || hc_min > hc_max)
      throw std::invalid_argument("hill-climb bounds must satisfy 1 <= MIN <= MAX");
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be > 0");
  }
};

enum class SampleStatus { Preferred, Outside, Infeasible };

inline const char* to_string(SampleStatus s) {
  switch (s) {
    case SampleStatus::Preferred: return "PREFERRED";
    case SampleStatus::Outside: return "OUTSIDE";
    default: return "INFEASIBLE";
  }
}

struct SampleRecord {
  long attempt = 0;  // 1-based attempt index
  SampleStatus status = SampleStatus::Infeasible;
  FeatureVector features;  // meaningless for INFEASIBLE entries
  double fshc_so_far = 0.0;
  double elapsed_s = 0.0;
};

/// Outcome of one strategy run over a fixed generation budget.
struct RunResult {
  DensityArchive archive;
  double fshc = 0.0;
  double wall_time_s = 0.0;
  long preferred_count = 0;
  long outside_count = 0;
  long infeasible_count = 0;
  double preferred_ratio = 0.0;  // percent of all attempts
  long param_draws = 0;
  std::vector<SampleRecord> sample_log;
  std::vector<long> final_attempt_indices;  // NMCS emitted data (attempt idx)

  explicit RunResult(const PreferenceHypercube& cube) : archive(cube) {}

  long attempts() const {
    return preferred_count + outside_count + infeasible_count;
  }
  double infeasible_pct() const {
    const long n = attempts();
    return n == 0 ? 0.0 : 100.0 * infeasible_count / n;
  }
};

namespace strategy_detail {

using Clock = std::chrono::steady_clock;

struct RunContext {
  const ExprGenerator& gen;
  ResourceLimits limits;
  PreferenceHypercube cube;
  RunResult result;
  Rng rng;
  long budget;
  Clock::time_point t0;

  // batch-mode density freeze (NMCS)
  bool frozen = false;
  std::vector<FeatureVector> pending;

  RunContext(const ExprGenerator& g, const PreferenceHypercube& c,
             const ResourceLimits& l, long b, std::uint64_t seed)
      : gen(g), limits(l), cube(c), result(c), rng(seed), budget(b),
        t0(Clock::now()) {}

  bool budget_left() const { return result.attempts() < budget; }

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  SampleStatus register_attempt(const GeneratedDatum& d) {
    SampleStatus st;
    FeatureVector fv;
    if (!d.feasible()) {
      st = SampleStatus::Infeasible;
      ++result.infeasible_count;
    } else {
      fv = *d.features;
      if (classify(fv, cube) == Region::Preferred) {
        st = SampleStatus::Preferred;
        ++result.preferred_count;
        if (frozen)
          pending.push_back(fv);
        else
          result.archive.record(fv);
      } else {
        st = SampleStatus::Outside;
        ++result.outside_count;
      }
    }
    result.sample_log.push_back({result.attempts(), st, fv,
                                 result.archive.fshc(), elapsed()});
    return st;
  }

  void flush_pending() {
    for (const FeatureVector& fv : pending) result.archive.record(fv);
    pending.clear();
    frozen = false;
  }

  RunResult finish() {
    result.wall_time_s = elapsed();
    result.fshc = result.archive.fshc();
    const long n = result.attempts();
    result.preferred_ratio =
        n == 0 ? 0.0 : 100.0 * result.preferred_count / n;
    return std::move(result);
  }
};

// ---- random (re)sampling family -------------------------------------------

inline void run_rand_once(RunContext& ctx, const StrategyConfig& cfg) {
  const ChoiceModelParams params = sample_uniform(cfg.model, ctx.rng);
  ++ctx.result.param_draws;
  while (ctx.budget_left())
    ctx.register_attempt(generate(ctx.gen, params, ctx.limits, ctx.rng));
}

inline void run_rand_freq(RunContext& ctx, const StrategyConfig& cfg) {
  ChoiceModelParams params;
  long since = cfg.resample_period;  // force a draw on the first attempt
  while (ctx.budget_left()) {
    if (since >= cfg.resample_period) {
      params = sample_uniform(cfg.model, ctx.rng);
      ++ctx.result.param_draws;
      since = 0;
    }
    ctx.register_attempt(generate(ctx.gen, params, ctx.limits, ctx.rng));
    ++since;
  }
}

// mfreq: resample after N attempts or immediately after an infeasible one.
// When drawing from an LHS batch, vectors are consumed sequentially and a
// fresh batch is generated once exhausted.
inline void run_rand_mfreq(RunContext& ctx, const StrategyConfig& cfg,
                           bool use_lhs) {
  ChoiceModelParams params;
  std::vector<ChoiceModelParams> batch;
  std::size_t cursor = 0;
  bool need_params = true;
  long since = 0;
  while (ctx.budget_left()) {
    if (need_params) {
      if (use_lhs) {
        if (cursor >= batch.size()) {
          batch = lhs_batch(cfg.model, cfg.lhs_bins, ctx.rng);
          cursor = 0;
        }
        params = batch[cursor++];
      } else {
        params = sample_uniform(cfg.model, ctx.rng);
      }
      ++ctx.result.param_draws;
      need_params = false;
      since = 0;
    }
    const SampleStatus st =
        ctx.register_attempt(generate(ctx.gen, params, ctx.limits, ctx.rng));
    ++since;
    if (st == SampleStatus::Infeasible || since >= cfg.resample_period)
      need_params = true;
  }
}

// ---- Nested Monte-Carlo Search --------------------------------------------

// Fitness ordering for rollout outcomes: INFEASIBLE < OUTSIDE < PREFERRED
// with high cell count < PREFERRED with low cell count (most novel).
inline double rollout_score(const RunContext& ctx, const GeneratedDatum& d) {
  if (!d.feasible()) return -2.0;
  const FeatureVector fv = *d.features;
  if (classify(fv, ctx.cube) != Region::Preferred) return -1.0;
  // direct mode sees a live archive, batch mode a frozen one
  return 1.0e12 - static_cast<double>(ctx.result.archive.count(fv));
}

inline void run_nmcs(RunContext& ctx, const StrategyConfig& cfg,
                     bool batch_mode) {
  const ChoiceModelParams base = midpoint_params(ModelKind::Default);
  const int s_count = cfg.nmcs_samples;

  while (ctx.budget_left()) {
    // one top-level datum
    std::vector<Decision> prefix;
    if (batch_mode) ctx.frozen = true;
    while (true) {
      if (!ctx.budget_left()) break;  // partial construction discarded
      struct Rollout {
        GeneratedDatum datum;
        double score;
        long attempt;
      };
      std::vector<Rollout> rollouts;
      rollouts.reserve(s_count);
      for (int s = 0; s < s_count && ctx.budget_left(); ++s) {
        GeneratedDatum d = generate_with_policy(
            ctx.gen, prefix_policy(prefix, base), ctx.limits, ctx.rng);
        const double score = rollout_score(ctx, d);  // novelty before recording
        ctx.register_attempt(d);
        rollouts.push_back({std::move(d), score, ctx.result.attempts()});
      }
      if (rollouts.empty()) break;

      double best = rollouts[0].score;
      for (const Rollout& r : rollouts) best = std::max(best, r.score);
      std::vector<std::size_t> best_idx;
      for (std::size_t i = 0; i < rollouts.size(); ++i)
        if (rollouts[i].score == best) best_idx.push_back(i);
      const Rollout& chosen =
          rollouts[best_idx[ctx.rng.uniform_below(
              static_cast<std::uint32_t>(best_idx.size()))]];

      // A candidate whose simulation came out non-preferred deselects its
      // whole subtree; when every candidate is deselected the construction
      // leads nowhere and is abandoned. With a single candidate there is no
      // selection step: a feasible rollout's decision is committed as-is and
      // a runaway rollout is merely retried, so commits only ever follow
      // prefixes with a witnessed feasible completion (the emitted datum is
      // then distributed as the base model conditioned on feasibility).
      if (s_count >= 2 && chosen.score < 0.0) break;
      if (!chosen.datum.feasible()) continue;

      // commit through the chosen rollout's next model-controlled decision;
      // digit-value sites in between are committed as drawn
      const auto& decs = chosen.datum.trace.decisions;
      std::size_t q = prefix.size();
      while (q < decs.size() &&
             decs[q].choice_point == ExprGenerator::kDigitValue)
        ++q;
      if (q >= decs.size()) {
        // derivation fully committed: the chosen rollout is the emitted datum
        ctx.result.final_attempt_indices.push_back(chosen.attempt);
        break;
      }
      prefix.assign(decs.begin(), decs.begin() + q + 1);
    }
    if (batch_mode) ctx.flush_pending();
  }
}

// ---- hill climbing ---------------------------------------------------------

// After this many consecutive rejected (or aborted) candidates the climber
// redraws its current point uniformly: neighbourhoods where nearly every
// candidate trips the viability thresholds would otherwise trap the search
// for the rest of the run.
inline constexpr int kHillClimbRestartStreak = 20;

inline void run_hillclimb(RunContext& ctx, const StrategyConfig& cfg) {
  ChoiceModelParams current;
  std::vector<FeatureVector> ref_batch;

  // initial (and restart) point: resample until the first MIN-sized batch
  // holds at least one preferred datum
  const auto draw_point = [&] {
    while (ctx.budget_left()) {
      current = sample_uniform(cfg.model, ctx.rng);
      ++ctx.result.param_draws;
      ref_batch.clear();
      for (int i = 0; i < cfg.hc_min && ctx.budget_left(); ++i) {
        GeneratedDatum d = generate(ctx.gen, current, ctx.limits, ctx.rng);
        if (ctx.register_attempt(d) == SampleStatus::Preferred)
          ref_batch.push_back(*d.features);
      }
      if (!ref_batch.empty()) break;
    }
  };
  draw_point();

  int rejection_streak = 0;
  while (ctx.budget_left()) {
    if (rejection_streak >= kHillClimbRestartStreak) {
      rejection_streak = 0;
      draw_point();
      continue;
    }
    const ChoiceModelParams cand = perturb_gaussian(current, cfg.sigma, ctx.rng);
    ++ctx.result.param_draws;
    std::vector<FeatureVector> cand_pref;
    std::vector<double> arrival;  // cell count each datum found on arrival
    int n = 0, infeasible = 0, outside = 0;
    bool aborted = false, truncated = false;
    while (n < cfg.hc_max) {
      if (!ctx.budget_left()) {
        truncated = true;
        break;
      }
      GeneratedDatum d = generate(ctx.gen, cand, ctx.limits, ctx.rng);
      std::optional<double> pre;
      if (d.feasible() && classify(*d.features, ctx.cube) == Region::Preferred)
        pre = static_cast<double>(ctx.result.archive.count(*d.features));
      const SampleStatus st = ctx.register_attempt(d);
      ++n;
      if (st == SampleStatus::Infeasible)
        ++infeasible;
      else if (st == SampleStatus::Outside)
        ++outside;
      else {
        cand_pref.push_back(*d.features);
        arrival.push_back(*pre);
      }
      if (n >= cfg.hc_min) {
        const int feasible = n - infeasible;
        if (3 * infeasible > n || 2 * outside > feasible) {
          aborted = true;  // early rejection
          break;
        }
      }
    }
    if (truncated) break;
    if (aborted || cand_pref.empty()) {
      ++rejection_streak;
      continue;
    }

    // candidate data are scored by the density they met on arrival; the
    // reference batch is re-read from the archive at comparison time
    std::vector<double> b;
    b.reserve(ref_batch.size());
    for (const FeatureVector& fv : ref_batch)
      b.push_back(static_cast<double>(ctx.result.archive.count(fv)));
    const UTestResult t = mann_whitney(arrival, b, Alternative::Less);
    if (t.p_value < 0.20) {
      rejection_streak = 0;
      current = cand;
      ref_batch = std::move(cand_pref);
    } else {
      ++rejection_streak;
    }
  }
}

}  // namespace strategy_detail

/// Runs one strategy to budget exhaustion. Identical (config, cube, limits)
/// give identical sample logs; only wall-clock fields vary.
inline RunResult run_strategy(const StrategyConfig& cfg,
                              const PreferenceHypercube& cube,
                              const ResourceLimits& limits = {}) {
  cfg.check();
  cube.check();
  static const ExprGenerator gen = build_generator();
  strategy_detail::RunContext ctx(gen, cube, limits, cfg.budget, cfg.seed);
  switch (cfg.method) {
    case Method::RandOnce: strategy_detail::run_rand_once(ctx, cfg); break;
    case Method::RandFreq: strategy_detail::run_rand_freq(ctx, cfg); break;
    case Method::RandMFreq: strategy_detail::run_rand_mfreq(ctx, cfg, false); break;
    case Method::RandMFreqLhs: strategy_detail::run_rand_mfreq(ctx, cfg, true); break;
    case Method::NmcsDirect: strategy_detail::run_nmcs(ctx, cfg, false); break;
    case Method::NmcsBatch: strategy_detail::run_nmcs(ctx, cfg, true); break;
    case Method::HillClimb: strategy_detail::run_hillclimb(ctx, cfg); break;
  }
  return ctx.finish();
}

}  // namespace divgen
