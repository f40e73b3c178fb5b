#pragma once

#include <atomic>
#include <cctype>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "divgen/stats.hpp"
#include "divgen/strategies.hpp"

namespace divgen {

inline constexpr const char* kToolVersion = "0.1.0";

// ---- method names ----------------------------------------------------------

inline std::string method_name(const StrategyConfig& cfg) {
  switch (cfg.method) {
    case Method::RandOnce: return "rand-once";
    case Method::RandFreq: return "rand-freq" + std::to_string(cfg.resample_period);
    case Method::RandMFreq: return "rand-mfreq" + std::to_string(cfg.resample_period);
    case Method::RandMFreqLhs:
      return "rand-mfreq" + std::to_string(cfg.resample_period) + "-LHS" +
             std::to_string(cfg.lhs_bins);
    case Method::NmcsDirect:
      return "nmcs-" + std::to_string(cfg.nmcs_samples) + "-direct";
    case Method::NmcsBatch:
      return "nmcs-" + std::to_string(cfg.nmcs_samples) + "-batch";
    case Method::HillClimb:
      return "hillclimb-" + std::to_string(cfg.hc_min) + "-" +
             std::to_string(cfg.hc_max);
  }
  return "?";
}

inline std::string model_name(ModelKind k) {
  return k == ModelKind::Default ? "Default" : "RecDepth5";
}

inline ModelKind parse_model(const std::string& s) {
  if (s == "Default") return ModelKind::Default;
  if (s == "RecDepth5") return ModelKind::RecDepth5;
  throw std::invalid_argument("unknown choice model: " + s);
}

/// Parses a method name like "rand-mfreq10-LHS30" or "nmcs-4-direct" into a
/// StrategyConfig (model/budget/seed left at defaults).
inline StrategyConfig parse_method(const std::string& name) {
  StrategyConfig cfg;
  auto number_after = [&](std::size_t pos, std::size_t* end) -> int {
    std::size_t i = pos;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i])))
      ++i;
    if (i == pos) throw std::invalid_argument("bad method name: " + name);
    if (end) *end = i;
    return std::stoi(name.substr(pos, i - pos));
  };

  if (name == "rand-once") {
    cfg.method = Method::RandOnce;
  } else if (name.starts_with("rand-mfreq")) {
    std::size_t end = 0;
    cfg.resample_period = number_after(10, &end);
    if (end == name.size()) {
      cfg.method = Method::RandMFreq;
    } else if (name.compare(end, 4, "-LHS") == 0) {
      cfg.method = Method::RandMFreqLhs;
      std::size_t e2 = 0;
      cfg.lhs_bins = number_after(end + 4, &e2);
      if (e2 != name.size()) throw std::invalid_argument("bad method name: " + name);
    } else {
      throw std::invalid_argument("bad method name: " + name);
    }
  } else if (name.starts_with("rand-freq")) {
    std::size_t end = 0;
    cfg.resample_period = number_after(9, &end);
    if (end != name.size()) throw std::invalid_argument("bad method name: " + name);
    cfg.method = Method::RandFreq;
  } else if (name.starts_with("nmcs-")) {
    std::size_t end = 0;
    cfg.nmcs_samples = number_after(5, &end);
    const std::string tail = name.substr(end);
    if (tail == "-direct")
      cfg.method = Method::NmcsDirect;
    else if (tail == "-batch")
      cfg.method = Method::NmcsBatch;
    else
      throw std::invalid_argument("bad method name: " + name);
  } else if (name.starts_with("hillclimb-")) {
    std::size_t end = 0;
    cfg.hc_min = number_after(10, &end);
    if (end >= name.size() || name[end] != '-')
      throw std::invalid_argument("bad method name: " + name);
    std::size_t e2 = 0;
    cfg.hc_max = number_after(end + 1, &e2);
    if (e2 != name.size()) throw std::invalid_argument("bad method name: " + name);
    cfg.method = Method::HillClimb;
  } else {
    throw std::invalid_argument("unknown method: " + name);
  }
  return cfg;
}

// ---- experiment configuration ---------------------------------------------

struct ExperimentConfig {
  std::vector<StrategyConfig> methods;  // budget/seed filled per run
  PreferenceHypercube cube;
  int repetitions = 10;
  std::uint64_t master_seed = 0;
  long budget = 10000;
  std::string output_directory = "out";

  void check() const {
    if (methods.empty()) throw std::invalid_argument("no methods configured");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    cube.check();
  }
};

namespace experiment_detail {

inline void require_keys(const nlohmann::json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw std::invalid_argument(std::string("unknown key '") + key +
                                  "' in " + where);
  }
}

}  // namespace experiment_detail

/// Parses the JSON experiment configuration. Unknown keys are errors.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  experiment_detail::require_keys(
      j,
      {"budget", "repetitions", "master_seed", "output_directory", "cube",
       "methods"},
      "config");
  ExperimentConfig cfg;
  if (j.contains("budget")) cfg.budget = j.at("budget").get<long>();
  if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<int>();
  if (j.contains("master_seed"))
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("output_directory"))
    cfg.output_directory = j.at("output_directory").get<std::string>();
  if (j.contains("cube")) {
    const auto& c = j.at("cube");
    experiment_detail::require_keys(c, {"length", "digits"}, "cube");
    const auto len = c.at("length").get<std::vector<int>>();
    const auto dig = c.at("digits").get<std::vector<int>>();
    if (len.size() != 2 || dig.size() != 2)
      throw std::invalid_argument("cube ranges must be [lo, hi] pairs");
    cfg.cube = {len[0], len[1], dig[0], dig[1]};
  }
  for (const auto& m : j.at("methods")) {
    experiment_detail::require_keys(m, {"method", "model", "sigma"}, "method");
    StrategyConfig sc = parse_method(m.at("method").get<std::string>());
    sc.model = parse_model(m.value("model", std::string("Default")));
    if (m.contains("sigma")) sc.sigma = m.at("sigma").get<double>();
    cfg.methods.push_back(sc);
  }
  cfg.check();
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_experiment_config(j);
}

/// FNV-1a over the canonical serialization of all result-affecting fields.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << cfg.budget << '|' << cfg.repetitions << '|' << cfg.master_seed << '|'
     << cfg.cube.len_lo << ':' << cfg.cube.len_hi << ',' << cfg.cube.dig_lo
     << ':' << cfg.cube.dig_hi;
  for (const StrategyConfig& m : cfg.methods)
    os << '|' << method_name(m) << '/' << model_name(m.model) << '/'
       << m.sigma;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : os.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---- execution -------------------------------------------------------------

struct RunRecord {
  StrategyConfig cfg;
  int repetition = 0;
  RunResult result;
};

struct SummaryRow {
  std::string method;
  std::string model;
  TableRow stats;
};

struct ExperimentReport {
  std::vector<SummaryRow> summary;
  std::vector<RunRecord> runs;
  std::uint64_t master_seed = 0;
  std::uint64_t config_hash = 0;
  std::string version = kToolVersion;
};

/// Executes the full method x repetition grid. Each run gets an independent
/// RNG stream derived from (master seed, method index, repetition index), so
/// results are deterministic regardless of worker scheduling.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       unsigned workers = 0) {
  cfg.check();
  ExperimentReport report;
  report.master_seed = cfg.master_seed;
  report.config_hash = config_hash(cfg);

  struct Job {
    StrategyConfig sc;
    int repetition;
  };
  std::vector<Job> jobs;
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      StrategyConfig sc = cfg.methods[mi];
      sc.budget = cfg.budget;
      sc.seed = Rng::derive(cfg.master_seed, mi, static_cast<std::uint64_t>(rep));
      jobs.push_back({sc, rep});
    }

  std::vector<std::optional<RunResult>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, jobs.size());
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs.size();
         i = next.fetch_add(1))
      results[i] = run_strategy(jobs[i].sc, cfg.cube);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < jobs.size(); ++i)
    report.runs.push_back({jobs[i].sc, jobs[i].repetition,
                           std::move(*results[i])});

  for (const StrategyConfig& m : cfg.methods) {
    std::vector<RunResult> group;
    for (const RunRecord& r : report.runs)
      if (method_name(r.cfg) == method_name(m) && r.cfg.model == m.model)
        group.push_back(r.result);
    report.summary.push_back(
        {method_name(m), model_name(m.model), descriptive(group)});
  }
  return report;
}

// ---- exports ---------------------------------------------------------------

namespace experiment_detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace experiment_detail

/// (length, num_digits) of every feasible datum; the header row carries the
/// cube bounds.
inline void export_scatter(const RunResult& run, const PreferenceHypercube& cube,
                           const std::filesystem::path& path) {
  auto out = experiment_detail::open_out(path);
  out << "length,num_digits,cube=" << cube.len_lo << ':' << cube.len_hi << ','
      << cube.dig_lo << ':' << cube.dig_hi << '\n';
  for (const SampleRecord& s : run.sample_log)
    if (s.status != SampleStatus::Infeasible)
      out << s.features.length << ',' << s.features.num_digits << '\n';
}

/// One row per run: method, model, fshc, wall time, infeasible and preferred
/// percentages.
inline void export_timeseries(const std::vector<RunRecord>& runs,
                              const std::filesystem::path& path) {
  if (runs.empty()) throw std::invalid_argument("export_timeseries: no runs");
  auto out = experiment_detail::open_out(path);
  out << "method,model,fshc,wall_time_s,infeasible_pct,preferred_pct\n";
  out << std::setprecision(10);
  for (const RunRecord& r : runs)
    out << method_name(r.cfg) << ',' << model_name(r.cfg.model) << ','
        << r.result.fshc << ',' << r.result.wall_time_s << ','
        << r.result.infeasible_pct() << ',' << r.result.preferred_ratio
        << '\n';
}

/// Streams a run's sample log in the per-attempt CSV format.
inline void export_sample_log(const RunResult& run, const std::string& method,
                              const std::filesystem::path& path) {
  auto out = experiment_detail::open_out(path);
  out << "attempt,method,status,length,num_digits,fshc_so_far,elapsed_s\n";
  out << std::setprecision(10);
  for (const SampleRecord& s : run.sample_log) {
    out << s.attempt << ',' << method << ',' << to_string(s.status) << ',';
    if (s.status == SampleStatus::Infeasible)
      out << ",,";
    else
      out << s.features.length << ',' << s.features.num_digits << ',';
    out << s.fshc_so_far << ',' << s.elapsed_s << '\n';
  }
}

inline void write_report(const ExperimentReport& report,
                         const std::filesystem::path& dir) {
  {
    auto out = experiment_detail::open_out(dir / "summary.csv");
    out << "method,model,runs,coverage_mean,coverage_std,time_mean_s,preferred_mean\n";
    out << std::setprecision(10);
    for (const SummaryRow& row : report.summary)
      out << row.method << ',' << row.model << ',' << row.stats.runs << ','
          << row.stats.mean_fshc << ',' << row.stats.std_fshc << ','
          << row.stats.mean_time_s << ',' << row.stats.mean_preferred_pct
          << '\n';
  }
  export_timeseries(report.runs, dir / "runs.csv");
  {
    auto out = experiment_detail::open_out(dir / "provenance.json");
    nlohmann::json j;
    j["master_seed"] = report.master_seed;
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << report.config_hash;
    j["config_hash"] = hex.str();
    j["version"] = report.version;
    out << j.dump(2) << '\n';
  }
}

}  // namespace divgen
