#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "expertstream/adversary.hpp"
#include "expertstream/baselines.hpp"
#include "expertstream/csv.hpp"
#include "expertstream/format.hpp"
#include "expertstream/pool.hpp"
#include "expertstream/privacy.hpp"
#include "expertstream/robust.hpp"
#include "expertstream/runner.hpp"
#include "expertstream/svg.hpp"

namespace expertstream {

// User-facing configuration mistakes; the CLI maps these to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitGuaranteeViolation = 2;

// "3,5,9", "0..19" or a single value.
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  if (text.empty()) throw ConfigError("seeds: empty list");
  std::vector<std::uint64_t> seeds;
  const auto parse_one = [](const std::string& tok) {
    try {
      std::size_t pos = 0;
      const std::uint64_t v = std::stoull(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("seeds: bad value '" + tok + "'");
    }
  };
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const std::uint64_t lo = parse_one(text.substr(0, range_pos));
    const std::uint64_t hi = parse_one(text.substr(range_pos + 2));
    if (hi < lo) throw ConfigError("seeds: descending range");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const std::string& tok : split_fields(text)) seeds.push_back(parse_one(tok));
  return seeds;
}

struct ExperimentConfig {
  std::string algorithm = "detpool";  // comma list allowed in sweep
  std::string stream = "planted";     // planted | yes | no | padded | file
  std::string matrix_file;
  std::size_t n = 64;
  std::size_t T = 1024;
  std::optional<std::size_t> M;
  std::vector<double> r_values = {0.1};
  double alpha = 1.0;
  double beta = 0.5;
  std::optional<double> eta;
  double c = 1.0;
  double c_prime = 1.0;
  double target_epsilon = 1.0;
  std::optional<double> threshold;  // distinguisher cutoff, default 3T/4
  double bias = 0.25;               // padded-instance prefix bias
  std::optional<std::uint32_t> planted_column;
  std::string instance_label = "yes";  // padded generator case
  std::string adversary = "agreement-tracker";
  std::uint32_t best_expert = 0;
  std::optional<std::size_t> suspected_pool;  // default: attacked algorithm's pool size
  std::size_t trials = 100;                   // distinguisher instances per label
  std::vector<std::uint64_t> seeds = {0};
  std::string out = "out";
  std::size_t jobs = 1;
  bool force = false;
  bool warn_params = false;
  std::optional<std::size_t> memory_budget;
  bool dump_pools = false;

  std::size_t claimed_m() const { return M.value_or(0); }

  double single_r(const char* who) const {
    if (r_values.size() != 1)
      throw ConfigError(std::string(who) + ": expected a single r value");
    return r_values.front();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::size_t>(u);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a nonnegative integer, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace detail

// Flat key=value text; '#' starts a comment, blank lines ignored.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    kv[key] = value;
  }
  return kv;
}

// Strict mapping from key=value pairs onto the typed config; unknown keys are
// rejected so typos cannot silently revert to defaults.
inline ExperimentConfig make_config(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "algorithm") cfg.algorithm = value;
    else if (key == "stream") cfg.stream = value;
    else if (key == "matrix_file") cfg.matrix_file = value;
    else if (key == "n") cfg.n = detail::to_size(key, value);
    else if (key == "t") cfg.T = detail::to_size(key, value);
    else if (key == "m") cfg.M = detail::to_size(key, value);
    else if (key == "r") {
      cfg.r_values.clear();
      for (const std::string& tok : split_fields(value))
        cfg.r_values.push_back(detail::to_double(key, detail::trim(tok)));
      if (cfg.r_values.empty()) throw ConfigError("config: key 'r' expects at least one value");
    } else if (key == "alpha") cfg.alpha = detail::to_double(key, value);
    else if (key == "beta") cfg.beta = detail::to_double(key, value);
    else if (key == "eta") cfg.eta = detail::to_double(key, value);
    else if (key == "c") cfg.c = detail::to_double(key, value);
    else if (key == "cprime") cfg.c_prime = detail::to_double(key, value);
    else if (key == "target_epsilon") cfg.target_epsilon = detail::to_double(key, value);
    else if (key == "threshold") cfg.threshold = detail::to_double(key, value);
    else if (key == "bias") cfg.bias = detail::to_double(key, value);
    else if (key == "planted_column")
      cfg.planted_column = static_cast<std::uint32_t>(detail::to_size(key, value));
    else if (key == "label") cfg.instance_label = value;
    else if (key == "adversary") cfg.adversary = value;
    else if (key == "best_expert")
      cfg.best_expert = static_cast<std::uint32_t>(detail::to_size(key, value));
    else if (key == "s") cfg.suspected_pool = detail::to_size(key, value);
    else if (key == "trials") cfg.trials = detail::to_size(key, value);
    else if (key == "seed") cfg.seeds = {static_cast<std::uint64_t>(detail::to_size(key, value))};
    else if (key == "seeds") cfg.seeds = parse_seed_list(value);
    else if (key == "out") cfg.out = value;
    else if (key == "jobs") cfg.jobs = std::max<std::size_t>(1, detail::to_size(key, value));
    else if (key == "force") cfg.force = detail::to_bool(key, value);
    else if (key == "warn_params") cfg.warn_params = detail::to_bool(key, value);
    else if (key == "memory_budget") cfg.memory_budget = detail::to_size(key, value);
    else if (key == "dump_pools") cfg.dump_pools = detail::to_bool(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  if (cfg.seeds.empty()) throw ConfigError("config: empty seed list");
  return cfg;
}

// ---- stream and algorithm factories ----------------------------------------

inline ExpertStream build_stream(const ExperimentConfig& cfg, std::uint64_t seed_value) {
  const Seed seed{seed_value};
  if (cfg.stream == "file") {
    if (cfg.matrix_file.empty()) throw ConfigError("stream=file requires matrix_file");
    std::ifstream in(cfg.matrix_file);
    if (!in) throw ConfigError("cannot open matrix file '" + cfg.matrix_file + "'");
    ExpertStream stream = load_matrix(in);
    if (cfg.M) stream.spec.M = std::min(*cfg.M, stream.spec.T);
    return stream;
  }
  if (cfg.stream == "planted")
    return to_expert_stream(gen_planted(cfg.n, cfg.T, cfg.claimed_m(), cfg.planted_column, seed));
  if (cfg.stream == "yes")
    return to_expert_stream(gen_yes(cfg.n, cfg.T, cfg.claimed_m(), cfg.planted_column, seed));
  if (cfg.stream == "no") return to_expert_stream(gen_no(cfg.n, cfg.T, seed));
  if (cfg.stream == "padded") {
    InstanceLabel label;
    if (cfg.instance_label == "yes") label = InstanceLabel::Yes;
    else if (cfg.instance_label == "no") label = InstanceLabel::No;
    else throw ConfigError("label must be yes or no");
    return to_expert_stream(gen_padded(cfg.n, cfg.T, cfg.single_r("padded stream"),
                                       cfg.claimed_m(), label, seed, cfg.bias));
  }
  throw ConfigError("unknown stream kind '" + cfg.stream + "'");
}

using AnyAlgorithm =
    std::variant<WeightedMajority, MultiplicativeWeights, DetPool, DiscPred, RobustEnsemble>;

// Lemma-condition screening for the algorithms that have admissibility
// requirements; demoted to stderr warnings under --warn-params.
inline void screen_parameters(const ExperimentConfig& cfg, const std::string& algorithm,
                              double R, std::size_t n, std::size_t T) {
  ParamCheck check;
  if (algorithm == "discpred") check = validate_discpred_params(n, T, R, cfg.claimed_m());
  else if (algorithm == "robust") check = validate_robust_params(n, T, R, cfg.claimed_m());
  else return;
  if (check.ok) return;
  std::string joined;
  for (const std::string& v : check.violations) {
    if (!joined.empty()) joined += "; ";
    joined += v;
  }
  if (cfg.warn_params) {
    std::cerr << "warning: " << algorithm << " parameter check failed: " << joined << '\n';
    return;
  }
  throw ConfigError(algorithm + " parameter check failed (" + joined +
                    "); rerun with --warn-params to proceed anyway");
}

inline AnyAlgorithm make_algorithm(const ExperimentConfig& cfg, const std::string& name,
                                   double R, std::size_t n, std::size_t T,
                                   std::uint64_t seed_value) {
  const Seed seed{seed_value};
  if (name == "wm") return WeightedMajority(n, cfg.beta);
  if (name == "mw") {
    const double eta = cfg.eta ? *cfg.eta : MultiplicativeWeights::default_eta(n, T);
    return MultiplicativeWeights(n, eta, Rng(seed, "alg/mw"));
  }
  if (name == "detpool") return DetPool(n, cfg.claimed_m(), R, T);
  if (name == "discpred") return DiscPred(n, T, R, cfg.alpha, Rng(seed, "alg/discpred"));
  if (name == "robust") {
    RobustConfig rc;
    rc.n = n;
    rc.T = T;
    rc.R = R;
    rc.alpha = cfg.alpha;
    rc.c = cfg.c;
    rc.c_prime = cfg.c_prime;
    rc.target_epsilon = cfg.target_epsilon;
    rc.enforce_budget = !cfg.warn_params;
    return RobustEnsemble(rc, Rng(seed, "alg/robust"));
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

inline RunReport run_any(AnyAlgorithm& alg, const ExpertStream& stream, const RunOptions& opts) {
  return std::visit([&](auto& a) { return run_stream(a, stream, opts); }, alg);
}

// ---- summary rows -----------------------------------------------------------

struct SummaryRow {
  std::string run_id;
  std::string algorithm;
  std::string stream;
  std::size_t n = 0, T = 0, M = 0;
  double R = 0.0;
  std::uint64_t seed = 0;
  std::size_t mistakes_alg = 0, mistakes_best = 0, best_index = 0, peak_slots = 0;
  double avg_regret = 0.0;
  bool budget_violated = false;
  std::optional<PrivacyLedgerReport> privacy;
  std::string status = "ok";
};

inline constexpr std::string_view kSummaryHeader =
    "run_id,algorithm,stream,n,T,M,R,seed,mistakes_alg,mistakes_best,best_index,"
    "avg_regret,peak_slots,budget_violated,eps_per_call,privacy_calls,"
    "composed_epsilon,composed_delta,status";

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.run_id << ',' << r.algorithm << ',' << r.stream << ',' << r.n << ',' << r.T << ','
        << r.M << ',' << fmt_g9(r.R) << ',' << r.seed << ',' << r.mistakes_alg << ','
        << r.mistakes_best << ',' << r.best_index << ',' << fmt_g9(r.avg_regret) << ','
        << r.peak_slots << ',' << (r.budget_violated ? 1 : 0) << ',';
    if (r.privacy) {
      out << fmt_g9(r.privacy->epsilon_per_call) << ',' << r.privacy->calls << ','
          << fmt_g9(r.privacy->composed_epsilon) << ',' << fmt_g9(r.privacy->composed_delta);
    } else {
      out << ",,,";
    }
    out << ',' << r.status << '\n';
  }
}

inline SummaryRow summarize(const RunReport& report, const ExperimentConfig& cfg,
                            const std::string& algorithm, double R, std::uint64_t seed,
                            const std::string& stream_name) {
  SummaryRow row;
  row.run_id = report.run_id;
  row.algorithm = algorithm;
  row.stream = stream_name;
  row.n = report.spec.n;
  row.T = report.spec.T;
  row.M = cfg.claimed_m();
  row.R = R;
  row.seed = seed;
  row.mistakes_alg = report.ledger.algorithm_mistakes();
  row.mistakes_best = report.ledger.best_mistakes();
  row.best_index = report.ledger.best_index();
  row.avg_regret = report.final_average_regret();
  row.peak_slots = report.meter.peak_slots;
  row.budget_violated = report.budget_violated();
  row.privacy = report.privacy;
  return row;
}

// Mistake-bound audit for the deterministic pool: with a conforming stream
// (best expert within the claimed budget), exceeding floor(R*T) mistakes is a
// bug and must surface as exit code 2.
inline bool det_bound_breached(const RunReport& report, double R) {
  if (report.ledger.best_mistakes() > report.spec.M) return false;  // claim was false
  const std::size_t bound = detail::floor_snapped(R * static_cast<double>(report.spec.T));
  return report.ledger.algorithm_mistakes() > bound;
}

// ---- output-path plumbing ---------------------------------------------------

inline void prepare_out_dir(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  if (fs::exists(dir) && !cfg.force)
    throw ConfigError("output path '" + cfg.out + "' already exists; pass --force to overwrite");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "': " + ec.message());
}

inline std::ofstream open_out_file(const ExperimentConfig& cfg, const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(cfg.out) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

// ---- commands ---------------------------------------------------------------

inline int cmd_simulate(const ExperimentConfig& cfg) {
  const double R = cfg.single_r("simulate");
  screen_parameters(cfg, cfg.algorithm, R, cfg.n, cfg.T);
  prepare_out_dir(cfg);

  std::vector<SummaryRow> rows;
  int exit_code = kExitOk;
  for (const std::uint64_t seed : cfg.seeds) {
    const ExpertStream stream = build_stream(cfg, seed);
    AnyAlgorithm alg =
        make_algorithm(cfg, cfg.algorithm, R, stream.spec.n, stream.spec.T, seed);
    RunOptions opts;
    opts.run_id = cfg.algorithm + "_s" + std::to_string(seed);
    opts.memory_budget = cfg.memory_budget;
    const RunReport report = run_any(alg, stream, opts);

    auto trace_out = open_out_file(cfg, "trace_" + opts.run_id + ".csv");
    write_trace_csv(trace_out, report);
    if (cfg.dump_pools && !report.refills.empty()) {
      auto refill_out = open_out_file(cfg, "refills_" + opts.run_id + ".txt");
      write_refill_log(refill_out, report);
    }

    SummaryRow row = summarize(report, cfg, cfg.algorithm, R, seed, cfg.stream);
    if (report.budget_violated()) {
      row.status = "memory_budget_violation";
      exit_code = kExitGuaranteeViolation;
    }
    if (cfg.algorithm == "detpool" && det_bound_breached(report, R)) {
      row.status = "bound_violation";
      exit_code = kExitGuaranteeViolation;
    }
    std::cout << row.run_id << ": mistakes=" << row.mistakes_alg << " best=" << row.mistakes_best
              << " avg_regret=" << fmt_g9(row.avg_regret) << " peak_slots=" << row.peak_slots
              << " status=" << row.status << '\n';
    rows.push_back(std::move(row));
  }
  auto summary_out = open_out_file(cfg, "summary.csv");
  write_summary_csv(summary_out, rows);
  return exit_code;
}

inline int cmd_sweep(const ExperimentConfig& cfg) {
  std::vector<std::string> algorithms;
  for (const std::string& tok : split_fields(cfg.algorithm))
    if (!detail::trim(tok).empty()) algorithms.push_back(detail::trim(tok));
  if (algorithms.empty() || cfg.r_values.empty() || cfg.seeds.empty())
    throw ConfigError("sweep: empty grid");

  struct Cell {
    std::string algorithm;
    double R;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const std::string& a : algorithms)
    for (const double r : cfg.r_values)
      for (const std::uint64_t s : cfg.seeds) cells.push_back(Cell{a, r, s});

  prepare_out_dir(cfg);

  std::vector<SummaryRow> rows(cells.size());
  std::vector<int> codes(cells.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      SummaryRow row;
      row.run_id = cell.algorithm + "_r" + fmt_g9(cell.R) + "_s" + std::to_string(cell.seed);
      row.algorithm = cell.algorithm;
      row.stream = cfg.stream;
      row.R = cell.R;
      row.seed = cell.seed;
      row.n = cfg.n;
      row.T = cfg.T;
      row.M = cfg.claimed_m();
      try {
        screen_parameters(cfg, cell.algorithm, cell.R, cfg.n, cfg.T);
        const ExpertStream stream = build_stream(cfg, cell.seed);
        AnyAlgorithm alg =
            make_algorithm(cfg, cell.algorithm, cell.R, stream.spec.n, stream.spec.T, cell.seed);
        RunOptions opts;
        opts.run_id = row.run_id;
        opts.memory_budget = cfg.memory_budget;
        opts.keep_trace = false;
        const RunReport report = run_any(alg, stream, opts);
        row = summarize(report, cfg, cell.algorithm, cell.R, cell.seed, cfg.stream);
        row.run_id = opts.run_id;
        if (report.budget_violated()) {
          row.status = "memory_budget_violation";
          codes[i] = kExitGuaranteeViolation;
        }
        if (cell.algorithm == "detpool" && det_bound_breached(report, cell.R)) {
          row.status = "bound_violation";
          codes[i] = kExitGuaranteeViolation;
        }
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        for (char& ch : row.status)
          if (ch == ',' || ch == '\n') ch = ';';
        codes[i] = kExitConfig;
      }
      rows[i] = std::move(row);
    }
  };
  const std::size_t thread_count = std::min(cfg.jobs, cells.size());
  std::vector<std::thread> threads;
  for (std::size_t j = 1; j < thread_count; ++j) threads.emplace_back(worker);
  worker();
  for (std::thread& th : threads) th.join();

  auto out = open_out_file(cfg, "aggregate.csv");
  write_summary_csv(out, rows);
  int exit_code = kExitOk;
  for (const int code : codes) exit_code = std::max(exit_code, code);
  std::cout << "sweep: " << rows.size() << " cells -> " << cfg.out << "/aggregate.csv\n";
  return exit_code;
}

inline int cmd_attack(const ExperimentConfig& cfg) {
  const double R = cfg.single_r("attack");
  screen_parameters(cfg, cfg.algorithm, R, cfg.n, cfg.T);
  prepare_out_dir(cfg);

  std::vector<SummaryRow> rows;
  int exit_code = kExitOk;
  for (const std::uint64_t seed : cfg.seeds) {
    AnyAlgorithm alg = make_algorithm(cfg, cfg.algorithm, R, cfg.n, cfg.T, seed);

    // default suspected pool size: whatever pool the attacked algorithm keeps
    std::size_t suspected = 1;
    if (cfg.suspected_pool) suspected = *cfg.suspected_pool;
    else if (const DetPool* dp = std::get_if<DetPool>(&alg)) suspected = dp->pool_size();
    else if (const DiscPred* sp = std::get_if<DiscPred>(&alg)) suspected = sp->pool_size();
    else if (const RobustEnsemble* re = std::get_if<RobustEnsemble>(&alg))
      suspected = re->instance_pool_size();

    RunOptions ropts;
    ropts.run_id = cfg.adversary + "_" + cfg.algorithm + "_s" + std::to_string(seed);
    ropts.memory_budget = cfg.memory_budget;
    GameOptions gopts;
    gopts.run = ropts;

    GameResult result = [&]() {
      if (cfg.adversary == "agreement-tracker") {
        AgreementTrackerConfig acfg;
        acfg.best_expert = cfg.best_expert;
        acfg.suspected_pool_size = suspected;
        acfg.mistake_budget = cfg.claimed_m();
        AgreementTracker adv(cfg.n, acfg, Rng(Seed{seed}, "adv/agreement-tracker"));
        return std::visit(
            [&](auto& a) { return play_adaptive_game(a, adv, cfg.T, gopts); }, alg);
      }
      if (cfg.adversary == "oblivious-replay") {
        ObliviousReplay adv(build_stream(cfg, seed));
        return std::visit(
            [&](auto& a) { return play_adaptive_game(a, adv, cfg.T, gopts); }, alg);
      }
      throw ConfigError("unknown adversary '" + cfg.adversary + "'");
    }();

    auto transcript_out = open_out_file(cfg, "transcript_" + ropts.run_id + ".csv");
    write_transcript_csv(transcript_out, result.transcript);

    SummaryRow row = summarize(result.report, cfg, cfg.algorithm, R, seed,
                               "adaptive:" + cfg.adversary);
    row.M = result.report.spec.M;
    if (result.report.budget_violated()) {
      row.status = "memory_budget_violation";
      exit_code = kExitGuaranteeViolation;
    }
    if (cfg.algorithm == "detpool" && det_bound_breached(result.report, R)) {
      row.status = "bound_violation";
      exit_code = kExitGuaranteeViolation;
    }
    std::cout << row.run_id << ": mistakes=" << row.mistakes_alg << " best=" << row.mistakes_best
              << " avg_regret=" << fmt_g9(row.avg_regret) << " status=" << row.status << '\n';
    rows.push_back(std::move(row));
  }
  auto summary_out = open_out_file(cfg, "summary.csv");
  write_summary_csv(summary_out, rows);
  return exit_code;
}

inline constexpr std::string_view kDistinguishHeader =
    "instance_id,label,correct_days,verdict,match";

inline int cmd_distinguish(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("distinguish: trials must be positive");
  const double threshold =
      cfg.threshold ? *cfg.threshold : 3.0 * static_cast<double>(cfg.T) / 4.0;
  if (!(threshold > 0.0 && threshold < static_cast<double>(cfg.T)))
    throw ConfigError("distinguish: threshold must lie in (0, T)");
  if (cfg.algorithm.find(',') != std::string::npos)
    throw ConfigError("distinguish: expected a single algorithm");
  const double R = cfg.r_values.size() == 1 ? cfg.r_values.front() : 0.1;
  prepare_out_dir(cfg);

  const Seed root{cfg.seeds.front()};
  std::size_t correct_verdicts = 0;
  auto out = open_out_file(cfg, "results.csv");
  out << kDistinguishHeader << '\n';
  for (std::size_t i = 0; i < 2 * cfg.trials; ++i) {
    const bool is_yes = (i % 2) == 0;
    const std::size_t idx = i / 2;
    const char* label_str = is_yes ? "YES" : "NO";
    const Seed inst_seed =
        Rng::derive(root, std::string("distinguish/") + label_str + "/" + std::to_string(idx));
    const BiasDetectInstance inst =
        is_yes ? gen_yes(cfg.n, cfg.T, cfg.claimed_m(), cfg.planted_column, inst_seed)
               : gen_no(cfg.n, cfg.T, inst_seed);
    const Seed alg_seed =
        Rng::derive(root, std::string("distinguish/alg/") + label_str + "/" + std::to_string(idx));

    const ExpertStream stream = to_expert_stream(inst);
    AnyAlgorithm alg =
        make_algorithm(cfg, cfg.algorithm, R, stream.spec.n, stream.spec.T, alg_seed.value);
    RunOptions opts;
    opts.keep_trace = false;
    const RunReport report = run_any(alg, stream, opts);
    const std::size_t correct_days = cfg.T - report.ledger.algorithm_mistakes();
    const InstanceLabel verdict = static_cast<double>(correct_days) >= threshold
                                      ? InstanceLabel::Yes
                                      : InstanceLabel::No;
    const bool match = verdict == inst.label;
    correct_verdicts += match ? 1u : 0u;
    out << label_str << '_' << idx << ',' << label_str << ',' << correct_days << ','
        << label_name(verdict) << ',' << (match ? 1 : 0) << '\n';
  }
  const double accuracy =
      static_cast<double>(correct_verdicts) / static_cast<double>(2 * cfg.trials);
  std::cout << "distinguish: accuracy=" << fmt_g9(accuracy) << " (" << correct_verdicts << "/"
            << 2 * cfg.trials << ") threshold=" << fmt_g9(threshold) << '\n';
  return kExitOk;
}

inline int cmd_plot(const std::string& csv_path, const std::string& out_path, bool force) {
  namespace fs = std::filesystem;
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("plot: cannot open '" + csv_path + "'");
  const CsvTable table = parse_csv(in);
  if (table.rows.empty()) throw ConfigError("plot: '" + csv_path + "' has no data rows");

  const auto need = [&](std::string_view name) {
    const auto col = table.column(name);
    if (!col)
      throw ConfigError("plot: schema mismatch, missing column '" + std::string(name) + "'");
    return *col;
  };
  const auto as_double = [](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw ConfigError("plot: non-numeric field '" + s + "'");
    }
  };

  std::vector<PlotSeries> series;
  std::string xlabel, title;
  const auto regret_col = need("avg_regret");
  if (table.column("day")) {
    // trace schema: one regret-vs-day line per run
    const auto day_col = need("day");
    const auto run_col = need("run_id");
    std::vector<std::string> order;
    std::map<std::string, PlotSeries> by_run;
    for (const auto& row : table.rows) {
      const std::string& run = row[run_col];
      auto it = by_run.find(run);
      if (it == by_run.end()) {
        order.push_back(run);
        it = by_run.emplace(run, PlotSeries{run, {}, true, false}).first;
      }
      it->second.points.emplace_back(as_double(row[day_col]), as_double(row[regret_col]));
    }
    for (const std::string& run : order) series.push_back(std::move(by_run[run]));
    xlabel = "day";
    title = "average regret over time";
  } else {
    // sweep schema: per-seed scatter plus per-algorithm mean line over R
    const auto r_col = need("R");
    const auto alg_col = need("algorithm");
    std::vector<std::string> order;
    std::map<std::string, std::map<double, std::vector<double>>> grouped;
    for (const auto& row : table.rows) {
      const std::string& alg = row[alg_col];
      if (!grouped.count(alg)) order.push_back(alg);
      grouped[alg][as_double(row[r_col])].push_back(as_double(row[regret_col]));
    }
    for (const std::string& alg : order) {
      PlotSeries scatter{alg + " (seeds)", {}, false, true};
      PlotSeries mean{alg + " (mean)", {}, true, false};
      for (const auto& [r, values] : grouped[alg]) {
        double sum = 0.0;
        for (const double v : values) {
          scatter.points.emplace_back(r, v);
          sum += v;
        }
        mean.points.emplace_back(r, sum / static_cast<double>(values.size()));
      }
      series.push_back(std::move(scatter));
      series.push_back(std::move(mean));
    }
    xlabel = "regret target R";
    title = "average regret vs regret target";
  }

  if (fs::exists(out_path) && !force)
    throw ConfigError("plot: output '" + out_path + "' already exists; pass --force to overwrite");
  std::ofstream out(out_path);
  if (!out) throw ConfigError("plot: cannot write '" + out_path + "'");
  out << render_chart(title, xlabel, "average regret", series);
  std::cout << "plot: wrote " << out_path << '\n';
  return kExitOk;
}

// Fast smoke battery behind `selftest`; every check here is redundantly
// covered by the unit suite, this just gives a one-command health probe.
inline int cmd_selftest() {
  std::size_t failures = 0;
  const auto check = [&](const char* name, bool ok) {
    std::cout << "selftest: " << name << (ok ? " ok" : " FAILED") << '\n';
    if (!ok) ++failures;
  };

  {
    Rng a(Seed{7}, "probe");
    Rng b(Seed{7}, "probe");
    bool same = true;
    for (int i = 0; i < 128; ++i) same = same && a.next() == b.next();
    check("rng replay", same);
  }
  {
    WeightedMajority wm(2);
    const std::vector<Bit> preds = {1, 0};
    check("wm tie to one", wm.predict(preds) == 1);
  }
  {
    const Composed c = compose(0.01, 0.0, 100, 1e-6);
    check("advanced composition", std::abs(c.epsilon - 0.545652176975693) < 1e-9);
  }
  {
    bool ok = true;
    for (int i = 1; i < 64; ++i) {
      const double p = static_cast<double>(i) / 64.0;
      const double h = binary_entropy(p);
      ok = ok && h >= 4.0 * p * (1.0 - p) - 1e-12 && h <= 2.0 * std::sqrt(p * (1.0 - p)) + 1e-12;
    }
    check("entropy envelope", ok);
  }
  check("det pool size", det_pool_size(4096, 2, 0.05, 8192) == 480);
  {
    const ExpertStream stream =
        to_expert_stream(gen_planted(32, 256, 2, std::nullopt, Seed{11}));
    DetPool pool(32, 2, 0.25, 256);
    const RunReport report = run_stream(pool, stream);
    check("det pool bound", report.ledger.algorithm_mistakes() <= 64);
  }
  {
    OrderedDomain domain{{0, 1}};
    const std::vector<std::int64_t> db(9, 1);
    const auto probs = privmed_distribution(db, domain, 8.0);
    check("private median consensus", probs[1] > 0.97);
  }
  {
    const ExpertStream stream = to_expert_stream(gen_no(5, 13, Seed{3}));
    std::ostringstream text;
    save_matrix(stream, text);
    std::istringstream back(text.str());
    const ExpertStream reloaded = load_matrix(back);
    check("matrix round-trip", reloaded.matrix == stream.matrix &&
                                   reloaded.outcomes == stream.outcomes);
  }
  if (failures) {
    std::cout << "selftest: " << failures << " check(s) FAILED\n";
    return kExitConfig;
  }
  std::cout << "selftest: all checks passed\n";
  return kExitOk;
}

}  // namespace expertstream
