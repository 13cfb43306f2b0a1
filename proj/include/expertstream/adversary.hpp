#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expertstream/mathutil.hpp"
#include "expertstream/rng.hpp"
#include "expertstream/runner.hpp"
#include "expertstream/stream.hpp"
#include "expertstream/types.hpp"

namespace expertstream {

enum class InstanceLabel { No, Yes };

inline std::string_view label_name(InstanceLabel label) {
  return label == InstanceLabel::Yes ? "YES" : "NO";
}

// Hard-instance matrix for the bias-detection problem: every entry is a fair
// coin except, in YES instances, one planted column biased toward 1.
struct BiasDetectInstance {
  std::size_t n = 1;
  std::size_t T = 1;
  std::vector<Bit> matrix;  // T x n, day-major
  InstanceLabel label = InstanceLabel::No;
  std::optional<std::uint32_t> planted_column;
  double epsilon_bias = 0.0;
  std::optional<std::size_t> mistake_bound;  // generation-time budget, when meaningful
  Seed seed;

  void validate() const {
    if (n < 1 || T < 1) throw std::invalid_argument("BiasDetectInstance: empty shape");
    if (matrix.size() != n * T)
      throw std::invalid_argument("BiasDetectInstance: matrix size does not match n*T");
    for (Bit b : matrix) check_bit(b, "BiasDetectInstance");
    if (label == InstanceLabel::No && planted_column)
      throw std::invalid_argument("BiasDetectInstance: NO instances have no planted column");
    if (label == InstanceLabel::Yes && (!planted_column || *planted_column >= n))
      throw std::invalid_argument("BiasDetectInstance: YES instances need a planted column in [n]");
  }
};

// All entries i.i.d. fair coins.
inline BiasDetectInstance gen_no(std::size_t n, std::size_t T, Seed seed) {
  if (n < 1 || T < 1) throw std::invalid_argument("gen_no: empty shape");
  BiasDetectInstance inst;
  inst.n = n;
  inst.T = T;
  inst.label = InstanceLabel::No;
  inst.seed = seed;
  inst.matrix.resize(n * T);
  Rng rng(seed, "gen/no");
  for (Bit& b : inst.matrix) b = rng.bernoulli(0.5) ? Bit{1} : Bit{0};
  return inst;
}

// Planted column Bernoulli(1 - M/T), everything else fair. L drawn uniformly
// when not supplied.
inline BiasDetectInstance gen_yes(std::size_t n, std::size_t T, std::size_t M,
                                  std::optional<std::uint32_t> L, Seed seed) {
  if (n < 1 || T < 1) throw std::invalid_argument("gen_yes: empty shape");
  if (M > T) throw std::invalid_argument("gen_yes: M cannot exceed T");
  if (L && *L >= n) throw std::invalid_argument("gen_yes: planted column out of range");
  BiasDetectInstance inst;
  inst.n = n;
  inst.T = T;
  inst.label = InstanceLabel::Yes;
  inst.seed = seed;
  inst.mistake_bound = M;
  Rng rng(seed, "gen/yes");
  const std::uint32_t col = L ? *L : static_cast<std::uint32_t>(rng.uniform_below(n));
  inst.planted_column = col;
  const double p_correct = 1.0 - static_cast<double>(M) / static_cast<double>(T);
  inst.epsilon_bias = p_correct - 0.5;
  inst.matrix.resize(n * T);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i) {
      const double p = (i == col) ? p_correct : 0.5;
      inst.matrix[t * n + i] = rng.bernoulli(p) ? Bit{1} : Bit{0};
    }
  return inst;
}

// Planted column wrong on exactly M uniformly chosen days rather than in
// expectation, so the generated stream conforms to the budget by construction.
inline BiasDetectInstance gen_planted(std::size_t n, std::size_t T, std::size_t M,
                                      std::optional<std::uint32_t> L, Seed seed) {
  if (n < 1 || T < 1) throw std::invalid_argument("gen_planted: empty shape");
  if (M > T) throw std::invalid_argument("gen_planted: M cannot exceed T");
  if (L && *L >= n) throw std::invalid_argument("gen_planted: planted column out of range");
  BiasDetectInstance inst;
  inst.n = n;
  inst.T = T;
  inst.label = InstanceLabel::Yes;
  inst.seed = seed;
  inst.mistake_bound = M;
  Rng rng(seed, "gen/planted");
  const std::uint32_t col = L ? *L : static_cast<std::uint32_t>(rng.uniform_below(n));
  inst.planted_column = col;
  inst.epsilon_bias = 0.5 - static_cast<double>(M) / static_cast<double>(T);
  const std::vector<std::uint32_t> wrong_days = rng.sample_without_replacement(T, M);
  inst.matrix.assign(n * T, Bit{0});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i)
      if (i != col) inst.matrix[t * n + i] = rng.bernoulli(0.5) ? Bit{1} : Bit{0};
  for (std::size_t t = 0; t < T; ++t) inst.matrix[t * n + col] = 1;
  for (std::uint32_t t : wrong_days) inst.matrix[static_cast<std::size_t>(t) * n + col] = 0;
  return inst;
}

// First floor(R*T) days carry a constant-bias instance; the tail is all-zero
// rows, i.e. every expert wrong under the all-ones outcome convention.
inline BiasDetectInstance gen_padded(std::size_t n, std::size_t T, double R, std::size_t M,
                                     InstanceLabel label, Seed seed, double bias = 0.25) {
  if (n < 1 || T < 1) throw std::invalid_argument("gen_padded: empty shape");
  if (!(R > 0.0)) throw std::invalid_argument("gen_padded: R must be positive");
  if (!(bias > 0.0 && bias <= 0.5)) throw std::invalid_argument("gen_padded: bias must lie in (0, 1/2]");
  if (M > T) throw std::invalid_argument("gen_padded: M cannot exceed T");
  const std::size_t prefix = detail::floor_snapped(R * static_cast<double>(T));
  if (prefix < 1) throw std::invalid_argument("gen_padded: R*T must round to at least one day");
  if (prefix > T) throw std::invalid_argument("gen_padded: prefix exceeds the horizon");
  BiasDetectInstance inst;
  inst.n = n;
  inst.T = T;
  inst.label = label;
  inst.seed = seed;
  inst.matrix.assign(n * T, Bit{0});
  Rng rng(seed, "gen/padded");
  std::optional<std::uint32_t> col;
  if (label == InstanceLabel::Yes) {
    col = static_cast<std::uint32_t>(rng.uniform_below(n));
    inst.planted_column = col;
    inst.epsilon_bias = bias;
  }
  for (std::size_t t = 0; t < prefix; ++t)
    for (std::size_t i = 0; i < n; ++i) {
      const double p = (col && i == *col) ? 0.5 + bias : 0.5;
      inst.matrix[t * n + i] = rng.bernoulli(p) ? Bit{1} : Bit{0};
    }
  return inst;
}

// Reduction to the experts problem: matrix bits become predictions and the
// outcome is 1 every day, so bit 1 means "correct".
inline ExpertStream to_expert_stream(const BiasDetectInstance& inst) {
  inst.validate();
  ExpertStream stream;
  stream.spec = StreamSpec{inst.n, inst.T, inst.mistake_bound.value_or(inst.T),
                           StreamSource::GeneratorWithSeed};
  stream.matrix = inst.matrix;
  stream.outcomes.assign(inst.T, Bit{1});
  stream.validate();
  return stream;
}

// Runs a fresh algorithm over the instance and thresholds its correct-day
// count. factory(n, T) must return an OnlineAlgorithm.
template <typename AlgorithmFactory>
InstanceLabel distinguish(AlgorithmFactory&& factory, const BiasDetectInstance& inst,
                          double threshold) {
  if (!(threshold > 0.0 && threshold < static_cast<double>(inst.T)))
    throw std::invalid_argument("distinguish: threshold must lie in (0, T)");
  const ExpertStream stream = to_expert_stream(inst);
  auto alg = factory(stream.spec.n, stream.spec.T);
  RunOptions opts;
  opts.keep_trace = false;
  const RunReport report = run_stream(alg, stream, opts);
  const std::size_t correct = stream.spec.T - report.ledger.algorithm_mistakes();
  return static_cast<double>(correct) >= threshold ? InstanceLabel::Yes : InstanceLabel::No;
}

// What an adaptive adversary is allowed to see when committing day t: all
// earlier committed days and the algorithm's predictions on them.
struct GameHistory {
  std::span<const DayRecord> days;
  std::span<const Bit> algorithm_predictions;
};

template <typename A>
concept AdaptiveAdversary =
    std::copyable<A> && requires(A adv, const A cadv, const GameHistory& history) {
      { cadv.name() } -> std::convertible_to<std::string_view>;
      { cadv.expert_count() } -> std::convertible_to<std::size_t>;
      { adv.commit(history) } -> std::convertible_to<DayRecord>;
    };

struct GameTranscript {
  std::size_t n = 0;
  std::size_t T = 0;
  std::string algorithm;
  std::string adversary;
  std::vector<DayRecord> days;
  std::vector<Bit> algorithm_predictions;
};

struct GameResult {
  GameTranscript transcript;
  RunReport report;
};

struct GameOptions {
  RunOptions run;
  // Re-simulates a pristine adversary copy over the transcript and errors on
  // any divergent commitment.
  bool verify_causality = true;
};

// Day-by-day game: the adversary commits predictions and outcome from history
// alone, then the algorithm predicts, then the outcome is revealed to it.
template <OnlineAlgorithm Alg, AdaptiveAdversary Adv>
GameResult play_adaptive_game(Alg& alg, Adv adversary, std::size_t T,
                              const GameOptions& opts = {}) {
  const std::size_t n = alg.expert_count();
  if (adversary.expert_count() != n)
    throw std::invalid_argument("play_adaptive_game: adversary and algorithm disagree on n");
  if (T < 1) throw std::invalid_argument("play_adaptive_game: need at least one day");

  const Adv pristine = adversary;

  GameResult result;
  result.transcript.n = n;
  result.transcript.T = T;
  result.transcript.algorithm = std::string(alg.name());
  result.transcript.adversary = std::string(adversary.name());
  result.transcript.days.reserve(T);
  result.transcript.algorithm_predictions.reserve(T);

  RunReport& report = result.report;
  report.run_id = opts.run.run_id;
  report.algorithm = std::string(alg.name());
  std::size_t claimed_m = T;
  if constexpr (requires(const Adv& a) {
                  { a.mistake_budget() } -> std::convertible_to<std::size_t>;
                }) {
    claimed_m = adversary.mistake_budget();
  }
  report.spec = StreamSpec{n, T, claimed_m, StreamSource::AdaptiveAdversary};
  report.ledger = RegretLedger(n, T);
  report.meter.budget = opts.run.memory_budget;
  if (opts.run.keep_trace) report.trace.reserve(T);

  const double horizon = static_cast<double>(T);
  for (std::size_t t = 0; t < T; ++t) {
    const GameHistory history{result.transcript.days,
                              result.transcript.algorithm_predictions};
    DayRecord rec = adversary.commit(history);
    rec.validate(n);
    const Bit prediction = alg.predict(rec.predictions);
    report.meter.note(alg.slots_in_use());
    alg.update(rec.predictions, rec.outcome);
    report.meter.note(alg.slots_in_use());
    report.ledger.record(rec.predictions, rec.outcome, prediction);
    if (opts.run.keep_trace) {
      const double running =
          (static_cast<double>(report.ledger.algorithm_mistakes()) -
           static_cast<double>(report.ledger.best_mistakes())) /
          horizon;
      report.trace.push_back(TraceRow{t, prediction, rec.outcome,
                                      report.ledger.algorithm_mistakes(),
                                      report.ledger.best_mistakes(), running,
                                      report.meter.slots_in_use});
    }
    result.transcript.days.push_back(std::move(rec));
    result.transcript.algorithm_predictions.push_back(prediction);
  }
  detail::collect_extras(report, alg);

  if (opts.verify_causality) {
    Adv replay = pristine;
    for (std::size_t t = 0; t < T; ++t) {
      const GameHistory history{
          std::span<const DayRecord>(result.transcript.days).first(t),
          std::span<const Bit>(result.transcript.algorithm_predictions).first(t)};
      if (!(replay.commit(history) == result.transcript.days[t]))
        throw std::logic_error(
            "play_adaptive_game: causality violation, commitment not reproducible from history");
    }
  }
  return result;
}

// Adaptive wrapper around a stored stream; ignores history.
class ObliviousReplay {
 public:
  explicit ObliviousReplay(ExpertStream stream) : stream_(std::move(stream)) {
    stream_.validate();
  }

  std::string_view name() const { return "oblivious-replay"; }
  std::size_t expert_count() const { return stream_.spec.n; }

  DayRecord commit(const GameHistory& history) const {
    const std::size_t t = history.days.size();
    if (t >= stream_.spec.T) throw std::logic_error("ObliviousReplay: horizon exhausted");
    return stream_.day(t);
  }

 private:
  ExpertStream stream_;
};

struct AgreementTrackerConfig {
  std::uint32_t best_expert = 0;
  std::size_t suspected_pool_size = 1;
  std::size_t mistake_budget = 0;
};

// Adaptive attack on pool-based algorithms: tracks which experts have agreed
// with the algorithm, guesses the current pool as the top scorers, and makes
// that majority wrong every day while the designated best expert stays right.
class AgreementTracker {
 public:
  AgreementTracker(std::size_t n, AgreementTrackerConfig cfg, Rng rng)
      : n_(n), cfg_(cfg), rng_(std::move(rng)), scores_(n, 0) {
    if (n < 2) throw std::invalid_argument("AgreementTracker: need at least two experts");
    if (cfg.best_expert >= n)
      throw std::invalid_argument("AgreementTracker: best expert out of range");
    if (cfg.suspected_pool_size < 1 || cfg.suspected_pool_size > n - 1)
      throw std::invalid_argument("AgreementTracker: suspected pool size must lie in [1, n-1]");
  }

  std::string_view name() const { return "agreement-tracker"; }
  std::size_t expert_count() const { return n_; }
  std::size_t mistake_budget() const { return cfg_.mistake_budget; }
  const std::vector<std::size_t>& scores() const { return scores_; }

  DayRecord commit(const GameHistory& history) {
    catch_up(history);
    DayRecord rec;
    rec.predictions.assign(n_, Bit{0});
    const std::uint32_t b = cfg_.best_expert;
    for (std::size_t i = 0; i < n_; ++i)
      if (i != b) rec.predictions[i] = rng_.bernoulli(0.5) ? Bit{1} : Bit{0};

    std::vector<std::uint32_t> order;
    order.reserve(n_ - 1);
    for (std::size_t i = 0; i < n_; ++i)
      if (i != b) order.push_back(static_cast<std::uint32_t>(i));
    const std::size_t s = cfg_.suspected_pool_size;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s), order.end(),
                      [&](std::uint32_t a, std::uint32_t c) {
                        if (scores_[a] != scores_[c]) return scores_[a] > scores_[c];
                        return a < c;
                      });
    std::size_t ones = 0;
    for (std::size_t j = 0; j < s; ++j) ones += rec.predictions[order[j]] ? 1u : 0u;
    const Bit yhat = (2 * ones >= s) ? Bit{1} : Bit{0};
    rec.predictions[b] = yhat ? Bit{0} : Bit{1};
    rec.outcome = rec.predictions[b];
    return rec;
  }

 private:
  void catch_up(const GameHistory& history) {
    while (processed_ < history.days.size()) {
      const DayRecord& day = history.days[processed_];
      const Bit alg_pred = history.algorithm_predictions[processed_];
      for (std::size_t i = 0; i < n_; ++i)
        scores_[i] += (day.predictions[i] == alg_pred) ? 1u : 0u;
      ++processed_;
    }
  }

  std::size_t n_;
  AgreementTrackerConfig cfg_;
  Rng rng_;
  std::vector<std::size_t> scores_;
  std::size_t processed_ = 0;
};

inline constexpr std::string_view kTranscriptHeader = "day,predictions,outcome,alg_prediction";

inline void write_transcript_csv(std::ostream& out, const GameTranscript& transcript) {
  out << kTranscriptHeader << '\n';
  for (std::size_t t = 0; t < transcript.days.size(); ++t) {
    const DayRecord& day = transcript.days[t];
    std::string bits(day.predictions.size(), '0');
    for (std::size_t i = 0; i < day.predictions.size(); ++i)
      if (day.predictions[i]) bits[i] = '1';
    out << t << ',' << bits << ',' << unsigned(day.outcome) << ','
        << unsigned(transcript.algorithm_predictions[t]) << '\n';
  }
}

}  // namespace expertstream
