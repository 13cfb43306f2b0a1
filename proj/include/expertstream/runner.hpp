#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expertstream/format.hpp"
#include "expertstream/stream.hpp"
#include "expertstream/types.hpp"

namespace expertstream {

// Anything playable against a stream. predict sees only the day's expert
// predictions; the outcome is revealed to update afterwards, so causality is
// enforced by the signatures rather than by convention.
template <typename A>
concept OnlineAlgorithm = requires(A alg, const A calg, std::span<const Bit> preds, Bit outcome) {
  { calg.name() } -> std::convertible_to<std::string_view>;
  { calg.expert_count() } -> std::convertible_to<std::size_t>;
  { alg.predict(preds) } -> std::convertible_to<Bit>;
  alg.update(preds, outcome);
  { calg.slots_in_use() } -> std::convertible_to<std::size_t>;
};

struct TraceRow {
  std::size_t day = 0;
  Bit prediction = 0;
  Bit outcome = 0;
  std::size_t cum_mistakes_alg = 0;
  std::size_t cum_mistakes_best = 0;
  double avg_regret = 0.0;  // running, normalized by full horizon T
  std::size_t memory_slots = 0;
};

struct RunReport {
  std::string run_id;
  std::string algorithm;
  StreamSpec spec;
  RegretLedger ledger;
  MemoryMeter meter;
  std::vector<TraceRow> trace;
  std::optional<PrivacyLedgerReport> privacy;
  std::vector<RefillRecord> refills;

  double final_average_regret() const { return average_regret(ledger); }
  bool budget_violated() const { return meter.violated; }
};

struct RunOptions {
  std::string run_id = "run";
  std::optional<std::size_t> memory_budget;
  bool keep_trace = true;
};

namespace detail {

template <OnlineAlgorithm A>
void collect_extras(RunReport& report, const A& alg) {
  if constexpr (requires(const A& a) { a.privacy_report(); })
    report.privacy = alg.privacy_report();
  if constexpr (requires(const A& a) {
                  { a.refill_log() } -> std::convertible_to<std::vector<RefillRecord>>;
                }) {
    report.refills = alg.refill_log();
  }
}

}  // namespace detail

// Plays one algorithm over a stored stream, day by day, recording mistakes,
// running regret and memory high-water marks.
template <OnlineAlgorithm A>
RunReport run_stream(A& alg, const ExpertStream& stream, const RunOptions& opts = {}) {
  stream.validate();
  if (alg.expert_count() != stream.spec.n)
    throw std::invalid_argument("run_stream: algorithm and stream disagree on expert count");

  RunReport report;
  report.run_id = opts.run_id;
  report.algorithm = std::string(alg.name());
  report.spec = stream.spec;
  report.ledger = RegretLedger(stream.spec.n, stream.spec.T);
  report.meter.budget = opts.memory_budget;
  if (opts.keep_trace) report.trace.reserve(stream.spec.T);

  const double horizon = static_cast<double>(stream.spec.T);
  for (std::size_t t = 0; t < stream.spec.T; ++t) {
    const auto preds = stream.day_predictions(t);
    const Bit prediction = alg.predict(preds);
    report.meter.note(alg.slots_in_use());
    const Bit outcome = stream.outcomes[t];
    alg.update(preds, outcome);
    report.meter.note(alg.slots_in_use());
    report.ledger.record(preds, outcome, prediction);
    if (opts.keep_trace) {
      const double running =
          (static_cast<double>(report.ledger.algorithm_mistakes()) -
           static_cast<double>(report.ledger.best_mistakes())) /
          horizon;
      report.trace.push_back(TraceRow{t, prediction, outcome,
                                      report.ledger.algorithm_mistakes(),
                                      report.ledger.best_mistakes(), running,
                                      report.meter.slots_in_use});
    }
  }
  detail::collect_extras(report, alg);
  return report;
}

inline constexpr std::string_view kTraceHeader =
    "run_id,day,algorithm,prediction,outcome,cum_mistakes_alg,cum_mistakes_best,"
    "avg_regret,memory_slots";

inline void write_trace_csv(std::ostream& out, const RunReport& report) {
  out << kTraceHeader << '\n';
  for (const TraceRow& row : report.trace) {
    out << report.run_id << ',' << row.day << ',' << report.algorithm << ','
        << unsigned(row.prediction) << ',' << unsigned(row.outcome) << ','
        << row.cum_mistakes_alg << ',' << row.cum_mistakes_best << ','
        << fmt_g9(row.avg_regret) << ',' << row.memory_slots << '\n';
  }
}

// Audit dump of pool refills: "first_day refill_index member,member,...".
inline void write_refill_log(std::ostream& out, const RunReport& report) {
  for (const RefillRecord& r : report.refills) {
    out << r.first_day << ' ' << r.refill_index << ' ';
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      if (i) out << ',';
      out << r.members[i];
    }
    out << '\n';
  }
}

}  // namespace expertstream
