#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace expertstream {

using Bit = std::uint8_t;

inline void check_bit(Bit b, const char* what) {
  if (b > 1) throw std::invalid_argument(std::string(what) + ": entries must be 0 or 1");
}

// One day of play: every expert's prediction plus the realized outcome.
struct DayRecord {
  std::vector<Bit> predictions;
  Bit outcome = 0;

  friend bool operator==(const DayRecord&, const DayRecord&) = default;

  void validate(std::size_t n) const {
    if (predictions.size() != n)
      throw std::invalid_argument("DayRecord: prediction count does not match expert count");
    for (Bit b : predictions) check_bit(b, "DayRecord");
    check_bit(outcome, "DayRecord");
  }
};

enum class StreamSource { StoredMatrix, GeneratorWithSeed, AdaptiveAdversary };

// Shape of a prediction stream: n experts over horizon T, with a claimed
// bound M on the best expert's mistakes. M is a promise about the stream,
// not something the stream enforces.
struct StreamSpec {
  std::size_t n = 1;
  std::size_t T = 1;
  std::size_t M = 0;
  StreamSource source = StreamSource::StoredMatrix;

  void validate() const {
    if (n < 1) throw std::invalid_argument("StreamSpec: need at least one expert");
    if (T < 1) throw std::invalid_argument("StreamSpec: need at least one day");
    if (M > T) throw std::invalid_argument("StreamSpec: mistake bound cannot exceed the horizon");
  }
};

// Cumulative mistake counts for the algorithm and every expert.
class RegretLedger {
 public:
  RegretLedger() = default;

  RegretLedger(std::size_t n, std::size_t horizon)
      : horizon_(horizon), expert_mistakes_(n, 0) {
    if (n < 1 || horizon < 1) throw std::invalid_argument("RegretLedger: empty shape");
  }

  void record(std::span<const Bit> expert_predictions, Bit outcome, Bit algorithm_prediction) {
    if (day_ >= horizon_) throw std::logic_error("RegretLedger: horizon already exhausted");
    if (expert_predictions.size() != expert_mistakes_.size())
      throw std::invalid_argument("RegretLedger: prediction count mismatch");
    alg_mistakes_ += (algorithm_prediction != outcome) ? 1u : 0u;
    for (std::size_t i = 0; i < expert_predictions.size(); ++i)
      expert_mistakes_[i] += (expert_predictions[i] != outcome) ? 1u : 0u;
    ++day_;
  }

  std::size_t day() const { return day_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t algorithm_mistakes() const { return alg_mistakes_; }
  const std::vector<std::size_t>& expert_mistakes() const { return expert_mistakes_; }

  // Lowest index among the experts with the fewest mistakes so far.
  std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < expert_mistakes_.size(); ++i)
      if (expert_mistakes_[i] < expert_mistakes_[best]) best = i;
    return best;
  }

  std::size_t best_mistakes() const { return expert_mistakes_[best_index()]; }

  bool finalized() const { return day_ == horizon_; }

 private:
  std::size_t day_ = 0;
  std::size_t horizon_ = 1;
  std::size_t alg_mistakes_ = 0;
  std::vector<std::size_t> expert_mistakes_ = {0};
};

// (algorithm mistakes - best expert mistakes) / T, in [-1, 1].
inline double average_regret(const RegretLedger& ledger) {
  if (!ledger.finalized())
    throw std::logic_error("average_regret: ledger is not finalized");
  const double diff = static_cast<double>(ledger.algorithm_mistakes()) -
                      static_cast<double>(ledger.best_mistakes());
  return diff / static_cast<double>(ledger.horizon());
}

// Privacy spend attributed to one run, already pushed through composition.
struct PrivacyLedgerReport {
  double epsilon_per_call = 0.0;
  double delta_per_call = 0.0;
  std::size_t calls = 0;
  double delta_prime = 0.0;
  double composed_epsilon = 0.0;
  double composed_delta = 0.0;
  double target_epsilon = 0.0;
  bool within_target = true;
};

// One pool (re)fill event. first_day is the first day this pool predicts on.
struct RefillRecord {
  std::size_t first_day = 0;
  std::size_t refill_index = 0;
  std::vector<std::uint32_t> members;
};

// Tracks working-set size in slots. One slot holds one expert index or one
// bounded counter; weight-based algorithms charge one slot per expert.
struct MemoryMeter {
  std::size_t slots_in_use = 0;
  std::size_t peak_slots = 0;
  std::optional<std::size_t> budget;
  bool violated = false;

  void note(std::size_t slots) {
    slots_in_use = slots;
    peak_slots = std::max(peak_slots, slots);
    if (budget && slots > *budget) violated = true;
  }
};

}  // namespace expertstream
