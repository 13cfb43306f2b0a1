#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expertstream/format.hpp"
#include "expertstream/mathutil.hpp"
#include "expertstream/rng.hpp"
#include "expertstream/types.hpp"

namespace expertstream {

namespace detail {

inline void check_pool_shape(std::size_t n, double R, std::size_t T) {
  if (n < 1) throw std::invalid_argument("pool size: need at least one expert");
  if (T < 1) throw std::invalid_argument("pool size: need at least one day");
  if (!(R > 0.0)) throw std::invalid_argument("pool size: regret target must be positive");
}

}  // namespace detail

enum class PoolMode { Deterministic, Sampled };

// Working set of a pool algorithm: the live pool, its capacity, and the
// deterministic cursor (remaining = [next_index, n) in index order).
struct PoolState {
  std::vector<std::uint32_t> pool;
  std::size_t capacity = 1;
  std::size_t next_index = 0;
  PoolMode mode = PoolMode::Deterministic;
  std::size_t resample_count = 0;
};

// ceil(2 n M log2(n) / (R T)), clamped to [1, n].
inline std::size_t det_pool_size(std::size_t n, std::size_t M, double R, std::size_t T) {
  detail::check_pool_shape(n, R, T);
  const double raw = 2.0 * static_cast<double>(n) * static_cast<double>(M) *
                     std::log2(static_cast<double>(n)) /
                     (R * static_cast<double>(T));
  return std::clamp<std::size_t>(detail::ceil_snapped(raw), 1, n);
}

// ceil(alpha n log2(nT) / (R T)), clamped to [1, n].
inline std::size_t discpred_pool_size(std::size_t n, double R, std::size_t T, double alpha = 1.0) {
  detail::check_pool_shape(n, R, T);
  if (!(alpha > 0.0)) throw std::invalid_argument("pool size: alpha must be positive");
  const double raw = alpha * static_cast<double>(n) *
                     std::log2(static_cast<double>(n) * static_cast<double>(T)) /
                     (R * static_cast<double>(T));
  return std::clamp<std::size_t>(detail::ceil_snapped(raw), 1, n);
}

// Majority vote of the pool members' predictions; ties go to 1.
inline Bit pool_predict(const PoolState& state, std::span<const Bit> preds) {
  if (state.pool.empty()) throw std::logic_error("pool_predict: pool is empty");
  std::size_t ones = 0;
  for (std::uint32_t i : state.pool) ones += preds[i] ? 1u : 0u;
  return (2 * ones >= state.pool.size()) ? Bit{1} : Bit{0};
}

inline void pool_delete_incorrect(PoolState& state, std::span<const Bit> preds, Bit outcome) {
  std::erase_if(state.pool,
                [&](std::uint32_t i) { return preds[i] != outcome; });
}

struct ParamCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

namespace detail {

// Shared admissibility test: the regret target must clear
// r_coeff log2^2(n) / T and the mistake budget must stay under
// R^2 T / (128 log2^2(n)). R <= 0 fails both outright.
inline ParamCheck validate_regret_budget(std::size_t n, std::size_t T, double R, std::size_t M,
                                         double r_coeff) {
  if (n < 1 || T < 1) throw std::invalid_argument("parameter check: empty shape");
  ParamCheck check;
  const double log2n = std::log2(static_cast<double>(n));
  const double r_floor = r_coeff * log2n * log2n / static_cast<double>(T);
  if (!(R > 0.0)) {
    check.ok = false;
    check.violations.push_back("regret target must be positive (need R > " + fmt_g9(r_floor) + ")");
    check.violations.push_back("mistake budget unverifiable at nonpositive R");
    return check;
  }
  if (!(R > r_floor)) {
    check.ok = false;
    check.violations.push_back("regret target too small: need R > " + fmt_g9(r_floor) +
                               ", got " + fmt_g9(R));
  }
  if (log2n > 0.0) {
    const double m_ceiling = R * R * static_cast<double>(T) / (128.0 * log2n * log2n);
    if (static_cast<double>(M) > snap(m_ceiling)) {
      check.ok = false;
      check.violations.push_back("mistake budget too large: need M <= " + fmt_g9(m_ceiling) +
                                 ", got " + std::to_string(M));
    }
  }
  return check;
}

}  // namespace detail

inline ParamCheck validate_discpred_params(std::size_t n, std::size_t T, double R, std::size_t M) {
  return detail::validate_regret_budget(n, T, R, M, 16.0);
}

// Deterministic pool algorithm. Keeps a pool of k candidate experts, votes by
// majority, deletes every member that was wrong, and refills from [n] in index
// order, wrapping around when the cursor is exhausted.
class DetPool {
 public:
  DetPool(std::size_t n, std::size_t M, double R, std::size_t T)
      : DetPool(n, det_pool_size(n, M, R, T)) {
    mistake_bound_ = detail::floor_snapped(R * static_cast<double>(T));
  }

  DetPool(std::size_t n, std::size_t k) : n_(n) {
    if (n < 1) throw std::invalid_argument("DetPool: need at least one expert");
    if (k < 1 || k > n) throw std::invalid_argument("DetPool: pool size must lie in [1, n]");
    state_.capacity = k;
    state_.mode = PoolMode::Deterministic;
    state_.pool.reserve(k);
  }

  std::string_view name() const { return "detpool"; }
  std::size_t expert_count() const { return n_; }
  std::size_t pool_size() const { return state_.capacity; }
  const PoolState& state() const { return state_; }
  std::size_t cycle_count() const { return cycle_count_; }
  std::optional<std::size_t> mistake_bound() const { return mistake_bound_; }
  const std::vector<RefillRecord>& refill_log() const { return refills_; }

  // Pool members plus the cursor and capacity counters.
  std::size_t slots_in_use() const { return state_.pool.size() + 2; }

  Bit predict(std::span<const Bit> preds) {
    if (state_.pool.empty()) refill();
    return pool_predict(state_, preds);
  }

  void update(std::span<const Bit> preds, Bit outcome) {
    pool_delete_incorrect(state_, preds, outcome);
    ++day_;
  }

 private:
  void refill() {
    if (state_.next_index >= n_) {
      state_.next_index = 0;
      ++cycle_count_;
    }
    const std::size_t end = std::min(state_.next_index + state_.capacity, n_);
    state_.pool.clear();
    for (std::size_t i = state_.next_index; i < end; ++i)
      state_.pool.push_back(static_cast<std::uint32_t>(i));
    state_.next_index = end;
    refills_.push_back(RefillRecord{day_, state_.resample_count, state_.pool});
    ++state_.resample_count;
  }

  std::size_t n_;
  PoolState state_;
  std::size_t day_ = 0;
  std::size_t cycle_count_ = 1;  // the initial remaining-set counts as one
  std::optional<std::size_t> mistake_bound_;
  std::vector<RefillRecord> refills_;
};

// Sampled pool algorithm. Same delete-the-wrong dynamics as DetPool, but an
// empty pool is repopulated with k experts drawn uniformly without
// replacement, independent of anything deleted before.
class DiscPred {
 public:
  DiscPred(std::size_t n, std::size_t T, double R, double alpha, Rng rng)
      : DiscPred(n, discpred_pool_size(n, R, T, alpha), std::move(rng)) {}

  DiscPred(std::size_t n, std::size_t k, Rng rng) : n_(n), rng_(std::move(rng)) {
    if (n < 1) throw std::invalid_argument("DiscPred: need at least one expert");
    if (k < 1 || k > n) throw std::invalid_argument("DiscPred: pool size must lie in [1, n]");
    state_.capacity = k;
    state_.mode = PoolMode::Sampled;
    state_.pool.reserve(k);
  }

  std::string_view name() const { return "discpred"; }
  std::size_t expert_count() const { return n_; }
  std::size_t pool_size() const { return state_.capacity; }
  const PoolState& state() const { return state_; }
  std::size_t resample_count() const { return state_.resample_count; }
  const std::vector<RefillRecord>& refill_log() const { return refills_; }

  std::size_t slots_in_use() const { return state_.pool.size() + 2; }

  Bit predict(std::span<const Bit> preds) {
    if (state_.pool.empty()) resample();
    return pool_predict(state_, preds);
  }

  void update(std::span<const Bit> preds, Bit outcome) {
    pool_delete_incorrect(state_, preds, outcome);
    ++day_;
  }

 private:
  void resample() {
    state_.pool = rng_.sample_without_replacement(n_, state_.capacity);
    refills_.push_back(RefillRecord{day_, state_.resample_count, state_.pool});
    ++state_.resample_count;
  }

  std::size_t n_;
  PoolState state_;
  std::size_t day_ = 0;
  std::vector<RefillRecord> refills_;
  Rng rng_;
};

}  // namespace expertstream
