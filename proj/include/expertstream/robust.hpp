#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "expertstream/pool.hpp"
#include "expertstream/privacy.hpp"
#include "expertstream/rng.hpp"
#include "expertstream/types.hpp"

namespace expertstream {

// max(1, ceil(c sqrt(T) log2(nT))) independent sampled-pool instances.
inline std::size_t ensemble_size(std::size_t n, std::size_t T, double c) {
  if (n < 1 || T < 1) throw std::invalid_argument("ensemble_size: empty shape");
  if (!(c > 0.0)) throw std::invalid_argument("ensemble_size: c must be positive");
  const double raw = c * std::sqrt(static_cast<double>(T)) *
                     std::log2(static_cast<double>(n) * static_cast<double>(T));
  return std::max<std::size_t>(1, detail::ceil_snapped(raw));
}

struct PerCallBudget {
  double epsilon0 = 0.0;      // spent by each daily private median
  double delta_prime = 0.0;   // composition slack, (nT)^-2
  std::size_t calls = 0;      // provisioned calls (one per day)
  Composed composed;          // total spend over the horizon
};

// Per-call epsilon c' / (sqrt(T) log2(nT)), pushed through advanced
// composition over T calls. Throws when the composed spend overshoots the
// target; use compose() directly to inspect an over-budget configuration.
inline PerCallBudget per_call_epsilon(std::size_t n, std::size_t T, double c_prime,
                                      double target_epsilon = 1.0) {
  if (n < 1 || T < 1) throw std::invalid_argument("per_call_epsilon: empty shape");
  if (!(c_prime > 0.0)) throw std::invalid_argument("per_call_epsilon: c' must be positive");
  if (!(target_epsilon > 0.0)) throw std::invalid_argument("per_call_epsilon: target must be positive");
  PerCallBudget budget;
  const double nt = static_cast<double>(n) * static_cast<double>(T);
  budget.epsilon0 = c_prime / (std::sqrt(static_cast<double>(T)) * std::log2(nt));
  budget.delta_prime = 1.0 / (nt * nt);
  budget.calls = T;
  budget.composed = compose(budget.epsilon0, 0.0, T, budget.delta_prime);
  if (budget.composed.epsilon > target_epsilon)
    throw std::invalid_argument("per_call_epsilon: composed epsilon " +
                                fmt_g9(budget.composed.epsilon) + " exceeds target " +
                                fmt_g9(target_epsilon) + "; configuration error");
  return budget;
}

inline ParamCheck validate_robust_params(std::size_t n, std::size_t T, double R, std::size_t M) {
  return detail::validate_regret_budget(n, T, R, M, 64.0);
}

struct RobustConfig {
  std::size_t n = 1;
  std::size_t T = 1;
  double R = 1.0;
  double alpha = 1.0;           // instance pool-size constant
  double c = 1.0;               // ensemble-size constant
  double c_prime = 1.0;         // per-call epsilon constant
  double target_epsilon = 1.0;
  bool enforce_budget = true;   // false runs over-budget configs anyway
};

// Privacy-aggregated ensemble: m independent sampled pools, each run at a
// quarter of the regret target, fused each day by a private median over their
// bit predictions. Instances see the true outcome as feedback.
class RobustEnsemble {
 public:
  RobustEnsemble(const RobustConfig& cfg, Rng rng) : cfg_(cfg) {
    if (!(cfg.R > 0.0)) throw std::invalid_argument("RobustEnsemble: regret target must be positive");
    m_ = ensemble_size(cfg.n, cfg.T, cfg.c);
    if (cfg.enforce_budget) {
      budget_ = per_call_epsilon(cfg.n, cfg.T, cfg.c_prime, cfg.target_epsilon);
    } else {
      const double nt = static_cast<double>(cfg.n) * static_cast<double>(cfg.T);
      budget_.epsilon0 = cfg.c_prime / (std::sqrt(static_cast<double>(cfg.T)) * std::log2(nt));
      budget_.delta_prime = 1.0 / (nt * nt);
      budget_.calls = cfg.T;
      budget_.composed = compose(budget_.epsilon0, 0.0, cfg.T, budget_.delta_prime);
    }
    instance_pool_size_ = discpred_pool_size(cfg.n, cfg.R / 4.0, cfg.T, cfg.alpha);
    instances_.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i)
      instances_.emplace_back(cfg.n, instance_pool_size_, rng.substream("instance", i));
    privmed_rng_ = rng.substream("privmed");
    domain_.elements = {0, 1};
  }

  std::string_view name() const { return "robust"; }
  std::size_t expert_count() const { return cfg_.n; }
  std::size_t ensemble_count() const { return m_; }
  std::size_t instance_pool_size() const { return instance_pool_size_; }
  double epsilon0() const { return budget_.epsilon0; }
  const PerCallBudget& provisioned_budget() const { return budget_; }
  std::size_t calls_made() const { return calls_; }

  std::size_t slots_in_use() const {
    std::size_t total = 0;
    for (const DiscPred& inst : instances_) total += inst.slots_in_use();
    return total;
  }

  Bit predict(std::span<const Bit> preds) {
    if (calls_ >= budget_.calls)
      throw std::logic_error("RobustEnsemble: provisioned privacy budget exhausted");
    std::vector<std::int64_t> votes;
    votes.reserve(m_);
    for (DiscPred& inst : instances_)
      votes.push_back(static_cast<std::int64_t>(inst.predict(preds)));
    const std::int64_t med = priv_median(votes, domain_, budget_.epsilon0, privmed_rng_);
    ++calls_;
    return static_cast<Bit>(med);
  }

  void update(std::span<const Bit> preds, Bit outcome) {
    for (DiscPred& inst : instances_) inst.update(preds, outcome);
  }

  PrivacyLedgerReport privacy_report() const {
    PrivacyLedgerReport report;
    report.epsilon_per_call = budget_.epsilon0;
    report.delta_per_call = 0.0;
    report.calls = calls_;
    report.delta_prime = budget_.delta_prime;
    const Composed spent = compose(budget_.epsilon0, 0.0, calls_, budget_.delta_prime);
    report.composed_epsilon = spent.epsilon;
    report.composed_delta = spent.delta;
    report.target_epsilon = cfg_.target_epsilon;
    report.within_target = spent.epsilon <= cfg_.target_epsilon;
    return report;
  }

 private:
  RobustConfig cfg_;
  std::size_t m_ = 1;
  std::size_t instance_pool_size_ = 1;
  PerCallBudget budget_;
  std::vector<DiscPred> instances_;
  Rng privmed_rng_{Seed{0}};
  OrderedDomain domain_;
  std::size_t calls_ = 0;
};

}  // namespace expertstream
