#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expertstream/format.hpp"
#include "expertstream/rng.hpp"

namespace expertstream {

// Finite, strictly increasing output domain for the private median.
struct OrderedDomain {
  std::vector<std::int64_t> elements;

  void validate() const {
    if (elements.empty()) throw std::invalid_argument("OrderedDomain: must be non-empty");
    for (std::size_t i = 1; i < elements.size(); ++i)
      if (!(elements[i - 1] < elements[i]))
        throw std::invalid_argument("OrderedDomain: elements must be strictly increasing");
  }

  std::size_t size() const { return elements.size(); }

  bool contains(std::int64_t v) const {
    return std::binary_search(elements.begin(), elements.end(), v);
  }
};

struct Composed {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Advanced composition of k (epsilon, delta)-DP calls with failure slack
// delta_prime: epsilon' = sqrt(2 k ln(1/delta')) epsilon + 2 k epsilon^2,
// delta_total = k delta + delta_prime.
inline Composed compose(double epsilon, double delta, std::size_t k, double delta_prime) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("compose: epsilon must be nonnegative");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("compose: delta must lie in [0,1)");
  if (!(delta_prime > 0.0 && delta_prime <= 1.0))
    throw std::invalid_argument("compose: delta_prime must lie in (0,1]");
  const double kd = static_cast<double>(k);
  Composed out;
  out.epsilon = std::sqrt(2.0 * kd * std::log(1.0 / delta_prime)) * epsilon +
                2.0 * kd * epsilon * epsilon;
  out.delta = kd * delta + delta_prime;
  return out;
}

// H(p) in bits, with H(0) = H(1) = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p must lie in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

namespace detail {

// Two-sided rank deviation of x within sorted db: 0 when x sits between the
// lower and upper median, otherwise how far the closer side falls short of
// |D|/2. Swapping one database element moves each side count by at most one.
inline double rank_deviation(const std::vector<std::int64_t>& sorted_db, std::int64_t x) {
  const double half = static_cast<double>(sorted_db.size()) / 2.0;
  const auto lo = std::lower_bound(sorted_db.begin(), sorted_db.end(), x);
  const auto hi = std::upper_bound(sorted_db.begin(), sorted_db.end(), x);
  const double at_most = static_cast<double>(hi - sorted_db.begin());
  const double at_least = static_cast<double>(sorted_db.end() - lo);
  return std::max({0.0, half - at_most, half - at_least});
}

}  // namespace detail

// Exponential-mechanism weights exp(-epsilon * deviation / 2), normalized.
// Exposed so closed-form probabilities can be checked without sampling.
inline std::vector<double> privmed_distribution(const std::vector<std::int64_t>& database,
                                                const OrderedDomain& domain, double epsilon) {
  domain.validate();
  if (database.empty()) throw std::invalid_argument("priv_median: database must be non-empty");
  if (!(epsilon > 0.0)) throw std::invalid_argument("priv_median: epsilon must be positive");
  std::vector<std::int64_t> sorted_db(database);
  std::sort(sorted_db.begin(), sorted_db.end());
  for (std::int64_t v : sorted_db)
    if (!domain.contains(v))
      throw std::invalid_argument("priv_median: database element outside the domain");

  std::vector<double> log_w(domain.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    log_w[i] = -epsilon * detail::rank_deviation(sorted_db, domain.elements[i]) / 2.0;
    max_log = std::max(max_log, log_w[i]);
  }
  double total = 0.0;
  for (double& w : log_w) {
    w = std::exp(w - max_log);  // max subtraction keeps the largest weight at 1
    total += w;
  }
  for (double& w : log_w) w /= total;
  return log_w;
}

// Differentially private median over a finite ordered domain.
inline std::int64_t priv_median(const std::vector<std::int64_t>& database,
                                const OrderedDomain& domain, double epsilon, Rng& rng) {
  const std::vector<double> probs = privmed_distribution(database, domain, epsilon);
  const double draw = rng.uniform01();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (draw < cum) return domain.elements[i];
  }
  return domain.elements.back();
}

// With probability >= 1 - delta the returned element's rank error is below
// this bound.
inline double privmed_rank_error_bound(double epsilon, std::size_t domain_size, double delta) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("rank bound: epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("rank bound: delta must lie in (0,1)");
  if (domain_size < 1) throw std::invalid_argument("rank bound: empty domain");
  return (2.0 / epsilon) * std::log(static_cast<double>(domain_size) / delta);
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion at z standard deviations.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 3.0) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: no trials");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double zz = z * z;
  const double denom = 1.0 + zz / n;
  const double center = (p + zz / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + zz / (4.0 * n * n)) / denom;
  return Interval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct AuditRow {
  std::int64_t outcome = 0;
  double freq_d = 0.0;
  double freq_dprime = 0.0;
  double log_ratio = 0.0;  // +/-inf when one side never produced the outcome
  double slack = 0.0;      // statistical head-room granted by the Wilson bounds
  bool flagged = false;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  double max_abs_log_ratio = 0.0;
  double epsilon_claimed = 0.0;
  std::size_t trials = 0;
  bool flagged = false;
};

// True when the multisets have equal size and differ by swapping exactly one
// element.
inline bool neighboring(std::vector<std::int64_t> d, std::vector<std::int64_t> dprime) {
  if (d.size() != dprime.size()) return false;
  std::sort(d.begin(), d.end());
  std::sort(dprime.begin(), dprime.end());
  std::vector<std::int64_t> only_d, only_dp;
  std::set_difference(d.begin(), d.end(), dprime.begin(), dprime.end(),
                      std::back_inserter(only_d));
  std::set_difference(dprime.begin(), dprime.end(), d.begin(), d.end(),
                      std::back_inserter(only_dp));
  return only_d.size() == 1 && only_dp.size() == 1;
}

// Empirically compares a mechanism's output distribution on two neighboring
// databases. Flags an outcome only when the Wilson z=3 intervals already prove
// a log-ratio above the claimed epsilon, so sampling noise alone cannot flag.
template <typename Mechanism>
AuditReport dp_ratio_audit(Mechanism&& mechanism, const std::vector<std::int64_t>& d,
                           const std::vector<std::int64_t>& dprime, const OrderedDomain& domain,
                           std::size_t trials, double epsilon_claimed, Rng& rng) {
  domain.validate();
  if (trials < 100000)
    throw std::invalid_argument("dp_ratio_audit: need at least 100000 trials per database");
  if (!(epsilon_claimed >= 0.0))
    throw std::invalid_argument("dp_ratio_audit: claimed epsilon must be nonnegative");
  if (!neighboring(d, dprime))
    throw std::invalid_argument("dp_ratio_audit: databases are not neighbors");

  const auto outcome_slot = [&](std::int64_t v) {
    const auto it = std::lower_bound(domain.elements.begin(), domain.elements.end(), v);
    if (it == domain.elements.end() || *it != v)
      throw std::logic_error("dp_ratio_audit: mechanism output outside the domain");
    return static_cast<std::size_t>(it - domain.elements.begin());
  };

  std::vector<std::size_t> count_d(domain.size(), 0), count_dp(domain.size(), 0);
  for (std::size_t t = 0; t < trials; ++t) ++count_d[outcome_slot(mechanism(d, rng))];
  for (std::size_t t = 0; t < trials; ++t) ++count_dp[outcome_slot(mechanism(dprime, rng))];

  const double inf = std::numeric_limits<double>::infinity();
  const auto safe_log = [&](double v) { return v > 0.0 ? std::log(v) : -inf; };

  AuditReport report;
  report.epsilon_claimed = epsilon_claimed;
  report.trials = trials;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (count_d[i] == 0 && count_dp[i] == 0) continue;
    AuditRow row;
    row.outcome = domain.elements[i];
    row.freq_d = static_cast<double>(count_d[i]) / static_cast<double>(trials);
    row.freq_dprime = static_cast<double>(count_dp[i]) / static_cast<double>(trials);
    if (count_d[i] > 0 && count_dp[i] > 0)
      row.log_ratio = std::log(row.freq_d / row.freq_dprime);
    else
      row.log_ratio = count_d[i] > 0 ? inf : -inf;

    const Interval iv_d = wilson_interval(count_d[i], trials);
    const Interval iv_dp = wilson_interval(count_dp[i], trials);
    const double confident_lower = std::max(safe_log(iv_d.lo) - safe_log(iv_dp.hi),
                                            safe_log(iv_dp.lo) - safe_log(iv_d.hi));
    row.flagged = confident_lower > epsilon_claimed;
    row.slack = std::abs(row.log_ratio) - confident_lower;
    report.flagged = report.flagged || row.flagged;
    report.max_abs_log_ratio = std::max(report.max_abs_log_ratio, std::abs(row.log_ratio));
    report.rows.push_back(row);
  }
  return report;
}

inline constexpr std::string_view kAuditHeader = "outcome,freq_D,freq_Dprime,log_ratio,slack";

inline void write_audit_csv(std::ostream& out, const AuditReport& report) {
  out << kAuditHeader << '\n';
  for (const AuditRow& row : report.rows) {
    out << row.outcome << ',' << fmt_g9(row.freq_d) << ',' << fmt_g9(row.freq_dprime) << ','
        << fmt_g9(row.log_ratio) << ',' << fmt_g9(row.slack) << '\n';
  }
}

}  // namespace expertstream
