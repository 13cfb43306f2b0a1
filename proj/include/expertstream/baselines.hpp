#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "expertstream/rng.hpp"
#include "expertstream/types.hpp"

namespace expertstream {

namespace detail {

inline constexpr double kWeightFloor = 0x1.0p-512;
inline constexpr double kWeightScale = 0x1.0p+512;

// Keeps head-room in the exponent; relative weights are unchanged.
inline void renormalize_if_tiny(std::vector<double>& weights) {
  double max_w = 0.0;
  for (double w : weights)
    if (w > max_w) max_w = w;
  if (max_w > 0.0 && max_w < kWeightFloor) {
    for (double& w : weights) w *= kWeightScale;
  }
}

inline void check_not_degenerate(const std::vector<double>& weights) {
  for (double w : weights)
    if (w > 0.0) return;
  throw std::domain_error("weight vector is degenerate (all zero)");
}

// All-zero vectors are accepted here; the degenerate error surfaces at
// prediction time, not construction time.
inline void check_weight_vector(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("weight vector must be nonempty");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weights must be finite and nonnegative");
}

}  // namespace detail

// Deterministic weighted majority. Wrong experts are scaled by beta after the
// outcome; prediction is the weighted vote with ties going to 1.
class WeightedMajority {
 public:
  explicit WeightedMajority(std::size_t n, double beta = 0.5)
      : WeightedMajority(std::vector<double>(n < 1 ? 1 : n, 1.0), beta) {
    if (n < 1) throw std::invalid_argument("WeightedMajority: need at least one expert");
  }

  // Resumes from an explicit weight state.
  WeightedMajority(std::vector<double> weights, double beta)
      : weights_(std::move(weights)), beta_(beta) {
    detail::check_weight_vector(weights_);
    if (!(beta > 0.0 && beta < 1.0))
      throw std::invalid_argument("WeightedMajority: beta must lie in (0,1)");
  }

  std::string_view name() const { return "wm"; }
  std::size_t expert_count() const { return weights_.size(); }
  std::size_t slots_in_use() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double beta() const { return beta_; }

  Bit predict(std::span<const Bit> preds) const {
    detail::check_not_degenerate(weights_);
    double mass_one = 0.0, mass_zero = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      (preds[i] ? mass_one : mass_zero) += weights_[i];
    return mass_one >= mass_zero ? Bit{1} : Bit{0};
  }

  void update(std::span<const Bit> preds, Bit outcome) {
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (preds[i] != outcome) weights_[i] *= beta_;
    detail::renormalize_if_tiny(weights_);
  }

 private:
  std::vector<double> weights_;
  double beta_;
};

// Randomized multiplicative weights. Predicts 1 with probability equal to the
// weight fraction supporting 1; wrong experts are scaled by (1 - eta).
class MultiplicativeWeights {
 public:
  MultiplicativeWeights(std::size_t n, double eta, Rng rng)
      : MultiplicativeWeights(std::vector<double>(n < 1 ? 1 : n, 1.0), eta, std::move(rng)) {
    if (n < 1) throw std::invalid_argument("MultiplicativeWeights: need at least one expert");
  }

  // Resumes from an explicit weight state.
  MultiplicativeWeights(std::vector<double> weights, double eta, Rng rng)
      : weights_(std::move(weights)), eta_(eta), rng_(std::move(rng)) {
    detail::check_weight_vector(weights_);
    if (!(eta >= 0.0 && eta < 1.0))
      throw std::invalid_argument("MultiplicativeWeights: eta must lie in [0,1)");
  }

  MultiplicativeWeights(std::size_t n, std::size_t T, Rng rng)
      : MultiplicativeWeights(n, default_eta(n, T), std::move(rng)) {}

  static double default_eta(std::size_t n, std::size_t T) {
    if (n < 1 || T < 1) throw std::invalid_argument("default_eta: empty shape");
    return std::min(0.5, std::sqrt(std::log(static_cast<double>(n)) /
                                   static_cast<double>(T)));
  }

  std::string_view name() const { return "mw"; }
  std::size_t expert_count() const { return weights_.size(); }
  std::size_t slots_in_use() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double eta() const { return eta_; }

  double probability_of_one(std::span<const Bit> preds) const {
    detail::check_not_degenerate(weights_);
    double mass_one = 0.0, total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      total += weights_[i];
      if (preds[i]) mass_one += weights_[i];
    }
    return mass_one / total;
  }

  Bit predict(std::span<const Bit> preds) {
    return rng_.bernoulli(probability_of_one(preds)) ? Bit{1} : Bit{0};
  }

  void update(std::span<const Bit> preds, Bit outcome) {
    const double factor = 1.0 - eta_;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (preds[i] != outcome) weights_[i] *= factor;
    detail::renormalize_if_tiny(weights_);
  }

 private:
  std::vector<double> weights_;
  double eta_;
  Rng rng_;
};

}  // namespace expertstream
