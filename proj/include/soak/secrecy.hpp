#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "soak/allocation.hpp"
#include "soak/channel.hpp"
#include "soak/errors.hpp"
#include "soak/stats.hpp"

// =============================================================================
/// @file secrecy.hpp
/// @brief Closed-form secrecy quantities: rates, complete-outage
///        probabilities, main-channel outage, and the Markov outage bound.
// =============================================================================

namespace soak {

/// Target secrecy rate rs0 in bits per channel use. threshold() is the
/// recurring low-SNR comparison level 2 ln(2) rs0, recomputed on demand.
class TargetRate {
 public:
  explicit TargetRate(double rs0) : rs0_(rs0) {
    detail::require_finite(rs0_, "rs0");
    if (rs0_ < 0.0) throw DomainError("target rate must be >= 0");
  }

  double rs0() const noexcept { return rs0_; }
  double threshold() const noexcept { return 2.0 * std::numbers::ln2 * rs0_; }

 private:
  double rs0_;
};

namespace detail {

inline void require_same_shape(const ChannelInstance& inst,
                               const EavesdropperRealization& realization,
                               const PowerAllocation& alloc) {
  if (realization.size() != inst.size() || alloc.size() != inst.size()) {
    throw ShapeError("instance, realization, allocation lengths disagree");
  }
}

}  // namespace detail

/// sum_i [1/2 log2(1 + |h_i|^2 P_i) - 1/2 log2(1 + |g_i|^2 P_i)]^+ in bits
/// per channel use, at the given allocation.
inline double secrecy_rate_exact(const ChannelInstance& inst,
                                 const EavesdropperRealization& realization,
                                 const PowerAllocation& alloc) {
  detail::require_same_shape(inst, realization, alloc);
  double rate = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double p = alloc.p()[i];
    const double gain = std::log2(1.0 + std::norm(inst.h()[i]) * p) -
                        std::log2(1.0 + std::norm(realization.g()[i]) * p);
    if (gain > 0.0) rate += 0.5 * gain;
  }
  return rate;
}

/// Low-SNR secrecy rate (1 / (2 ln 2)) sum_i [|h_i|^2 - |g_i|^2]^+ P_i.
inline double secrecy_rate_low_snr(const ChannelInstance& inst,
                                   const EavesdropperRealization& realization,
                                   const PowerAllocation& alloc) {
  detail::require_same_shape(inst, realization, alloc);
  double sum = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double diff =
        std::norm(inst.h()[i]) - std::norm(realization.g()[i]);
    if (diff > 0.0) sum += diff * alloc.p()[i];
  }
  return sum / (2.0 * std::numbers::ln2);
}

/// Central-approximation complete outage for given instantaneous gains:
///   exp(-sum_i |h_i|^2 / (|g_hat_i|^2 + eps2_i)).
/// A channel with |g_hat_i|^2 + eps2_i = 0 contributes factor 1{|h_i| = 0}.
inline double complete_outage_instantaneous_approx(const ChannelInstance& inst) {
  double exponent = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double h2 = std::norm(inst.h()[i]);
    if (h2 == 0.0) continue;
    const double denom = std::norm(inst.g_hat()[i]) + inst.eps2()[i];
    if (denom == 0.0) return 0.0;
    exponent += h2 / denom;
  }
  return std::exp(-exponent);
}

/// Exact complete outage for given instantaneous gains:
///   prod_i Pr(|h_i| < |g_i|)
///     = prod_i (1 - F_nc(2 |h_i|^2 / eps2_i; 2 |g_hat_i|^2 / eps2_i)).
/// A channel with eps2_i = 0 degenerates to the indicator 1{|h_i| < |g_hat_i|}.
inline double complete_outage_instantaneous_exact(const ChannelInstance& inst) {
  double product = 1.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double h2 = std::norm(inst.h()[i]);
    const double e2 = inst.eps2()[i];
    if (e2 == 0.0) {
      if (!(h2 < std::norm(inst.g_hat()[i]))) return 0.0;
      continue;
    }
    const double eta = 2.0 * h2 / e2;
    const double lambda2 = 2.0 * std::norm(inst.g_hat()[i]) / e2;
    product *= 1.0 - noncentral_chi2_cdf_dof2(eta, lambda2);
    if (product == 0.0) return 0.0;
  }
  return product;
}

/// How the eavesdropper estimate variance and the uncertainty variance
/// combine into the mean power E|g_i|^2 of the faded eavesdropper gain.
enum class FadingMode {
  /// Rayleigh scale parameters add: E|g|^2 = (sigma_e + eps)^2.
  scale_additive,
  /// Variances add: E|g|^2 = sigma_e2 + eps2.
  variance_additive,
};

/// Mean eavesdropper power E|g_i|^2 under the selected mode.
inline double eavesdropper_mean_power(double sigma_e2, double eps2,
                                      FadingMode mode) {
  if (mode == FadingMode::scale_additive) {
    const double scale = std::sqrt(sigma_e2) + std::sqrt(eps2);
    return scale * scale;
  }
  return sigma_e2 + eps2;
}

/// Average complete outage over the fading ensemble:
///   prod_i 1 / (1 + rho_i),  rho_i = sigma_m2_i / E|g_i|^2.
inline double complete_outage_fading(
    const FadingEnsemble& ensemble,
    FadingMode mode = FadingMode::scale_additive) {
  double product = 1.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double rho =
        ensemble.sigma_m2()[i] /
        eavesdropper_mean_power(ensemble.sigma_e2()[i], ensemble.eps2()[i], mode);
    product *= 1.0 / (1.0 + rho);
  }
  return product;
}

/// Probability that even the strongest main channel cannot sustain rs0 at
/// budget P in the low-SNR model:
///   prod_i (1 - exp(-2 ln(2) rs0 / (P sigma_m2_i))).
inline double main_channel_outage_fading(const FadingEnsemble& ensemble,
                                         double budget,
                                         const TargetRate& target) {
  detail::require_finite(budget, "budget");
  if (budget <= 0.0) throw DomainError("budget must be > 0");
  double product = 1.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    product *= -std::expm1(-target.threshold() /
                           (budget * ensemble.sigma_m2()[i]));
  }
  return product;
}

/// Markov upper bound on the low-SNR outage probability:
///   sum_i (eps2_i + |g_hat_i|^2) P_i / (sum_i |h_i|^2 P_i - 2 ln(2) rs0).
/// Returned unclamped; values above 1 expose bound looseness. Throws
/// InfeasibleTargetError when the denominator slack is not positive.
inline double markov_outage_bound(const ChannelInstance& inst,
                                  const PowerAllocation& alloc,
                                  const TargetRate& target) {
  if (alloc.size() != inst.size()) {
    throw ShapeError("instance and allocation lengths disagree");
  }
  double numerator = 0.0;
  double signal = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double p = alloc.p()[i];
    numerator += (inst.eps2()[i] + std::norm(inst.g_hat()[i])) * p;
    signal += std::norm(inst.h()[i]) * p;
  }
  const double slack = signal - target.threshold();
  if (slack <= 0.0) {
    throw InfeasibleTargetError("main channel cannot sustain target rate");
  }
  return numerator / slack;
}

/// Low-SNR outage event in its summed form:
///   sum_i |h_i|^2 P_i - 2 ln(2) rs0 < sum_i |g_i|^2 P_i.
inline bool bound_event(const ChannelInstance& inst,
                        const EavesdropperRealization& realization,
                        const PowerAllocation& alloc,
                        const TargetRate& target) {
  detail::require_same_shape(inst, realization, alloc);
  double signal = 0.0;
  double leak = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double p = alloc.p()[i];
    signal += std::norm(inst.h()[i]) * p;
    leak += std::norm(realization.g()[i]) * p;
  }
  return signal - target.threshold() < leak;
}

}  // namespace soak
