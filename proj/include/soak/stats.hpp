#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "soak/errors.hpp"
#include "soak/rng.hpp"

// =============================================================================
/// @file stats.hpp
/// @brief Chi-square CDFs with 2 degrees of freedom and circular Gaussian
///        sampling.
///
/// The squared magnitude of a complex circular Gaussian CN(m, v), scaled by
/// 2/v, is noncentral chi-square with 2 d.o.f. and noncentrality 2|m|^2/v.
/// Everything here works on that two-d.o.f. case.
// =============================================================================

namespace soak {

/// Mixture-series truncation threshold for the noncentral CDF.
inline constexpr double kChi2SeriesTol = 1e-14;
/// Iteration cap for the mixture series.
inline constexpr int kChi2SeriesMaxIter = 10000;

namespace detail {

inline void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0)) throw DomainError(std::string(name) + " must be >= 0");
}

}  // namespace detail

/// Pr(chi2_2 < eta) = 1 - exp(-eta/2).
inline double central_chi2_cdf_dof2(double eta) {
  detail::require_nonnegative(eta, "eta");
  return -std::expm1(-0.5 * eta);
}

/// Exact CDF of the noncentral chi-square with 2 d.o.f. and noncentrality
/// lambda2, equal to 1 - Q1(sqrt(lambda2), sqrt(eta)).
///
/// Evaluated as the Poisson mixture of central chi-square CDFs,
///   sum_k e^{-l/2} (l/2)^k / k! * P(chi2 with 2+2k d.o.f. <= eta),
/// with weights and increments carried in log space. The series stops once
/// a term drops below kChi2SeriesTol past the Poisson mode, or when the
/// remaining mixture components have zero CDF mass.
inline double noncentral_chi2_cdf_dof2(double eta, double lambda2) {
  detail::require_nonnegative(eta, "eta");
  detail::require_nonnegative(lambda2, "lambda2");
  if (eta == 0.0) return 0.0;
  if (lambda2 == 0.0) return central_chi2_cdf_dof2(eta);

  const double half_eta = 0.5 * eta;
  const double half_l = 0.5 * lambda2;
  const double log_half_eta = std::log(half_eta);
  const double log_half_l = std::log(half_l);

  double log_weight = -half_l;            // log Poisson(k; half_l), k = 0
  double log_tick = -half_eta;            // log of e^{-eta/2} (eta/2)^k / k!
  double cdf_k = -std::expm1(-half_eta);  // P(chi2_{2+2k} <= eta), k = 0
  double sum = std::exp(log_weight) * cdf_k;

  for (int k = 1; k <= kChi2SeriesMaxIter; ++k) {
    const double log_k = std::log(static_cast<double>(k));
    log_weight += log_half_l - log_k;
    log_tick += log_half_eta - log_k;
    cdf_k -= std::exp(log_tick);
    if (cdf_k <= 0.0) return std::min(sum, 1.0);
    const double term = std::exp(log_weight) * cdf_k;
    sum += term;
    if (term < kChi2SeriesTol && static_cast<double>(k) >= half_l) {
      return std::min(sum, 1.0);
    }
  }
  throw NumericError("noncentral chi-square series did not converge");
}

/// Central approximation of the noncentral CDF:
///   Pr(chi2 < eta) ~ 1 - exp(-eta / (2 (1 + lambda2/2))).
/// Collapses to the central CDF at lambda2 = 0.
inline double approx_noncentral_chi2_cdf_dof2(double eta, double lambda2) {
  detail::require_nonnegative(eta, "eta");
  detail::require_nonnegative(lambda2, "lambda2");
  return -std::expm1(-eta / (2.0 + lambda2));
}

/// One draw of CN(mean, variance): real and imaginary parts are independent
/// N(., variance/2) around the parts of mean. variance = 0 returns mean.
inline std::complex<double> sample_complex_gaussian(std::complex<double> mean,
                                                    double variance,
                                                    RngStream& rng) {
  detail::require_nonnegative(variance, "variance");
  const auto [re, im] = rng.next_normal_pair();
  const double sd = std::sqrt(0.5 * variance);
  return {mean.real() + sd * re, mean.imag() + sd * im};
}

}  // namespace soak
