#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "soak/channel.hpp"
#include "soak/errors.hpp"
#include "soak/rng.hpp"

// =============================================================================
/// @file allocation.hpp
/// @brief Power-allocation strategies over the budget simplex, including the
///        robust linear-fractional allocator and its sampling oracle.
// =============================================================================

namespace soak {

/// Relative margin for calling a fractional-objective denominator positive.
inline constexpr double kLfpFeasibilityTol = 1e-12;

/// A denominator d.p - offset counts as feasible only when it clears the
/// relative margin; at the boundary the objective blows up and the bound is
/// vacuous.
inline bool lfp_denominator_feasible(double dp, double offset) {
  return dp - offset > kLfpFeasibilityTol * std::max(1.0, dp);
}

/// Nonnegative per-channel powers under a total budget.
class PowerAllocation {
 public:
  PowerAllocation(std::vector<double> p, double budget)
      : p_(std::move(p)), budget_(budget) {
    if (p_.empty()) throw ShapeError("channel count must be >= 1");
    detail::require_finite(budget_, "budget");
    if (budget_ <= 0.0) throw DomainError("budget must be > 0");
    double total = 0.0;
    for (double v : p_) {
      detail::require_finite(v, "p");
      if (v < 0.0) throw DomainError("powers must be >= 0");
      total += v;
    }
    if (total > budget_ + 1e-12 * std::max(1.0, budget_)) {
      throw DomainError("powers exceed the budget");
    }
  }

  std::size_t size() const noexcept { return p_.size(); }
  const std::vector<double>& p() const noexcept { return p_; }
  double budget() const noexcept { return budget_; }

 private:
  std::vector<double> p_;
  double budget_;
};

/// min c.p / (d.p - offset) over {sum p = budget, p >= 0}.
class LfpProblem {
 public:
  LfpProblem(std::vector<double> c, std::vector<double> d, double offset,
             double budget)
      : c_(std::move(c)), d_(std::move(d)), offset_(offset), budget_(budget) {
    if (c_.empty()) throw ShapeError("channel count must be >= 1");
    if (d_.size() != c_.size()) throw ShapeError("c and d must have equal length");
    for (double v : c_) {
      detail::require_finite(v, "c");
      if (v < 0.0) throw DomainError("c must be >= 0");
    }
    for (double v : d_) {
      detail::require_finite(v, "d");
      if (v < 0.0) throw DomainError("d must be >= 0");
    }
    detail::require_finite(offset_, "offset");
    if (offset_ < 0.0) throw DomainError("offset must be >= 0");
    detail::require_finite(budget_, "budget");
    if (budget_ <= 0.0) throw DomainError("budget must be > 0");
  }

  std::size_t size() const noexcept { return c_.size(); }
  const std::vector<double>& c() const noexcept { return c_; }
  const std::vector<double>& d() const noexcept { return d_; }
  double offset() const noexcept { return offset_; }
  double budget() const noexcept { return budget_; }

  /// Objective at an allocation; infinity when the denominator margin fails.
  double objective(const std::vector<double>& p) const {
    if (p.size() != size()) throw ShapeError("allocation length mismatch");
    double num = 0.0;
    double dp = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      num += c_[i] * p[i];
      dp += d_[i] * p[i];
    }
    if (!lfp_denominator_feasible(dp, offset_)) {
      return std::numeric_limits<double>::infinity();
    }
    return num / (dp - offset_);
  }

 private:
  std::vector<double> c_;
  std::vector<double> d_;
  double offset_;
  double budget_;
};

/// Robust-allocation coefficients for an instance: c_i = eps2_i + |g_hat_i|^2,
/// d_i = |h_i|^2, with the rate threshold 2 ln(2) rs0 as the offset.
inline LfpProblem make_lfp_problem(const ChannelInstance& inst,
                                   double rate_threshold, double budget) {
  const std::size_t n = inst.size();
  std::vector<double> c(n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = inst.eps2()[i] + std::norm(inst.g_hat()[i]);
    d[i] = std::norm(inst.h()[i]);
  }
  return LfpProblem(std::move(c), std::move(d), rate_threshold, budget);
}

namespace detail {

inline PowerAllocation corner_allocation(std::size_t n, std::size_t index,
                                         double budget) {
  std::vector<double> p(n, 0.0);
  p[index] = budget;
  return PowerAllocation(std::move(p), budget);
}

}  // namespace detail

/// P_i = budget / n on every channel.
inline PowerAllocation equal_power(std::size_t n, double budget) {
  if (n == 0) throw ShapeError("channel count must be >= 1");
  if (!(budget > 0.0)) throw DomainError("budget must be > 0");
  return PowerAllocation(std::vector<double>(n, budget / static_cast<double>(n)),
                         budget);
}

/// Entire budget on the strongest main channel (argmax |h_i|^2, lowest index
/// on ties).
inline PowerAllocation optimum_capacity(const ChannelInstance& inst,
                                        double budget) {
  std::size_t best = 0;
  double best_gain = std::norm(inst.h()[0]);
  for (std::size_t i = 1; i < inst.size(); ++i) {
    const double gain = std::norm(inst.h()[i]);
    if (gain > best_gain) {
      best_gain = gain;
      best = i;
    }
  }
  return detail::corner_allocation(inst.size(), best, budget);
}

/// Entire budget on argmax (|h_i|^2 - |g_hat_i|^2), ignoring uncertainty;
/// lowest index on ties.
inline PowerAllocation optimum_secrecy(const ChannelInstance& inst,
                                       double budget) {
  std::size_t best = 0;
  double best_diff = std::norm(inst.h()[0]) - std::norm(inst.g_hat()[0]);
  for (std::size_t i = 1; i < inst.size(); ++i) {
    const double diff = std::norm(inst.h()[i]) - std::norm(inst.g_hat()[i]);
    if (diff > best_diff) {
      best_diff = diff;
      best = i;
    }
  }
  return detail::corner_allocation(inst.size(), best, budget);
}

/// Corner solution of the linear fractional program.
struct RobustSolution {
  PowerAllocation allocation;
  double objective;
  std::size_t channel;  ///< 0-based index of the chosen corner
};

/// Minimizes c.p / (d.p - offset) by enumerating the simplex corners
/// p = budget * e_i. Only corners with a feasible denominator participate;
/// ties pick the lowest index. Throws InfeasibleTargetError when no corner is
/// feasible (the main channel cannot sustain the target rate).
inline RobustSolution robust_lfp(const LfpProblem& problem) {
  const double budget = problem.budget();
  bool found = false;
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double dp = problem.d()[i] * budget;
    if (!lfp_denominator_feasible(dp, problem.offset())) continue;
    const double value = problem.c()[i] * budget / (dp - problem.offset());
    if (!found || value < best_value) {
      found = true;
      best = i;
      best_value = value;
    }
  }
  if (!found) {
    throw InfeasibleTargetError("main channel cannot sustain target rate");
  }
  return {detail::corner_allocation(problem.size(), best, budget), best_value,
          best};
}

/// Best objective found by uniform sampling of the budget simplex.
struct OracleSolution {
  PowerAllocation allocation;
  double objective;
  std::size_t feasible_count;  ///< samples with a feasible denominator
};

/// Draws `samples` allocations uniformly from {sum p = budget, p >= 0} via
/// normalized exponential spacings and returns the minimum objective among
/// the feasible ones. Corners are never injected, so the draw stays an
/// independent check on the corner solution. Throws NoDataError when every
/// sample is infeasible.
inline OracleSolution lfp_sampling_oracle(const LfpProblem& problem,
                                          std::size_t samples,
                                          RngStream& rng) {
  if (samples == 0) throw DomainError("sample count must be >= 1");
  const std::size_t n = problem.size();
  const double budget = problem.budget();
  std::vector<double> p(n);
  std::vector<double> best_p;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t feasible = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.next_exponential();
      total += p[i];
    }
    if (total == 0.0) continue;
    double num = 0.0;
    double dp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] *= budget / total;
      num += problem.c()[i] * p[i];
      dp += problem.d()[i] * p[i];
    }
    if (!lfp_denominator_feasible(dp, problem.offset())) continue;
    ++feasible;
    const double value = num / (dp - problem.offset());
    if (value < best_value) {
      best_value = value;
      best_p = p;
    }
  }
  if (feasible == 0) {
    throw NoDataError("sampling oracle found no feasible allocation");
  }
  return {PowerAllocation(std::move(best_p), budget), best_value, feasible};
}

}  // namespace soak
