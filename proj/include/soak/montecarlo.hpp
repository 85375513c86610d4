#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "soak/allocation.hpp"
#include "soak/channel.hpp"
#include "soak/errors.hpp"
#include "soak/rng.hpp"
#include "soak/secrecy.hpp"
#include "soak/stats.hpp"

// =============================================================================
/// @file montecarlo.hpp
/// @brief Nested Monte Carlo estimation of the secrecy outage per allocation
///        scheme, with conditioning on main-channel non-outage, plus the
///        parameter sweeps and the closed-form cross-check estimators.
///
/// Stream layout: outer instance j draws (h, g_hat) from stream id 2j and its
/// eavesdropper errors from stream id 2j+1. Every scheme replays stream 2j+1,
/// so schemes are compared on identical samples (common random numbers) and
/// results are bit-identical under any worker count. Sweep point k runs with
/// master seed (base seed + k), so a single-value sweep reproduces a direct
/// run exactly.
// =============================================================================

namespace soak {

enum class Scheme { equal, capacity, secrecy, robust };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::equal: return "equal";
    case Scheme::capacity: return "capacity";
    case Scheme::secrecy: return "secrecy";
    case Scheme::robust: return "robust";
  }
  return "?";
}

inline std::vector<Scheme> all_schemes() {
  return {Scheme::equal, Scheme::capacity, Scheme::secrecy, Scheme::robust};
}

enum class EventMode { bound_event, exact_rate };

/// Nested-simulation configuration. Defaults follow the reference setup:
/// 10^4 outer instances of (h, g_hat) by 10^4 inner error realizations.
struct SimConfig {
  FadingEnsemble ensemble;
  double budget = 0.1;
  TargetRate target{0.0};
  std::size_t outer_samples = 10000;
  std::size_t inner_samples = 10000;
  std::uint64_t master_seed = 1;
  std::vector<Scheme> schemes = all_schemes();
  EventMode event_mode = EventMode::bound_event;
  /// When set, instances in main-channel outage stay in the average with
  /// conditional outage 1 instead of being excluded.
  bool count_main_outage_as_outage = false;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// A conditional-outage average with its bookkeeping.
struct OutageEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::size_t outer_used = 0;   ///< instances entering the average
  std::size_t outer_total = 0;  ///< instances sampled
  double main_outage_frac = 0.0;
};

inline constexpr std::uint64_t instance_stream_id(std::size_t outer_index) {
  return 2 * static_cast<std::uint64_t>(outer_index);
}

inline constexpr std::uint64_t inner_stream_id(std::size_t outer_index) {
  return 2 * static_cast<std::uint64_t>(outer_index) + 1;
}

namespace detail {

/// Outage indicators for several allocations against one shared stream of
/// eavesdropper realizations. Errors are drawn channel-major per realization
/// (the sample_eavesdropper order), so a one-allocation call consumes the
/// stream identically.
inline void conditional_outage_shared(
    const ChannelInstance& inst, const std::vector<PowerAllocation>& allocs,
    const TargetRate& target, std::size_t inner_samples, RngStream& rng,
    EventMode mode, std::vector<double>& out_fractions) {
  const std::size_t n = inst.size();
  const std::size_t k = allocs.size();
  const double threshold = target.threshold();

  std::vector<double> h2(n);
  for (std::size_t i = 0; i < n; ++i) h2[i] = std::norm(inst.h()[i]);

  std::vector<double> slack(k);  // signal power minus threshold, per alloc
  for (std::size_t a = 0; a < k; ++a) {
    double signal = 0.0;
    for (std::size_t i = 0; i < n; ++i) signal += h2[i] * allocs[a].p()[i];
    slack[a] = signal - threshold;
  }

  std::vector<std::size_t> counts(k, 0);
  std::vector<double> g2(n);
  for (std::size_t s = 0; s < inner_samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      g2[i] = std::norm(
          sample_complex_gaussian(inst.g_hat()[i], inst.eps2()[i], rng));
    }
    for (std::size_t a = 0; a < k; ++a) {
      const auto& p = allocs[a].p();
      bool event;
      if (mode == EventMode::bound_event) {
        double leak = 0.0;
        for (std::size_t i = 0; i < n; ++i) leak += g2[i] * p[i];
        event = slack[a] < leak;
      } else {
        double positive_part = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double diff = h2[i] - g2[i];
          if (diff > 0.0) positive_part += diff * p[i];
        }
        event = positive_part < threshold;
      }
      counts[a] += event ? 1 : 0;
    }
  }

  out_fractions.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    out_fractions[a] =
        static_cast<double>(counts[a]) / static_cast<double>(inner_samples);
  }
}

/// Runs fn(0..count-1) on up to `threads` workers pulling indices from a
/// shared counter. The first exception wins and is rethrown after the join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (count < workers) workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (std::size_t j = 0; j < count; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1, std::memory_order_relaxed);
      if (j >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        fn(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Mean and normal-approximation standard error of values[j] over the
/// indices with mask[j] != 0, accumulated in index order.
inline std::pair<double, double> masked_mean_stderr(
    const std::vector<double>& values, const std::vector<std::uint8_t>& mask,
    std::size_t used) {
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (mask[j]) sum += values[j];
  }
  const double mean = sum / static_cast<double>(used);
  if (used < 2) return {mean, 0.0};
  double ss = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (mask[j]) {
      const double d = values[j] - mean;
      ss += d * d;
    }
  }
  const double m = static_cast<double>(used);
  return {mean, std::sqrt(ss / (m * (m - 1.0)))};
}

}  // namespace detail

/// Fraction of `inner_samples` eavesdropper realizations for which the outage
/// event holds at the given allocation. bound_event compares the summed gain
/// gap against the leak; exact_rate tests the low-SNR rate against rs0.
inline double conditional_outage(const ChannelInstance& inst,
                                 const PowerAllocation& alloc,
                                 const TargetRate& target,
                                 std::size_t inner_samples, RngStream& rng,
                                 EventMode mode = EventMode::bound_event) {
  if (alloc.size() != inst.size()) {
    throw ShapeError("instance and allocation lengths disagree");
  }
  if (inner_samples == 0) throw DomainError("inner sample count must be >= 1");
  std::vector<double> fractions;
  detail::conditional_outage_shared(inst, {alloc}, target, inner_samples, rng,
                                    mode, fractions);
  return fractions[0];
}

/// Nested estimate of Pr(R_s < rs0) per scheme. Outer instances whose best
/// corner cannot clear the rate threshold (by the allocator's feasibility
/// margin) count as main-channel outage and are excluded from the average
/// unless count_main_outage_as_outage is set. All schemes share the instance
/// and error streams, so their estimates are paired.
inline std::map<Scheme, OutageEstimate> scheme_outage(const SimConfig& config) {
  if (config.outer_samples == 0 || config.inner_samples == 0) {
    throw DomainError("sample counts must be >= 1");
  }
  if (config.schemes.empty()) throw DomainError("no schemes requested");
  if (!(config.budget > 0.0)) throw DomainError("budget must be > 0");

  const std::size_t outer = config.outer_samples;
  const std::size_t n_schemes = config.schemes.size();
  const double threshold = config.target.threshold();

  std::vector<std::uint8_t> retained(outer, 0);
  std::vector<std::vector<double>> q(n_schemes,
                                     std::vector<double>(outer, 0.0));

  detail::parallel_for(outer, config.threads, [&](std::size_t j) {
    RngStream instance_rng(config.master_seed, instance_stream_id(j));
    const ChannelInstance inst = sample_instance(config.ensemble, instance_rng);

    double best_gain = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      best_gain = std::max(best_gain, std::norm(inst.h()[i]));
    }
    if (!lfp_denominator_feasible(best_gain * config.budget, threshold)) {
      return;  // main-channel outage
    }
    retained[j] = 1;

    std::vector<PowerAllocation> allocs;
    allocs.reserve(n_schemes);
    for (Scheme s : config.schemes) {
      switch (s) {
        case Scheme::equal:
          allocs.push_back(equal_power(inst.size(), config.budget));
          break;
        case Scheme::capacity:
          allocs.push_back(optimum_capacity(inst, config.budget));
          break;
        case Scheme::secrecy:
          allocs.push_back(optimum_secrecy(inst, config.budget));
          break;
        case Scheme::robust:
          allocs.push_back(
              robust_lfp(make_lfp_problem(inst, threshold, config.budget))
                  .allocation);
          break;
      }
    }

    RngStream inner_rng(config.master_seed, inner_stream_id(j));
    std::vector<double> fractions;
    detail::conditional_outage_shared(inst, allocs, config.target,
                                      config.inner_samples, inner_rng,
                                      config.event_mode, fractions);
    for (std::size_t a = 0; a < n_schemes; ++a) q[a][j] = fractions[a];
  });

  std::size_t retained_count = 0;
  for (std::uint8_t r : retained) retained_count += r;
  const double main_outage_frac =
      static_cast<double>(outer - retained_count) / static_cast<double>(outer);

  std::vector<std::uint8_t> mask = retained;
  std::size_t used = retained_count;
  if (config.count_main_outage_as_outage) {
    for (std::size_t j = 0; j < outer; ++j) {
      if (!retained[j]) {
        for (std::size_t a = 0; a < n_schemes; ++a) q[a][j] = 1.0;
        mask[j] = 1;
      }
    }
    used = outer;
  }
  if (used == 0) {
    throw NoDataError("every outer instance was in main-channel outage");
  }

  std::map<Scheme, OutageEstimate> result;
  for (std::size_t a = 0; a < n_schemes; ++a) {
    const auto [mean, se] = detail::masked_mean_stderr(q[a], mask, used);
    result[config.schemes[a]] =
        OutageEstimate{mean, se, used, outer, main_outage_frac};
  }
  return result;
}

enum class SweepParameter { rs0, eps2_scale, n_channels };

inline const char* sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::rs0: return "rs0";
    case SweepParameter::eps2_scale: return "eps2_scale";
    case SweepParameter::n_channels: return "n_channels";
  }
  return "?";
}

struct SweepRow {
  double sweep_value;
  Scheme scheme;
  OutageEstimate estimate;
  double main_outage_closed_form;
};

namespace detail {

inline FadingEnsemble scale_eps2(const FadingEnsemble& ensemble, double scale) {
  std::vector<double> eps2 = ensemble.eps2();
  for (double& v : eps2) v *= scale;
  return FadingEnsemble(ensemble.sigma_m2(), ensemble.sigma_e2(),
                        std::move(eps2));
}

/// Rebuild at a new channel count: channel-0 fading parameters everywhere and
/// the two-level uncertainty split eps2.front() / eps2.back().
inline FadingEnsemble resize_ensemble(const FadingEnsemble& ensemble,
                                      std::size_t n) {
  return make_split_ensemble(n, ensemble.sigma_m2().front(),
                             ensemble.sigma_e2().front(),
                             ensemble.eps2().front(), ensemble.eps2().back());
}

}  // namespace detail

/// Re-runs scheme_outage once per sweep value. Point k uses master seed
/// (config.master_seed + k); rows appear grouped by point in scheme order.
inline std::vector<SweepRow> sweep(const SimConfig& config,
                                   SweepParameter parameter,
                                   const std::vector<double>& values) {
  if (values.empty()) throw DomainError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(values.size() * config.schemes.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    SimConfig point = config;
    point.master_seed = config.master_seed + static_cast<std::uint64_t>(k);
    switch (parameter) {
      case SweepParameter::rs0:
        point.target = TargetRate(values[k]);
        break;
      case SweepParameter::eps2_scale:
        if (!(values[k] >= 0.0)) {
          throw DomainError("eps2_scale values must be >= 0");
        }
        point.ensemble = detail::scale_eps2(config.ensemble, values[k]);
        break;
      case SweepParameter::n_channels: {
        const double rounded = std::nearbyint(values[k]);
        if (!(rounded >= 1.0) || rounded != values[k]) {
          throw DomainError("n_channels values must be positive integers");
        }
        point.ensemble = detail::resize_ensemble(
            config.ensemble, static_cast<std::size_t>(rounded));
        break;
      }
    }
    const double main_closed = main_channel_outage_fading(
        point.ensemble, point.budget, point.target);
    for (const auto& [scheme, estimate] : scheme_outage(point)) {
      rows.push_back(SweepRow{values[k], scheme, estimate, main_closed});
    }
  }
  return rows;
}

// -----------------------------------------------------------------------------
// Closed-form cross-check estimators
// -----------------------------------------------------------------------------

/// A plain Monte Carlo proportion with its binomial standard error.
struct McEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::size_t samples = 0;
};

namespace detail {

inline McEstimate proportion(std::size_t hits, std::size_t samples) {
  const double p =
      static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

}  // namespace detail

/// Empirical Pr(|h_i| < |g_i| for all i) over sampled eavesdropper errors.
/// Channels are evaluated in order and a sample stops at the first channel
/// that keeps positive secrecy.
inline McEstimate mc_complete_outage_instantaneous(const ChannelInstance& inst,
                                                   std::size_t samples,
                                                   RngStream& rng) {
  if (samples == 0) throw DomainError("sample count must be >= 1");
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    bool all = true;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const double g2 = std::norm(
          sample_complex_gaussian(inst.g_hat()[i], inst.eps2()[i], rng));
      if (!(std::norm(inst.h()[i]) < g2)) {
        all = false;
        break;
      }
    }
    hits += all ? 1 : 0;
  }
  return detail::proportion(hits, samples);
}

/// Empirical complete outage under fading: |h_i|^2 and |g_i|^2 are sampled as
/// exponentials with means sigma_m2_i and the mode's eavesdropper power.
inline McEstimate mc_complete_outage_fading(const FadingEnsemble& ensemble,
                                            FadingMode mode,
                                            std::size_t samples,
                                            RngStream& rng) {
  if (samples == 0) throw DomainError("sample count must be >= 1");
  const std::size_t n = ensemble.size();
  std::vector<double> g_mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    g_mean[i] = eavesdropper_mean_power(ensemble.sigma_e2()[i],
                                        ensemble.eps2()[i], mode);
  }
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double h2 = ensemble.sigma_m2()[i] * rng.next_exponential();
      const double g2 = g_mean[i] * rng.next_exponential();
      if (!(h2 < g2)) {
        all = false;
        break;
      }
    }
    hits += all ? 1 : 0;
  }
  return detail::proportion(hits, samples);
}

/// Empirical Pr(max_i |h_i|^2 P < 2 ln(2) rs0) under fading.
inline McEstimate mc_main_channel_outage_fading(const FadingEnsemble& ensemble,
                                                double budget,
                                                const TargetRate& target,
                                                std::size_t samples,
                                                RngStream& rng) {
  if (samples == 0) throw DomainError("sample count must be >= 1");
  if (!(budget > 0.0)) throw DomainError("budget must be > 0");
  const double threshold = target.threshold();
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    bool all_below = true;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      const double h2 = ensemble.sigma_m2()[i] * rng.next_exponential();
      if (!(h2 * budget < threshold)) {
        all_below = false;
        break;
      }
    }
    hits += all_below ? 1 : 0;
  }
  return detail::proportion(hits, samples);
}

}  // namespace soak
