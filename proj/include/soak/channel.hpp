#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "soak/errors.hpp"
#include "soak/rng.hpp"
#include "soak/stats.hpp"

namespace soak {

using Complex = std::complex<double>;

namespace detail {

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite");
}

inline void require_finite(Complex z, const char* name) {
  require_finite(z.real(), name);
  require_finite(z.imag(), name);
}

}  // namespace detail

/// One realization of the main-channel gains h, the estimated eavesdropper
/// gains g_hat, and the per-channel uncertainty variances eps2. Immutable
/// after construction; all invariants checked eagerly.
class ChannelInstance {
 public:
  ChannelInstance(std::vector<Complex> h, std::vector<Complex> g_hat,
                  std::vector<double> eps2)
      : h_(std::move(h)), g_hat_(std::move(g_hat)), eps2_(std::move(eps2)) {
    if (h_.empty()) throw ShapeError("channel count must be >= 1");
    if (g_hat_.size() != h_.size() || eps2_.size() != h_.size()) {
      throw ShapeError("h, g_hat, eps2 must have equal length");
    }
    for (const auto& z : h_) detail::require_finite(z, "h");
    for (const auto& z : g_hat_) detail::require_finite(z, "g_hat");
    for (double e : eps2_) {
      detail::require_finite(e, "eps2");
      if (e < 0.0) throw DomainError("eps2 must be >= 0");
    }
  }

  std::size_t size() const noexcept { return h_.size(); }
  const std::vector<Complex>& h() const noexcept { return h_; }
  const std::vector<Complex>& g_hat() const noexcept { return g_hat_; }
  const std::vector<double>& eps2() const noexcept { return eps2_; }

 private:
  std::vector<Complex> h_;
  std::vector<Complex> g_hat_;
  std::vector<double> eps2_;
};

/// One realization of the true eavesdropper gains g = g_hat + g_tilde.
class EavesdropperRealization {
 public:
  explicit EavesdropperRealization(std::vector<Complex> g) : g_(std::move(g)) {
    if (g_.empty()) throw ShapeError("channel count must be >= 1");
  }

  std::size_t size() const noexcept { return g_.size(); }
  const std::vector<Complex>& g() const noexcept { return g_; }

 private:
  std::vector<Complex> g_;
};

/// Per-channel Rayleigh-fading parameters: main-channel variance sigma_m2,
/// eavesdropper estimate variance sigma_e2, and uncertainty variance eps2.
class FadingEnsemble {
 public:
  FadingEnsemble(std::vector<double> sigma_m2, std::vector<double> sigma_e2,
                 std::vector<double> eps2)
      : sigma_m2_(std::move(sigma_m2)),
        sigma_e2_(std::move(sigma_e2)),
        eps2_(std::move(eps2)) {
    if (sigma_m2_.empty()) throw ShapeError("channel count must be >= 1");
    if (sigma_e2_.size() != sigma_m2_.size() ||
        eps2_.size() != sigma_m2_.size()) {
      throw ShapeError("sigma_m2, sigma_e2, eps2 must have equal length");
    }
    for (double v : sigma_m2_) {
      detail::require_finite(v, "sigma_m2");
      if (v <= 0.0) throw DomainError("sigma_m2 must be > 0");
    }
    for (double v : sigma_e2_) {
      detail::require_finite(v, "sigma_e2");
      if (v <= 0.0) throw DomainError("sigma_e2 must be > 0");
    }
    for (double v : eps2_) {
      detail::require_finite(v, "eps2");
      if (v < 0.0) throw DomainError("eps2 must be >= 0");
    }
  }

  std::size_t size() const noexcept { return sigma_m2_.size(); }
  const std::vector<double>& sigma_m2() const noexcept { return sigma_m2_; }
  const std::vector<double>& sigma_e2() const noexcept { return sigma_e2_; }
  const std::vector<double>& eps2() const noexcept { return eps2_; }

 private:
  std::vector<double> sigma_m2_;
  std::vector<double> sigma_e2_;
  std::vector<double> eps2_;
};

/// Ensemble with scalar fading parameters on every channel and a two-level
/// uncertainty split: eps2_high on the first ceil(n/2) channels, eps2_low on
/// the rest.
inline FadingEnsemble make_split_ensemble(std::size_t n, double sigma_m2,
                                          double sigma_e2, double eps2_high,
                                          double eps2_low) {
  if (n == 0) throw ShapeError("channel count must be >= 1");
  const std::size_t high = (n + 1) / 2;
  std::vector<double> eps2(n, eps2_low);
  for (std::size_t i = 0; i < high; ++i) eps2[i] = eps2_high;
  return FadingEnsemble(std::vector<double>(n, sigma_m2),
                        std::vector<double>(n, sigma_e2), std::move(eps2));
}

/// Draws h_i ~ CN(0, sigma_m2_i) and g_hat_i ~ CN(0, sigma_e2_i), channel by
/// channel (h before g_hat); eps2 is copied from the ensemble.
inline ChannelInstance sample_instance(const FadingEnsemble& ensemble,
                                       RngStream& rng) {
  const std::size_t n = ensemble.size();
  std::vector<Complex> h(n);
  std::vector<Complex> g_hat(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = sample_complex_gaussian({0.0, 0.0}, ensemble.sigma_m2()[i], rng);
    g_hat[i] = sample_complex_gaussian({0.0, 0.0}, ensemble.sigma_e2()[i], rng);
  }
  return ChannelInstance(std::move(h), std::move(g_hat),
                         ensemble.eps2());
}

/// Draws g_i = g_hat_i + g_tilde_i with g_tilde_i ~ CN(0, eps2_i) independent
/// across channels.
inline EavesdropperRealization sample_eavesdropper(const ChannelInstance& inst,
                                                   RngStream& rng) {
  const std::size_t n = inst.size();
  std::vector<Complex> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = sample_complex_gaussian(inst.g_hat()[i], inst.eps2()[i], rng);
  }
  return EavesdropperRealization(std::move(g));
}

// -----------------------------------------------------------------------------
// Fixture format: one "Re(h) Im(h) Re(g_hat) Im(g_hat) eps2" line per channel.
// Blank lines and lines starting with '#' are skipped.
// -----------------------------------------------------------------------------

inline void write_instance(std::ostream& os, const ChannelInstance& inst) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    os << inst.h()[i].real() << ' ' << inst.h()[i].imag() << ' '
       << inst.g_hat()[i].real() << ' ' << inst.g_hat()[i].imag() << ' '
       << inst.eps2()[i] << '\n';
  }
}

inline ChannelInstance read_instance(std::istream& is) {
  std::vector<Complex> h;
  std::vector<Complex> g_hat;
  std::vector<double> eps2;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    double hr, hi, gr, gi, e2;
    if (!(fields >> hr >> hi >> gr >> gi >> e2)) {
      throw ParseError("fixture line " + std::to_string(line_no) +
                       ": expected 5 numeric fields");
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError("fixture line " + std::to_string(line_no) +
                       ": trailing content '" + rest + "'");
    }
    h.emplace_back(hr, hi);
    g_hat.emplace_back(gr, gi);
    eps2.push_back(e2);
  }
  if (h.empty()) throw ParseError("fixture contains no channel lines");
  return ChannelInstance(std::move(h), std::move(g_hat), std::move(eps2));
}

}  // namespace soak
