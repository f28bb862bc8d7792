#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace annlc {

/// Inverse-temperature schedule beta_t, t = 1, 2, ...
///
/// logarithmic: beta_t = log(floor(t / sweep) + 1) / T0   (convergence form)
/// geometric:   beta_t = beta0 * (1/gamma)^ceil(t / sweep)  (experiment form)
///
/// Both hold beta constant over sweeps of `sweep` iterations and are
/// non-decreasing in t.
class Schedule {
 public:
  enum class Kind { logarithmic, geometric };

  static Schedule logarithmic(double t0, std::uint64_t sweep) {
    if (t0 <= 0.0) throw std::invalid_argument("Schedule: T0 must be positive");
    Schedule s;
    s.kind_ = Kind::logarithmic;
    s.t0_ = t0;
    s.sweep_ = check_sweep(sweep);
    return s;
  }

  static Schedule geometric(double beta0, double gamma, std::uint64_t sweep) {
    if (beta0 <= 0.0) throw std::invalid_argument("Schedule: beta0 must be positive");
    if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("Schedule: gamma must be in (0,1)");
    Schedule s;
    s.kind_ = Kind::geometric;
    s.beta0_ = beta0;
    s.gamma_ = gamma;
    s.sweep_ = check_sweep(sweep);
    return s;
  }

  Kind kind() const { return kind_; }
  std::uint64_t sweep() const { return sweep_; }

  double beta(std::uint64_t t) const {
    if (kind_ == Kind::logarithmic)
      return std::log(static_cast<double>(t / sweep_ + 1)) / t0_;
    const std::uint64_t epoch = (t + sweep_ - 1) / sweep_;
    // cap instead of overflowing to inf (inf * 0 would poison the pmf)
    return std::min(beta0_ * std::pow(1.0 / gamma_, static_cast<double>(epoch)), 1e300);
  }

 private:
  static std::uint64_t check_sweep(std::uint64_t sweep) {
    if (sweep == 0) throw std::invalid_argument("Schedule: sweep length must be positive");
    return sweep;
  }

  Kind kind_ = Kind::geometric;
  double t0_ = 1.0;
  double beta0_ = 1.0;
  double gamma_ = 0.75;
  std::uint64_t sweep_ = 1;
};

/// Conservative upper bound on the energy change of any single-symbol flip:
///   alpha * max(d) + 2(k+1) * (log2 n + log2 |alphabet|).
/// Any such bound is a valid stand-in for the worst-case per-flip swing when
/// sizing the logarithmic schedule's T0 (> n * bound).
inline double delta_bound(std::size_t n, std::size_t k, double alpha, int alphabet,
                          double max_distortion) {
  return alpha * max_distortion +
         2.0 * static_cast<double>(k + 1) *
             (std::log2(static_cast<double>(n)) + std::log2(static_cast<double>(alphabet)));
}

}  // namespace annlc
