#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "annlc/context_model.hpp"

namespace annlc {

/// Per-symbol loss d(source, reconstruction), stored dense.
class DistortionMatrix {
 public:
  DistortionMatrix(int source_alphabet, int recon_alphabet, std::vector<double> entries)
      : rows_(source_alphabet), cols_(recon_alphabet), d_(std::move(entries)) {
    if (d_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
      throw std::invalid_argument("DistortionMatrix: size mismatch");
    for (double v : d_) {
      if (v < 0.0 || !std::isfinite(v))
        throw std::invalid_argument("DistortionMatrix: entries must be finite and >= 0");
    }
  }

  static DistortionMatrix hamming(int alphabet) {
    std::vector<double> d(static_cast<std::size_t>(alphabet) * static_cast<std::size_t>(alphabet), 1.0);
    for (int a = 0; a < alphabet; ++a) d[static_cast<std::size_t>(a) * alphabet + a] = 0.0;
    return DistortionMatrix(alphabet, alphabet, std::move(d));
  }

  int source_alphabet() const { return rows_; }
  int recon_alphabet() const { return cols_; }

  double operator()(Symbol x, Symbol y) const {
    return d_[static_cast<std::size_t>(x) * cols_ + y];
  }

  double max_entry() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, v);
    return m;
  }

  DistortionMatrix scaled(double c) const {
    std::vector<double> d = d_;
    for (double& v : d) v *= c;
    return DistortionMatrix(rows_, cols_, std::move(d));
  }

 private:
  int rows_, cols_;
  std::vector<double> d_;
};

/// Fixed-slope objective: context shape for H_k, slope alpha, loss matrix.
struct EnergySpec {
  double alpha;
  ContextShape shape;
  DistortionMatrix dist;
  Boundary mode = Boundary::linear;

  EnergySpec(double a, ContextShape s, DistortionMatrix d, Boundary m = Boundary::linear)
      : alpha(a), shape(std::move(s)), dist(std::move(d)), mode(m) {
    if (alpha < 0.0) throw std::invalid_argument("EnergySpec: alpha must be >= 0");
  }

  static EnergySpec order_k(int k, double alpha, DistortionMatrix d,
                            Boundary m = Boundary::linear) {
    return EnergySpec(alpha, ContextShape::previous(k), std::move(d), m);
  }
};

/// Per-symbol average distortion (1/n) sum d(x_i, y_i).
inline double distortion(std::span<const Symbol> x, std::span<const Symbol> y,
                         const DistortionMatrix& d) {
  if (x.size() != y.size()) throw std::invalid_argument("distortion: length mismatch");
  if (x.empty()) throw std::invalid_argument("distortion: empty sequences");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += d(x[i], y[i]);
  return sum / static_cast<double>(x.size());
}

/// E(y) = n * [ H_k(y) + alpha * d_n(x, y) ].
inline double energy(std::span<const Symbol> y, std::span<const Symbol> x,
                     const EnergySpec& spec) {
  if (x.size() != y.size()) throw std::invalid_argument("energy: length mismatch");
  CountMatrix cm(y, spec.dist.recon_alphabet(), spec.shape, spec.mode);
  const double hk = cm.conditional_entropy();
  return static_cast<double>(y.size()) * (hk + spec.alpha * distortion(x, y, spec.dist));
}

inline double energy(const CountMatrix& cm, std::span<const Symbol> y,
                     std::span<const Symbol> x, const EnergySpec& spec) {
  return static_cast<double>(y.size()) *
         (cm.conditional_entropy() + spec.alpha * distortion(x, y, spec.dist));
}

/// ΔE for the candidate flip y[i] := b, without mutating anything.
/// Equals energy(after) - energy(before) up to float associativity.
inline double delta_energy(const CountMatrix& cm, std::span<const Symbol> y, std::size_t i,
                           Symbol b, std::span<const Symbol> x, const EnergySpec& spec) {
  if (x.size() != y.size()) throw std::invalid_argument("delta_energy: length mismatch");
  const double n = static_cast<double>(y.size());
  const double dh = cm.flip_entropy_delta(y, i, b);
  return n * dh + spec.alpha * (spec.dist(x[i], b) - spec.dist(x[i], y[i]));
}

}  // namespace annlc
