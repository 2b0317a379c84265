// SPDX-License-Identifier: Apache-2.0

#ifndef MMRELAY_RNG_HPP
#define MMRELAY_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace mmrelay {

/// Purpose tag for a random stream. Every draw in the simulator is keyed by
/// (seed, interval_index, trial, tag), so results do not depend on evaluation
/// order or on how trials are partitioned across worker threads.
enum class Draw : std::uint64_t {
  SourceChannel = 1,
  DestChannel = 2,
  LoopChannel = 3,       // phase-C loop channel realization
  LoopChannelPilot = 4,  // independent realization for the phase-A pilot replay
  NoiseA = 5,
  NoiseB = 6,
  NoiseC = 7,
  DestNoise = 8,
  SourceDataB = 9,
  SourceDataC = 10,
  ForwardData = 11,
  Profile = 12,  // random large-scale profiles in sweeps/tests
  Generic = 13,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. The standard fully specifies the mt19937_64
/// output sequence, and all transforms below are hand-rolled, so a given key
/// always produces the same numbers. (std::*_distribution is avoided on
/// purpose: its algorithm is implementation-defined.)
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t interval, Draw tag, std::uint64_t trial = 0)
      : engine_(make_key(seed, interval, tag, trial)) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard real Gaussian N(0, 1), Box-Muller.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = positive_uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circular complex Gaussian CN(0, 1): E|z|^2 = 1.
  std::complex<double> cgauss() {
    const double u1 = positive_uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    const double a = 2.0 * M_PI * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  /// QPSK symbol (+-1 +-i)/sqrt(2), unit average power.
  std::complex<double> qpsk() {
    const std::uint64_t bits = engine_();
    const double inv = M_SQRT1_2;
    return {(bits & 1) ? inv : -inv, (bits & 2) ? inv : -inv};
  }

  void fill_cgauss(Eigen::MatrixXcd& m, double scale = 1.0) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = scale * cgauss();
  }

  void fill_qpsk(Eigen::MatrixXcd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = qpsk();
  }

 private:
  static std::uint64_t make_key(std::uint64_t seed, std::uint64_t interval, Draw tag,
                                std::uint64_t trial) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (interval * 0x9e3779b97f4a7c15ULL));
    k = splitmix64(k ^ (trial * 0xbf58476d1ce4e5b9ULL));
    k = splitmix64(k ^ (static_cast<std::uint64_t>(tag) * 0x94d049bb133111ebULL));
    return k;
  }

  // Uniform in (0, 1]; keeps log() finite.
  double positive_uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Pairwise (cascade) summation over a fixed-order sequence. Used by the
/// Monte-Carlo accumulators so that parallel and serial runs reduce per-trial
/// values in exactly the same order.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace mmrelay

#endif  // MMRELAY_RNG_HPP
