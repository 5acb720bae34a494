#ifndef DPPBO_RANDOM_HPP
#define DPPBO_RANDOM_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace dppbo {

/// Mixes a 64-bit word (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based child-seed derivation. The result depends only on the
/// key, never on the order in which streams are created.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication,
                          std::uint64_t round, std::uint64_t slot) noexcept;

/// A seeded pseudo-random stream. Not thread safe; use one per worker.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Uniform integer in [0, n).
  int index(int n);

  /// Fair coin.
  bool coin() { return (engine_() >> 63) != 0; }

  Eigen::VectorXd normal_vector(Eigen::Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace dppbo

#endif  // DPPBO_RANDOM_HPP
