#include "dppbo/random.hpp"

namespace dppbo {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication,
                          std::uint64_t round, std::uint64_t slot) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ mix64(replication + 0x100000001b3ULL));
  h = mix64(h ^ mix64(round + 0x2545f4914f6cdd1dULL));
  h = mix64(h ^ mix64(slot + 0x5851f42d4c957f2dULL));
  return h;
}

int RandomStream::index(int n) {
  std::uniform_int_distribution<int> dist(0, n - 1);
  return dist(engine_);
}

Eigen::VectorXd RandomStream::normal_vector(Eigen::Index n) {
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal_(engine_);
  return z;
}

}  // namespace dppbo
