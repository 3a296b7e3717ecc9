#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "zob/types.hpp"

namespace zob {

/// Stream identifiers; each seeds an independent engine from the same user seed.
enum class StreamId : std::uint64_t {
  kBlocks = 1,      // block sampling and RGE directions
  kNoise = 2,       // observation noise
  kInit = 3,        // random initial points
  kProbe = 4,       // Lipschitz probing
  kFixture = 5,     // problem construction
};

/// Seeded 64-bit engine plus the scratch permutation used by partial
/// Fisher-Yates block sampling. One per run; never shared across threads.
class RandomStream {
 public:
  using Engine = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed, StreamId stream = StreamId::kBlocks) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(stream)),
                      0x5a0b5eedu};
    engine_.seed(seq);
  }

  Engine& engine() { return engine_; }

  /// Uniform integer in [0, n). Rejection sampling keeps it exact and portable.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename Scalar>
  Scalar uniform(Scalar lo, Scalar hi) {
    return lo + (hi - lo) * static_cast<Scalar>(uniform01());
  }

  template <typename Scalar>
  Scalar gaussian() {
    return static_cast<Scalar>(normal_(engine_));
  }

  template <typename Scalar>
  Vector<Scalar> gaussian_vector(Index n) {
    Vector<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v(i) = gaussian<Scalar>();
    return v;
  }

  /// Permutation scratch of length d, reset only when d changes.
  std::vector<Index>& permutation(Index d) {
    if (static_cast<Index>(perm_.size()) != d) {
      perm_.resize(static_cast<std::size_t>(d));
      std::iota(perm_.begin(), perm_.end(), Index{0});
    }
    return perm_;
  }

 private:
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<Index> perm_;
};

}  // namespace zob
