#pragma once

#include <algorithm>
#include <sstream>
#include <utility>
#include <vector>

#include "zob/random.hpp"

namespace zob {

/// Sorted, duplicate-free coordinate subset of [0, d).
struct BlockSample {
  std::vector<Index> indices;

  Index size() const { return static_cast<Index>(indices.size()); }
  auto begin() const { return indices.begin(); }
  auto end() const { return indices.end(); }

  static BlockSample full(Index d) {
    BlockSample s;
    s.indices.resize(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) s.indices[static_cast<std::size_t>(i)] = i;
    return s;
  }

  /// Builds a block from arbitrary indices; throws on duplicates or out-of-range.
  static BlockSample from(std::vector<Index> idx, Index d) {
    std::sort(idx.begin(), idx.end());
    if (idx.empty()) throw InvalidBlockError("block must contain at least one index");
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      throw InvalidBlockError("block contains duplicate indices");
    if (idx.front() < 0 || idx.back() >= d) throw InvalidBlockError("block index out of range");
    return BlockSample{std::move(idx)};
  }
};

inline void validate_block_size(Index d, Index b) {
  if (b < 1 || b > d) {
    std::ostringstream os;
    os << "invalid block: block size must satisfy 1 <= b <= d_x (got b = " << b << ", d_x = " << d << ")";
    throw InvalidBlockError(os.str());
  }
}

/// Uniform size-b subset of [0, d) by partial Fisher-Yates on the stream's
/// persistent permutation: b swaps per draw plus sorting the block.
inline BlockSample sample_block(Index d, Index b, RandomStream& rng) {
  validate_block_size(d, b);
  std::vector<Index>& perm = rng.permutation(d);
  for (Index i = 0; i < b; ++i) {
    const Index j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  BlockSample out;
  out.indices.assign(perm.begin(), perm.begin() + b);
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

}  // namespace zob
