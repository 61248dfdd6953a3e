#pragma once

#include <vector>

#include "unisched/kernel.hpp"
#include "unisched/matrix.hpp"

namespace unisched {

// Exact dependence distance vectors of a kernel: sink iteration minus source
// iteration for every pair of accesses touching the same cell with at least
// one write. Same-iteration pairs are excluded and every stored vector is
// lexicographically positive. A vector that is an integer multiple of
// another stored vector is dropped; this changes no legality answer.
struct DependenceSet {
  std::vector<IterVec> vectors;    // sorted lexicographically
  std::vector<IterVec> witnesses;  // a source iteration realizing vectors[i]
  bool exact = true;

  bool empty() const { return vectors.empty(); }
  std::size_t size() const { return vectors.size(); }
};

// Enumeration work cap: sum over cells of |writers| * |accessors| pairs.
inline constexpr i64 kMaxDependencePairs = 100000000;

// Extracts the exact distance-vector set. Access pairs with identical
// coefficient matrices take the uniform fast path (offset differences solved
// exactly); other pairs are enumerated with same-cell hashing. Throws
// RuntimeFailure when the pair budget would be exceeded.
DependenceSet compute_dependences(const Kernel& k);

// True iff T maps every distance vector to a lexicographically positive one.
bool is_legal(const UnimodularMatrix& t, const DependenceSet& deps);

// True iff no transformed vector has its first nonzero at `level`, i.e. the
// transformed loop at that level carries no dependence. Requires is_legal.
bool parallel_legal(const UnimodularMatrix& t, const DependenceSet& deps, int level);

// True iff every transformed vector whose first nonzero lies within
// [first,last] has all in-band components >= 0. Tiling the band is legal
// exactly when this holds. Requires is_legal.
bool permutable_band(const UnimodularMatrix& t, const DependenceSet& deps, int first, int last);

}  // namespace unisched
