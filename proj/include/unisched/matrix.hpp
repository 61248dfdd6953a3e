#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unisched/common.hpp"

namespace unisched {

// Square integer matrix with |det| = 1. Maps iteration vectors i to
// transformed coordinates j = M * i. Entries are capped to catch runaway
// skew compositions early.
class UnimodularMatrix {
 public:
  static constexpr i64 kDefaultEntryCap = 1000000;

  static UnimodularMatrix identity(int d);
  // Validates |det| = 1 and the entry cap.
  static UnimodularMatrix from_entries(std::vector<std::vector<i64>> rows,
                                       i64 entry_cap = kDefaultEntryCap);

  int dim() const { return d_; }
  i64 at(int r, int c) const { return rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  const std::vector<std::vector<i64>>& rows() const { return rows_; }

  IterVec apply(const IterVec& v) const;

  bool operator==(const UnimodularMatrix& o) const { return rows_ == o.rows_; }
  bool operator!=(const UnimodularMatrix& o) const { return !(*this == o); }

  // Row-major flattening, the ordering used for canonical candidate keys.
  std::vector<i64> flatten() const;

  // Rendered as rows of integers, e.g. [[1,1],[1,0]].
  std::string render() const;

 private:
  UnimodularMatrix(int d, std::vector<std::vector<i64>> rows) : d_(d), rows_(std::move(rows)) {}

  int d_ = 0;
  std::vector<std::vector<i64>> rows_;
};

// Elementary transformation steps; the search composes these.
struct TransformStep {
  enum class Kind { Interchange, Reversal, Skew };

  Kind kind;
  int a = 0;       // Interchange: first loop. Skew: src loop. Reversal: loop.
  int b = 0;       // Interchange: second loop. Skew: dst loop.
  i64 factor = 0;  // Skew only, nonzero.

  static TransformStep interchange(int a, int b) { return {Kind::Interchange, a, b, 0}; }
  static TransformStep reversal(int k) { return {Kind::Reversal, k, 0, 0}; }
  static TransformStep skew(int src, int dst, i64 f) { return {Kind::Skew, src, dst, f}; }

  std::string render() const;
  bool operator==(const TransformStep& o) const = default;
};

// Elementary matrix for one step. Interchange(a,b) swaps rows a and b of the
// identity; Reversal(k) negates entry (k,k); Skew(src,dst,f) puts f at
// (dst,src). All have |det| = 1.
UnimodularMatrix generator(const TransformStep& step, int d);

// Matrix product later * earlier. A schedule S extended by step T becomes
// T * S; the transformed iteration vector is S * i.
UnimodularMatrix compose(const UnimodularMatrix& later, const UnimodularMatrix& earlier,
                         i64 entry_cap = UnimodularMatrix::kDefaultEntryCap);

// Exact integer determinant (fraction-free elimination).
i64 determinant(const UnimodularMatrix& m);

// Exact integer inverse via adjugate / det; valid because |det| = 1.
UnimodularMatrix inverse(const UnimodularMatrix& m);

}  // namespace unisched
