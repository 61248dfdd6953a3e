#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unisched/dependence.hpp"
#include "unisched/kernel.hpp"
#include "unisched/matrix.hpp"

namespace unisched {

// Rectangular tiling of a contiguous band of transformed loop levels.
struct Tiling {
  int first = 0;
  int last = 0;              // inclusive
  std::vector<i64> sizes;    // one per band level

  int width() const { return last - first + 1; }
  bool operator==(const Tiling& o) const = default;
};

// A complete schedule: the affine part as a unimodular matrix (with step
// provenance) plus non-affine tags.
struct Schedule {
  UnimodularMatrix transform;
  std::vector<TransformStep> steps;
  std::optional<int> parallel;   // transformed loop level
  std::optional<Tiling> tiling;
  std::optional<i64> unroll;     // innermost loop, factor

  static Schedule identity(int d) { return Schedule{UnimodularMatrix::identity(d), {}, {}, {}, {}}; }

  int dim() const { return transform.dim(); }
  bool has_skew_step() const;

  // Canonical sort key: matrix entries then tags. Used for deterministic
  // tie-breaking and trace ordering.
  std::vector<i64> encoding() const;

  // Human-readable one-liner: steps, matrix, tags.
  std::string render() const;
};

// Checks every schedule invariant against a kernel and its dependences:
// matrix is the product of the recorded steps, the parallel level passes
// parallel_legal, the tiling band passes permutable_band with sizes in
// range, and the unroll factor is sane. Throws ValidationError.
void validate_schedule(const Kernel& k, const Schedule& s, const DependenceSet& deps);

}  // namespace unisched
