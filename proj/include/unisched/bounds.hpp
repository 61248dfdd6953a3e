#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "unisched/matrix.hpp"

namespace unisched {

// One affine bound on a transformed loop level: the value
// (sum coeffs[m]*j_m + constant) / divisor, with ceiling division for lower
// bounds and floor division for upper bounds. coeffs only reference levels
// outer to the bounded one.
struct BoundExpr {
  std::vector<i64> coeffs;
  i64 constant = 0;
  i64 divisor = 1;

  i64 numerator(const IterVec& j) const {
    i64 acc = constant;
    for (std::size_t m = 0; m < coeffs.size(); ++m) acc += coeffs[m] * j[m];
    return acc;
  }
};

struct LevelBounds {
  std::vector<BoundExpr> lowers;  // level >= ceil(expr)
  std::vector<BoundExpr> uppers;  // level <= floor(expr)
};

// Loop bounds of the transformed nest; enumerating them visits exactly the
// image set {T*i : i in domain} in lexicographic order. Redundant bound
// expressions may remain.
struct LoopBounds {
  int dim = 0;
  std::vector<LevelBounds> levels;

  i64 lower(int level, const IterVec& j) const;
  i64 upper(int level, const IterVec& j) const;
};

// Substitutes i = T^-1 * j into the rectangular domain constraints and
// eliminates variables innermost-first by Fourier-Motzkin.
LoopBounds fme_bounds(const UnimodularMatrix& t, const std::vector<i64>& extents);

// Ground truth for fme_bounds: computes T*i for every domain point, sorts
// lexicographically, returns the original vectors in that order.
// Domain must have at most max_points points.
std::vector<IterVec> enumerate_transformed(const UnimodularMatrix& t, const std::vector<i64>& extents,
                                           i64 max_points = 1000000);

// Exact [min,max] of transformed coordinate `level` over the domain; affine
// maps attain extrema at box corners, which decompose per coordinate.
std::pair<i64, i64> transformed_range(const UnimodularMatrix& t, const std::vector<i64>& extents,
                                      int level);

// Row-major walk of the rectangular domain.
void for_each_point(const std::vector<i64>& extents, const std::function<void(const IterVec&)>& fn);

}  // namespace unisched
