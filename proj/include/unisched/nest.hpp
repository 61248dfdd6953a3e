#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "unisched/bounds.hpp"
#include "unisched/schedule.hpp"

namespace unisched {

// One loop of the materialized nest. Tile loops enumerate tile indices of a
// band level; point loops enumerate transformed coordinates, clamped to the
// current tile when the level is tiled.
struct NestLoop {
  bool is_tile = false;
  int level = 0;      // transformed coordinate index
  i64 tile_size = 0;  // 0 when the level is untiled
  i64 tile_lo = 0;    // tile-index range (tile loops only)
  i64 tile_hi = 0;
};

// The executable form of a schedule: FME bounds plus the strip-mined loop
// order and tag annotations. Enumerates exactly the image multiset of the
// domain under the schedule matrix, in tile-major order.
struct LoopNest {
  std::vector<i64> extents;
  UnimodularMatrix transform{UnimodularMatrix::identity(1)};
  UnimodularMatrix inverse_transform{UnimodularMatrix::identity(1)};
  LoopBounds bounds;
  std::vector<NestLoop> loops;
  std::optional<int> parallel_loop;  // index into loops
  i64 unroll = 1;

  int dim() const { return bounds.dim; }
  int loop_count() const { return static_cast<int>(loops.size()); }

  // Value range of loops[q] given values of every outer loop; may be empty
  // (lb > ub) for over-approximated tile prefixes.
  std::pair<i64, i64> range(int q, const std::vector<i64>& values) const;

  // Original iteration vector for fully-assigned loop values.
  IterVec original(const std::vector<i64>& values) const;

  // Transformed coordinates for fully-assigned loop values.
  IterVec transformed(const std::vector<i64>& values) const;

  // Walks the subtree of loops[q..] with loops[0..q-1] fixed in `values`;
  // fn sees the full value assignment at each innermost point.
  void walk_subtree(int q, std::vector<i64>& values,
                    const std::function<void(const std::vector<i64>&)>& fn) const;

  void walk(const std::function<void(const std::vector<i64>&)>& fn) const;
};

// Materializes a schedule over a rectangular domain: FME bound generation,
// strip-mining of the tiled band, parallel/unroll annotations.
LoopNest build_nest(const std::vector<i64>& extents, const Schedule& s);

}  // namespace unisched
