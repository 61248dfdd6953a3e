#include "unisched/nest.hpp"

#include <algorithm>

namespace unisched {

std::pair<i64, i64> LoopNest::range(int q, const std::vector<i64>& values) const {
  const NestLoop& loop = loops[static_cast<std::size_t>(q)];
  if (loop.is_tile) return {loop.tile_lo, loop.tile_hi};

  // Bound expressions reference transformed coordinates of outer levels; all
  // of them correspond to point loops that precede q in the final order.
  IterVec j(static_cast<std::size_t>(dim()), 0);
  i64 tile_index = 0;
  for (int p = 0; p < q; ++p) {
    const NestLoop& outer = loops[static_cast<std::size_t>(p)];
    if (outer.is_tile) {
      if (outer.level == loop.level) tile_index = values[static_cast<std::size_t>(p)];
    } else {
      j[static_cast<std::size_t>(outer.level)] = values[static_cast<std::size_t>(p)];
    }
  }
  i64 lb = bounds.lower(loop.level, j);
  i64 ub = bounds.upper(loop.level, j);
  if (loop.tile_size > 0) {
    lb = std::max(lb, tile_index * loop.tile_size);
    ub = std::min(ub, tile_index * loop.tile_size + loop.tile_size - 1);
  }
  return {lb, ub};
}

IterVec LoopNest::transformed(const std::vector<i64>& values) const {
  IterVec j(static_cast<std::size_t>(dim()), 0);
  for (int q = 0; q < loop_count(); ++q) {
    const NestLoop& loop = loops[static_cast<std::size_t>(q)];
    if (!loop.is_tile) j[static_cast<std::size_t>(loop.level)] = values[static_cast<std::size_t>(q)];
  }
  return j;
}

IterVec LoopNest::original(const std::vector<i64>& values) const {
  return inverse_transform.apply(transformed(values));
}

void LoopNest::walk_subtree(int q, std::vector<i64>& values,
                            const std::function<void(const std::vector<i64>&)>& fn) const {
  if (q == loop_count()) {
    fn(values);
    return;
  }
  const auto [lb, ub] = range(q, values);
  for (i64 v = lb; v <= ub; ++v) {
    values[static_cast<std::size_t>(q)] = v;
    walk_subtree(q + 1, values, fn);
  }
}

void LoopNest::walk(const std::function<void(const std::vector<i64>&)>& fn) const {
  std::vector<i64> values(static_cast<std::size_t>(loop_count()), 0);
  walk_subtree(0, values, fn);
}

LoopNest build_nest(const std::vector<i64>& extents, const Schedule& s) {
  const int d = s.dim();
  LoopNest nest;
  nest.extents = extents;
  nest.transform = s.transform;
  nest.inverse_transform = inverse(s.transform);
  nest.bounds = fme_bounds(s.transform, extents);

  const int first = s.tiling ? s.tiling->first : 0;
  const int last = s.tiling ? s.tiling->last : -1;

  auto tile_size_of = [&](int level) -> i64 {
    if (!s.tiling || level < first || level > last) return 0;
    return s.tiling->sizes[static_cast<std::size_t>(level - first)];
  };

  // Final order: pre-band point loops, tile loops, in-band point loops,
  // post-band point loops.
  for (int level = 0; level < first; ++level) nest.loops.push_back({false, level, 0, 0, 0});
  for (int level = first; level <= last; ++level) {
    const i64 size = tile_size_of(level);
    const auto [lo, hi] = transformed_range(s.transform, extents, level);
    nest.loops.push_back({true, level, size, floor_div(lo, size), floor_div(hi, size)});
  }
  for (int level = first; level <= last; ++level)
    nest.loops.push_back({false, level, tile_size_of(level), 0, 0});
  for (int level = last + 1; level < d; ++level) nest.loops.push_back({false, level, 0, 0, 0});

  if (s.parallel) {
    const int level = *s.parallel;
    const bool tiled = s.tiling && level >= first && level <= last;
    for (int q = 0; q < nest.loop_count(); ++q) {
      const NestLoop& loop = nest.loops[static_cast<std::size_t>(q)];
      if (loop.level == level && loop.is_tile == tiled) {
        nest.parallel_loop = q;
        break;
      }
    }
  }
  nest.unroll = s.unroll.value_or(1);
  return nest;
}

}  // namespace unisched
