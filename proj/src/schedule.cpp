#include "unisched/schedule.hpp"

#include <sstream>

#include "unisched/bounds.hpp"

namespace unisched {

bool Schedule::has_skew_step() const {
  for (const auto& s : steps)
    if (s.kind == TransformStep::Kind::Skew) return true;
  return false;
}

std::vector<i64> Schedule::encoding() const {
  std::vector<i64> key = transform.flatten();
  key.push_back(parallel ? *parallel + 1 : 0);
  if (tiling) {
    key.push_back(tiling->first + 1);
    key.push_back(tiling->last + 1);
    for (int k = 0; k < 5; ++k)
      key.push_back(k < tiling->width() ? tiling->sizes[static_cast<std::size_t>(k)] : 0);
  } else {
    for (int k = 0; k < 7; ++k) key.push_back(0);
  }
  key.push_back(unroll ? *unroll : 0);
  return key;
}

std::string Schedule::render() const {
  std::ostringstream os;
  os << "matrix=" << transform.render();
  os << " steps=[";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) os << ",";
    os << steps[i].render();
  }
  os << "]";
  if (parallel) os << " parallel=" << *parallel;
  if (tiling) {
    os << " tile=" << tiling->first << "-" << tiling->last << ":";
    for (std::size_t i = 0; i < tiling->sizes.size(); ++i) {
      if (i) os << "x";
      os << tiling->sizes[i];
    }
  }
  if (unroll) os << " unroll=" << *unroll;
  return os.str();
}

void validate_schedule(const Kernel& k, const Schedule& s, const DependenceSet& deps) {
  const int d = k.depth();
  if (s.dim() != d) throw ValidationError("schedule dimension does not match kernel depth");

  UnimodularMatrix product = UnimodularMatrix::identity(d);
  for (const auto& step : s.steps) product = compose(generator(step, d), product);
  if (product != s.transform)
    throw ValidationError("schedule matrix is not the product of its recorded steps");

  if (!is_legal(s.transform, deps))
    throw ValidationError("schedule matrix violates a dependence");

  if (s.parallel) {
    if (*s.parallel < 0 || *s.parallel >= d)
      throw ValidationError("parallel level out of range");
    if (!parallel_legal(s.transform, deps, *s.parallel))
      throw ValidationError("parallel level " + std::to_string(*s.parallel) +
                            " carries a dependence");
  }

  if (s.tiling) {
    const auto& t = *s.tiling;
    if (t.first < 0 || t.last >= d || t.first > t.last)
      throw ValidationError("tiling band out of range");
    if (static_cast<int>(t.sizes.size()) != t.width())
      throw ValidationError("tiling needs one size per band level");
    if (!permutable_band(s.transform, deps, t.first, t.last))
      throw ValidationError("tiling band is not permutable");
    for (int level = t.first; level <= t.last; ++level) {
      const i64 size = t.sizes[static_cast<std::size_t>(level - t.first)];
      const auto [lo, hi] = transformed_range(s.transform, k.extents, level);
      const i64 extent = hi - lo + 1;
      if (size < 2 || size > extent)
        throw ValidationError("tile size " + std::to_string(size) + " at level " +
                              std::to_string(level) + " outside [2," + std::to_string(extent) + "]");
    }
  }

  if (s.unroll && *s.unroll < 2)
    throw ValidationError("unroll factor must be >= 2");
}

}  // namespace unisched
