#include "unisched/bounds.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace unisched {

namespace {

// Inequality sum(a[m]*j_m) + c >= 0 over transformed coordinates.
struct Constraint {
  std::vector<i64> a;
  i64 c = 0;

  bool operator==(const Constraint& o) const = default;
};

// Integer tightening: divide by the gcd of the coefficients, flooring the
// constant term.
void normalize(Constraint& con) {
  i64 g = 0;
  for (i64 v : con.a) g = std::gcd(g, v);
  if (g > 1) {
    for (i64& v : con.a) v /= g;
    con.c = floor_div(con.c, g);
  }
}

}  // namespace

i64 LoopBounds::lower(int level, const IterVec& j) const {
  i64 best = std::numeric_limits<i64>::min();
  for (const auto& b : levels[static_cast<std::size_t>(level)].lowers)
    best = std::max(best, ceil_div(b.numerator(j), b.divisor));
  return best;
}

i64 LoopBounds::upper(int level, const IterVec& j) const {
  i64 best = std::numeric_limits<i64>::max();
  for (const auto& b : levels[static_cast<std::size_t>(level)].uppers)
    best = std::min(best, floor_div(b.numerator(j), b.divisor));
  return best;
}

LoopBounds fme_bounds(const UnimodularMatrix& t, const std::vector<i64>& extents) {
  const int d = t.dim();
  const UnimodularMatrix r = inverse(t);  // i = R * j

  // 0 <= (R*j)_k <= extents[k]-1 for every original loop k.
  std::vector<Constraint> system;
  for (int k = 0; k < d; ++k) {
    Constraint low, high;
    low.a.resize(static_cast<std::size_t>(d));
    high.a.resize(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) {
      low.a[static_cast<std::size_t>(m)] = r.at(k, m);
      high.a[static_cast<std::size_t>(m)] = -r.at(k, m);
    }
    low.c = 0;
    high.c = extents[static_cast<std::size_t>(k)] - 1;
    system.push_back(std::move(low));
    system.push_back(std::move(high));
  }

  LoopBounds out;
  out.dim = d;
  out.levels.resize(static_cast<std::size_t>(d));

  for (int level = d - 1; level >= 0; --level) {
    std::vector<Constraint> lowers, uppers, rest;
    for (const auto& con : system) {
      const i64 ak = con.a[static_cast<std::size_t>(level)];
      if (ak > 0) lowers.push_back(con);
      else if (ak < 0) uppers.push_back(con);
      else rest.push_back(con);
    }

    auto& lb = out.levels[static_cast<std::size_t>(level)];
    for (const auto& con : lowers) {
      // a_k * j_k >= -(rest)  ->  j_k >= ceil(-(rest) / a_k)
      BoundExpr e;
      e.coeffs.assign(con.a.begin(), con.a.begin() + level);
      for (i64& v : e.coeffs) v = -v;
      e.constant = -con.c;
      e.divisor = con.a[static_cast<std::size_t>(level)];
      lb.lowers.push_back(std::move(e));
    }
    for (const auto& con : uppers) {
      // a_k * j_k >= -(rest) with a_k < 0  ->  j_k <= floor((rest') / -a_k)
      BoundExpr e;
      e.coeffs.assign(con.a.begin(), con.a.begin() + level);
      e.constant = con.c;
      e.divisor = -con.a[static_cast<std::size_t>(level)];
      lb.uppers.push_back(std::move(e));
    }

    // Eliminate j_level: cross every lower with every upper.
    std::vector<Constraint> next = std::move(rest);
    for (const auto& lo : lowers) {
      for (const auto& hi : uppers) {
        const i64 alpha = lo.a[static_cast<std::size_t>(level)];   // > 0
        const i64 beta = -hi.a[static_cast<std::size_t>(level)];   // > 0
        Constraint con;
        con.a.resize(static_cast<std::size_t>(level));
        for (int m = 0; m < level; ++m)
          con.a[static_cast<std::size_t>(m)] = beta * lo.a[static_cast<std::size_t>(m)] +
                                               alpha * hi.a[static_cast<std::size_t>(m)];
        con.c = beta * lo.c + alpha * hi.c;
        normalize(con);
        if (std::find(next.begin(), next.end(), con) == next.end()) next.push_back(std::move(con));
      }
    }
    // The surviving constraints no longer reference j_level.
    for (auto& con : next) con.a.resize(static_cast<std::size_t>(level));
    system = std::move(next);
  }
  return out;
}

void for_each_point(const std::vector<i64>& extents, const std::function<void(const IterVec&)>& fn) {
  IterVec iter(extents.size(), 0);
  if (extents.empty()) return;
  while (true) {
    fn(iter);
    std::size_t k = extents.size();
    while (k > 0) {
      --k;
      if (++iter[k] < extents[k]) break;
      iter[k] = 0;
      if (k == 0) return;
    }
  }
}

std::vector<IterVec> enumerate_transformed(const UnimodularMatrix& t, const std::vector<i64>& extents,
                                           i64 max_points) {
  i64 n = 1;
  for (i64 e : extents) n *= e;
  if (n > max_points)
    throw RuntimeFailure("domain too large to enumerate (" + std::to_string(n) + " > " +
                         std::to_string(max_points) + " points)");
  std::vector<std::pair<IterVec, IterVec>> image;  // (T*i, i)
  image.reserve(static_cast<std::size_t>(n));
  for_each_point(extents, [&](const IterVec& i) { image.emplace_back(t.apply(i), i); });
  std::sort(image.begin(), image.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<IterVec> out;
  out.reserve(image.size());
  for (auto& [j, i] : image) out.push_back(std::move(i));
  return out;
}

std::pair<i64, i64> transformed_range(const UnimodularMatrix& t, const std::vector<i64>& extents,
                                      int level) {
  i64 lo = 0, hi = 0;
  for (int c = 0; c < t.dim(); ++c) {
    const i64 top = t.at(level, c) * (extents[static_cast<std::size_t>(c)] - 1);
    lo += std::min<i64>(0, top);
    hi += std::max<i64>(0, top);
  }
  return {lo, hi};
}

}  // namespace unisched
