#include "unisched/dependence.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace unisched {

namespace {

// Lattice solutions of coeffs * delta = rhs inside the distance box
// |delta_k| <= extents[k]-1, found by Gauss-Jordan elimination over exact
// integers followed by enumeration of the free coordinates. Returns false if
// the free-coordinate product exceeds the budget.
bool solve_uniform(const std::vector<std::vector<i64>>& coeffs, const std::vector<i64>& rhs,
                   const std::vector<i64>& extents, std::vector<IterVec>& out) {
  const int m = static_cast<int>(coeffs.size());
  const int d = static_cast<int>(extents.size());
  // rows: [a_0 .. a_{d-1} | rhs]
  std::vector<std::vector<i64>> rows;
  for (int r = 0; r < m; ++r) {
    std::vector<i64> row = coeffs[static_cast<std::size_t>(r)];
    row.push_back(rhs[static_cast<std::size_t>(r)]);
    rows.push_back(std::move(row));
  }

  std::vector<int> pivot_col_of_row;
  std::vector<bool> col_is_pivot(static_cast<std::size_t>(d), false);
  int pivot_rows = 0;
  for (int col = 0; col < d && pivot_rows < m; ++col) {
    int sel = -1;
    for (int r = pivot_rows; r < m; ++r)
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[static_cast<std::size_t>(pivot_rows)], rows[static_cast<std::size_t>(sel)]);
    const auto& prow = rows[static_cast<std::size_t>(pivot_rows)];
    const i64 p = prow[static_cast<std::size_t>(col)];
    for (int r = 0; r < m; ++r) {
      if (r == pivot_rows) continue;
      auto& row = rows[static_cast<std::size_t>(r)];
      const i64 f = row[static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int c = 0; c <= d; ++c)
        row[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c)] * p -
                                           prow[static_cast<std::size_t>(c)] * f;
    }
    pivot_col_of_row.push_back(col);
    col_is_pivot[static_cast<std::size_t>(col)] = true;
    ++pivot_rows;
  }
  // Inconsistent system: no solutions at all.
  for (int r = pivot_rows; r < m; ++r)
    if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] != 0) return true;

  std::vector<int> free_cols;
  i64 combos = 1;
  for (int c = 0; c < d; ++c) {
    if (col_is_pivot[static_cast<std::size_t>(c)]) continue;
    free_cols.push_back(c);
    combos *= 2 * extents[static_cast<std::size_t>(c)] - 1;
    if (combos > 4000000) return false;  // too many; let the caller enumerate
  }

  IterVec delta(static_cast<std::size_t>(d), 0);
  std::vector<i64> free_vals(free_cols.size(), 0);
  // odometer over free coordinates
  std::size_t nf = free_cols.size();
  std::vector<i64> lo(nf), hi(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    lo[i] = -(extents[static_cast<std::size_t>(free_cols[i])] - 1);
    hi[i] = extents[static_cast<std::size_t>(free_cols[i])] - 1;
    free_vals[i] = lo[i];
  }
  while (true) {
    for (std::size_t i = 0; i < nf; ++i) delta[static_cast<std::size_t>(free_cols[i])] = free_vals[i];
    bool ok = true;
    for (int r = 0; r < pivot_rows && ok; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      const int pc = pivot_col_of_row[static_cast<std::size_t>(r)];
      i64 acc = row[static_cast<std::size_t>(d)];
      for (std::size_t i = 0; i < nf; ++i)
        acc -= row[static_cast<std::size_t>(free_cols[i])] * free_vals[i];
      const i64 p = row[static_cast<std::size_t>(pc)];
      if (acc % p != 0) {
        ok = false;
        break;
      }
      const i64 v = acc / p;
      if (std::abs(v) > extents[static_cast<std::size_t>(pc)] - 1) {
        ok = false;
        break;
      }
      delta[static_cast<std::size_t>(pc)] = v;
    }
    if (ok) out.push_back(delta);
    // advance odometer
    std::size_t i = 0;
    for (; i < nf; ++i) {
      if (++free_vals[i] <= hi[i]) break;
      free_vals[i] = lo[i];
    }
    if (nf == 0 || i == nf) break;
  }
  return true;
}

i64 linear_cell(const std::vector<i64>& idx, const std::vector<i64>& sizes) {
  i64 lin = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) lin = lin * sizes[r] + idx[r];
  return lin;
}

void for_each_iteration(const std::vector<i64>& extents, const std::function<void(const IterVec&)>& f) {
  IterVec iter(extents.size(), 0);
  while (true) {
    f(iter);
    std::size_t k = extents.size();
    while (k > 0) {
      --k;
      if (++iter[k] < extents[k]) break;
      iter[k] = 0;
      if (k == 0) return;
    }
  }
}

IterVec decode_iteration(i64 lin, const std::vector<i64>& extents) {
  IterVec iter(extents.size(), 0);
  for (std::size_t k = extents.size(); k-- > 0;) {
    iter[k] = lin % extents[k];
    lin /= extents[k];
  }
  return iter;
}

struct DistanceCollector {
  std::map<IterVec, IterVec> found;  // vector -> one source iteration

  void add(const IterVec& delta, const IterVec& source) {
    IterVec v = delta;
    IterVec src = source;
    if (!lex_positive(v)) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        src[k] += v[k];
        v[k] = -v[k];
      }
    }
    found.emplace(std::move(v), std::move(src));
  }
};

}  // namespace

DependenceSet compute_dependences(const Kernel& k) {
  const int d = k.depth();
  DistanceCollector collector;

  // Pairs: write vs write, and write vs each read of the same array.
  std::vector<const AccessFunction*> partners;
  partners.push_back(&k.statement.lhs);
  for (const AccessFunction* r : k.reads())
    if (r->array == k.statement.lhs.array) partners.push_back(r);

  const AccessFunction& w = k.statement.lhs;
  const auto& sizes = k.array(w.array).sizes;

  i64 pair_budget = kMaxDependencePairs;
  std::unordered_map<i64, std::vector<i64>> write_cells;  // built lazily
  bool write_cells_built = false;

  auto build_write_cells = [&]() {
    if (write_cells_built) return;
    for_each_iteration(k.extents, [&](const IterVec& it) {
      i64 lin_iter = 0;
      for (std::size_t q = 0; q < it.size(); ++q) lin_iter = lin_iter * k.extents[q] + it[q];
      write_cells[linear_cell(w.index_of(it), sizes)].push_back(lin_iter);
    });
    write_cells_built = true;
  };

  for (const AccessFunction* b : partners) {
    // Uniform fast path: identical linear parts.
    if (b->coeffs == w.coeffs) {
      // cell_w(i) = F i + c_w equals cell_b(i') = F i' + c_b
      // iff F (i' - i) = c_w - c_b.
      std::vector<i64> rhs(w.offsets.size());
      for (std::size_t r = 0; r < rhs.size(); ++r) rhs[r] = w.offsets[r] - b->offsets[r];
      std::vector<IterVec> sols;
      if (solve_uniform(w.coeffs, rhs, k.extents, sols)) {
        for (const auto& delta : sols) {
          bool zero = std::all_of(delta.begin(), delta.end(), [](i64 x) { return x == 0; });
          if (zero) continue;
          IterVec source(static_cast<std::size_t>(d), 0);
          for (int q = 0; q < d; ++q)
            source[static_cast<std::size_t>(q)] = std::max<i64>(0, -delta[static_cast<std::size_t>(q)]);
          collector.add(delta, source);
        }
        continue;
      }
      // budget exceeded in the solver; fall through to enumeration
    }

    build_write_cells();
    std::unordered_map<i64, std::vector<i64>> other_cells;
    const bool self = b->same_function(w);
    if (!self) {
      for_each_iteration(k.extents, [&](const IterVec& it) {
        i64 lin_iter = 0;
        for (std::size_t q = 0; q < it.size(); ++q) lin_iter = lin_iter * k.extents[q] + it[q];
        other_cells[linear_cell(b->index_of(it), sizes)].push_back(lin_iter);
      });
    }
    const auto& rhs_map = self ? write_cells : other_cells;
    for (const auto& [cell, writers] : write_cells) {
      auto it = rhs_map.find(cell);
      if (it == rhs_map.end()) continue;
      const auto& accessors = it->second;
      pair_budget -= static_cast<i64>(writers.size()) * static_cast<i64>(accessors.size());
      if (pair_budget < 0)
        throw RuntimeFailure("domain too large for exact dependence analysis (limit " +
                             std::to_string(kMaxDependencePairs) + " iteration pairs)");
      for (i64 wi : writers) {
        IterVec a = decode_iteration(wi, k.extents);
        for (i64 bi : accessors) {
          if (wi == bi) continue;
          IterVec c = decode_iteration(bi, k.extents);
          IterVec delta(static_cast<std::size_t>(d));
          for (int q = 0; q < d; ++q)
            delta[static_cast<std::size_t>(q)] =
                c[static_cast<std::size_t>(q)] - a[static_cast<std::size_t>(q)];
          collector.add(delta, a);
        }
      }
    }
  }

  // Drop vectors that are integer multiples of another stored vector; the
  // image of n*v is lex-positive exactly when the image of v is, so every
  // legality predicate is unchanged.
  DependenceSet out;
  std::vector<std::pair<IterVec, IterVec>> all(collector.found.begin(), collector.found.end());
  for (const auto& [v, src] : all) {
    bool redundant = false;
    for (const auto& [u, usrc] : all) {
      if (u == v) continue;
      i64 ratio = 0;
      bool multiple = true;
      for (int q = 0; q < d && multiple; ++q) {
        const i64 uv = u[static_cast<std::size_t>(q)];
        const i64 vv = v[static_cast<std::size_t>(q)];
        if (uv == 0) {
          if (vv != 0) multiple = false;
        } else {
          if (vv % uv != 0) {
            multiple = false;
          } else {
            const i64 r = vv / uv;
            if (ratio == 0) ratio = r;
            else if (ratio != r) multiple = false;
          }
        }
      }
      if (multiple && ratio >= 2) {
        redundant = true;
        break;
      }
    }
    if (!redundant) {
      out.vectors.push_back(v);
      out.witnesses.push_back(src);
    }
  }
  out.exact = true;
  return out;
}

bool is_legal(const UnimodularMatrix& t, const DependenceSet& deps) {
  for (const auto& v : deps.vectors)
    if (!lex_positive(t.apply(v))) return false;
  return true;
}

bool parallel_legal(const UnimodularMatrix& t, const DependenceSet& deps, int level) {
  for (const auto& v : deps.vectors)
    if (first_nonzero(t.apply(v)) == level) return false;
  return true;
}

bool permutable_band(const UnimodularMatrix& t, const DependenceSet& deps, int first, int last) {
  for (const auto& v : deps.vectors) {
    IterVec w = t.apply(v);
    const int fz = first_nonzero(w);
    if (fz < first || fz > last) continue;
    for (int q = first; q <= last; ++q)
      if (w[static_cast<std::size_t>(q)] < 0) return false;
  }
  return true;
}

}  // namespace unisched
