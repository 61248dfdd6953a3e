#include "unisched/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace unisched {

namespace {

// Fraction-free (Bareiss) elimination on a copy; exact for integer input.
i64 bareiss_det(std::vector<std::vector<i64>> m) {
  const int n = static_cast<int>(m.size());
  i64 sign = 1;
  i64 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r) {
        if (m[r][k] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

UnimodularMatrix UnimodularMatrix::identity(int d) {
  std::vector<std::vector<i64>> rows(static_cast<std::size_t>(d),
                                     std::vector<i64>(static_cast<std::size_t>(d), 0));
  for (int k = 0; k < d; ++k) rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1;
  return UnimodularMatrix(d, std::move(rows));
}

UnimodularMatrix UnimodularMatrix::from_entries(std::vector<std::vector<i64>> rows, i64 entry_cap) {
  const int d = static_cast<int>(rows.size());
  if (d < 1) throw ValidationError("matrix must have dimension >= 1");
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d) throw ValidationError("matrix must be square");
    for (i64 e : row) {
      if (std::llabs(e) > entry_cap)
        throw ValidationError("matrix entry magnitude " + std::to_string(e) +
                              " exceeds cap " + std::to_string(entry_cap));
    }
  }
  UnimodularMatrix m(d, std::move(rows));
  i64 det = determinant(m);
  if (det != 1 && det != -1)
    throw ValidationError("matrix is not unimodular (det = " + std::to_string(det) + ")");
  return m;
}

IterVec UnimodularMatrix::apply(const IterVec& v) const {
  if (static_cast<int>(v.size()) != d_) throw ValidationError("dimension mismatch in matrix apply");
  IterVec out(static_cast<std::size_t>(d_), 0);
  for (int r = 0; r < d_; ++r) {
    i64 acc = 0;
    for (int c = 0; c < d_; ++c) acc += at(r, c) * v[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

std::vector<i64> UnimodularMatrix::flatten() const {
  std::vector<i64> flat;
  flat.reserve(static_cast<std::size_t>(d_ * d_));
  for (const auto& row : rows_)
    for (i64 e : row) flat.push_back(e);
  return flat;
}

std::string UnimodularMatrix::render() const {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < d_; ++r) {
    if (r) os << ",";
    os << "[";
    for (int c = 0; c < d_; ++c) {
      if (c) os << ",";
      os << at(r, c);
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string TransformStep::render() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Interchange:
      os << "interchange(" << a << "," << b << ")";
      break;
    case Kind::Reversal:
      os << "reversal(" << a << ")";
      break;
    case Kind::Skew:
      os << "skew(" << a << "->" << b << "," << factor << ")";
      break;
  }
  return os.str();
}

UnimodularMatrix generator(const TransformStep& step, int d) {
  auto check_index = [d](int k, const char* what) {
    if (k < 0 || k >= d)
      throw ValidationError(std::string(what) + " index " + std::to_string(k) +
                            " out of range for dimension " + std::to_string(d));
  };
  auto rows = UnimodularMatrix::identity(d).rows();
  switch (step.kind) {
    case TransformStep::Kind::Interchange:
      check_index(step.a, "interchange");
      check_index(step.b, "interchange");
      if (step.a == step.b) throw ValidationError("interchange loops must differ");
      std::swap(rows[static_cast<std::size_t>(step.a)], rows[static_cast<std::size_t>(step.b)]);
      break;
    case TransformStep::Kind::Reversal:
      check_index(step.a, "reversal");
      rows[static_cast<std::size_t>(step.a)][static_cast<std::size_t>(step.a)] = -1;
      break;
    case TransformStep::Kind::Skew:
      check_index(step.a, "skew src");
      check_index(step.b, "skew dst");
      if (step.a == step.b) throw ValidationError("skew src and dst must differ");
      if (step.factor == 0) throw ValidationError("skew factor must be nonzero");
      rows[static_cast<std::size_t>(step.b)][static_cast<std::size_t>(step.a)] = step.factor;
      break;
  }
  return UnimodularMatrix::from_entries(std::move(rows));
}

UnimodularMatrix compose(const UnimodularMatrix& later, const UnimodularMatrix& earlier, i64 entry_cap) {
  if (later.dim() != earlier.dim()) throw ValidationError("dimension mismatch in compose");
  const int d = later.dim();
  std::vector<std::vector<i64>> rows(static_cast<std::size_t>(d),
                                     std::vector<i64>(static_cast<std::size_t>(d), 0));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      i64 acc = 0;
      for (int k = 0; k < d; ++k) acc += later.at(r, k) * earlier.at(k, c);
      rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = acc;
    }
  }
  return UnimodularMatrix::from_entries(std::move(rows), entry_cap);
}

i64 determinant(const UnimodularMatrix& m) { return bareiss_det(m.rows()); }

UnimodularMatrix inverse(const UnimodularMatrix& m) {
  const int d = m.dim();
  const i64 det = determinant(m);
  // Adjugate via cofactors; d <= 5 in practice so this stays cheap.
  std::vector<std::vector<i64>> inv(static_cast<std::size_t>(d),
                                    std::vector<i64>(static_cast<std::size_t>(d), 0));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      std::vector<std::vector<i64>> minor;
      minor.reserve(static_cast<std::size_t>(d - 1));
      for (int i = 0; i < d; ++i) {
        if (i == r) continue;
        std::vector<i64> row;
        row.reserve(static_cast<std::size_t>(d - 1));
        for (int j = 0; j < d; ++j) {
          if (j == c) continue;
          row.push_back(m.at(i, j));
        }
        minor.push_back(std::move(row));
      }
      i64 cof = minor.empty() ? 1 : bareiss_det(std::move(minor));
      if ((r + c) % 2 != 0) cof = -cof;
      // adj(M)[c][r] = cofactor(r,c); inverse = adj / det with det = +-1.
      inv[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = cof * det;
    }
  }
  return UnimodularMatrix::from_entries(std::move(inv));
}

}  // namespace unisched
