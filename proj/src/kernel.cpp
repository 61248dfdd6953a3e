#include "unisched/kernel.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace unisched {

using json = nlohmann::ordered_json;

namespace {

constexpr int kMaxDepth = 5;
constexpr int kMaxRank = 3;

void collect_reads(const ExprPtr& e, std::vector<const AccessFunction*>& out) {
  if (!e) return;
  switch (e->kind) {
    case Expr::Kind::Const:
      break;
    case Expr::Kind::Read:
      out.push_back(&e->read);
      break;
    case Expr::Kind::BinOp:
      collect_reads(e->lhs, out);
      collect_reads(e->rhs, out);
      break;
  }
}

int count_ops(const ExprPtr& e) {
  if (!e || e->kind != Expr::Kind::BinOp) return 0;
  return 1 + count_ops(e->lhs) + count_ops(e->rhs);
}

void validate_expr(const Kernel& k, const ExprPtr& e);

void validate_access(const Kernel& k, const AccessFunction& a) {
  const ArrayDecl* decl = nullptr;
  for (const auto& arr : k.arrays)
    if (arr.name == a.array) decl = &arr;
  if (!decl) throw ValidationError("access references undeclared array \"" + a.array + "\"");
  if (a.rank() != decl->rank())
    throw ValidationError("access to \"" + a.array + "\" has rank " + std::to_string(a.rank()) +
                          " but array has rank " + std::to_string(decl->rank()));
  if (static_cast<int>(a.coeffs.size()) != a.rank())
    throw ValidationError("access coeffs row count does not match offsets length");
  for (const auto& row : a.coeffs)
    if (static_cast<int>(row.size()) != k.depth())
      throw ValidationError("access coeffs column count does not match kernel depth");
  std::string why;
  if (!access_in_bounds(a, decl->sizes, k.extents, &why))
    throw ValidationError("access to \"" + a.array + "\" out of bounds: " + why);
}

void validate_expr(const Kernel& k, const ExprPtr& e) {
  if (!e) throw ValidationError("statement rhs contains an empty expression");
  switch (e->kind) {
    case Expr::Kind::Const:
      break;
    case Expr::Kind::Read:
      validate_access(k, e->read);
      break;
    case Expr::Kind::BinOp:
      if (e->op == BinOpKind::Div) {
        if (!e->rhs || e->rhs->kind != Expr::Kind::Const || e->rhs->constant == 0.0)
          throw ValidationError("division only by a nonzero constant");
      }
      validate_expr(k, e->lhs);
      validate_expr(k, e->rhs);
      break;
  }
}

// ---- JSON <-> IR --------------------------------------------------------

AccessFunction access_from_json(const json& j) {
  AccessFunction a;
  a.array = j.at("array").get<std::string>();
  for (const auto& row : j.at("coeffs")) a.coeffs.push_back(row.get<std::vector<i64>>());
  a.offsets = j.at("offsets").get<std::vector<i64>>();
  return a;
}

json access_to_json(const AccessFunction& a) {
  return json{{"array", a.array}, {"coeffs", a.coeffs}, {"offsets", a.offsets}};
}

ExprPtr expr_from_json(const json& j) {
  if (j.contains("const")) return Expr::make_const(j.at("const").get<double>());
  if (j.contains("read")) return Expr::make_read(access_from_json(j.at("read")));
  if (j.contains("op")) {
    const std::string op = j.at("op").get<std::string>();
    BinOpKind kind;
    if (op == "+") kind = BinOpKind::Add;
    else if (op == "-") kind = BinOpKind::Sub;
    else if (op == "*") kind = BinOpKind::Mul;
    else if (op == "/") kind = BinOpKind::Div;
    else throw ValidationError("unknown operator \"" + op + "\"");
    return Expr::make_binop(kind, expr_from_json(j.at("lhs")), expr_from_json(j.at("rhs")));
  }
  throw ValidationError("expression must be one of const, read, op");
}

json expr_to_json(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const:
      return json{{"const", e->constant}};
    case Expr::Kind::Read:
      return json{{"read", access_to_json(e->read)}};
    case Expr::Kind::BinOp: {
      const char* op = e->op == BinOpKind::Add   ? "+"
                       : e->op == BinOpKind::Sub ? "-"
                       : e->op == BinOpKind::Mul ? "*"
                                                 : "/";
      return json{{"op", op}, {"lhs", expr_to_json(e->lhs)}, {"rhs", expr_to_json(e->rhs)}};
    }
  }
  throw ValidationError("corrupt expression node");
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Const:
      return a->constant == b->constant;
    case Expr::Kind::Read:
      return a->read.same_function(b->read);
    case Expr::Kind::BinOp:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
  return false;
}

// simple helpers for builtin construction
AccessFunction acc(std::string array, std::vector<std::vector<i64>> coeffs, std::vector<i64> offsets) {
  return AccessFunction{std::move(array), std::move(coeffs), std::move(offsets)};
}

ExprPtr rd(AccessFunction a) { return Expr::make_read(std::move(a)); }
ExprPtr add(ExprPtr a, ExprPtr b) { return Expr::make_binop(BinOpKind::Add, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return Expr::make_binop(BinOpKind::Mul, std::move(a), std::move(b)); }
ExprPtr div(ExprPtr a, ExprPtr b) { return Expr::make_binop(BinOpKind::Div, std::move(a), std::move(b)); }

}  // namespace

ExprPtr Expr::make_const(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->constant = v;
  return e;
}

ExprPtr Expr::make_read(AccessFunction a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Read;
  e->read = std::move(a);
  return e;
}

ExprPtr Expr::make_binop(BinOpKind op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::BinOp;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

std::vector<i64> AccessFunction::index_of(const IterVec& iter) const {
  std::vector<i64> idx(offsets.begin(), offsets.end());
  for (std::size_t r = 0; r < coeffs.size(); ++r)
    for (std::size_t c = 0; c < coeffs[r].size(); ++c) idx[r] += coeffs[r][c] * iter[c];
  return idx;
}

i64 ArrayDecl::element_count() const {
  i64 n = 1;
  for (i64 s : sizes) n *= s;
  return n;
}

i64 Kernel::domain_size() const {
  i64 n = 1;
  for (i64 e : extents) n *= e;
  return n;
}

const ArrayDecl& Kernel::array(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return a;
  throw ValidationError("unknown array \"" + name + "\"");
}

std::vector<const AccessFunction*> Kernel::accesses() const {
  std::vector<const AccessFunction*> out;
  out.push_back(&statement.lhs);
  collect_reads(statement.rhs, out);
  return out;
}

std::vector<const AccessFunction*> Kernel::reads() const {
  std::vector<const AccessFunction*> out;
  collect_reads(statement.rhs, out);
  return out;
}

int Kernel::arithmetic_op_count() const { return count_ops(statement.rhs); }

bool access_in_bounds(const AccessFunction& a, const std::vector<i64>& sizes,
                      const std::vector<i64>& extents, std::string* why) {
  // Per row, min/max over the box decompose per coordinate; this equals the
  // extremum over the 2^d corner points.
  for (int r = 0; r < a.rank(); ++r) {
    i64 lo = a.offsets[static_cast<std::size_t>(r)];
    i64 hi = lo;
    for (std::size_t c = 0; c < extents.size(); ++c) {
      const i64 f = a.coeffs[static_cast<std::size_t>(r)][c];
      const i64 top = f * (extents[c] - 1);
      lo += std::min<i64>(0, top);
      hi += std::max<i64>(0, top);
    }
    if (lo < 0 || hi >= sizes[static_cast<std::size_t>(r)]) {
      if (why) {
        std::ostringstream os;
        os << "dimension " << r << " ranges [" << lo << "," << hi << "] outside [0,"
           << sizes[static_cast<std::size_t>(r)] - 1 << "]";
        *why = os.str();
      }
      return false;
    }
  }
  return true;
}

void validate_kernel(const Kernel& k) {
  const int d = k.depth();
  if (d < 1 || d > kMaxDepth)
    throw ValidationError("kernel depth " + std::to_string(d) + " outside [1," +
                          std::to_string(kMaxDepth) + "]");
  for (i64 e : k.extents)
    if (e < 1) throw ValidationError("every extent must be >= 1");
  if (k.name.empty()) throw ValidationError("kernel name must be nonempty");
  if (k.arrays.empty()) throw ValidationError("kernel must declare at least one array");
  for (const auto& a : k.arrays) {
    if (a.rank() < 1 || a.rank() > kMaxRank)
      throw ValidationError("array \"" + a.name + "\" rank outside [1," + std::to_string(kMaxRank) + "]");
    for (i64 s : a.sizes)
      if (s < 1) throw ValidationError("array \"" + a.name + "\" has a non-positive size");
    for (const auto& b : k.arrays)
      if (&a != &b && a.name == b.name)
        throw ValidationError("duplicate array declaration \"" + a.name + "\"");
  }
  validate_access(k, k.statement.lhs);
  validate_expr(k, k.statement.rhs);

  bool lhs_read = false;
  for (const AccessFunction* r : k.reads())
    if (r->same_function(k.statement.lhs)) lhs_read = true;
  if (k.statement.is_reduction != lhs_read)
    throw ValidationError(std::string("reduction flag is ") +
                          (k.statement.is_reduction ? "true" : "false") +
                          " but lhs access " + (lhs_read ? "appears" : "does not appear") +
                          " as a read on rhs");
}

Kernel parse_kernel(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    // nlohmann reports a byte offset; recover line/column for the message.
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("kernel syntax error: ") + err.what(), line, col);
  }

  Kernel k;
  try {
    k.name = j.at("name").get<std::string>();
    k.extents = j.at("extents").get<std::vector<i64>>();
    for (const auto& ja : j.at("arrays")) {
      ArrayDecl a;
      a.name = ja.at("name").get<std::string>();
      a.sizes = ja.at("sizes").get<std::vector<i64>>();
      const auto& init = ja.at("init");
      if (init.is_string()) {
        const std::string s = init.get<std::string>();
        if (s == "zero") a.init = InitKind::Zero;
        else if (s == "iota") a.init = InitKind::Iota;
        else throw ValidationError("unknown init \"" + s + "\"");
      } else if (init.is_object() && init.contains("random")) {
        a.init = InitKind::Random;
        a.seed = init.at("random").get<std::uint64_t>();
      } else {
        throw ValidationError("init must be \"zero\", \"iota\" or {\"random\": seed}");
      }
      k.arrays.push_back(std::move(a));
    }
    const auto& st = j.at("statement");
    k.statement.lhs = access_from_json(st.at("lhs"));
    k.statement.rhs = expr_from_json(st.at("rhs"));
    k.statement.is_reduction = st.at("reduction").get<bool>();
  } catch (const json::exception& err) {
    throw ParseError(std::string("kernel structure error: ") + err.what(), 1, 1);
  }

  validate_kernel(k);
  return k;
}

std::string serialize_kernel(const Kernel& k) {
  json arrays = json::array();
  for (const auto& a : k.arrays) {
    json init;
    switch (a.init) {
      case InitKind::Zero: init = "zero"; break;
      case InitKind::Iota: init = "iota"; break;
      case InitKind::Random: init = json{{"random", a.seed}}; break;
    }
    arrays.push_back(json{{"name", a.name}, {"sizes", a.sizes}, {"init", init}});
  }
  json j{{"name", k.name},
         {"extents", k.extents},
         {"arrays", arrays},
         {"statement",
          json{{"lhs", access_to_json(k.statement.lhs)},
               {"rhs", expr_to_json(k.statement.rhs)},
               {"reduction", k.statement.is_reduction}}}};
  return j.dump(2) + "\n";
}

bool structurally_equal(const Kernel& a, const Kernel& b) {
  if (a.name != b.name || a.extents != b.extents) return false;
  if (a.arrays.size() != b.arrays.size()) return false;
  for (std::size_t i = 0; i < a.arrays.size(); ++i) {
    const auto& x = a.arrays[i];
    const auto& y = b.arrays[i];
    if (x.name != y.name || x.sizes != y.sizes || x.init != y.init || x.seed != y.seed) return false;
  }
  return a.statement.lhs.same_function(b.statement.lhs) &&
         a.statement.is_reduction == b.statement.is_reduction &&
         expr_equal(a.statement.rhs, b.statement.rhs);
}

// ---- builtin benchmark kernels ------------------------------------------

namespace {

// C[i][j] += A[i][k] * B[k][j] with loops (i, k, j); the j-innermost order is
// the cache-friendly canonical form.
Kernel make_matmul() {
  const i64 n = 16;
  Kernel k;
  k.name = "matmul";
  k.extents = {n, n, n};
  k.arrays = {{"A", {n, n}, InitKind::Iota, 0},
              {"B", {n, n}, InitKind::Iota, 0},
              {"C", {n, n}, InitKind::Zero, 0}};
  AccessFunction c_ij = acc("C", {{1, 0, 0}, {0, 0, 1}}, {0, 0});
  AccessFunction a_ik = acc("A", {{1, 0, 0}, {0, 1, 0}}, {0, 0});
  AccessFunction b_kj = acc("B", {{0, 1, 0}, {0, 0, 1}}, {0, 0});
  k.statement.lhs = c_ij;
  k.statement.rhs = add(rd(c_ij), mul(rd(a_ik), rd(b_kj)));
  k.statement.is_reduction = true;
  return k;
}

// 5-point heat stencil over a 64x64 grid, 16 time steps. Writes are shifted
// by one so every read stays in bounds on a (17,66,66) array.
Kernel make_heat2d() {
  const i64 t = 16, n = 64;
  Kernel k;
  k.name = "heat2d";
  k.extents = {t, n, n};
  k.arrays = {{"A", {t + 1, n + 2, n + 2}, InitKind::Random, 11}};
  auto a_at = [](i64 dt, i64 di, i64 dj) {
    return acc("A", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {dt, di, dj});
  };
  k.statement.lhs = a_at(1, 1, 1);
  ExprPtr neighbors = add(add(rd(a_at(0, 0, 1)), rd(a_at(0, 2, 1))),
                          add(rd(a_at(0, 1, 0)), rd(a_at(0, 1, 2))));
  k.statement.rhs = add(mul(Expr::make_const(0.5), rd(a_at(0, 1, 1))),
                        mul(Expr::make_const(0.125), neighbors));
  k.statement.is_reduction = false;
  return k;
}

// 7-point heat stencil on a 16^3 grid, 8 time steps.
Kernel make_heat3d() {
  const i64 t = 8, n = 16;
  Kernel k;
  k.name = "heat3d";
  k.extents = {t, n, n, n};
  k.arrays = {{"A", {t + 1, n + 2, n + 2, n + 2}, InitKind::Random, 17}};
  auto a_at = [](i64 dt, i64 di, i64 dj, i64 dk) {
    return acc("A", {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, {dt, di, dj, dk});
  };
  k.statement.lhs = a_at(1, 1, 1, 1);
  ExprPtr sum = add(add(rd(a_at(0, 0, 1, 1)), rd(a_at(0, 2, 1, 1))),
                    add(rd(a_at(0, 1, 0, 1)), rd(a_at(0, 1, 2, 1))));
  sum = add(sum, add(rd(a_at(0, 1, 1, 0)), rd(a_at(0, 1, 1, 2))));
  k.statement.rhs = add(mul(Expr::make_const(0.4), rd(a_at(0, 1, 1, 1))),
                        mul(Expr::make_const(0.1), sum));
  k.statement.is_reduction = false;
  return k;
}

// 4-neighbor Jacobi relaxation over a 64x64 grid, 16 time steps.
Kernel make_jacobi2d() {
  const i64 t = 16, n = 64;
  Kernel k;
  k.name = "jacobi2d";
  k.extents = {t, n, n};
  k.arrays = {{"A", {t + 1, n + 2, n + 2}, InitKind::Random, 23}};
  auto a_at = [](i64 dt, i64 di, i64 dj) {
    return acc("A", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {dt, di, dj});
  };
  k.statement.lhs = a_at(1, 1, 1);
  ExprPtr sum = add(add(rd(a_at(0, 0, 1)), rd(a_at(0, 2, 1))),
                    add(rd(a_at(0, 1, 0)), rd(a_at(0, 1, 2))));
  k.statement.rhs = mul(Expr::make_const(0.25), sum);
  k.statement.is_reduction = false;
  return k;
}

// 3-tap horizontal blur over a 3-channel, 2560-wide image row. The extent-3
// channel loop is outermost.
Kernel make_boxblur() {
  const i64 channels = 3, width = 2560;
  Kernel k;
  k.name = "boxblur";
  k.extents = {channels, width};
  k.arrays = {{"in", {channels, width + 2}, InitKind::Random, 7},
              {"out", {channels, width}, InitKind::Zero, 0}};
  auto in_at = [](i64 dx) { return acc("in", {{1, 0}, {0, 1}}, {0, dx}); };
  k.statement.lhs = acc("out", {{1, 0}, {0, 1}}, {0, 0});
  k.statement.rhs =
      div(add(add(rd(in_at(0)), rd(in_at(1))), rd(in_at(2))), Expr::make_const(3.0));
  k.statement.is_reduction = false;
  return k;
}

}  // namespace

std::vector<Kernel> builtin_benchmarks() {
  std::vector<Kernel> out = {make_matmul(), make_heat2d(), make_heat3d(), make_jacobi2d(),
                             make_boxblur()};
  for (const auto& k : out) validate_kernel(k);
  return out;
}

Kernel builtin_benchmark(const std::string& name) {
  for (auto& k : builtin_benchmarks())
    if (k.name == name) return k;
  throw ValidationError("unknown builtin kernel \"" + name + "\"");
}

}  // namespace unisched
