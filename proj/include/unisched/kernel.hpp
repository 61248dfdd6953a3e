#pragma once

#include <memory>
#include <string>
#include <vector>

#include "unisched/common.hpp"

namespace unisched {

// Affine array access: index of iteration i is coeffs * i + offsets.
struct AccessFunction {
  std::string array;
  std::vector<std::vector<i64>> coeffs;  // m x d
  std::vector<i64> offsets;              // m

  int rank() const { return static_cast<int>(offsets.size()); }
  std::vector<i64> index_of(const IterVec& iter) const;
  bool same_function(const AccessFunction& o) const {
    return array == o.array && coeffs == o.coeffs && offsets == o.offsets;
  }
};

enum class InitKind { Zero, Iota, Random };

struct ArrayDecl {
  std::string name;
  std::vector<i64> sizes;  // rank 1..3
  InitKind init = InitKind::Zero;
  std::uint64_t seed = 0;  // Random only

  int rank() const { return static_cast<int>(sizes.size()); }
  i64 element_count() const;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOpKind { Add, Sub, Mul, Div };

// Expression tree: constants, reads, binary ops. Division only by a nonzero
// constant (validated).
struct Expr {
  enum class Kind { Const, Read, BinOp };

  Kind kind;
  double constant = 0.0;  // Const
  AccessFunction read;    // Read
  BinOpKind op = BinOpKind::Add;
  ExprPtr lhs, rhs;  // BinOp

  static ExprPtr make_const(double v);
  static ExprPtr make_read(AccessFunction a);
  static ExprPtr make_binop(BinOpKind op, ExprPtr l, ExprPtr r);
};

struct Statement {
  AccessFunction lhs;
  ExprPtr rhs;
  bool is_reduction = false;  // lhs also appears as a read on rhs
};

// Single-statement rectangular affine loop nest. Immutable after
// construction; safe to share across search workers.
struct Kernel {
  std::string name;
  std::vector<i64> extents;  // loop k iterates 0 .. extents[k]-1
  std::vector<ArrayDecl> arrays;
  Statement statement;

  int depth() const { return static_cast<int>(extents.size()); }
  i64 domain_size() const;
  const ArrayDecl& array(const std::string& name) const;
  // lhs first, then every read in rhs preorder.
  std::vector<const AccessFunction*> accesses() const;
  std::vector<const AccessFunction*> reads() const;
  int arithmetic_op_count() const;
};

// Checks every invariant: depth/extent ranges, array ranks, declared arrays,
// rank agreement, division by nonzero constants, reduction flag consistency,
// and in-bounds accesses (corner-point check on the rectangular domain).
// Throws ValidationError naming the violated invariant.
void validate_kernel(const Kernel& k);

// True iff the access stays within the declared sizes for every iteration of
// the rectangular domain. Affine indices attain extrema at domain vertices,
// so evaluating per-row minima/maxima over the corner set is exact.
bool access_in_bounds(const AccessFunction& a, const std::vector<i64>& sizes,
                      const std::vector<i64>& extents, std::string* why = nullptr);

// Parses and validates a kernel from its JSON file format.
Kernel parse_kernel(const std::string& text);

// Inverse of parse_kernel up to structural equality.
std::string serialize_kernel(const Kernel& k);

bool structurally_equal(const Kernel& a, const Kernel& b);

// matmul, heat2d, heat3d, jacobi2d, boxblur at desk-scale sizes.
std::vector<Kernel> builtin_benchmarks();
Kernel builtin_benchmark(const std::string& name);

}  // namespace unisched
