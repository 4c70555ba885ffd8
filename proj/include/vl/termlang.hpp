#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vl/core.hpp"
#include "vl/fnspace.hpp"

namespace vl {

enum class Op : std::uint8_t { var, zero, neg, add, f, ldot };

/// Immutable term over {+, -, 0, f} plus loop multiplication. Subterms are
/// shared, so a Term is a DAG and copying is cheap.
class Term {
 public:
  static Term var(int index);
  static Term zero();
  static Term neg(Term a);
  static Term add(Term a, Term b);
  static Term f(Term a, Term b);
  static Term ldot(Term a, Term b);

  Op op() const;
  /// Variable index (1-based); only meaningful for Op::var.
  int index() const;
  /// First operand of neg/add/f/ldot.
  const Term& left() const;
  /// Second operand of add/f/ldot.
  const Term& right() const;
  /// Largest variable index occurring in the term (0 if none).
  int max_var() const;
  /// Node count of the tree with shared subterms expanded.
  std::uint64_t tree_size() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  static Term make(Op op, int index, std::vector<Term> kids);
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Term operator+(Term a, Term b);
Term operator-(Term a);
Term operator-(Term a, Term b);
/// n copies of t added together (n >= 0); Zero for n = 0.
Term times(int n, const Term& t);
/// Left-folded sum; Zero for an empty list.
Term sum(std::span<const Term> terms);
/// sum c_i x_i with each coefficient expanded as repeated addition.
Term linear_term(std::span<const int> coeffs);
/// Replace x_i by images[i-1].
Term substitute(const Term& t, std::span<const Term> images);

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Grammar: term := "0" | "x<n>" | "(" op term* ")" with op in
/// {+ (two or more operands, folded left), neg, f, ldot}.
Term parse(std::string_view text);
/// Prints left-nested sums as one variadic "+".
std::string print(const Term& t);

/// A term flattened to straight-line code over its distinct subterms, for
/// repeated evaluation.
class CompiledTerm {
 public:
  explicit CompiledTerm(const Term& t);
  Residue operator()(std::span<const Residue> x) const;
  int max_var() const { return max_var_; }

 private:
  struct Instr {
    Op op;
    std::int32_t a;
    std::int32_t b;
  };
  std::vector<Instr> code_;
  int max_var_ = 0;
};

Residue evaluate(const Term& t, std::span<const Residue> x);
FunctionTable table(const Term& t, int arity);

/// (xy)^4 · x^8 · y^8 with powers by repeated squaring.
Term build_t_term();
Term build_gk_term(int arity);
/// g_k composed with an invertible linear substitution taking r to e_1 mod 4.
Term build_fr_term(int arity, const Rep& r);
/// The Z4 matrix used by build_fr_term, rows as coefficient vectors in [4]^k.
std::vector<std::vector<int>> fr_substitution(int arity, const Rep& r);

/// Random term in variables x1..xk of depth at most max_depth.
Term random_term(std::mt19937_64& rng, int arity, int max_depth);

}  // namespace vl
