#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vl/core.hpp"
#include "vl/termlang.hpp"

namespace vl {

// ---------------------------------------------------------------------------
// The equational basis.

struct Identity {
  std::string name;
  /// 1..9 for the f-identities, 0 for the abelian group axioms.
  int number = 0;
  Term lhs;
  Term rhs;
  int vars = 0;
};

/// The nine f-identities followed by the axioms of abelian groups of
/// exponent 12.
std::vector<Identity> identity_basis();
std::string to_string(const Identity& id);

struct IdentityCheck {
  bool holds = true;
  std::uint64_t assignments = 0;
  std::optional<Tuple> counterexample;
};

/// Evaluates both sides over all 12^v assignments; stops at the first
/// counterexample.
IdentityCheck verify_identity(const Identity& id);

// ---------------------------------------------------------------------------
// Flattened terms: sum u_i x_i plus an F3-combination of f-monomials whose
// arguments are linear forms.

using LinearForm = std::vector<std::uint8_t>;

/// f(sum first_j x_j, sum second_j x_j) with first in [2]^k and second in
/// [4]^k. Monomials with zero first argument are never formed.
struct FMonomial {
  LinearForm first;
  LinearForm second;
  friend auto operator<=>(const FMonomial&, const FMonomial&) = default;
  friend bool operator==(const FMonomial&, const FMonomial&) = default;
};

using FPoly = std::map<FMonomial, std::uint8_t>;  // coefficients in [3], no zeros

struct FlatTerm {
  int arity = 0;
  std::vector<Residue> linear;
  FPoly poly;
};

Term monomial_term(const FMonomial& m);
Residue evaluate(const FlatTerm& t, std::span<const Residue> x);
FunctionTable table(const FlatTerm& t);

/// One application of an identity to a single monomial: lhs = sum of rhs.
struct RewriteStep {
  std::string rule;
  FMonomial lhs;
  std::vector<std::pair<std::uint8_t, FMonomial>> rhs;
};

struct NormalizeOptions {
  /// Maximum number of flattened nodes plus rewrite steps.
  std::uint64_t budget = 10'000'000;
  std::function<void(const RewriteStep&)> trace;
};

/// Term to flat form using the group axioms and identities (1), (2), (4);
/// loop products desugar as x·y = x + y + f(x, x+y).
FlatTerm flatten(const Term& t, int arity, const NormalizeOptions& opts = {});

// ---------------------------------------------------------------------------
// Normal forms.

/// Index of s_{a,c} / t_{a,c}: the monomial f(x_i, sum_{j<i} a_j x_j
/// [+ x_i] + sum_{j>i} c_j x_j). i is 1-based.
struct MonomialKey {
  int i = 1;
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> c;
  friend auto operator<=>(const MonomialKey&, const MonomialKey&) = default;
  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};

enum class MonomialKind { s, t };

struct TermNormalForm {
  int arity = 0;
  std::vector<Residue> u;
  std::map<MonomialKey, std::uint8_t> v;  // s-monomials, nonzero coefficients in [3]
  std::map<MonomialKey, std::uint8_t> w;  // t-monomials
  friend bool operator==(const TermNormalForm&, const TermNormalForm&) = default;
};

FMonomial key_monomial(MonomialKind kind, const MonomialKey& key, int arity);
/// Every key of the normal-form domain for arity k: s-keys then t-keys.
std::vector<std::pair<MonomialKind, MonomialKey>> nf_monomials(int arity);
std::uint64_t nf_monomial_count(int arity);
bool is_normal_monomial(const FMonomial& m);

TermNormalForm normalize(const Term& t, int arity, const NormalizeOptions& opts = {});
/// Rewrites the f-part of a flat term into s/t monomials.
TermNormalForm normalize(FlatTerm flat, const NormalizeOptions& opts = {});
Term reconstruct(const TermNormalForm& nf);
bool terms_equal(const Term& t1, const Term& t2, int arity);

/// Text form: "u: u1 ... uk" then "s|t i a-bits c-digits coeff" per nonzero
/// monomial, with "-" for an empty bit/digit string.
std::string to_text(const TermNormalForm& nf);
TermNormalForm parse_normal_form(const std::string& text, int arity);

struct IndependenceReport {
  std::size_t count = 0;
  std::size_t rank = 0;
  bool independent() const { return rank == count; }
};

/// Rank over F3 of the tabulated s/t monomials (values / 4).
IndependenceReport verify_nf_independence(int arity);

/// Coordinates of the f-part of nf in the f_r basis of W_k, ordered like
/// transversal(k).reps.
std::vector<std::uint8_t> frbar_coordinates(const TermNormalForm& nf);

}  // namespace vl
