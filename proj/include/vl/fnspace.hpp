#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vl/core.hpp"

namespace vl {

/// Largest arity for which dense tables are materialized (12^6 entries).
inline constexpr int kMaxTableArity = 6;
/// Largest arity accepted by the clone-closure and exhaustive oracles.
inline constexpr int kMaxOracleArity = 3;

std::size_t pow12(int k);

/// A k-ary function Z12^k -> Z12 as a dense table. Index order is mixed radix
/// with x_1 varying fastest: index(x) = sum x_i * 12^(i-1).
class FunctionTable {
 public:
  FunctionTable() = default;
  /// Zero function of the given arity.
  explicit FunctionTable(int arity);
  FunctionTable(int arity, std::vector<Residue> values);

  /// Tabulate fn over every point of Z12^k.
  static FunctionTable tabulate(int arity, const std::function<Residue(std::span<const Residue>)>& fn);
  static FunctionTable projection(int arity, int i);
  /// x -> sum a_i x_i.
  static FunctionTable linear(std::span<const Residue> coeffs);

  int arity() const { return arity_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Residue>& values() const { return values_; }
  Residue operator[](std::size_t index) const { return values_[index]; }
  Residue& operator[](std::size_t index) { return values_[index]; }
  Residue at(std::span<const Residue> x) const;

  FunctionTable& operator+=(const FunctionTable& o);
  FunctionTable& operator-=(const FunctionTable& o);
  friend FunctionTable operator+(FunctionTable a, const FunctionTable& b) { return a += b; }
  friend FunctionTable operator-(FunctionTable a, const FunctionTable& b) { return a -= b; }
  friend FunctionTable operator*(int n, FunctionTable a);
  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
  friend auto operator<=>(const FunctionTable&, const FunctionTable&) = default;

 private:
  int arity_ = 0;
  std::vector<Residue> values_;
};

std::size_t point_index(std::span<const Residue> x);
Tuple point_at(int arity, std::size_t index);

/// Pointwise f(g(x), h(x)).
FunctionTable apply_f(const FunctionTable& g, const FunctionTable& h);

/// Table text format: "k <arity>" followed by the 12^k values.
void write_table(std::ostream& os, const FunctionTable& t);
FunctionTable read_table(std::istream& is);

bool is_in_Wk(const FunctionTable& h);

// ---------------------------------------------------------------------------
// Transversal of the order-4 cyclic subgroups of Z4^l.

using Rep = std::vector<std::uint8_t>;

struct Transversal {
  int length = 0;
  std::vector<Rep> reps;

  /// Position of rep in reps, or nullopt.
  std::optional<std::size_t> find(const Rep& r) const;
};

/// All c in [4]^l with an odd coordinate, keeping the lexicographically
/// smaller of {c, -c mod 4}, in lexicographic order.
Transversal build_transversal(int length);
const Transversal& transversal(int length);

/// Canonical representative of +-(x mod 4); nullopt if x mod 4 has no odd entry.
std::optional<Rep> canonical_rep(std::span<const Residue> x);
std::optional<Rep> canonical_rep(const Rep& x_mod4);

/// For every point of Z12^k, the index in transversal(k) of its class, or -1
/// for points of 2Z12^k. Cached per arity.
const std::vector<std::int32_t>& class_index_table(int arity);

FunctionTable f_rbar(int arity, const Rep& r);
std::vector<FunctionTable> wk_basis(int arity);
/// A W_k element with F3 coordinates drawn from rng.
FunctionTable random_wk(int arity, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Clone membership and normal forms.

struct FunctionNormalForm {
  std::vector<Residue> linear;        // a_1..a_k in [12]
  std::vector<std::uint8_t> wcoeffs;  // b_r in [3], indexed like transversal(k).reps

  friend bool operator==(const FunctionNormalForm&, const FunctionNormalForm&) = default;
  friend auto operator<=>(const FunctionNormalForm&, const FunctionNormalForm&) = default;
};

/// The unique normal form of h, or nullopt if h is not a term function of L.
std::optional<FunctionNormalForm> decompose(const FunctionTable& h);
FunctionTable reconstruct(const FunctionNormalForm& nf);
std::string to_string(const FunctionNormalForm& nf);

/// Every nonzero linear table sum a_i x_i fails is_in_Wk.
bool verify_direct_sum(int arity);

enum class SweepMode { exhaustive, sampled };

struct ClosureCheckReport {
  bool ok = true;
  std::uint64_t pairs_checked = 0;
  std::string failure;
};

/// f applied to (sum a_i x_i + w, sum b_i x_i + v) lands in W_k and does not
/// depend on w, v.
ClosureCheckReport verify_f_closure(int arity, SweepMode mode, std::uint64_t seed = 1,
                                    std::uint64_t samples = 10000);

/// The k-ary clone of L as an additive subgroup of Z12^(12^k).
class CloneClosure {
 public:
  CloneClosure(CloneClosure&&) noexcept;
  CloneClosure& operator=(CloneClosure&&) noexcept;
  ~CloneClosure();

  int arity() const { return arity_; }
  const std::vector<FunctionTable>& generators() const { return generators_; }
  /// Prime-power orders of the cyclic factors, e.g. {3, 3, 4, ...}.
  const std::vector<int>& elementary_divisors() const { return divisors_; }
  std::uint64_t size() const { return size_; }
  int rounds() const { return rounds_; }
  bool contains(const FunctionTable& h) const;

 private:
  friend CloneClosure clone_closure(int arity, std::size_t pair_cap);
  struct Impl;
  explicit CloneClosure(int arity);

  int arity_;
  std::vector<FunctionTable> generators_;
  std::vector<int> divisors_;
  std::uint64_t size_ = 0;
  int rounds_ = 0;
  std::unique_ptr<Impl> impl_;
};

/// Smallest set of k-ary tables containing the projections and closed under
/// pointwise + and f. Works on the subgroup spanned so far and applies f to
/// one representative per (image mod 2, image mod 4) pair.
CloneClosure clone_closure(int arity, std::size_t pair_cap = std::size_t{1} << 20);

/// Element-by-element closure under + and f. Only sensible for k = 1.
std::vector<FunctionTable> naive_clone_closure(int arity, std::size_t cap = 100000);

}  // namespace vl
