#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

// Spans of vectors over F2, F3 and Z4. Shared by the clone-closure oracle, the
// basis-independence checks and the subpower membership solver.

namespace vl::linalg {

using Vec = std::vector<std::uint8_t>;

/// Row space over a prime field (2 or 3), kept in reduced echelon form.
///
/// Each inserted vector may carry a tag (its generator index); the span then
/// tracks, for every basis row, which combination of tags produced it, so
/// solve() can return coefficients on the original generators.
class FieldSpan {
 public:
  FieldSpan(int prime, std::size_t length, std::size_t tag_count = 0);

  struct InsertResult {
    bool independent = false;
    /// Combination of tags summing to zero. Filled only when the inserted
    /// vector was dependent and tags are tracked.
    Vec relation;
  };

  /// Entries of v must already be reduced modulo the prime.
  InsertResult insert(Vec v, std::size_t tag = 0);
  bool contains(Vec v) const;
  /// Coefficients c (one per tag) with sum c_t * gen_t = target, if any.
  std::optional<Vec> solve(Vec target) const;

  int prime() const { return p_; }
  std::size_t length() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  std::vector<Vec> basis() const;

 private:
  struct Row {
    std::size_t pivot;
    Vec vec;
    Vec combo;
  };

  // Subtract coef * src from dst, modulo p.
  void axpy(Vec& dst, const Vec& src, std::uint8_t coef) const;
  std::uint8_t inverse(std::uint8_t a) const { return p_ == 3 && a == 2 ? 2 : 1; }

  int p_;
  std::size_t n_;
  std::size_t tags_;
  std::vector<Row> rows_;
};

/// Rank of a family of vectors over F_p.
std::size_t rank_mod(int prime, const std::vector<Vec>& vectors);

/// Subgroup of Z4^n, stored as S = span_Z4(lifts) + 2 * L2, where the lifts
/// reduce to an echelon basis of L1 = S mod 2 and L2 = { y : 2y in S }.
/// |S| = 2^(dim L1 + dim L2).
class Z4Span {
 public:
  explicit Z4Span(std::size_t length);

  /// Entries in [0, 4). Returns true if the subgroup grew.
  bool insert(Vec v);
  bool contains(Vec v) const;

  std::size_t dim_mod2() const { return l1_.size(); }
  std::size_t dim_doubled() const { return l2_.rank(); }

  /// Every element of S mod 2 (that is, of L1). Throws ResourceLimit above cap.
  std::vector<Vec> mod2_elements(std::size_t cap) const;
  /// Every element of S. Throws ResourceLimit above cap.
  std::vector<Vec> elements(std::size_t cap) const;

 private:
  struct Lift {
    std::size_t pivot;
    Vec mod2;
    Vec lift;
  };

  std::size_t n_;
  std::vector<Lift> l1_;
  FieldSpan l2_;
};

}  // namespace vl::linalg
