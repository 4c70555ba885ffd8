#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vl {

inline constexpr int kOrder = 12;

/// Raised when a tuple or table does not have the arity an operation expects.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an enumeration or rewrite would exceed its configured budget.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element of Z12, always stored in canonical form [0, 12).
class Residue {
 public:
  constexpr Residue() = default;
  constexpr explicit Residue(int v) : v_(static_cast<std::uint8_t>(((v % kOrder) + kOrder) % kOrder)) {}

  constexpr int value() const { return v_; }
  constexpr bool is_even() const { return (v_ & 1) == 0; }
  constexpr bool in_center() const { return v_ % 4 == 0; }
  constexpr int mod2() const { return v_ & 1; }
  constexpr int mod4() const { return v_ & 3; }

  friend constexpr Residue operator+(Residue a, Residue b) { return Residue(a.v_ + b.v_); }
  friend constexpr Residue operator-(Residue a, Residue b) { return Residue(a.v_ - b.v_); }
  friend constexpr Residue operator-(Residue a) { return Residue(-a.v_); }
  friend constexpr Residue operator*(int n, Residue a) { return Residue(n * a.v_); }
  friend constexpr Residue operator*(Residue a, Residue b) { return Residue(a.v_ * b.v_); }
  constexpr Residue& operator+=(Residue o) { return *this = *this + o; }
  constexpr Residue& operator-=(Residue o) { return *this = *this - o; }

  friend constexpr auto operator<=>(Residue, Residue) = default;

 private:
  std::uint8_t v_ = 0;
};

/// A point of Z12^k.
using Tuple = std::vector<Residue>;

Tuple make_tuple(std::initializer_list<int> values);
Tuple negate(std::span<const Residue> x);
std::string to_string(std::span<const Residue> x);

/// C = 4Z12 and D = 2Z12 as residue subsets.
inline constexpr int kCenter[] = {0, 4, 8};
inline constexpr int kEvens[] = {0, 2, 4, 6, 8, 10};

Residue t_map(Residue x, Residue y);
Residue loop_mul(Residue x, Residue y);
/// The unique z with x·z = b. Throws std::logic_error if the scan does not
/// find exactly one solution.
Residue loop_div(Residue a, Residue b);
Residue f_map(Residue x, Residue y);
Residue g_map(int k, std::span<const Residue> x);
/// x^e for e in {2, 4, 8}, bracketed as repeated squaring.
Residue power_sq(Residue x, int e);

/// An equivalence relation on Z12, stored as the least element of each
/// point's class.
struct Partition {
  std::vector<std::uint8_t> label;

  int class_count() const;
  bool same(int a, int b) const { return label[a] == label[b]; }
  /// True if every class of *this lies inside a class of other.
  bool refines(const Partition& other) const;
  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;
};

/// Partition of Z12 into cosets of the subgroup {0, step, 2*step, ...}.
Partition coset_partition(int step);
bool is_congruence(const Partition& p);
/// Smallest congruence containing (a, b).
Partition principal_congruence(int a, int b);
Partition join(const Partition& a, const Partition& b);
/// All congruences of L, finest first.
std::vector<Partition> enumerate_congruences();

}  // namespace vl
