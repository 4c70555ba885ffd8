#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

#include "vl/core.hpp"
#include "vl/termlang.hpp"

namespace vl {

/// Is target in the subloop of L^n generated by the generators?
struct SmpInstance {
  std::size_t n = 0;
  std::vector<Tuple> generators;
  Tuple target;

  /// Column j: the j-th entries of all generators, a point of Z12^k.
  Tuple column(std::size_t j) const;
  void validate() const;
};

/// Instance text format: "n k", then k lines of n comma-separated residues,
/// then the target line.
SmpInstance read_instance(std::istream& is);
void write_instance(std::ostream& os, const SmpInstance& inst);

/// Columns grouped by the +-mod-4 relation. Column indices are 0-based.
struct SimPartition {
  std::vector<std::vector<std::size_t>> classes;  // non-even columns, by least member
  std::vector<Rep> keys;                          // canonical representative of each class
  std::vector<std::size_t> even_columns;          // columns in 2Z12^k
};

SimPartition sim_partition(const SmpInstance& inst);
/// One 4-indicator vector per class of non-even columns, in class order.
std::vector<Tuple> derived_generators(const SmpInstance& inst);
std::vector<Tuple> derived_generators(const SimPartition& part, std::size_t n);

/// Coefficients c with sum c_j gens_j = target over Z12, or nullopt.
std::optional<std::vector<Residue>> group_membership(const std::vector<Tuple>& gens, const Tuple& target);

struct SmpResult {
  bool member = false;
  SimPartition partition;
  std::vector<Residue> original_coeffs;  // one per generator
  std::vector<Residue> derived_coeffs;   // one per class
};

SmpResult smp_decide(const SmpInstance& inst);

/// A k-variable term t with t(a_1, ..., a_k) = target, built from the witness
/// of a positive decision. Throws std::logic_error if the term does not
/// re-evaluate to the target.
Term witness_term(const SmpInstance& inst, const SmpResult& result);

/// Subloop of L^n generated by gens (plus the identity), by closure under
/// componentwise multiplication and division. Tuples are encoded as their
/// mixed-radix index.
std::set<std::size_t> subpower_closure(const std::vector<Tuple>& gens, std::size_t n,
                                       std::size_t cap = 12 * 12 * 12);

/// Additive subgroup of Z12^n generated by gens, by closure under +.
std::set<std::size_t> additive_closure(const std::vector<Tuple>& gens, std::size_t n,
                                       std::size_t cap = 12 * 12 * 12);

}  // namespace vl
