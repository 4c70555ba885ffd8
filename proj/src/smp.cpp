#include "vl/smp.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "vl/fnspace.hpp"
#include "vl/linalg.hpp"

namespace vl {

Tuple SmpInstance::column(std::size_t j) const {
  Tuple c;
  c.reserve(generators.size());
  for (const auto& g : generators) c.push_back(g.at(j));
  return c;
}

void SmpInstance::validate() const {
  if (n == 0) throw std::invalid_argument("smp instance: n must be >= 1");
  if (target.size() != n) throw ArityError("smp instance: target has length " + std::to_string(target.size()));
  for (const auto& g : generators)
    if (g.size() != n) throw ArityError("smp instance: generator has length " + std::to_string(g.size()));
}

namespace {

Tuple parse_row(const std::string& line, std::size_t n) {
  Tuple row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(cell, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("smp instance: bad residue '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos || v < 0 || v >= kOrder)
      throw std::invalid_argument("smp instance: bad residue '" + cell + "'");
    row.emplace_back(v);
  }
  if (row.size() != n)
    throw std::invalid_argument("smp instance: expected " + std::to_string(n) + " residues per line");
  return row;
}

}  // namespace

SmpInstance read_instance(std::istream& is) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  if (lines.empty()) throw std::invalid_argument("smp instance: empty input");

  std::istringstream head(lines[0]);
  long long n = 0, k = 0;
  std::string extra;
  if (!(head >> n >> k) || (head >> extra) || n < 1 || k < 0)
    throw std::invalid_argument("smp instance: expected header 'n k'");
  if (static_cast<long long>(lines.size()) != k + 2)
    throw std::invalid_argument("smp instance: expected " + std::to_string(k + 2) + " lines");

  SmpInstance inst;
  inst.n = static_cast<std::size_t>(n);
  for (long long i = 0; i < k; ++i) inst.generators.push_back(parse_row(lines[i + 1], inst.n));
  inst.target = parse_row(lines.back(), inst.n);
  return inst;
}

void write_instance(std::ostream& os, const SmpInstance& inst) {
  auto row = [&](const Tuple& t) {
    for (std::size_t j = 0; j < t.size(); ++j) os << (j ? "," : "") << t[j].value();
    os << '\n';
  };
  os << inst.n << ' ' << inst.generators.size() << '\n';
  for (const auto& g : inst.generators) row(g);
  row(inst.target);
}

// ---------------------------------------------------------------------------

SimPartition sim_partition(const SmpInstance& inst) {
  inst.validate();
  SimPartition part;
  std::map<Rep, std::size_t> index;
  for (std::size_t j = 0; j < inst.n; ++j) {
    auto rep = canonical_rep(inst.column(j));
    if (!rep) {
      part.even_columns.push_back(j);
      continue;
    }
    auto [it, fresh] = index.try_emplace(*rep, part.classes.size());
    if (fresh) {
      part.classes.emplace_back();
      part.keys.push_back(*rep);
    }
    part.classes[it->second].push_back(j);
  }
  return part;
}

std::vector<Tuple> derived_generators(const SimPartition& part, std::size_t n) {
  std::vector<Tuple> out;
  for (const auto& cls : part.classes) {
    Tuple b(n);
    for (std::size_t j : cls) b[j] = Residue(4);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Tuple> derived_generators(const SmpInstance& inst) {
  return derived_generators(sim_partition(inst), inst.n);
}

// ---------------------------------------------------------------------------
// Linear systems over Z12 = Z3 x Z4.

namespace {

linalg::Vec reduce(const Tuple& t, int m) {
  linalg::Vec v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = static_cast<std::uint8_t>(t[i].value() % m);
  return v;
}

// sum coef_j * gens_j mod 4, skipping zero coefficients
linalg::Vec combine_mod4(const std::vector<Tuple>& gens, const linalg::Vec& coef, std::size_t n) {
  linalg::Vec out(n, 0);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    if (!coef[j]) continue;
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>((out[i] + coef[j] * gens[j][i].value()) & 3);
  }
  return out;
}

std::optional<linalg::Vec> solve_mod3(const std::vector<Tuple>& gens, const Tuple& target) {
  linalg::FieldSpan span(3, target.size(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) span.insert(reduce(gens[j], 3), j);
  return span.solve(reduce(target, 3));
}

// Solve mod 2, then correct the lift: with c = c0 + sum l_i K_i + 2d, where K_i
// span the mod-2 kernel, the remaining condition is linear over Z2 in (l, d).
std::optional<linalg::Vec> solve_mod4(const std::vector<Tuple>& gens, const Tuple& target) {
  const std::size_t n = target.size(), m = gens.size();
  linalg::FieldSpan low(2, n, m);
  std::vector<linalg::Vec> kernel;
  for (std::size_t j = 0; j < m; ++j) {
    auto res = low.insert(reduce(gens[j], 2), j);
    if (!res.independent) kernel.push_back(std::move(res.relation));
  }
  auto c0 = low.solve(reduce(target, 2));
  if (!c0) return std::nullopt;

  const linalg::Vec base = combine_mod4(gens, *c0, n);
  linalg::Vec rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = static_cast<std::uint8_t>(((target[i].value() - base[i] + 4) & 3) >> 1);

  linalg::FieldSpan high(2, n, kernel.size() + m);
  for (std::size_t r = 0; r < kernel.size(); ++r) {
    linalg::Vec h = combine_mod4(gens, kernel[r], n);
    for (auto& e : h) e >>= 1;
    high.insert(std::move(h), r);
  }
  for (std::size_t j = 0; j < m; ++j) high.insert(reduce(gens[j], 2), kernel.size() + j);
  auto lift = high.solve(std::move(rhs));
  if (!lift) return std::nullopt;

  linalg::Vec c(m);
  for (std::size_t j = 0; j < m; ++j) {
    int v = (*c0)[j] + 2 * (*lift)[kernel.size() + j];
    for (std::size_t r = 0; r < kernel.size(); ++r) v += (*lift)[r] * kernel[r][j];
    c[j] = static_cast<std::uint8_t>(v & 3);
  }
  return c;
}

}  // namespace

std::optional<std::vector<Residue>> group_membership(const std::vector<Tuple>& gens, const Tuple& target) {
  for (const auto& g : gens)
    if (g.size() != target.size()) throw ArityError("group_membership: generator length mismatch");
  auto c3 = solve_mod3(gens, target);
  if (!c3) return std::nullopt;
  auto c4 = solve_mod4(gens, target);
  if (!c4) return std::nullopt;

  std::vector<Residue> c(gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) c[j] = Residue(4 * (*c3)[j] + 9 * (*c4)[j]);

  Tuple check(target.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (c[j].value())
      for (std::size_t i = 0; i < target.size(); ++i) check[i] += c[j] * gens[j][i];
  if (check != target) throw std::logic_error("group_membership: witness does not reproduce the target");
  return c;
}

SmpResult smp_decide(const SmpInstance& inst) {
  SmpResult result;
  result.partition = sim_partition(inst);
  std::vector<Tuple> gens = derived_generators(result.partition, inst.n);
  const std::size_t derived = gens.size();
  // derived generators first: their supports are disjoint, so elimination
  // stays sparse
  gens.insert(gens.end(), inst.generators.begin(), inst.generators.end());

  auto c = group_membership(gens, inst.target);
  if (!c) return result;
  result.member = true;
  result.derived_coeffs.assign(c->begin(), c->begin() + derived);
  result.original_coeffs.assign(c->begin() + derived, c->end());
  return result;
}

Term witness_term(const SmpInstance& inst, const SmpResult& result) {
  if (!result.member) throw std::invalid_argument("witness_term: instance was not decided positively");
  const int k = static_cast<int>(inst.generators.size());
  if (k > kMaxTableArity) throw ResourceLimit("witness_term: f_r terms for k > 6 are too large to build");
  if (result.original_coeffs.size() != inst.generators.size() ||
      result.derived_coeffs.size() != result.partition.classes.size())
    throw std::invalid_argument("witness_term: witness does not match the instance");

  std::vector<Term> parts;
  for (int j = 0; j < k; ++j)
    if (int c = result.original_coeffs[j].value()) parts.push_back(times(c, Term::var(j + 1)));
  for (std::size_t i = 0; i < result.partition.classes.size(); ++i)
    if (int d = result.derived_coeffs[i].value())
      parts.push_back(times(d, build_fr_term(k, result.partition.keys[i])));
  Term t = sum(parts);

  const CompiledTerm eval(t);
  for (std::size_t j = 0; j < inst.n; ++j)
    if (eval(inst.column(j)) != inst.target[j])
      throw std::logic_error("witness_term: term does not evaluate to the target at coordinate " +
                             std::to_string(j));
  return t;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t encode(const Tuple& t) {
  std::size_t idx = 0;
  for (std::size_t i = t.size(); i-- > 0;) idx = idx * kOrder + t[i].value();
  return idx;
}

template <class Combine>
std::set<std::size_t> closure(const std::vector<Tuple>& gens, std::size_t n, std::size_t cap, Combine combine) {
  std::size_t space = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (space > cap / kOrder) throw ResourceLimit("closure: 12^n exceeds the size cap");
    space *= kOrder;
  }
  std::vector<bool> seen(space, false);
  std::vector<Tuple> elems;
  auto push = [&](const Tuple& t) {
    const std::size_t idx = encode(t);
    if (!seen[idx]) {
      seen[idx] = true;
      elems.push_back(t);
    }
  };
  push(Tuple(n));
  for (const auto& g : gens) {
    if (g.size() != n) throw ArityError("closure: generator length mismatch");
    push(g);
  }
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) combine(elems[i], elems[j], push);

  std::set<std::size_t> out;
  for (const auto& e : elems) out.insert(encode(e));
  return out;
}

}  // namespace

std::set<std::size_t> subpower_closure(const std::vector<Tuple>& gens, std::size_t n, std::size_t cap) {
  return closure(gens, n, cap, [n](const Tuple& a, const Tuple& b, auto& push) {
    Tuple prod(n), ab(n), ba(n);
    for (std::size_t i = 0; i < n; ++i) {
      prod[i] = loop_mul(a[i], b[i]);
      ab[i] = loop_div(a[i], b[i]);
      ba[i] = loop_div(b[i], a[i]);
    }
    push(prod);
    push(ab);
    push(ba);
  });
}

std::set<std::size_t> additive_closure(const std::vector<Tuple>& gens, std::size_t n, std::size_t cap) {
  return closure(gens, n, cap, [n](const Tuple& a, const Tuple& b, auto& push) {
    Tuple s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a[i] + b[i];
    push(s);
  });
}

}  // namespace vl
