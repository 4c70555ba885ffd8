#include "vl/fnspace.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include "vl/linalg.hpp"

namespace vl {

std::size_t pow12(int k) {
  if (k < 1 || k > kMaxTableArity)
    throw ArityError("arity " + std::to_string(k) + " outside [1, " + std::to_string(kMaxTableArity) + "]");
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= kOrder;
  return n;
}

FunctionTable::FunctionTable(int arity) : arity_(arity), values_(pow12(arity)) {}

FunctionTable::FunctionTable(int arity, std::vector<Residue> values)
    : arity_(arity), values_(std::move(values)) {
  if (values_.size() != pow12(arity))
    throw ArityError("FunctionTable: expected " + std::to_string(pow12(arity)) + " values");
}

FunctionTable FunctionTable::tabulate(int arity,
                                      const std::function<Residue(std::span<const Residue>)>& fn) {
  FunctionTable t(arity);
  Tuple x(arity);
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    t.values_[idx] = fn(x);
    for (int i = 0; i < arity; ++i) {
      x[i] += Residue(1);
      if (x[i].value() != 0) break;
    }
  }
  return t;
}

FunctionTable FunctionTable::projection(int arity, int i) {
  if (i < 1 || i > arity) throw ArityError("projection index out of range");
  return tabulate(arity, [i](std::span<const Residue> x) { return x[i - 1]; });
}

FunctionTable FunctionTable::linear(std::span<const Residue> coeffs) {
  const int k = static_cast<int>(coeffs.size());
  return tabulate(k, [&](std::span<const Residue> x) {
    Residue s;
    for (int i = 0; i < k; ++i) s += coeffs[i] * x[i];
    return s;
  });
}

Residue FunctionTable::at(std::span<const Residue> x) const {
  if (static_cast<int>(x.size()) != arity_) throw ArityError("FunctionTable::at: arity mismatch");
  return values_[point_index(x)];
}

FunctionTable& FunctionTable::operator+=(const FunctionTable& o) {
  if (o.arity_ != arity_) throw ArityError("FunctionTable: adding tables of different arity");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

FunctionTable& FunctionTable::operator-=(const FunctionTable& o) {
  if (o.arity_ != arity_) throw ArityError("FunctionTable: subtracting tables of different arity");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

FunctionTable operator*(int n, FunctionTable a) {
  for (auto& v : a.values_) v = n * v;
  return a;
}

std::size_t point_index(std::span<const Residue> x) {
  std::size_t idx = 0;
  for (std::size_t i = x.size(); i-- > 0;) idx = idx * kOrder + x[i].value();
  return idx;
}

Tuple point_at(int arity, std::size_t index) {
  Tuple x(arity);
  for (int i = 0; i < arity; ++i) {
    x[i] = Residue(static_cast<int>(index % kOrder));
    index /= kOrder;
  }
  return x;
}

FunctionTable apply_f(const FunctionTable& g, const FunctionTable& h) {
  if (g.arity() != h.arity()) throw ArityError("apply_f: arity mismatch");
  FunctionTable out(g.arity());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f_map(g[i], h[i]);
  return out;
}

void write_table(std::ostream& os, const FunctionTable& t) {
  os << "k " << t.arity() << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << t[i].value();
    os << ((i + 1) % kOrder == 0 || i + 1 == t.size() ? '\n' : ' ');
  }
}

FunctionTable read_table(std::istream& is) {
  std::string tag;
  int k = 0;
  if (!(is >> tag >> k) || tag != "k") throw std::invalid_argument("table: expected header 'k <arity>'");
  const std::size_t n = pow12(k);
  std::vector<Residue> values;
  values.reserve(n);
  long long v = 0;
  while (values.size() < n && is >> v) {
    if (v < 0 || v >= kOrder) throw std::invalid_argument("table: value " + std::to_string(v) + " not in [0,12)");
    values.emplace_back(static_cast<int>(v));
  }
  if (values.size() != n)
    throw std::invalid_argument("table: expected " + std::to_string(n) + " values, got " +
                                std::to_string(values.size()));
  std::string extra;
  if (is >> extra) throw std::invalid_argument("table: trailing data '" + extra + "'");
  return FunctionTable(k, std::move(values));
}

bool is_in_Wk(const FunctionTable& h) {
  const int k = h.arity();
  for (std::size_t idx = 0; idx < h.size(); ++idx) {
    if (!h[idx].in_center()) return false;
    const Tuple x = point_at(k, idx);
    const bool all_even = std::all_of(x.begin(), x.end(), [](Residue r) { return r.is_even(); });
    if (all_even && h[idx].value() != 0) return false;
    if (h[point_index(negate(x))] != h[idx]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> Transversal::find(const Rep& r) const {
  auto it = std::lower_bound(reps.begin(), reps.end(), r);
  if (it == reps.end() || *it != r) return std::nullopt;
  return static_cast<std::size_t>(it - reps.begin());
}

namespace {

Rep negate_mod4(const Rep& c) {
  Rep out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = static_cast<std::uint8_t>((4 - c[i]) & 3);
  return out;
}

bool has_odd(const Rep& c) {
  return std::any_of(c.begin(), c.end(), [](std::uint8_t d) { return d & 1; });
}

}  // namespace

Transversal build_transversal(int length) {
  if (length < 0) throw ArityError("build_transversal: negative length");
  if (length > 12) throw ResourceLimit("build_transversal: length too large");
  Transversal t;
  t.length = length;
  Rep c(length, 0);
  while (true) {
    if (has_odd(c) && c <= negate_mod4(c)) t.reps.push_back(c);
    // lexicographic successor, last coordinate fastest
    int i = length - 1;
    while (i >= 0 && c[i] == 3) c[i--] = 0;
    if (i < 0) break;
    ++c[i];
  }
  return t;
}

const Transversal& transversal(int length) {
  static std::mutex mu;
  static std::map<int, Transversal> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(length);
  if (it == cache.end()) it = cache.emplace(length, build_transversal(length)).first;
  return it->second;
}

std::optional<Rep> canonical_rep(const Rep& x_mod4) {
  if (!has_odd(x_mod4)) return std::nullopt;
  Rep neg = negate_mod4(x_mod4);
  return std::min(x_mod4, neg);
}

std::optional<Rep> canonical_rep(std::span<const Residue> x) {
  Rep c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = static_cast<std::uint8_t>(x[i].mod4());
  return canonical_rep(c);
}

const std::vector<std::int32_t>& class_index_table(int arity) {
  static std::mutex mu;
  static std::map<int, std::vector<std::int32_t>> cache;
  const std::size_t n = pow12(arity);
  const Transversal& tr = transversal(arity);
  std::lock_guard lock(mu);
  auto it = cache.find(arity);
  if (it != cache.end()) return it->second;

  // index by x mod 4, read as base-4 with x_1 least significant
  std::size_t n4 = 1;
  for (int i = 0; i < arity; ++i) n4 *= 4;
  std::vector<std::int32_t> by_code(n4, -1);
  Rep c(arity);
  for (std::size_t code = 0; code < n4; ++code) {
    std::size_t rest = code;
    for (int i = 0; i < arity; ++i) {
      c[i] = static_cast<std::uint8_t>(rest & 3);
      rest >>= 2;
    }
    if (auto rep = canonical_rep(c)) by_code[code] = static_cast<std::int32_t>(*tr.find(*rep));
  }

  std::vector<std::int32_t> table(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rest = idx, code = 0, shift = 0;
    for (int i = 0; i < arity; ++i, shift += 2) {
      code |= (rest % kOrder & 3) << shift;
      rest /= kOrder;
    }
    table[idx] = by_code[code];
  }
  return cache.emplace(arity, std::move(table)).first->second;
}

FunctionTable f_rbar(int arity, const Rep& r) {
  const auto pos = transversal(arity).find(r);
  if (static_cast<int>(r.size()) != arity || !pos)
    throw std::invalid_argument("f_rbar: representative is not in the transversal");
  const auto& cls = class_index_table(arity);
  FunctionTable t(arity);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (cls[i] == static_cast<std::int32_t>(*pos)) t[i] = Residue(4);
  return t;
}

std::vector<FunctionTable> wk_basis(int arity) {
  std::vector<FunctionTable> out;
  for (const Rep& r : transversal(arity).reps) out.push_back(f_rbar(arity, r));
  return out;
}

FunctionTable random_wk(int arity, std::mt19937_64& rng) {
  const auto& reps = transversal(arity).reps;
  std::vector<int> coef(reps.size());
  for (auto& c : coef) c = static_cast<int>(rng() % 3);
  const auto& cls = class_index_table(arity);
  FunctionTable t(arity);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (cls[i] >= 0) t[i] = Residue(4 * coef[cls[i]]);
  return t;
}

// ---------------------------------------------------------------------------

std::optional<FunctionNormalForm> decompose(const FunctionTable& h) {
  const int k = h.arity();
  FunctionNormalForm nf;
  nf.linear.resize(k);

  std::size_t unit = 1;
  for (int i = 0; i < k; ++i, unit *= kOrder) {
    const Residue twice = h[2 * unit];
    if (!twice.is_even()) return std::nullopt;
    const Residue a(twice.value() / 2);
    if ((h[unit] - a).in_center()) {
      nf.linear[i] = a;
    } else if ((h[unit] - a - Residue(6)).in_center()) {
      nf.linear[i] = a + Residue(6);
    } else {
      return std::nullopt;
    }
  }

  // linear with coefficients a on 2Z12^k
  for (std::size_t idx = 0; idx < h.size(); ++idx) {
    const Tuple x = point_at(k, idx);
    if (!std::all_of(x.begin(), x.end(), [](Residue r) { return r.is_even(); })) continue;
    Residue s;
    for (int i = 0; i < k; ++i) s += nf.linear[i] * x[i];
    if (s != h[idx]) return std::nullopt;
  }

  const FunctionTable w = h - FunctionTable::linear(nf.linear);
  if (!is_in_Wk(w)) return std::nullopt;

  for (const Rep& r : transversal(k).reps) {
    Tuple x(r.begin(), r.end());
    std::transform(r.begin(), r.end(), x.begin(), [](std::uint8_t d) { return Residue(d); });
    nf.wcoeffs.push_back(static_cast<std::uint8_t>(w.at(x).value() / 4));
  }

  if (reconstruct(nf) != h) return std::nullopt;
  return nf;
}

FunctionTable reconstruct(const FunctionNormalForm& nf) {
  const int k = static_cast<int>(nf.linear.size());
  const auto& reps = transversal(k).reps;
  if (nf.wcoeffs.size() != reps.size()) throw ArityError("reconstruct: coefficient count mismatch");
  FunctionTable t = FunctionTable::linear(nf.linear);
  const auto& cls = class_index_table(k);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (cls[i] >= 0) t[i] += Residue(4 * nf.wcoeffs[cls[i]]);
  return t;
}

std::string to_string(const FunctionNormalForm& nf) {
  const int k = static_cast<int>(nf.linear.size());
  const auto& reps = transversal(k).reps;
  std::ostringstream os;
  os << "a:";
  for (Residue a : nf.linear) os << ' ' << a.value();
  os << '\n';
  for (std::size_t j = 0; j < reps.size(); ++j) {
    if (!nf.wcoeffs[j]) continue;
    os << "b ";
    for (auto d : reps[j]) os << int(d);
    os << ' ' << int(nf.wcoeffs[j]) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void check_oracle_arity(int k, const char* what) {
  if (k < 1 || k > kMaxOracleArity)
    throw ArityError(std::string(what) + ": arity must be in [1, " + std::to_string(kMaxOracleArity) + "]");
}

// Odometer over [12]^k.
bool next_coeffs(std::vector<Residue>& a) {
  for (auto& c : a) {
    c += Residue(1);
    if (c.value() != 0) return true;
  }
  return false;
}

}  // namespace

bool verify_direct_sum(int arity) {
  check_oracle_arity(arity, "verify_direct_sum");
  std::vector<Residue> a(arity);
  while (next_coeffs(a))
    if (is_in_Wk(FunctionTable::linear(a))) return false;
  return is_in_Wk(FunctionTable::linear(std::vector<Residue>(arity)));
}

ClosureCheckReport verify_f_closure(int arity, SweepMode mode, std::uint64_t seed, std::uint64_t samples) {
  check_oracle_arity(arity, "verify_f_closure");
  if (mode == SweepMode::exhaustive && arity > 2)
    throw std::invalid_argument("verify_f_closure: exhaustive mode requires k <= 2");

  std::mt19937_64 rng(seed);
  ClosureCheckReport report;
  auto check = [&](const std::vector<Residue>& a, const std::vector<Residue>& b, const FunctionTable& la,
                   const FunctionTable& lb) {
    const FunctionTable base = apply_f(la, lb);
    const FunctionTable perturbed = apply_f(la + random_wk(arity, rng), lb + random_wk(arity, rng));
    ++report.pairs_checked;
    if (!is_in_Wk(base) || perturbed != base) {
      report.ok = false;
      report.failure = "a=" + to_string(a) + " b=" + to_string(b);
    }
    return report.ok;
  };

  if (mode == SweepMode::exhaustive) {
    std::vector<std::vector<Residue>> coeffs;
    std::vector<FunctionTable> linear;
    std::vector<Residue> a(arity);
    do {
      coeffs.push_back(a);
      linear.push_back(FunctionTable::linear(a));
    } while (next_coeffs(a));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (!check(coeffs[i], coeffs[j], linear[i], linear[j])) return report;
    return report;
  }

  for (std::uint64_t s = 0; s < samples; ++s) {
    std::vector<Residue> a(arity), b(arity);
    for (auto& c : a) c = Residue(static_cast<int>(rng() % kOrder));
    for (auto& c : b) c = Residue(static_cast<int>(rng() % kOrder));
    if (!check(a, b, FunctionTable::linear(a), FunctionTable::linear(b))) break;
  }
  return report;
}

// ---------------------------------------------------------------------------

struct CloneClosure::Impl {
  linalg::FieldSpan mod3;
  linalg::Z4Span mod4;

  explicit Impl(std::size_t n) : mod3(3, n), mod4(n) {}

  static linalg::Vec reduce(const FunctionTable& t, int m) {
    linalg::Vec v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = static_cast<std::uint8_t>(t[i].value() % m);
    return v;
  }

  bool add(const FunctionTable& t) {
    const bool a = mod3.insert(reduce(t, 3)).independent;
    const bool b = mod4.insert(reduce(t, 4));
    return a || b;
  }
};

CloneClosure::CloneClosure(int arity) : arity_(arity), impl_(std::make_unique<Impl>(pow12(arity))) {}
CloneClosure::CloneClosure(CloneClosure&&) noexcept = default;
CloneClosure& CloneClosure::operator=(CloneClosure&&) noexcept = default;
CloneClosure::~CloneClosure() = default;

bool CloneClosure::contains(const FunctionTable& h) const {
  if (h.arity() != arity_) return false;
  return impl_->mod3.contains(Impl::reduce(h, 3)) && impl_->mod4.contains(Impl::reduce(h, 4));
}

CloneClosure clone_closure(int arity, std::size_t pair_cap) {
  check_oracle_arity(arity, "clone_closure");
  CloneClosure c(arity);
  auto& impl = *c.impl_;
  for (int i = 1; i <= arity; ++i) {
    FunctionTable p = FunctionTable::projection(arity, i);
    if (impl.add(p)) c.generators_.push_back(std::move(p));
  }

  const std::size_t n = pow12(arity);
  bool grew = true;
  while (grew) {
    grew = false;
    ++c.rounds_;
    // f(g, h) depends only on g mod 2 and h mod 4.
    const auto firsts = impl.mod4.mod2_elements(pair_cap);
    const auto seconds = impl.mod4.elements(pair_cap);
    if (firsts.size() * seconds.size() > pair_cap)
      throw ResourceLimit("clone_closure: " + std::to_string(firsts.size() * seconds.size()) +
                          " image pairs exceed the cap");
    for (const auto& g : firsts)
      for (const auto& h : seconds) {
        FunctionTable t(arity);
        for (std::size_t i = 0; i < n; ++i)
          if (g[i] == 1 && h[i] == 0) t[i] = Residue(4);
        if (impl.add(t)) {
          c.generators_.push_back(std::move(t));
          grew = true;
        }
      }
  }

  const std::size_t r3 = impl.mod3.rank(), l1 = impl.mod4.dim_mod2(), l2 = impl.mod4.dim_doubled();
  c.divisors_.insert(c.divisors_.end(), r3, 3);
  c.divisors_.insert(c.divisors_.end(), l1, 4);
  c.divisors_.insert(c.divisors_.end(), l2 - l1, 2);
  std::uint64_t size = 1;
  for (int d : c.divisors_) {
    if (size > UINT64_MAX / static_cast<std::uint64_t>(d)) throw ResourceLimit("clone_closure: size overflows 64 bits");
    size *= static_cast<std::uint64_t>(d);
  }
  c.size_ = size;
  return c;
}

std::vector<FunctionTable> naive_clone_closure(int arity, std::size_t cap) {
  std::set<FunctionTable> seen;
  std::vector<FunctionTable> all;
  for (int i = 1; i <= arity; ++i) {
    FunctionTable p = FunctionTable::projection(arity, i);
    if (seen.insert(p).second) all.push_back(std::move(p));
  }
  std::size_t done = 0;
  // each new element is combined with every element found before it
  while (done < all.size()) {
    const std::size_t upto = all.size();
    for (std::size_t i = done; i < upto; ++i)
      for (std::size_t j = 0; j < upto; ++j) {
        for (FunctionTable t : {all[i] + all[j], apply_f(all[i], all[j]), apply_f(all[j], all[i])}) {
          if (seen.insert(t).second) {
            if (all.size() >= cap) throw ResourceLimit("naive_clone_closure: cap exceeded");
            all.push_back(std::move(t));
          }
        }
      }
    done = upto;
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace vl
