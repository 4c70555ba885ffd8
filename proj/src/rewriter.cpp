#include "vl/rewriter.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "vl/linalg.hpp"

namespace vl {

// ---------------------------------------------------------------------------
// Identities

namespace {

Term x(int i) { return Term::var(i); }
Term f(Term a, Term b) { return Term::f(std::move(a), std::move(b)); }

}  // namespace

std::vector<Identity> identity_basis() {
  std::vector<Identity> out;
  auto add = [&](std::string name, int number, Term lhs, Term rhs) {
    const int vars = std::max(lhs.max_var(), rhs.max_var());
    out.push_back({std::move(name), number, std::move(lhs), std::move(rhs), vars});
  };

  // (1) x y u v r s -> x1..x6
  add("(1)", 1, f(x(1) + f(x(3), x(4)), x(2) + f(x(5), x(6))), f(x(1), x(2)));
  // (2) x y u v
  add("(2)", 2, f(x(1) + times(2, x(3)), x(2) + times(4, x(4))), f(x(1), x(2)));
  add("(3)", 3, times(3, f(x(1), x(2))), Term::zero());
  // (4) y -> x1
  add("(4)", 4, f(Term::zero(), x(1)), Term::zero());
  add("(5)", 5, f(x(1), times(3, x(2))), f(x(1), x(2)));
  add("(6)", 6, f(x(1) + x(2), x(2)), f(x(1), x(2)));
  // (7) x y z
  {
    const Term X = x(1), Y = x(2), Z = x(3);
    add("(7)", 7, f(X + Y, Z),
        f(X, times(2, X) + times(2, Y) + times(2, Z)) + f(X, times(2, Y) + Z) - f(X, times(2, Y)) +
            f(X, times(2, Z)) + f(Y, Z));
  }
  add("(8)", 8, f(x(1), times(2, x(1)) + x(2)), f(x(1), times(2, x(2))) - f(x(1), x(2)));
  {
    const Term X = x(1), Y = x(2), Z = x(3);
    add("(9)", 9, f(X, times(2, Y) + Z), f(X, Z) - f(Y, Z) + f(Y, times(2, X) + Z));
  }

  add("assoc", 0, (x(1) + x(2)) + x(3), x(1) + (x(2) + x(3)));
  add("comm", 0, x(1) + x(2), x(2) + x(1));
  add("zero", 0, x(1) + Term::zero(), x(1));
  add("inverse", 0, x(1) + Term::neg(x(1)), Term::zero());
  add("exponent", 0, times(12, x(1)), Term::zero());
  return out;
}

std::string to_string(const Identity& id) { return id.name + " " + print(id.lhs) + " = " + print(id.rhs); }

IdentityCheck verify_identity(const Identity& id) {
  if (id.vars > kMaxTableArity) throw ArityError("verify_identity: too many variables");
  const CompiledTerm lhs(id.lhs), rhs(id.rhs);
  IdentityCheck out;
  Tuple a(std::max(id.vars, 1));
  while (true) {
    ++out.assignments;
    if (lhs(a) != rhs(a)) {
      out.holds = false;
      out.counterexample = a;
      return out;
    }
    std::size_t i = 0;
    for (; i < a.size(); ++i) {
      a[i] += Residue(1);
      if (a[i].value() != 0) break;
    }
    if (i == a.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flat terms

namespace {

using Ints = std::vector<int>;

std::uint8_t mod3(int c) { return static_cast<std::uint8_t>(((c % 3) + 3) % 3); }

// f-monomial with arguments reduced by (2); nullopt when (4) kills it.
std::optional<FMonomial> mono(const Ints& first, const Ints& second) {
  FMonomial m;
  m.first.resize(first.size());
  m.second.resize(second.size());
  bool nonzero = false;
  for (std::size_t j = 0; j < first.size(); ++j) {
    m.first[j] = static_cast<std::uint8_t>(((first[j] % 2) + 2) % 2);
    nonzero |= m.first[j] != 0;
    m.second[j] = static_cast<std::uint8_t>(((second[j] % 4) + 4) % 4);
  }
  if (!nonzero) return std::nullopt;
  return m;
}

void add_term(FPoly& p, const FMonomial& m, int coef) {
  const std::uint8_t c = mod3(coef);
  if (!c) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (inserted) return;
  it->second = mod3(it->second + c);
  if (!it->second) p.erase(it);
}

Ints to_ints(const std::vector<Residue>& v) {
  Ints out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
  return out;
}

Ints to_ints(const LinearForm& v) { return Ints(v.begin(), v.end()); }

Ints operator+(Ints a, const Ints& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Ints operator*(int n, Ints a) {
  for (int& e : a) e *= n;
  return a;
}

Ints unit(int k, int p) {
  Ints e(k, 0);
  e[p] = 1;
  return e;
}

}  // namespace

Term monomial_term(const FMonomial& m) {
  Ints a = to_ints(m.first), b = to_ints(m.second);
  return Term::f(linear_term(a), linear_term(b));
}

Residue evaluate(const FlatTerm& t, std::span<const Residue> x) {
  Residue s;
  for (int i = 0; i < t.arity; ++i) s += t.linear[i] * x[i];
  for (const auto& [m, c] : t.poly) {
    Residue a, b;
    for (int i = 0; i < t.arity; ++i) {
      a += m.first[i] * x[i];
      b += m.second[i] * x[i];
    }
    s += c * f_map(a, b);
  }
  return s;
}

FunctionTable table(const FlatTerm& t) {
  return FunctionTable::tabulate(t.arity, [&](std::span<const Residue> x) { return evaluate(t, x); });
}

FlatTerm flatten(const Term& t, int arity, const NormalizeOptions& opts) {
  if (arity < 1) throw ArityError("flatten: arity must be >= 1");
  if (t.max_var() > arity)
    throw ArityError("term uses x" + std::to_string(t.max_var()) + " beyond arity " + std::to_string(arity));

  std::uint64_t used = 0;
  std::unordered_map<const void*, FlatTerm> memo;
  auto go = [&](auto&& self, const Term& s) -> const FlatTerm& {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    if (++used > opts.budget) throw ResourceLimit("normalize: term-size budget exceeded");
    FlatTerm out;
    out.arity = arity;
    out.linear.assign(arity, Residue(0));
    switch (s.op()) {
      case Op::var: out.linear[s.index() - 1] = Residue(1); break;
      case Op::zero: break;
      case Op::neg: {
        const FlatTerm& a = self(self, s.left());
        for (int i = 0; i < arity; ++i) out.linear[i] = -a.linear[i];
        for (const auto& [m, c] : a.poly) out.poly.emplace(m, mod3(-c));
        break;
      }
      case Op::add: {
        const FlatTerm& a = self(self, s.left());
        const FlatTerm& b = self(self, s.right());
        for (int i = 0; i < arity; ++i) out.linear[i] = a.linear[i] + b.linear[i];
        out.poly = a.poly;
        for (const auto& [m, c] : b.poly) add_term(out.poly, m, c);
        break;
      }
      case Op::f: {
        // (1) drops f-summands inside the arguments, (2) reduces them.
        const Ints a = to_ints(self(self, s.left()).linear);
        const Ints b = to_ints(self(self, s.right()).linear);
        if (auto m = mono(a, b)) add_term(out.poly, *m, 1);
        break;
      }
      case Op::ldot: {
        // x·y = x + y + t(x, y) = x + y + f(x, x + y)
        const FlatTerm& a = self(self, s.left());
        const FlatTerm& b = self(self, s.right());
        for (int i = 0; i < arity; ++i) out.linear[i] = a.linear[i] + b.linear[i];
        out.poly = a.poly;
        for (const auto& [m, c] : b.poly) add_term(out.poly, m, c);
        if (auto m = mono(to_ints(a.linear), to_ints(out.linear))) add_term(out.poly, *m, 1);
        break;
      }
    }
    return memo.emplace(s.id(), std::move(out)).first->second;
  };
  return go(go, t);
}

// ---------------------------------------------------------------------------
// Normal-form domain

namespace {

bool has_odd(const std::vector<std::uint8_t>& c) {
  return std::any_of(c.begin(), c.end(), [](std::uint8_t d) { return d & 1; });
}

int lead_index(const FMonomial& m) {
  for (int p = static_cast<int>(m.first.size()); p-- > 0;)
    if (m.first[p]) return p;
  return -1;
}

int first_weight(const FMonomial& m) { return static_cast<int>(std::count(m.first.begin(), m.first.end(), 1)); }

std::vector<std::uint8_t> tail_of(const FMonomial& m, int p) {
  return {m.second.begin() + p + 1, m.second.end()};
}

}  // namespace

bool is_normal_monomial(const FMonomial& m) {
  const int p = lead_index(m);
  if (p < 0 || first_weight(m) != 1) return false;
  for (int j = 0; j <= p; ++j)
    if (m.second[j] > 1) return false;
  const auto tail = tail_of(m, p);
  const bool odd = has_odd(tail);
  const bool rep = odd && canonical_rep(tail) == tail;
  return m.second[p] == 0 ? (rep || !odd) : rep;
}

FMonomial key_monomial(MonomialKind kind, const MonomialKey& key, int arity) {
  const int p = key.i - 1;
  if (p < 0 || p >= arity || static_cast<int>(key.a.size()) != p ||
      static_cast<int>(key.c.size()) != arity - p - 1)
    throw ArityError("key_monomial: key does not match arity");
  FMonomial m;
  m.first.assign(arity, 0);
  m.first[p] = 1;
  m.second.assign(arity, 0);
  std::copy(key.a.begin(), key.a.end(), m.second.begin());
  m.second[p] = kind == MonomialKind::t ? 1 : 0;
  std::copy(key.c.begin(), key.c.end(), m.second.begin() + p + 1);
  return m;
}

std::vector<std::pair<MonomialKind, MonomialKey>> nf_monomials(int arity) {
  if (arity < 1) throw ArityError("nf_monomials: arity must be >= 1");
  std::vector<std::pair<MonomialKind, MonomialKey>> s_keys, t_keys;
  for (int i = 1; i <= arity; ++i) {
    const int tail = arity - i;
    std::vector<std::vector<std::uint8_t>> evens;
    for (std::size_t mask = 0; mask < (std::size_t{1} << tail); ++mask) {
      std::vector<std::uint8_t> c(tail);
      for (int j = 0; j < tail; ++j) c[j] = (mask >> (tail - 1 - j)) & 1 ? 2 : 0;
      evens.push_back(std::move(c));
    }
    const auto& reps = transversal(tail).reps;
    for (std::size_t mask = 0; mask < (std::size_t{1} << (i - 1)); ++mask) {
      std::vector<std::uint8_t> a(i - 1);
      for (int j = 0; j < i - 1; ++j) a[j] = (mask >> (i - 2 - j)) & 1;
      for (const auto& c : reps) {
        s_keys.push_back({MonomialKind::s, {i, a, c}});
        t_keys.push_back({MonomialKind::t, {i, a, c}});
      }
      for (const auto& c : evens) s_keys.push_back({MonomialKind::s, {i, a, c}});
    }
  }
  std::sort(s_keys.begin(), s_keys.end());
  std::sort(t_keys.begin(), t_keys.end());
  s_keys.insert(s_keys.end(), t_keys.begin(), t_keys.end());
  return s_keys;
}

std::uint64_t nf_monomial_count(int arity) { return nf_monomials(arity).size(); }

// ---------------------------------------------------------------------------
// Rewriting

namespace {

using Rhs = std::vector<std::pair<int, std::pair<Ints, Ints>>>;

RewriteStep make_step(std::string rule, const Ints& lhs_first, const Ints& lhs_second, const Rhs& rhs) {
  RewriteStep step;
  step.rule = std::move(rule);
  step.lhs = *mono(lhs_first, lhs_second);
  for (const auto& [coef, args] : rhs)
    if (auto m = mono(args.first, args.second)) step.rhs.emplace_back(mod3(coef), std::move(*m));
  return step;
}

// (5), read right to left: f(x, y) = f(x, 3y)
RewriteStep rule5(const Ints& x, const Ints& y) { return make_step("(5)", x, y, {{1, {x, 3 * y}}}); }

// (6) with (2): f(x_p, Y) = f(y, Y) when Y = y + x_p + z with z in 2Z^k
RewriteStep rule6(const Ints& xp, const Ints& y, const Ints& second) {
  return make_step("(6)+(2)", xp, second, {{1, {y, second}}});
}

// (7) f(x+y, z) = f(x, 2x+2y+2z) + f(x, 2y+z) - f(x, 2y) + f(x, 2z) + f(y, z)
RewriteStep rule7(const Ints& x, const Ints& y, const Ints& z) {
  return make_step("(7)", x + y, z,
                   {{1, {x, 2 * x + 2 * y + 2 * z}},
                    {1, {x, 2 * y + z}},
                    {-1, {x, 2 * y}},
                    {1, {x, 2 * z}},
                    {1, {y, z}}});
}

// (8) f(x, 2x+y) = f(x, 2y) - f(x, y)
RewriteStep rule8(const Ints& x, const Ints& y) {
  return make_step("(8)", x, 2 * x + y, {{1, {x, 2 * y}}, {-1, {x, y}}});
}

// (9) f(x, 2y+z) = f(x, z) - f(y, z) + f(y, 2x+z)
RewriteStep rule9(const Ints& x, const Ints& y, const Ints& z) {
  return make_step("(9)", x, 2 * y + z, {{1, {x, z}}, {-1, {y, z}}, {1, {y, 2 * x + z}}});
}

class Normalizer {
 public:
  Normalizer(FlatTerm flat, const NormalizeOptions& opts) : flat_(std::move(flat)), opts_(opts) {}

  FlatTerm run() {
    const int k = flat_.arity;
    for (int p = k - 1; p >= 0; --p) {
      while (auto m = next_pending(p)) rewrite(*m);
    }
    return std::move(flat_);
  }

 private:
  std::optional<FMonomial> next_pending(int p) const {
    for (const auto& [m, c] : flat_.poly)
      if (lead_index(m) == p && !is_normal_monomial(m)) return m;
    return std::nullopt;
  }

  // Replace lhs (if present) by the right-hand side.
  void apply(const RewriteStep& step) {
    auto it = flat_.poly.find(step.lhs);
    if (it == flat_.poly.end()) return;
    if (++used_ > opts_.budget) throw ResourceLimit("normalize: rewrite budget exceeded");
    if (opts_.trace) opts_.trace(step);
    const std::uint8_t c = it->second;
    flat_.poly.erase(it);
    for (const auto& [coef, m] : step.rhs) add_term(flat_.poly, m, c * coef);
  }

  void rewrite(const FMonomial& m) {
    const int k = flat_.arity;
    const int p = lead_index(m);
    const Ints xp = unit(k, p);
    const Ints second = to_ints(m.second);

    // Split the first argument one variable at a time.
    if (first_weight(m) > 1) {
      Ints y = to_ints(m.first);
      y[p] = 0;
      apply(rule7(xp, y, second));
      return;
    }
    // Coefficient of x_p in the second argument into [2].
    if (m.second[p] >= 2) {
      Ints y = second;
      y[p] -= 2;
      apply(rule8(xp, y));
      return;
    }
    // Coefficients of x_j, j < p, into [2].
    for (int r = 0; r < p; ++r) {
      if (m.second[r] < 2) continue;
      Ints z = second;
      z[r] -= 2;
      apply(rule9(xp, unit(k, r), z));
      return;
    }

    Ints head(k, 0), tail(k, 0);
    for (int j = 0; j < p; ++j) head[j] = m.second[j];
    for (int j = p + 1; j < k; ++j) tail[j] = m.second[j];
    const auto tail_digits = tail_of(m, p);

    if (!has_odd(tail_digits)) {
      // b = 1 with tail in {0,2}^(k-p): f(x_p, y + x_p + z) = f(y, y + x_p + z)
      apply(rule6(xp, head, second));
      return;
    }

    // Tail is -rep for its representative rep; write it as 3z.
    const Ints z = 3 * tail;
    if (m.second[p] == 0) {
      // f(x, y+3z) = f(x, 3y+z) = f(x, y+z) - f(y, y+z) + f(y, 2x+y+z)
      apply(rule5(xp, second));
      apply(rule9(xp, head, head + z));
      return;
    }
    // f(x, x+y+3z) = f(x, 3x+3y+z) = f(x, 2(x+3y+z)) - f(x, x+3y+z) ...
    const Ints y1 = xp + 3 * head + z;
    apply(rule5(xp, second));
    apply(rule8(xp, y1));
    apply(rule8(xp, 2 * head + 2 * z));
    apply(rule9(xp, head, 2 * z));
    apply(rule9(xp, head, xp + head + z));
  }

  FlatTerm flat_;
  const NormalizeOptions& opts_;
  std::uint64_t used_ = 0;
};

}  // namespace

TermNormalForm normalize(FlatTerm flat, const NormalizeOptions& opts) {
  const int k = flat.arity;
  FlatTerm done = Normalizer(std::move(flat), opts).run();

  TermNormalForm nf;
  nf.arity = k;
  nf.u = done.linear;
  for (const auto& [m, c] : done.poly) {
    if (!is_normal_monomial(m)) throw std::logic_error("normalize: residual monomial is not normal");
    const int p = lead_index(m);
    MonomialKey key{p + 1, {m.second.begin(), m.second.begin() + p}, tail_of(m, p)};
    (m.second[p] ? nf.w : nf.v).emplace(std::move(key), c);
  }
  return nf;
}

TermNormalForm normalize(const Term& t, int arity, const NormalizeOptions& opts) {
  return normalize(flatten(t, arity, opts), opts);
}

Term reconstruct(const TermNormalForm& nf) {
  std::vector<Term> parts;
  for (int i = 0; i < nf.arity; ++i)
    if (nf.u[i].value()) parts.push_back(times(nf.u[i].value(), Term::var(i + 1)));
  for (auto [kind, coeffs] : {std::pair{MonomialKind::s, &nf.v}, std::pair{MonomialKind::t, &nf.w}})
    for (const auto& [key, c] : *coeffs)
      if (c) parts.push_back(times(c, monomial_term(key_monomial(kind, key, nf.arity))));
  return sum(parts);
}

bool terms_equal(const Term& t1, const Term& t2, int arity) {
  return normalize(t1, arity) == normalize(t2, arity);
}

// ---------------------------------------------------------------------------

namespace {

std::string digits(const std::vector<std::uint8_t>& d) {
  if (d.empty()) return "-";
  std::string s;
  for (auto e : d) s += static_cast<char>('0' + e);
  return s;
}

std::vector<std::uint8_t> parse_digits(const std::string& s, int base) {
  if (s == "-") return {};
  std::vector<std::uint8_t> out;
  for (char ch : s) {
    if (ch < '0' || ch >= '0' + base) throw std::invalid_argument("normal form: bad digit string '" + s + "'");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

}  // namespace

std::string to_text(const TermNormalForm& nf) {
  std::ostringstream os;
  os << "u:";
  for (Residue r : nf.u) os << ' ' << r.value();
  os << '\n';
  for (auto [tag, coeffs] : {std::pair{'s', &nf.v}, std::pair{'t', &nf.w}})
    for (const auto& [key, c] : *coeffs)
      os << tag << ' ' << key.i << ' ' << digits(key.a) << ' ' << digits(key.c) << ' ' << int(c) << '\n';
  return os.str();
}

TermNormalForm parse_normal_form(const std::string& text, int arity) {
  std::istringstream is(text);
  TermNormalForm nf;
  nf.arity = arity;
  std::string tag;
  if (!(is >> tag) || tag != "u:") throw std::invalid_argument("normal form: expected 'u:'");
  for (int i = 0; i < arity; ++i) {
    int v = 0;
    if (!(is >> v) || v < 0 || v >= kOrder) throw std::invalid_argument("normal form: bad variable coefficient");
    nf.u.emplace_back(v);
  }
  std::string a, c;
  int i = 0, coef = 0;
  while (is >> tag) {
    if ((tag != "s" && tag != "t") || !(is >> i >> a >> c >> coef) || coef < 1 || coef > 2)
      throw std::invalid_argument("normal form: bad monomial line");
    MonomialKey key{i, parse_digits(a, 2), parse_digits(c, 4)};
    const auto kind = tag == "s" ? MonomialKind::s : MonomialKind::t;
    if (!is_normal_monomial(key_monomial(kind, key, arity)))
      throw std::invalid_argument("normal form: key outside the normal-form domain");
    (kind == MonomialKind::s ? nf.v : nf.w)[key] = static_cast<std::uint8_t>(coef);
  }
  return nf;
}

IndependenceReport verify_nf_independence(int arity) {
  if (arity < 1 || arity > kMaxOracleArity) throw ArityError("verify_nf_independence: arity must be in [1, 3]");
  std::vector<linalg::Vec> rows;
  for (const auto& [kind, key] : nf_monomials(arity)) {
    const FunctionTable t = table(monomial_term(key_monomial(kind, key, arity)), arity);
    linalg::Vec v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = static_cast<std::uint8_t>(t[i].value() / 4 % 3);
    rows.push_back(std::move(v));
  }
  return {rows.size(), linalg::rank_mod(3, rows)};
}

std::vector<std::uint8_t> frbar_coordinates(const TermNormalForm& nf) {
  const auto& reps = transversal(nf.arity).reps;
  std::vector<std::uint8_t> out(reps.size(), 0);
  FlatTerm flat;
  flat.arity = nf.arity;
  flat.linear.assign(nf.arity, Residue(0));
  for (auto [kind, coeffs] : {std::pair{MonomialKind::s, &nf.v}, std::pair{MonomialKind::t, &nf.w}})
    for (const auto& [key, c] : *coeffs) add_term(flat.poly, key_monomial(kind, key, nf.arity), c);
  for (std::size_t j = 0; j < reps.size(); ++j) {
    Tuple x(reps[j].begin(), reps[j].end());
    std::transform(reps[j].begin(), reps[j].end(), x.begin(), [](std::uint8_t d) { return Residue(d); });
    out[j] = static_cast<std::uint8_t>(evaluate(flat, x).value() / 4);
  }
  return out;
}

}  // namespace vl
