#include "vl/verify.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vl/core.hpp"
#include "vl/fnspace.hpp"
#include "vl/rewriter.hpp"
#include "vl/smp.hpp"
#include "vl/termlang.hpp"

namespace vl {

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities",   "theorem1", "gk",       "lemma-t",
                                              "congruences",  "independence", "rewriter", "smp-oracle"};
  return names;
}

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int arity_or(const RunConfig& cfg, int fallback, int cap) {
  const int k = cfg.max_arity ? cfg.max_arity : fallback;
  if (k < 1 || k > cap)
    throw std::invalid_argument("--k must be in [1, " + std::to_string(cap) + "] for this suite");
  return k;
}

struct Recorder {
  SuiteReport report;
  void operator()(std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

std::string str(std::uint64_t v) { return std::to_string(v); }

// ---------------------------------------------------------------------------

void suite_identities(Recorder& rec) {
  for (const Identity& id : identity_basis()) {
    if (id.number == 0) continue;
    const IdentityCheck c = verify_identity(id);
    std::string detail = str(c.assignments) + " assignments";
    if (c.counterexample) detail += ", counterexample " + to_string(*c.counterexample);
    rec("identity " + id.name, c.holds, detail);
  }
}

void suite_clone(Recorder& rec, const RunConfig& cfg) {
  const int kmax = arity_or(cfg, 3, kMaxOracleArity);
  for (int k = 1; k <= kmax; ++k) {
    const std::uint64_t dim = (ipow(4, k) - ipow(2, k)) / 2;
    const std::uint64_t expected = ipow(12, k) * ipow(3, static_cast<int>(dim));
    const CloneClosure c = clone_closure(k);
    rec("clone size k=" + str(k), c.size() == expected,
        "closure " + str(c.size()) + ", predicted " + str(expected) + ", rounds " + str(c.rounds()));
    rec("direct sum k=" + str(k), verify_direct_sum(k));
    if (k <= 2) {
      const auto r = verify_f_closure(k, SweepMode::exhaustive, cfg.seed);
      rec("f-closure exhaustive k=" + str(k), r.ok, str(r.pairs_checked) + " pairs" + (r.failure.empty() ? "" : ", " + r.failure));
    } else {
      const auto r = verify_f_closure(k, SweepMode::sampled, cfg.seed, std::max<std::uint64_t>(cfg.samples, 10000));
      rec("f-closure sampled k=" + str(k), r.ok, str(r.pairs_checked) + " pairs" + (r.failure.empty() ? "" : ", " + r.failure));
    }

    // decompose/reconstruct round trip on random normal forms
    std::mt19937_64 rng(cfg.seed + k);
    bool ok = true;
    for (std::uint64_t s = 0; s < cfg.samples && ok; ++s) {
      FunctionNormalForm nf;
      for (int i = 0; i < k; ++i) nf.linear.emplace_back(static_cast<int>(rng() % 12));
      for (std::size_t j = 0; j < dim; ++j) nf.wcoeffs.push_back(static_cast<std::uint8_t>(rng() % 3));
      const auto back = decompose(reconstruct(nf));
      ok = back && *back == nf;
    }
    rec("decompose round trip k=" + str(k), ok, str(cfg.samples) + " samples");
  }
  const auto naive = naive_clone_closure(1);
  const CloneClosure c1 = clone_closure(1);
  const bool same = std::all_of(naive.begin(), naive.end(), [&](const FunctionTable& t) { return c1.contains(t); });
  rec("naive closure k=1", naive.size() == 36 && c1.size() == 36 && same, str(naive.size()) + " functions");
}

void suite_gk(Recorder& rec, const RunConfig& cfg) {
  const int kmax = arity_or(cfg, 4, kMaxTableArity);
  for (int k = 1; k <= kmax; ++k) {
    const FunctionTable expect = FunctionTable::tabulate(k, [k](std::span<const Residue> x) { return g_map(k, x); });
    rec("g_k term k=" + str(k), table(build_gk_term(k), k) == expect, str(expect.size()) + " points");
  }
  for (int k = 1; k <= std::min(kmax, kMaxOracleArity); ++k) {
    int ok = 0;
    const auto& reps = transversal(k).reps;
    for (const Rep& r : reps) ok += table(build_fr_term(k, r), k) == f_rbar(k, r);
    rec("f_r terms k=" + str(k), ok == static_cast<int>(reps.size()), str(ok) + "/" + str(reps.size()));
  }
}

void suite_t_term(Recorder& rec) {
  const FunctionTable t_table =
      FunctionTable::tabulate(2, [](std::span<const Residue> x) { return t_map(x[0], x[1]); });
  rec("t term", table(build_t_term(), 2) == t_table, "144 points");

  bool square_identity = true, interdefinable = true, powers = true;
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b) {
      const Residue x(a), y(b);
      const Residue lhs = loop_mul(loop_mul(power_sq(loop_mul(x, y), 4), power_sq(x, 8)), power_sq(y, 8));
      square_identity &= lhs == t_map(x, y);
      interdefinable &= t_map(x, y) == f_map(x, x + y) && f_map(x, y) == t_map(x, 3 * x + y);
    }
  for (int a = 0; a < 12; ++a) powers &= power_sq(Residue(a), 2) == 2 * Residue(a);
  rec("(xy)^4 x^8 y^8 = t(x,y)", square_identity, "144 pairs");
  rec("t and f interdefinable", interdefinable, "144 pairs");
  rec("x^2 = 2x", powers, "12 points");

  const Term a = Term::var(1), b = Term::var(2);
  rec("ldot desugars", table(Term::ldot(a, b), 2) == table(a + b + Term::f(a, a + b), 2), "144 points");
}

void suite_congruences(Recorder& rec) {
  const auto cons = enumerate_congruences();
  std::vector<Partition> expected{coset_partition(12), coset_partition(4), coset_partition(2), coset_partition(1)};
  rec("congruence count", cons.size() == 4, str(cons.size()) + " congruences");
  rec("congruences are 0, C, 2Z12, Z12", cons == expected);
  bool chain = true;
  for (std::size_t i = 0; i + 1 < cons.size(); ++i) chain &= cons[i].refines(cons[i + 1]);
  rec("refinement chain", chain);
}

void suite_independence(Recorder& rec, const RunConfig& cfg) {
  const int kmax = arity_or(cfg, 3, kMaxOracleArity);
  for (int k = 1; k <= kMaxTableArity; ++k) {
    const std::uint64_t count = nf_monomial_count(k);
    const std::uint64_t a = ipow(2, k - 1) * (ipow(2, k) - 1), b = (ipow(4, k) - ipow(2, k)) / 2;
    rec("monomial count k=" + str(k), count == a && count == b, str(count));
  }
  for (int k = 1; k <= kmax; ++k) {
    const auto r = verify_nf_independence(k);
    rec("F3 rank k=" + str(k), r.independent(), "rank " + str(r.rank) + " of " + str(r.count));
  }
}

// Random instance of an identity: lhs - rhs with random terms substituted.
Term zero_instance(std::mt19937_64& rng, const std::vector<Identity>& ids, int k) {
  const Identity& id = ids[rng() % ids.size()];
  std::vector<Term> images;
  for (int v = 0; v < id.vars; ++v) images.push_back(random_term(rng, k, 2));
  return substitute(id.lhs, images) - substitute(id.rhs, images);
}

void suite_rewriter(Recorder& rec, const RunConfig& cfg) {
  const int kmax = arity_or(cfg, 3, kMaxOracleArity);
  const auto ids = identity_basis();
  for (int k = 1; k <= kmax; ++k) {
    std::mt19937_64 rng(cfg.seed * 1000 + k);
    std::uint64_t failures = 0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      const Term t = random_term(rng, k, 4);
      const TermNormalForm nf = normalize(t, k);
      failures += table(reconstruct(nf), k) != table(t, k) || normalize(reconstruct(nf), k) != nf;
    }
    rec("normal form preserves table k=" + str(k), failures == 0,
        str(failures) + " failures in " + str(cfg.samples));
  }
  for (int k = 1; k <= std::min(kmax, 2); ++k) {
    std::mt19937_64 rng(cfg.seed * 2000 + k);
    std::uint64_t disagreements = 0, equal_pairs = 0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      const Term t1 = random_term(rng, k, 3);
      const Term t2 = s % 2 ? t1 + zero_instance(rng, ids, k) : random_term(rng, k, 3);
      const bool by_table = table(t1, k) == table(t2, k);
      equal_pairs += by_table;
      disagreements += terms_equal(t1, t2, k) != by_table;
    }
    rec("terms_equal matches tables k=" + str(k), disagreements == 0,
        str(disagreements) + " disagreements, " + str(equal_pairs) + " equal pairs");
  }
}

SmpInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  SmpInstance inst;
  inst.n = n;
  auto tuple = [&] {
    Tuple t(n);
    for (auto& r : t) r = Residue(static_cast<int>(rng() % 12));
    return t;
  };
  for (std::size_t i = 0; i < k; ++i) inst.generators.push_back(tuple());
  inst.target = tuple();
  return inst;
}

void suite_smp(Recorder& rec, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uint64_t agree = 0, members = 0, subgroup_match = 0, witnesses = 0;
  const std::uint64_t total = std::max<std::uint64_t>(cfg.samples, 1000);
  for (std::uint64_t s = 0; s < total; ++s) {
    const std::size_t n = 1 + rng() % 2, k = 1 + rng() % 2;
    const SmpInstance inst = random_instance(rng, n, k);
    const auto closed = subpower_closure(inst.generators, n);
    const SmpResult res = smp_decide(inst);
    agree += res.member == (closed.count(point_index(inst.target)) > 0);
    members += res.member;

    std::vector<Tuple> gens = inst.generators;
    for (auto& b : derived_generators(inst)) gens.push_back(std::move(b));
    subgroup_match += additive_closure(gens, n) == closed;
    if (res.member) {
      const Term w = witness_term(inst, res);
      bool ok = true;
      for (std::size_t j = 0; j < n; ++j) ok &= evaluate(w, inst.column(j)) == inst.target[j];
      witnesses += ok;
    }
  }
  rec("decision matches closure", agree == total, str(agree) + "/" + str(total) + ", " + str(members) + " members");
  rec("closure equals additive subgroup", subgroup_match == total, str(subgroup_match) + "/" + str(total));
  rec("witness terms evaluate to target", witnesses == members, str(witnesses) + "/" + str(members));

  std::uint64_t checked = 0, wrong = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    const std::size_t space = n == 1 ? 12 : 144;
    for (std::size_t g = 0; g < space; ++g) {
      const Tuple gen = point_at(static_cast<int>(n), g);
      const auto closed = subpower_closure({gen}, n);
      for (std::size_t t = 0; t < space; ++t) {
        SmpInstance inst{n, {gen}, point_at(static_cast<int>(n), t)};
        wrong += smp_decide(inst).member != (closed.count(t) > 0);
        ++checked;
      }
    }
  }
  rec("single-generator sweep n<=2", wrong == 0, str(checked) + " instances, " + str(wrong) + " mismatches");
}

}  // namespace

SuiteReport run_suite(const std::string& name, const RunConfig& config) {
  Recorder rec;
  rec.report.suite = name;
  if (name == "identities") suite_identities(rec);
  else if (name == "theorem1") suite_clone(rec, config);
  else if (name == "gk") suite_gk(rec, config);
  else if (name == "lemma-t") suite_t_term(rec);
  else if (name == "congruences") suite_congruences(rec);
  else if (name == "independence") suite_independence(rec, config);
  else if (name == "rewriter") suite_rewriter(rec, config);
  else if (name == "smp-oracle") suite_smp(rec, config);
  else throw std::invalid_argument("unknown suite '" + name + "'");
  return std::move(rec.report);
}

void print_report(std::ostream& os, const SuiteReport& report, OutputFormat format) {
  std::size_t passed = 0;
  for (const auto& c : report.checks) {
    passed += c.passed;
    if (format == OutputFormat::machine)
      os << report.suite << '\t' << c.name << '\t' << (c.passed ? "PASS" : "FAIL") << '\t' << c.detail << '\n';
    else
      os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": ") << c.detail << '\n';
  }
  if (format == OutputFormat::machine)
    os << report.suite << "\tsummary\t" << (report.passed() ? "PASS" : "FAIL") << '\t' << passed << '/'
       << report.checks.size() << '\n';
  else
    os << report.suite << ": " << passed << '/' << report.checks.size() << " checks passed\n";
}

}  // namespace vl
