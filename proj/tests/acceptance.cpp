// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "vl/core.hpp"
#include "vl/fnspace.hpp"
#include "vl/rewriter.hpp"
#include "vl/smp.hpp"
#include "vl/termlang.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<int> point(int k, std::size_t i) { return oracle::ints(vl::point_at(k, i)); }

// 1. The nine identities hold on every assignment.
void identities(Outcome& out) {
  const auto t0 = Clock::now();
  int held = 0, total = 0;
  std::uint64_t assignments = 0;
  for (const auto& id : vl::identity_basis()) {
    if (id.number == 0) continue;
    ++total;
    const auto c = vl::verify_identity(id);
    held += c.holds;
    assignments += c.assignments;
    out.require(c.assignments == ipow(12, id.vars), id.name + " not exhaustive");
  }
  const double secs = seconds_since(t0);
  out.require(total == 9 && held == 9, "identity failed");
  out.require(secs < 60, "runtime");
  out.detail << held << "/" << total << " identities, " << assignments << " assignments, " << (secs < 60 ? "< 60 s" : ">= 60 s");
}

// Closure of the unary projection under + and pointwise f, element by element.
std::set<std::array<int, 12>> naive_unary_clone() {
  std::array<int, 12> id{};
  for (int x = 0; x < 12; ++x) id[x] = x;
  std::set<std::array<int, 12>> seen{id};
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::array<int, 12>> cur(seen.begin(), seen.end());
    for (const auto& a : cur)
      for (const auto& b : cur) {
        std::array<int, 12> s{}, fab{};
        for (int x = 0; x < 12; ++x) {
          s[x] = (a[x] + b[x]) % 12;
          fab[x] = oracle::f(a[x], b[x]);
        }
        grew |= seen.insert(s).second;
        grew |= seen.insert(fab).second;
      }
  }
  return seen;
}

// 2. Clone sizes, direct sum, f-closure.
void clone_counting(Outcome& out) {
  const auto naive = naive_unary_clone();
  const auto c1 = vl::clone_closure(1);
  const auto c2 = vl::clone_closure(2);
  out.require(naive.size() == 36 && c1.size() == 36, "k=1 size");
  out.require(c2.size() == 104976, "k=2 size");
  for (int k = 1; k <= 2; ++k) {
    const std::uint64_t predicted = ipow(12, k) * ipow(3, static_cast<int>((ipow(4, k) - ipow(2, k)) / 2));
    out.require((k == 1 ? c1 : c2).size() == predicted, "formula k=" + std::to_string(k));
  }
  for (const auto& a : naive) {
    vl::FunctionTable t(1);
    for (int x = 0; x < 12; ++x) t[x] = vl::Residue(a[x]);
    out.require(c1.contains(t), "naive element missing from closure");
  }
  for (int k = 1; k <= 3; ++k) out.require(vl::verify_direct_sum(k), "direct sum k=" + std::to_string(k));
  std::uint64_t pairs = 0;
  for (int k = 1; k <= 2; ++k) {
    const auto r = vl::verify_f_closure(k, vl::SweepMode::exhaustive);
    out.require(r.ok, r.failure);
    if (k == 2) {
      out.require(r.pairs_checked == 20736, "k=2 pair count");
      pairs = r.pairs_checked;
    }
  }
  const auto s3 = vl::verify_f_closure(3, vl::SweepMode::sampled, 1, 10000);
  out.require(s3.ok && s3.pairs_checked >= 10000, "sampled k=3");
  out.detail << "sizes " << naive.size() << "/" << c1.size() << " and " << c2.size() << ", direct sum k<=3, f-closure "
             << pairs << " pairs at k=2 and " << s3.pairs_checked << " sampled at k=3";
}

// 3. Term builders against their defining formulas.
void term_builders(Outcome& out) {
  const auto t = vl::table(vl::build_t_term(), 2);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto x = point(2, i);
    out.require(t[i].value() == oracle::mod(oracle::mul(x[0], x[1]) - x[0] - x[1], 12), "t term");
  }
  for (int k = 1; k <= 4; ++k) {
    const auto g = vl::table(vl::build_gk_term(k), k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = point(k, i);
      bool center = true;
      for (int j = 1; j < k; ++j) center &= x[j] % 4 == 0;
      if (g[i].value() != (x[0] % 2 == 1 && center ? 4 : 0)) {
        out.require(false, "g_k k=" + std::to_string(k));
        break;
      }
    }
  }
  int reps = 0;
  for (int k = 1; k <= 3; ++k)
    for (const auto& r : oracle::cyclic_generators(k)) {
      ++reps;
      const auto h = vl::table(vl::build_fr_term(k, r), k);
      for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i].value() != oracle::f_r(point(k, i), r)) {
          out.require(false, "f_r term");
          break;
        }
    }
  out.require(reps == 1 + 6 + 28, "representative count");
  out.detail << "t over 144 inputs, g_k for k<=4, f_r for " << reps << " representatives";
}

std::size_t rank_f3(std::vector<std::vector<int>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    const int inv = rows[rank][c];  // 1 and 2 are self-inverse mod 3
    for (int& e : rows[rank]) e = e * inv % 3;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c])
        for (std::size_t j = 0; j < cols; ++j) rows[r][j] = oracle::mod(rows[r][j] - rows[r][c] * rows[rank][j], 3);
    ++rank;
  }
  return rank;
}

// 4. Number of normal-form monomials and their independence.
void nf_dimension(Outcome& out) {
  for (int k = 1; k <= 6; ++k) {
    const auto n = vl::nf_monomial_count(k);
    out.require(n == ipow(2, k - 1) * (ipow(2, k) - 1) && n == (ipow(4, k) - ipow(2, k)) / 2,
                "count k=" + std::to_string(k));
  }
  std::size_t last_rank = 0;
  for (int k = 1; k <= 3; ++k) {
    std::vector<std::vector<int>> rows;
    for (const auto& [kind, key] : vl::nf_monomials(k)) {
      const auto t = vl::table(vl::monomial_term(vl::key_monomial(kind, key, k)), k);
      std::vector<int> row;
      for (std::size_t i = 0; i < t.size(); ++i) row.push_back(t[i].value() / 4);
      rows.push_back(std::move(row));
    }
    last_rank = rank_f3(rows);
    out.require(last_rank == rows.size(), "rank k=" + std::to_string(k));
    out.require(vl::verify_nf_independence(k).independent(), "library rank k=" + std::to_string(k));
  }
  out.detail << "counts 1, 6, 28, 120, 496, 2016; rank " << last_rank << " of 28 at k=3";
}

vl::Term identity_instance(std::mt19937_64& rng, const std::vector<vl::Identity>& ids, int k) {
  const auto& id = ids[rng() % ids.size()];
  std::vector<vl::Term> images;
  for (int v = 0; v < id.vars; ++v) images.push_back(vl::random_term(rng, k, 2));
  return vl::substitute(id.lhs, images) - vl::substitute(id.rhs, images);
}

// 5. Normal forms keep tables; terms_equal decides equality.
void rewriter(Outcome& out) {
  int failures = 0;
  for (int k = 1; k <= 3; ++k) {
    std::mt19937_64 rng(100 + k);
    for (int i = 0; i < 1000; ++i) {
      const vl::Term t = vl::random_term(rng, k, 5);
      failures += vl::table(vl::reconstruct(vl::normalize(t, k)), k) != vl::table(t, k);
    }
  }
  const auto ids = vl::identity_basis();
  std::mt19937_64 rng(200);
  int disagreements = 0, equal = 0;
  for (int i = 0; i < 1000; ++i) {
    const int k = 1 + i % 2;
    const vl::Term a = vl::random_term(rng, k, 3);
    const vl::Term b = i % 2 ? a + identity_instance(rng, ids, k) : vl::random_term(rng, k, 3);
    const bool by_table = vl::table(a, k) == vl::table(b, k);
    equal += by_table;
    disagreements += vl::terms_equal(a, b, k) != by_table;
  }
  out.require(failures == 0, "round trip");
  out.require(disagreements == 0, "terms_equal");
  out.detail << failures << " round-trip failures in 3000 terms, " << disagreements << " disagreements in 1000 pairs ("
             << equal << " equal)";
}

vl::SmpInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  vl::SmpInstance inst{n, {}, vl::Tuple(n)};
  for (std::size_t i = 0; i < k; ++i) {
    vl::Tuple g(n);
    for (auto& r : g) r = vl::Residue(static_cast<int>(rng() % 12));
    inst.generators.push_back(std::move(g));
  }
  for (auto& r : inst.target) r = vl::Residue(static_cast<int>(rng() % 12));
  return inst;
}

// 6. Subpower membership: agreement with closure and polynomial scaling.
void smp(Outcome& out) {
  std::mt19937_64 rng(300);
  int agree = 0, members = 0;
  const int random_count = 1000;
  for (int i = 0; i < random_count; ++i) {
    const std::size_t n = 1 + rng() % 2, k = 1 + rng() % 2;
    const auto inst = random_instance(rng, n, k);
    std::vector<std::vector<int>> gens;
    for (const auto& g : inst.generators) gens.push_back(oracle::ints(g));
    const bool expected = oracle::subloop(gens, static_cast<int>(n)).count(oracle::ints(inst.target)) > 0;
    const bool got = vl::smp_decide(inst).member;
    agree += expected == got;
    members += expected;
  }
  out.require(agree == random_count, "random agreement");

  int sweep = 0, sweep_wrong = 0;
  for (int n = 1; n <= 2; ++n) {
    const std::size_t space = ipow(12, n);
    for (std::size_t g = 0; g < space; ++g) {
      const auto gen = vl::point_at(n, g);
      const auto closed = oracle::subloop({oracle::ints(gen)}, n);
      for (std::size_t t = 0; t < space; ++t) {
        const vl::SmpInstance inst{static_cast<std::size_t>(n), {gen}, vl::point_at(n, t)};
        sweep_wrong += vl::smp_decide(inst).member != (closed.count(oracle::ints(inst.target)) > 0);
        ++sweep;
      }
    }
  }
  out.require(sweep_wrong == 0, "single-generator sweep");

  // Scaling at k = 10: mean solve time per n, members and non-members mixed.
  const std::vector<std::size_t> sizes{10, 100, 1000};
  std::vector<double> mean;
  double slowest = 0;
  std::mt19937_64 srng(400);
  for (std::size_t n : sizes) {
    std::vector<vl::SmpInstance> batch;
    for (int i = 0; i < 8; ++i) {
      auto inst = random_instance(srng, n, 10);
      if (i % 2 == 0) {
        const vl::Term t = vl::random_term(srng, 10, 4);
        for (std::size_t j = 0; j < n; ++j) inst.target[j] = vl::evaluate(t, inst.column(j));
      }
      batch.push_back(std::move(inst));
    }
    double total = 0;
    int solves = 0;
    while (total < 0.05 || solves < static_cast<int>(batch.size())) {
      const auto t0 = Clock::now();
      const auto res = vl::smp_decide(batch[solves % batch.size()]);
      const double s = seconds_since(t0);
      if (solves % 2 == 0) out.require(res.member, "term-built target must be a member");
      slowest = std::max(slowest, s);
      total += s;
      ++solves;
    }
    mean.push_back(total / solves);
  }
  // least-squares slope of log(time) against log(n)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = std::log10(static_cast<double>(sizes[i])), y = std::log10(mean[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double m = static_cast<double>(sizes.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  // every point within 4x of the cubic extrapolation from the smallest size
  bool within = true;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    within &= mean[i] <= 4 * mean[0] * std::pow(static_cast<double>(sizes[i]) / sizes[0], 3);
  out.require(slope <= 3 + std::log10(4.0) / 2, "fitted exponent");
  out.require(within, "cubic trend");
  out.require(slowest < 5, "solve time");

  char buf[160];
  std::snprintf(buf, sizeof buf, "fitted exponent %.2f, every solve < 5 s", slope);
  out.detail << agree << "/" << random_count << " random (" << members << " members), " << sweep
             << " single-generator instances, " << sweep_wrong << " mismatches; " << buf;
}

// 7. Congruence lattice.
void congruences(Outcome& out) {
  const auto got = vl::enumerate_congruences();
  const auto brute = oracle::all_congruences();
  std::set<oracle::Relation> expected;
  for (int step : {12, 4, 2, 1}) {
    oracle::Relation r{};
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) r[a][b] = (a - b) % step == 0;
    expected.insert(r);
  }
  std::set<oracle::Relation> as_relations;
  for (const auto& p : got) {
    oracle::Relation r{};
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) r[a][b] = p.same(a, b);
    as_relations.insert(r);
  }
  out.require(got.size() == 4, "count");
  out.require(brute == expected, "brute force lattice");
  out.require(as_relations == expected, "library lattice");
  out.detail << got.size() << " congruences (brute force " << brute.size() << "), cosets of {0}, C, 2Z12, Z12";
}

// 8. Function decomposition and term normal form induce the same equality.
void coherence(Outcome& out) {
  std::mt19937_64 rng(500);
  const auto ids = vl::identity_basis();
  struct Sample {
    int k;
    vl::FunctionNormalForm by_table;
    vl::TermNormalForm by_terms;
  };
  std::vector<Sample> samples;
  std::vector<std::pair<int, vl::Term>> terms;
  for (int i = 0; i < 500; ++i) {
    const int k = 1 + i % 3;
    vl::Term t = vl::random_term(rng, k, 3);
    // every fourth term is an earlier term of the same arity plus an identity instance
    if (i % 4 == 3 && i >= 3) t = terms[i - 3].second + identity_instance(rng, ids, k);
    terms.emplace_back(k, t);
    const auto dec = vl::decompose(vl::table(t, k));
    out.require(dec.has_value(), "term table outside the clone");
    if (!dec) return;
    samples.push_back({k, *dec, vl::normalize(t, k)});
  }
  int mismatches = 0;
  std::set<std::pair<int, vl::FunctionNormalForm>> classes;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    classes.insert({samples[i].k, samples[i].by_table});
    out.require(samples[i].by_table.linear == samples[i].by_terms.u &&
                    samples[i].by_table.wcoeffs == vl::frbar_coordinates(samples[i].by_terms),
                "coordinates");
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (samples[i].k != samples[j].k) continue;
      mismatches += (samples[i].by_table == samples[j].by_table) != (samples[i].by_terms == samples[j].by_terms);
    }
  }
  out.require(mismatches == 0, "partition");
  out.detail << samples.size() << " terms in " << classes.size() << " classes, " << mismatches << " pair mismatches";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"identity soundness", identities},    {"clone counting", clone_counting},
      {"term builders", term_builders},        {"normal-form dimension", nf_dimension},
      {"rewriter correctness", rewriter},    {"subpower membership", smp},
      {"congruence lattice", congruences},   {"cross-module coherence", coherence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    failed += !out.ok;
    std::printf("%s criterion %zu (%s): %s\n", out.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
