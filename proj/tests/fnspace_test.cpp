#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "vl/fnspace.hpp"
#include "vl/termlang.hpp"

using vl::FunctionTable;
using vl::Residue;

TEST(Tables, PointIndexRoundTrip) {
  EXPECT_EQ(vl::pow12(3), 1728u);
  EXPECT_THROW(vl::pow12(7), vl::ArityError);
  EXPECT_EQ(vl::point_index(vl::make_tuple({1, 2})), 25u);
  for (std::size_t i = 0; i < 1728; i += 37) EXPECT_EQ(vl::point_index(vl::point_at(3, i)), i);
}

TEST(Tables, TextRoundTrip) {
  const FunctionTable t = vl::table(vl::parse("(+ x1 (f x2 x1))"), 2);
  std::stringstream ss;
  vl::write_table(ss, t);
  EXPECT_EQ(ss.str().substr(0, 4), "k 2\n");
  EXPECT_EQ(vl::read_table(ss), t);

  std::stringstream bad("k 1\n0 1 2");
  EXPECT_THROW(vl::read_table(bad), std::invalid_argument);
  std::stringstream range("k 1\n0 1 2 3 4 5 6 7 8 9 10 12");
  EXPECT_THROW(vl::read_table(range), std::invalid_argument);
}

TEST(Transversal, MatchesCyclicSubgroups) {
  for (int l = 0; l <= 4; ++l) {
    const auto& t = vl::transversal(l);
    const std::set<vl::Rep> got(t.reps.begin(), t.reps.end());
    EXPECT_EQ(got, oracle::cyclic_generators(l)) << "l=" << l;
    EXPECT_EQ(t.reps.size(), ((1u << (2 * l)) - (1u << l)) / 2);
    EXPECT_TRUE(std::is_sorted(t.reps.begin(), t.reps.end()));
  }
  EXPECT_EQ(vl::transversal(1).reps, (std::vector<vl::Rep>{{1}}));
  EXPECT_EQ(vl::transversal(2).reps.size(), 6u);
  EXPECT_EQ(vl::transversal(3).reps.size(), 28u);
}

TEST(Transversal, CanonicalRep) {
  EXPECT_EQ(*vl::canonical_rep(vl::Rep{3, 2}), (vl::Rep{1, 2}));
  EXPECT_EQ(*vl::canonical_rep(vl::make_tuple({7, 6})), (vl::Rep{1, 2}));
  EXPECT_FALSE(vl::canonical_rep(vl::make_tuple({2, 4})));
}

TEST(Basis, FrMatchesIndicator) {
  for (int k = 1; k <= 3; ++k)
    for (const auto& r : vl::transversal(k).reps) {
      const FunctionTable t = vl::f_rbar(k, r);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto x = oracle::ints(vl::point_at(k, i));
        ASSERT_EQ(t[i].value(), oracle::f_r(x, r));
      }
      EXPECT_TRUE(vl::is_in_Wk(t));
    }
}

TEST(Basis, WkMembership) {
  EXPECT_FALSE(vl::is_in_Wk(FunctionTable::projection(1, 1)));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(vl::is_in_Wk(vl::random_wk(2, rng)));
  // in C everywhere but not invariant under negation
  FunctionTable h(1);
  h[1] = Residue(4);
  EXPECT_FALSE(vl::is_in_Wk(h));
}

TEST(Decompose, KnownFunctions) {
  // f(x1, x2) = f_r with r = (1, 0)
  const auto nf = vl::decompose(vl::table(vl::parse("(f x1 x2)"), 2));
  ASSERT_TRUE(nf);
  EXPECT_EQ(nf->linear, vl::make_tuple({0, 0}));
  const auto pos = vl::transversal(2).find(vl::Rep{1, 0});
  ASSERT_TRUE(pos);
  for (std::size_t j = 0; j < nf->wcoeffs.size(); ++j) EXPECT_EQ(nf->wcoeffs[j], j == *pos ? 1 : 0);

  const auto lin = vl::decompose(vl::table(vl::parse("(+ x1 x1 x1 x2)"), 2));
  ASSERT_TRUE(lin);
  EXPECT_EQ(lin->linear, vl::make_tuple({3, 1}));
}

TEST(Decompose, RejectsNonTermFunctions) {
  FunctionTable constant(1);
  for (std::size_t i = 0; i < 12; ++i) constant[i] = Residue(1);
  EXPECT_FALSE(vl::decompose(constant));

  // an f-type function that is not invariant under negation
  FunctionTable h(1);
  h[1] = Residue(4);
  EXPECT_FALSE(vl::decompose(h));

  // the loop square x·x = 2x is a term function; x -> x^2 + 1 is not
  FunctionTable sq(1);
  for (std::size_t i = 0; i < 12; ++i) sq[i] = Residue(2 * static_cast<int>(i) + 1);
  EXPECT_FALSE(vl::decompose(sq));
}

TEST(Decompose, RandomTermsRoundTrip) {
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 3; ++k)
    for (int s = 0; s < 50; ++s) {
      const FunctionTable t = vl::table(vl::random_term(rng, k, 4), k);
      const auto nf = vl::decompose(t);
      ASSERT_TRUE(nf);
      EXPECT_EQ(vl::reconstruct(*nf), t);
    }
}

TEST(Closure, DirectSumAndFClosure) {
  for (int k = 1; k <= 2; ++k) {
    EXPECT_TRUE(vl::verify_direct_sum(k));
    const auto r = vl::verify_f_closure(k, vl::SweepMode::exhaustive);
    EXPECT_TRUE(r.ok) << r.failure;
    EXPECT_EQ(r.pairs_checked, k == 1 ? 144u : 20736u);
  }
}

TEST(Closure, CloneSizes) {
  const auto c1 = vl::clone_closure(1);
  EXPECT_EQ(c1.size(), 36u);
  const auto c2 = vl::clone_closure(2);
  EXPECT_EQ(c2.size(), 104976u);
  EXPECT_THROW(vl::clone_closure(4), vl::ArityError);

  std::mt19937_64 rng(5);
  for (int s = 0; s < 30; ++s) EXPECT_TRUE(c2.contains(vl::table(vl::random_term(rng, 2, 4), 2)));
  FunctionTable h(2);
  h[1] = Residue(4);
  EXPECT_FALSE(c2.contains(h));
}

TEST(Closure, NaiveAgreesAtArityOne) {
  const auto naive = vl::naive_clone_closure(1);
  EXPECT_EQ(naive.size(), 36u);
  const auto c1 = vl::clone_closure(1);
  for (const auto& t : naive) {
    EXPECT_TRUE(c1.contains(t));
    EXPECT_TRUE(vl::decompose(t));
  }
}
