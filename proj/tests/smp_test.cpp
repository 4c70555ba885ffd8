#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vl/fnspace.hpp"
#include "vl/smp.hpp"

using vl::make_tuple;
using vl::SmpInstance;

namespace {

SmpInstance instance(std::size_t n, std::vector<vl::Tuple> gens, vl::Tuple target) {
  return SmpInstance{n, std::move(gens), std::move(target)};
}

SmpInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  SmpInstance inst{n, {}, vl::Tuple(n)};
  for (std::size_t i = 0; i < k; ++i) {
    vl::Tuple g(n);
    for (auto& r : g) r = vl::Residue(static_cast<int>(rng() % 12));
    inst.generators.push_back(g);
  }
  for (auto& r : inst.target) r = vl::Residue(static_cast<int>(rng() % 12));
  return inst;
}

}  // namespace

TEST(Smp, Examples) {
  EXPECT_TRUE(vl::smp_decide(instance(1, {make_tuple({2})}, make_tuple({4}))).member);
  EXPECT_FALSE(vl::smp_decide(instance(1, {make_tuple({4})}, make_tuple({2}))).member);
  EXPECT_TRUE(vl::smp_decide(instance(2, {}, make_tuple({0, 0}))).member);
  EXPECT_FALSE(vl::smp_decide(instance(2, {}, make_tuple({0, 4}))).member);
}

TEST(Smp, SimPartitionExample) {
  const auto inst = instance(2, {make_tuple({1, 1}), make_tuple({0, 2})}, make_tuple({0, 0}));
  const auto part = vl::sim_partition(inst);
  ASSERT_EQ(part.classes.size(), 2u);
  const auto b = vl::derived_generators(inst);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], make_tuple({4, 0}));
  EXPECT_EQ(b[1], make_tuple({0, 4}));

  // columns (1, 1) and (3, 3) are negatives mod 4: one class
  const auto joined = vl::sim_partition(instance(2, {make_tuple({1, 3}), make_tuple({1, 3})}, make_tuple({0, 0})));
  EXPECT_EQ(joined.classes.size(), 1u);
  const auto even = vl::sim_partition(instance(2, {make_tuple({2, 1})}, make_tuple({0, 0})));
  EXPECT_EQ(even.even_columns, (std::vector<std::size_t>{0}));
}

TEST(Smp, GroupMembership) {
  const std::vector<vl::Tuple> gens{make_tuple({2, 3}), make_tuple({4, 0})};
  const auto c = vl::group_membership(gens, make_tuple({10, 3}));
  ASSERT_TRUE(c);
  vl::Tuple sum(2);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (int j = 0; j < 2; ++j) sum[j] += (*c)[i] * gens[i][j];
  EXPECT_EQ(sum, make_tuple({10, 3}));
  EXPECT_FALSE(vl::group_membership(gens, make_tuple({1, 0})));
}

TEST(Smp, AgreesWithIndependentClosure) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng() % 2, k = 1 + rng() % 3;
    const auto inst = random_instance(rng, n, k);
    std::vector<std::vector<int>> gens;
    for (const auto& g : inst.generators) gens.push_back(oracle::ints(g));
    const auto closed = oracle::subloop(gens, static_cast<int>(n));
    const auto res = vl::smp_decide(inst);
    ASSERT_EQ(res.member, closed.count(oracle::ints(inst.target)) > 0);

    std::set<std::size_t> as_index;
    for (const auto& e : closed) {
      vl::Tuple t;
      for (int v : e) t.emplace_back(v);
      as_index.insert(vl::point_index(t));
    }
    EXPECT_EQ(vl::subpower_closure(inst.generators, n), as_index);
  }
}

TEST(Smp, WitnessTermsEvaluateToTarget) {
  std::mt19937_64 rng(22);
  int members = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = random_instance(rng, 1 + rng() % 6, 1 + rng() % 4);
    const auto res = vl::smp_decide(inst);
    if (!res.member) continue;
    ++members;
    const vl::Term w = vl::witness_term(inst, res);
    for (std::size_t j = 0; j < inst.n; ++j) EXPECT_EQ(vl::evaluate(w, inst.column(j)), inst.target[j]);
  }
  EXPECT_GT(members, 10);
}

TEST(Smp, LargeInstancesRespectClosureStructure) {
  // the target built as a term of the generators must be a member
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    auto inst = random_instance(rng, 200, 6);
    const vl::Term t = vl::random_term(rng, 6, 5);
    for (std::size_t j = 0; j < inst.n; ++j) inst.target[j] = vl::evaluate(t, inst.column(j));
    EXPECT_TRUE(vl::smp_decide(inst).member);
  }
}

TEST(Smp, InstanceFormat) {
  std::stringstream ok("2 2\n1,1\n0,2\n4,0\n");
  const auto inst = vl::read_instance(ok);
  EXPECT_EQ(inst.n, 2u);
  EXPECT_EQ(inst.generators.size(), 2u);
  EXPECT_EQ(inst.target, make_tuple({4, 0}));
  std::stringstream out;
  vl::write_instance(out, inst);
  EXPECT_EQ(out.str(), "2 2\n1,1\n0,2\n4,0\n");

  for (std::string bad : {"", "1 1\n2\n", "1 1\n2\n4\n5\n", "2 1\n1\n0,0\n", "1 1\n12\n0\n", "1 1\nx\n0\n", "1\n"}) {
    std::stringstream ss(bad);
    EXPECT_THROW(vl::read_instance(ss), std::invalid_argument) << bad;
  }
}
