#include "vl/core.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

namespace vl {

Tuple make_tuple(std::initializer_list<int> values) {
  Tuple out;
  out.reserve(values.size());
  for (int v : values) out.emplace_back(v);
  return out;
}

Tuple negate(std::span<const Residue> x) {
  Tuple out(x.begin(), x.end());
  for (auto& r : out) r = -r;
  return out;
}

std::string to_string(std::span<const Residue> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i].value();
  os << ')';
  return os.str();
}

Residue t_map(Residue x, Residue y) {
  const int a = x.mod4(), b = y.mod4();
  return Residue((a == 1 && b == 3) || (a == 3 && b == 1) ? 4 : 0);
}

Residue loop_mul(Residue x, Residue y) { return x + y + t_map(x, y); }

Residue loop_div(Residue a, Residue b) {
  int found = -1, count = 0;
  for (int z = 0; z < kOrder; ++z) {
    if (loop_mul(a, Residue(z)) == b) {
      found = z;
      ++count;
    }
  }
  if (count != 1)
    throw std::logic_error("loop_div: multiplication table is not a loop");
  return Residue(found);
}

Residue f_map(Residue x, Residue y) {
  return Residue(!x.is_even() && y.in_center() ? 4 : 0);
}

Residue g_map(int k, std::span<const Residue> x) {
  if (k < 1 || static_cast<int>(x.size()) != k)
    throw ArityError("g_map: expected a tuple of arity " + std::to_string(k));
  if (x[0].is_even()) return Residue(0);
  for (int i = 1; i < k; ++i)
    if (!x[i].in_center()) return Residue(0);
  return Residue(4);
}

Residue power_sq(Residue x, int e) {
  int squarings = 0;
  switch (e) {
    case 2: squarings = 1; break;
    case 4: squarings = 2; break;
    case 8: squarings = 3; break;
    default: throw std::invalid_argument("power_sq: exponent must be 2, 4 or 8");
  }
  for (int i = 0; i < squarings; ++i) x = loop_mul(x, x);
  return x;
}

// ---------------------------------------------------------------------------
// Congruences

namespace {

struct Tables {
  std::array<std::array<std::uint8_t, kOrder>, kOrder> mul{};
  std::array<std::array<std::uint8_t, kOrder>, kOrder> div{};  // div[a][b] = a\b

  Tables() {
    for (int a = 0; a < kOrder; ++a)
      for (int b = 0; b < kOrder; ++b) {
        mul[a][b] = static_cast<std::uint8_t>(loop_mul(Residue(a), Residue(b)).value());
        div[a][b] = static_cast<std::uint8_t>(loop_div(Residue(a), Residue(b)).value());
      }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

struct UnionFind {
  std::array<int, kOrder> parent{};
  UnionFind() { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The root of each class is its least element.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent[a] = b;
    return true;
  }
  Partition partition() {
    Partition p;
    p.label.resize(kOrder);
    for (int i = 0; i < kOrder; ++i) p.label[i] = static_cast<std::uint8_t>(find(i));
    return p;
  }
};

// Close an equivalence under the loop operations (·, left division; the loop
// is commutative so right division coincides).
Partition close_compatible(UnionFind uf) {
  const auto& t = tables();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < kOrder; ++x)
      for (int y = x + 1; y < kOrder; ++y) {
        if (uf.find(x) != uf.find(y)) continue;
        for (int z = 0; z < kOrder; ++z) {
          changed |= uf.unite(t.mul[x][z], t.mul[y][z]);
          changed |= uf.unite(t.div[z][x], t.div[z][y]);
          changed |= uf.unite(t.div[x][z], t.div[y][z]);
        }
      }
  }
  return uf.partition();
}

}  // namespace

int Partition::class_count() const {
  int n = 0;
  for (int i = 0; i < static_cast<int>(label.size()); ++i) n += label[i] == i;
  return n;
}

bool Partition::refines(const Partition& other) const {
  for (std::size_t i = 0; i < label.size(); ++i)
    if (!other.same(i, label[i])) return false;
  return true;
}

Partition coset_partition(int step) {
  Partition p;
  p.label.resize(kOrder);
  for (int i = 0; i < kOrder; ++i) p.label[i] = static_cast<std::uint8_t>(i % step);
  return p;
}

bool is_congruence(const Partition& p) {
  if (p.label.size() != kOrder) return false;
  const auto& t = tables();
  for (int x = 0; x < kOrder; ++x)
    for (int y = 0; y < kOrder; ++y) {
      if (!p.same(x, y)) continue;
      for (int z = 0; z < kOrder; ++z) {
        if (!p.same(t.mul[x][z], t.mul[y][z])) return false;
        if (!p.same(t.div[z][x], t.div[z][y])) return false;
        if (!p.same(t.div[x][z], t.div[y][z])) return false;
      }
    }
  return true;
}

Partition principal_congruence(int a, int b) {
  UnionFind uf;
  uf.unite(Residue(a).value(), Residue(b).value());
  return close_compatible(uf);
}

Partition join(const Partition& a, const Partition& b) {
  UnionFind uf;
  for (int i = 0; i < kOrder; ++i) {
    uf.unite(i, a.label[i]);
    uf.unite(i, b.label[i]);
  }
  return uf.partition();
}

std::vector<Partition> enumerate_congruences() {
  std::set<Partition> found;
  found.insert(UnionFind().partition());
  for (int a = 0; a < kOrder; ++a)
    for (int b = a + 1; b < kOrder; ++b) found.insert(principal_congruence(a, b));

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Partition> current(found.begin(), found.end());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j)
        grew |= found.insert(join(current[i], current[j])).second;
  }

  std::vector<Partition> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) {
    return x.class_count() > y.class_count();
  });
  return out;
}

}  // namespace vl
