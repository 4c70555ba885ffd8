#include "vl/linalg.hpp"

#include <stdexcept>
#include <string>

#include "vl/core.hpp"

namespace vl::linalg {

FieldSpan::FieldSpan(int prime, std::size_t length, std::size_t tag_count)
    : p_(prime), n_(length), tags_(tag_count) {
  if (prime != 2 && prime != 3) throw std::invalid_argument("FieldSpan: prime must be 2 or 3");
}

void FieldSpan::axpy(Vec& dst, const Vec& src, std::uint8_t coef) const {
  const int neg = (p_ - coef) % p_;
  if (neg == 0) return;
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (src[i]) dst[i] = static_cast<std::uint8_t>((dst[i] + neg * src[i]) % p_);
}

FieldSpan::InsertResult FieldSpan::insert(Vec v, std::size_t tag) {
  if (v.size() != n_) throw ArityError("FieldSpan::insert: length mismatch");
  Vec combo;
  if (tags_) {
    combo.assign(tags_, 0);
    combo.at(tag) = 1;
  }
  for (const Row& r : rows_) {
    const std::uint8_t c = v[r.pivot];
    if (!c) continue;
    axpy(v, r.vec, c);
    if (tags_) axpy(combo, r.combo, c);
  }

  std::size_t pivot = 0;
  while (pivot < n_ && v[pivot] == 0) ++pivot;
  if (pivot == n_) {
    InsertResult out;
    // v_tag - sum(...) == 0, so combo is a relation.
    if (tags_) out.relation = std::move(combo);
    return out;
  }

  const std::uint8_t inv = inverse(v[pivot]);
  if (inv != 1) {
    for (auto& e : v) e = static_cast<std::uint8_t>((e * inv) % p_);
    for (auto& e : combo) e = static_cast<std::uint8_t>((e * inv) % p_);
  }
  for (Row& r : rows_) {
    const std::uint8_t c = r.vec[pivot];
    if (!c) continue;
    axpy(r.vec, v, c);
    if (tags_) axpy(r.combo, combo, c);
  }
  rows_.push_back({pivot, std::move(v), std::move(combo)});
  return {true, {}};
}

bool FieldSpan::contains(Vec v) const {
  if (v.size() != n_) return false;
  for (const Row& r : rows_)
    if (const std::uint8_t c = v[r.pivot]) axpy(v, r.vec, c);
  for (auto e : v)
    if (e) return false;
  return true;
}

std::optional<Vec> FieldSpan::solve(Vec target) const {
  if (target.size() != n_) throw ArityError("FieldSpan::solve: length mismatch");
  Vec coeffs(tags_, 0);
  for (const Row& r : rows_) {
    const std::uint8_t c = target[r.pivot];
    if (!c) continue;
    axpy(target, r.vec, c);
    for (std::size_t t = 0; t < tags_; ++t)
      coeffs[t] = static_cast<std::uint8_t>((coeffs[t] + c * r.combo[t]) % p_);
  }
  for (auto e : target)
    if (e) return std::nullopt;
  return coeffs;
}

std::vector<Vec> FieldSpan::basis() const {
  std::vector<Vec> out;
  out.reserve(rows_.size());
  for (const Row& r : rows_) out.push_back(r.vec);
  return out;
}

std::size_t rank_mod(int prime, const std::vector<Vec>& vectors) {
  if (vectors.empty()) return 0;
  FieldSpan span(prime, vectors.front().size());
  for (const auto& v : vectors) span.insert(v);
  return span.rank();
}

// ---------------------------------------------------------------------------

Z4Span::Z4Span(std::size_t length) : n_(length), l2_(2, length) {}

bool Z4Span::insert(Vec v) {
  if (v.size() != n_) throw ArityError("Z4Span::insert: length mismatch");
  for (const Lift& l : l1_) {
    if (!(v[l.pivot] & 1)) continue;
    for (std::size_t i = 0; i < n_; ++i) v[i] = static_cast<std::uint8_t>((v[i] + 4 - l.lift[i]) & 3);
  }
  Vec low(n_);
  for (std::size_t i = 0; i < n_; ++i) low[i] = v[i] & 1;

  std::size_t pivot = 0;
  while (pivot < n_ && low[pivot] == 0) ++pivot;
  if (pivot == n_) {
    // v is in 2 * Z4^n; record v / 2.
    Vec half(n_);
    for (std::size_t i = 0; i < n_; ++i) half[i] = static_cast<std::uint8_t>(v[i] >> 1);
    return l2_.insert(std::move(half)).independent;
  }

  for (Lift& l : l1_) {
    if (!l.mod2[pivot]) continue;
    for (std::size_t i = 0; i < n_; ++i) {
      l.mod2[i] ^= low[i];
      l.lift[i] = static_cast<std::uint8_t>((l.lift[i] + 4 - v[i]) & 3);
    }
  }
  l2_.insert(low);
  l1_.push_back({pivot, std::move(low), std::move(v)});
  return true;
}

bool Z4Span::contains(Vec v) const {
  if (v.size() != n_) return false;
  for (const Lift& l : l1_) {
    if (!(v[l.pivot] & 1)) continue;
    for (std::size_t i = 0; i < n_; ++i) v[i] = static_cast<std::uint8_t>((v[i] + 4 - l.lift[i]) & 3);
  }
  Vec half(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (v[i] & 1) return false;
    half[i] = static_cast<std::uint8_t>(v[i] >> 1);
  }
  return l2_.contains(std::move(half));
}

namespace {

void check_cap(std::size_t log2_count, std::size_t cap, const char* what) {
  if (log2_count >= 63 || (std::size_t{1} << log2_count) > cap)
    throw ResourceLimit(std::string(what) + ": 2^" + std::to_string(log2_count) +
                        " elements exceed the enumeration cap");
}

}  // namespace

std::vector<Vec> Z4Span::mod2_elements(std::size_t cap) const {
  check_cap(l1_.size(), cap, "Z4Span::mod2_elements");
  std::vector<Vec> out{Vec(n_, 0)};
  for (const Lift& l : l1_) {
    const std::size_t m = out.size();
    for (std::size_t j = 0; j < m; ++j) {
      Vec w = out[j];
      for (std::size_t i = 0; i < n_; ++i) w[i] ^= l.mod2[i];
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::vector<Vec> Z4Span::elements(std::size_t cap) const {
  check_cap(l1_.size() + l2_.rank(), cap, "Z4Span::elements");

  // Complement of L1 inside L2: these give the order-2 generators.
  FieldSpan seen(2, n_);
  for (const Lift& l : l1_) seen.insert(l.mod2);
  std::vector<Vec> doubled;
  for (const Vec& y : l2_.basis())
    if (seen.insert(y).independent) {
      Vec two(n_);
      for (std::size_t i = 0; i < n_; ++i) two[i] = static_cast<std::uint8_t>(2 * y[i]);
      doubled.push_back(std::move(two));
    }

  std::vector<Vec> out{Vec(n_, 0)};
  auto extend = [&](const Vec& gen, int order) {
    const std::size_t m = out.size();
    for (int c = 1; c < order; ++c)
      for (std::size_t j = 0; j < m; ++j) {
        Vec w = out[j];
        for (std::size_t i = 0; i < n_; ++i) w[i] = static_cast<std::uint8_t>((w[i] + c * gen[i]) & 3);
        out.push_back(std::move(w));
      }
  };
  for (const Lift& l : l1_) extend(l.lift, 4);
  for (const Vec& d : doubled) extend(d, 2);
  return out;
}

}  // namespace vl::linalg
