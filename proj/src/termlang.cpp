#include "vl/termlang.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace vl {

struct Term::Node {
  Op op;
  int index = 0;
  std::vector<Term> kids;
  int max_var = 0;
  std::uint64_t size = 1;
};

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

}  // namespace

Term Term::make(Op op, int index, std::vector<Term> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->index = index;
  n->max_var = index;
  for (const Term& k : kids) {
    n->max_var = std::max(n->max_var, k.max_var());
    n->size = saturating_add(n->size, k.tree_size());
  }
  n->kids = std::move(kids);
  return Term(std::move(n));
}

Term Term::var(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  return make(Op::var, index, {});
}

Term Term::zero() {
  static const Term z = make(Op::zero, 0, {});
  return z;
}

Term Term::neg(Term a) { return make(Op::neg, 0, {std::move(a)}); }
Term Term::add(Term a, Term b) { return make(Op::add, 0, {std::move(a), std::move(b)}); }
Term Term::f(Term a, Term b) { return make(Op::f, 0, {std::move(a), std::move(b)}); }
Term Term::ldot(Term a, Term b) { return make(Op::ldot, 0, {std::move(a), std::move(b)}); }

Op Term::op() const { return node_->op; }
int Term::index() const { return node_->index; }
const Term& Term::left() const { return node_->kids.at(0); }
const Term& Term::right() const { return node_->kids.at(1); }
int Term::max_var() const { return node_->max_var; }
std::uint64_t Term::tree_size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.max_var() != b.max_var() || a.tree_size() != b.tree_size()) return false;
  if (a.op() == Op::var) return a.index() == b.index();
  const auto& ka = a.node_->kids;
  const auto& kb = b.node_->kids;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (!(ka[i] == kb[i])) return false;
  return true;
}

Term operator+(Term a, Term b) { return Term::add(std::move(a), std::move(b)); }
Term operator-(Term a) { return Term::neg(std::move(a)); }
Term operator-(Term a, Term b) { return Term::add(std::move(a), Term::neg(std::move(b))); }

Term times(int n, const Term& t) {
  if (n < 0) throw std::invalid_argument("times: negative multiplier");
  if (n == 0) return Term::zero();
  Term out = t;
  for (int i = 1; i < n; ++i) out = out + t;
  return out;
}

Term sum(std::span<const Term> terms) {
  if (terms.empty()) return Term::zero();
  Term out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) out = out + terms[i];
  return out;
}

Term linear_term(std::span<const int> coeffs) {
  std::vector<Term> parts;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) parts.push_back(times(coeffs[i], Term::var(static_cast<int>(i) + 1)));
  return sum(parts);
}

Term substitute(const Term& t, std::span<const Term> images) {
  std::unordered_map<const void*, Term> memo;
  auto go = [&](auto&& self, const Term& s) -> Term {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    Term out = s;
    switch (s.op()) {
      case Op::var:
        if (s.index() > static_cast<int>(images.size()))
          throw ArityError("substitute: no image for x" + std::to_string(s.index()));
        out = images[s.index() - 1];
        break;
      case Op::zero: break;
      case Op::neg: out = Term::neg(self(self, s.left())); break;
      case Op::add: out = Term::add(self(self, s.left()), self(self, s.right())); break;
      case Op::f: out = Term::f(self(self, s.left()), self(self, s.right())); break;
      case Op::ldot: out = Term::ldot(self(self, s.left()), self(self, s.right())); break;
    }
    memo.emplace(s.id(), out);
    return out;
  };
  return go(go, t);
}

// ---------------------------------------------------------------------------
// Parsing and printing

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Term parse_all() {
    Term t = parse_term();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')')
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Term parse_term() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    if (s_[pos_] == ')') throw ParseError("unexpected ')'", pos_);
    if (s_[pos_] != '(') return parse_atom();

    const std::size_t open = pos_++;
    skip_ws();
    const std::size_t op_pos = pos_;
    const std::string_view op = atom();
    if (op.empty()) throw ParseError("missing operator", op_pos);

    std::vector<Term> args;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) throw ParseError("unbalanced '(' opened", open);
      if (s_[pos_] == ')') {
        ++pos_;
        break;
      }
      args.push_back(parse_term());
    }

    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError("operator '" + std::string(op) + "' takes " + std::to_string(n) + " operand(s)", op_pos);
    };
    if (op == "+") {
      if (args.size() < 2) throw ParseError("operator '+' takes at least 2 operands", op_pos);
      return sum(args);
    }
    if (op == "neg") {
      need(1);
      return Term::neg(args[0]);
    }
    if (op == "f") {
      need(2);
      return Term::f(args[0], args[1]);
    }
    if (op == "ldot") {
      need(2);
      return Term::ldot(args[0], args[1]);
    }
    throw ParseError("unknown operator '" + std::string(op) + "'", op_pos);
  }

  Term parse_atom() {
    const std::size_t start = pos_;
    const std::string_view a = atom();
    if (a == "0") return Term::zero();
    if (a.size() >= 2 && a[0] == 'x' && a[1] != '0' &&
        std::all_of(a.begin() + 1, a.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      if (a.size() > 7) throw ParseError("variable index too large", start);
      return Term::var(std::stoi(std::string(a.substr(1))));
    }
    throw ParseError("bad token '" + std::string(a) + "'", start);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void print_into(const Term& t, std::string& out) {
  switch (t.op()) {
    case Op::var:
      out += 'x';
      out += std::to_string(t.index());
      return;
    case Op::zero: out += '0'; return;
    case Op::neg:
      out += "(neg ";
      print_into(t.left(), out);
      out += ')';
      return;
    case Op::add: {
      std::vector<const Term*> operands;
      const Term* cur = &t;
      while (cur->op() == Op::add) {
        operands.push_back(&cur->right());
        cur = &cur->left();
      }
      operands.push_back(cur);
      out += "(+";
      for (auto it = operands.rbegin(); it != operands.rend(); ++it) {
        out += ' ';
        print_into(**it, out);
      }
      out += ')';
      return;
    }
    case Op::f:
    case Op::ldot:
      out += t.op() == Op::f ? "(f " : "(ldot ";
      print_into(t.left(), out);
      out += ' ';
      print_into(t.right(), out);
      out += ')';
      return;
  }
}

}  // namespace

Term parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Term& t) {
  std::string out;
  print_into(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

CompiledTerm::CompiledTerm(const Term& t) : max_var_(t.max_var()) {
  std::unordered_map<const void*, std::int32_t> slot;
  // iterative post-order over distinct nodes
  std::vector<std::pair<const Term*, bool>> stack{{&t, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (slot.count(node->id())) continue;
    const bool leaf = node->op() == Op::var || node->op() == Op::zero;
    if (!leaf && !expanded) {
      stack.push_back({node, true});
      if (node->op() != Op::neg) stack.push_back({&node->right(), false});
      stack.push_back({&node->left(), false});
      continue;
    }
    Instr ins{node->op(), 0, 0};
    if (node->op() == Op::var) ins.a = node->index() - 1;
    if (!leaf) {
      ins.a = slot.at(node->left().id());
      if (node->op() != Op::neg) ins.b = slot.at(node->right().id());
    }
    slot.emplace(node->id(), static_cast<std::int32_t>(code_.size()));
    code_.push_back(ins);
  }
}

Residue CompiledTerm::operator()(std::span<const Residue> x) const {
  if (static_cast<int>(x.size()) < max_var_)
    throw ArityError("evaluate: unbound variable x" + std::to_string(max_var_));
  std::vector<Residue> reg(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& ins = code_[i];
    switch (ins.op) {
      case Op::var: reg[i] = x[ins.a]; break;
      case Op::zero: reg[i] = Residue(0); break;
      case Op::neg: reg[i] = -reg[ins.a]; break;
      case Op::add: reg[i] = reg[ins.a] + reg[ins.b]; break;
      case Op::f: reg[i] = f_map(reg[ins.a], reg[ins.b]); break;
      case Op::ldot: reg[i] = loop_mul(reg[ins.a], reg[ins.b]); break;
    }
  }
  return reg.back();
}

Residue evaluate(const Term& t, std::span<const Residue> x) { return CompiledTerm(t)(x); }

FunctionTable table(const Term& t, int arity) {
  if (t.max_var() > arity)
    throw ArityError("table: term uses x" + std::to_string(t.max_var()) + " beyond arity " + std::to_string(arity));
  const CompiledTerm c(t);
  return FunctionTable::tabulate(arity, [&](std::span<const Residue> x) { return c(x); });
}

// ---------------------------------------------------------------------------
// Builders

Term build_t_term() {
  const Term x = Term::var(1), y = Term::var(2);
  auto sq = [](const Term& z) { return Term::ldot(z, z); };
  auto p4 = [&](const Term& z) { return sq(sq(z)); };
  auto p8 = [&](const Term& z) { return sq(p4(z)); };
  return Term::ldot(Term::ldot(p4(Term::ldot(x, y)), p8(x)), p8(y));
}

Term build_gk_term(int arity) {
  if (arity < 1) throw ArityError("build_gk_term: arity must be >= 1");
  if (arity == 1) return Term::f(Term::var(1), Term::zero());
  if (arity == 2) return Term::f(Term::var(1), Term::var(2));

  const Term h = build_gk_term(arity - 1);
  // second argument of h as coefficients on (x2, x3)
  std::vector<std::pair<int, int>> seconds;
  for (int b = 0; b < 4; ++b) seconds.emplace_back(1, b);
  for (int a : {0, 2}) seconds.emplace_back(a, 1);
  for (int a : {0, 2})
    for (int b : {0, 2}) seconds.emplace_back(a, b);

  std::vector<Term> summands;
  for (auto [a, b] : seconds) {
    std::vector<Term> images{Term::var(1)};
    std::vector<Term> parts;
    if (a) parts.push_back(times(a, Term::var(2)));
    if (b) parts.push_back(times(b, Term::var(3)));
    images.push_back(sum(parts));
    for (int j = 4; j <= arity; ++j) images.push_back(Term::var(j));
    summands.push_back(substitute(h, images));
  }
  return sum(summands);
}

std::vector<std::vector<int>> fr_substitution(int arity, const Rep& r) {
  if (static_cast<int>(r.size()) != arity || !transversal(arity).find(r))
    throw std::invalid_argument("build_fr_term: representative is not in the transversal");
  std::vector<std::vector<int>> m(arity, std::vector<int>(arity, 0));
  for (int i = 0; i < arity; ++i) m[i][i] = 1;
  std::vector<int> v(r.begin(), r.end());

  // pivot: first odd coordinate, moved to the front
  int j = 0;
  while (v[j] % 2 == 0) ++j;
  std::swap(m[0], m[j]);
  std::swap(v[0], v[j]);
  // scale by the inverse of a unit of Z4 (1 and 3 are self-inverse)
  const int inv = v[0];
  for (int& e : m[0]) e = e * inv % 4;
  v[0] = 1;
  // clear the other coordinates
  for (int i = 1; i < arity; ++i) {
    const int c = v[i];
    for (int col = 0; col < arity; ++col) m[i][col] = ((m[i][col] - c * m[0][col]) % 4 + 4) % 4;
    v[i] = 0;
  }
  return m;
}

Term build_fr_term(int arity, const Rep& r) {
  const auto m = fr_substitution(arity, r);
  std::vector<Term> images;
  for (const auto& row : m) images.push_back(linear_term(row));
  return substitute(build_gk_term(arity), images);
}

Term random_term(std::mt19937_64& rng, int arity, int max_depth) {
  if (arity < 1) throw ArityError("random_term: arity must be >= 1");
  if (max_depth <= 0 || rng() % 5 == 0) {
    if (rng() % 8 == 0) return Term::zero();
    return Term::var(static_cast<int>(rng() % arity) + 1);
  }
  switch (rng() % 7) {
    case 0: return Term::neg(random_term(rng, arity, max_depth - 1));
    case 1:
    case 2: {
      Term a = random_term(rng, arity, max_depth - 1);
      return Term::add(a, random_term(rng, arity, max_depth - 1));
    }
    case 3:
    case 4:
    case 5: {
      Term a = random_term(rng, arity, max_depth - 1);
      return Term::f(a, random_term(rng, arity, max_depth - 1));
    }
    default: {
      Term a = random_term(rng, arity, max_depth - 1);
      return Term::ldot(a, random_term(rng, arity, max_depth - 1));
    }
  }
}

}  // namespace vl
