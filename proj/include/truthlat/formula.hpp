#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "truthlat/bignat.hpp"
#include "truthlat/reserved.hpp"

namespace truthlat {

// ---------------------------------------------------------------------------
// Signature: the arithmetic base {0, 1, +, *, <, =} is implicit; a signature
// only lists the extra relation symbols. Their order is stable and determines
// the relation IDs used by the coding.

struct RelSym {
  std::string name;
  std::size_t arity = 1;

  friend bool operator==(const RelSym&, const RelSym&) = default;
};

class Signature {
public:
  Signature() = default;

  explicit Signature(std::vector<RelSym> extras) {
    for (auto& r : extras) add(r.name, r.arity);
  }

  void add(const std::string& name, std::size_t arity) {
    if (arity < 1) throw std::invalid_argument("relation arity must be >= 1");
    if (is_builtin_name(name) || find(name))
      throw std::invalid_argument("relation name clash: " + name);
    extras_.push_back({name, arity});
  }

  const std::vector<RelSym>& extras() const { return extras_; }

  const RelSym* find(const std::string& name) const {
    for (auto& r : extras_)
      if (r.name == name) return &r;
    return nullptr;
  }

  // Coding payload of an extra relation: its position in the signature.
  std::size_t id_of(const std::string& name) const {
    for (std::size_t i = 0; i < extras_.size(); ++i)
      if (extras_[i].name == name) return i;
    throw std::out_of_range("unknown relation: " + name);
  }

  static bool is_builtin_name(const std::string& n) {
    static const char* builtin[] = {"0", "1", "+", "*", "<", "=",
                                    "not", "and", "or", "->", "iff",
                                    "exists", "forall", "num", "REL"};
    for (auto* b : builtin)
      if (n == b) return true;
    return reserved_fn_id(n).has_value() || reserved_pred_id(n).has_value();
  }

  friend bool operator==(const Signature&, const Signature&) = default;

private:
  std::vector<RelSym> extras_;
};

// ---------------------------------------------------------------------------
// Terms. Immutable trees shared through shared_ptr; build only through the
// factory functions below.
//
// Beside the arithmetic constructors there are two artifact extensions:
//  - Num: a compact literal denoting the numeral of an arbitrary natural
//    (used where unary numerals of Godel codes would be astronomically big);
//  - App: application of a reserved syntax function (see reserved.hpp).

enum class TermKind { Var, Zero, One, Add, Mul, Num, App };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::size_t var = 0;        // Var
  BigNat value;               // Num
  int fn = -1;                // App: reserved function id
  std::vector<TermPtr> args;  // Add/Mul: 2 children; App: arity children
};

inline TermPtr t_var(std::size_t i) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->var = i;
  return t;
}

inline TermPtr t_zero() {
  static const TermPtr z = [] {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Zero;
    return t;
  }();
  return z;
}

inline TermPtr t_one() {
  static const TermPtr o = [] {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::One;
    return t;
  }();
  return o;
}

inline TermPtr t_add(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Add;
  t->args = {std::move(a), std::move(b)};
  return t;
}

inline TermPtr t_mul(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Mul;
  t->args = {std::move(a), std::move(b)};
  return t;
}

inline TermPtr t_num(BigNat n) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Num;
  t->value = std::move(n);
  return t;
}

inline TermPtr t_app(int fn, std::vector<TermPtr> args) {
  if (fn < 0 || static_cast<std::size_t>(fn) >= kNumReservedFns)
    throw std::invalid_argument("unknown reserved function id");
  if (args.size() != kReservedFns[fn].arity)
    throw std::invalid_argument(std::string("arity mismatch for ") +
                                std::string(kReservedFns[fn].name));
  auto t = std::make_shared<Term>();
  t->kind = TermKind::App;
  t->fn = fn;
  t->args = std::move(args);
  return t;
}

// ---------------------------------------------------------------------------
// Formulas. Primitive connectives are {not, and, or, ->, exists, forall};
// iff and bounded quantifiers are parser sugar. Rel holds an extra relation
// of the signature; Pred holds a reserved syntax predicate.

enum class FormulaKind { Equal, Less, Rel, Pred, Not, And, Or, Implies, Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  std::vector<TermPtr> terms;    // Equal/Less: 2, Rel/Pred: arity
  std::string rel;               // Rel
  int pred = -1;                 // Pred: reserved predicate id
  std::vector<FormulaPtr> kids;  // Not: 1, And/Or/Implies: 2, quantifier: 1
  std::size_t var = 0;           // quantified variable index
};

inline FormulaPtr f_equal(TermPtr a, TermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Equal;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

inline FormulaPtr f_less(TermPtr a, TermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Less;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

inline FormulaPtr f_rel(std::string name, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Rel;
  f->rel = std::move(name);
  f->terms = std::move(args);
  return f;
}

inline FormulaPtr f_pred(int pred, std::vector<TermPtr> args) {
  if (pred < 0 || static_cast<std::size_t>(pred) >= kNumReservedPreds)
    throw std::invalid_argument("unknown reserved predicate id");
  if (args.size() != kReservedPreds[pred].arity)
    throw std::invalid_argument(std::string("arity mismatch for ") +
                                std::string(kReservedPreds[pred].name));
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Pred;
  f->pred = pred;
  f->terms = std::move(args);
  return f;
}

inline FormulaPtr f_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Not;
  f->kids = {std::move(a)};
  return f;
}

inline FormulaPtr f_binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return f_binary(FormulaKind::And, std::move(a), std::move(b)); }
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return f_binary(FormulaKind::Or, std::move(a), std::move(b)); }
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return f_binary(FormulaKind::Implies, std::move(a), std::move(b)); }

inline FormulaPtr f_quant(FormulaKind k, std::size_t v, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = v;
  f->kids = {std::move(body)};
  return f;
}

inline FormulaPtr f_exists(std::size_t v, FormulaPtr body) { return f_quant(FormulaKind::Exists, v, std::move(body)); }
inline FormulaPtr f_forall(std::size_t v, FormulaPtr body) { return f_quant(FormulaKind::Forall, v, std::move(body)); }

inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return f_and(f_implies(a, b), f_implies(b, a));
}

// Conjunction of a nonempty list, right-nested.
inline FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  FormulaPtr acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = f_and(fs[i], acc);
  return acc;
}

inline FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  FormulaPtr acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = f_or(fs[i], acc);
  return acc;
}

// ---------------------------------------------------------------------------
// Structural equality. Pointer equality short-circuits, so heavily shared
// DAGs (Tr_n, epsilon_k) compare in time proportional to distinct nodes.

inline bool equal_term(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: return a->var == b->var;
    case TermKind::Zero:
    case TermKind::One: return true;
    case TermKind::Num: return a->value == b->value;
    case TermKind::App:
      if (a->fn != b->fn) return false;
      break;
    default: break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal_term(a->args[i], b->args[i])) return false;
  return true;
}

inline bool equal_formula(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  if (a->kind == FormulaKind::Rel && a->rel != b->rel) return false;
  if (a->kind == FormulaKind::Pred && a->pred != b->pred) return false;
  if ((a->kind == FormulaKind::Exists || a->kind == FormulaKind::Forall) &&
      a->var != b->var)
    return false;
  if (a->terms.size() != b->terms.size() || a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i)
    if (!equal_term(a->terms[i], b->terms[i])) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal_formula(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Depth: maximal nesting of connectives and quantifiers. Atomic formulas have
// depth 0; not/exists/forall add 1; binary connectives add 1 over the max.
// Memoized per node so shared DAGs are linear.

namespace detail {
inline std::size_t depth_memo(const Formula* f,
                              std::unordered_map<const Formula*, std::size_t>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  std::size_t d = 0;
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Less:
    case FormulaKind::Rel:
    case FormulaKind::Pred:
      d = 0;
      break;
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      d = depth_memo(f->kids[0].get(), memo) + 1;
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      d = std::max(depth_memo(f->kids[0].get(), memo),
                   depth_memo(f->kids[1].get(), memo)) + 1;
      break;
  }
  memo.emplace(f, d);
  return d;
}
}  // namespace detail

inline std::size_t depth(const FormulaPtr& f) {
  std::unordered_map<const Formula*, std::size_t> memo;
  return detail::depth_memo(f.get(), memo);
}

// ---------------------------------------------------------------------------
// Variable sets.

namespace detail {
inline void term_vars(const TermPtr& t, std::set<std::size_t>& out) {
  if (t->kind == TermKind::Var) out.insert(t->var);
  for (auto& a : t->args) term_vars(a, out);
}

inline void collect_vars(const FormulaPtr& f, std::set<std::size_t>& free,
                         std::set<std::size_t>& all,
                         std::vector<std::size_t>& bound) {
  for (auto& t : f->terms) {
    std::set<std::size_t> vs;
    term_vars(t, vs);
    for (auto v : vs) {
      all.insert(v);
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) free.insert(v);
    }
  }
  if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
    all.insert(f->var);
    bound.push_back(f->var);
    collect_vars(f->kids[0], free, all, bound);
    bound.pop_back();
  } else {
    for (auto& k : f->kids) collect_vars(k, free, all, bound);
  }
}
}  // namespace detail

inline std::set<std::size_t> free_vars(const FormulaPtr& f) {
  std::set<std::size_t> free, all;
  std::vector<std::size_t> bound;
  detail::collect_vars(f, free, all, bound);
  return free;
}

inline std::set<std::size_t> vars_of_term(const TermPtr& t) {
  std::set<std::size_t> vs;
  detail::term_vars(t, vs);
  return vs;
}

// Every variable index occurring anywhere (free or bound).
inline std::set<std::size_t> all_vars(const FormulaPtr& f) {
  std::set<std::size_t> free, all;
  std::vector<std::size_t> bound;
  detail::collect_vars(f, free, all, bound);
  return all;
}

inline bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }

// ---------------------------------------------------------------------------
// Capture-avoiding substitution of a term for the free occurrences of a
// variable. When a binder would capture a variable of the substituted term,
// the bound variable is renamed to the smallest index unused in the whole
// context.

namespace detail {
inline TermPtr term_subst(const TermPtr& t, std::size_t v, const TermPtr& repl) {
  switch (t->kind) {
    case TermKind::Var: return t->var == v ? repl : t;
    case TermKind::Zero:
    case TermKind::One:
    case TermKind::Num: return t;
    default: break;
  }
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (auto& a : t->args) {
    args.push_back(term_subst(a, v, repl));
    changed |= args.back() != a;
  }
  if (!changed) return t;
  auto n = std::make_shared<Term>(*t);
  n->args = std::move(args);
  return n;
}

inline FormulaPtr subst_rec(const FormulaPtr& f, std::size_t v, const TermPtr& repl,
                            const std::set<std::size_t>& repl_vars,
                            std::set<std::size_t>& used) {
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Less:
    case FormulaKind::Rel:
    case FormulaKind::Pred: {
      std::vector<TermPtr> ts;
      ts.reserve(f->terms.size());
      bool changed = false;
      for (auto& t : f->terms) {
        ts.push_back(term_subst(t, v, repl));
        changed |= ts.back() != t;
      }
      if (!changed) return f;
      auto n = std::make_shared<Formula>(*f);
      n->terms = std::move(ts);
      return n;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (f->var == v) return f;  // v is bound here; no free occurrence below
      if (repl_vars.count(f->var)) {
        // rename the binder to avoid capturing a variable of repl
        std::size_t fresh = 0;
        while (used.count(fresh) || repl_vars.count(fresh)) ++fresh;
        used.insert(fresh);
        FormulaPtr body = subst_rec(f->kids[0], f->var, t_var(fresh), {}, used);
        body = subst_rec(body, v, repl, repl_vars, used);
        return f_quant(f->kind, fresh, body);
      }
      FormulaPtr body = subst_rec(f->kids[0], v, repl, repl_vars, used);
      if (body == f->kids[0]) return f;
      return f_quant(f->kind, f->var, body);
    }
    default: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      bool changed = false;
      for (auto& k : f->kids) {
        kids.push_back(subst_rec(k, v, repl, repl_vars, used));
        changed |= kids.back() != k;
      }
      if (!changed) return f;
      auto n = std::make_shared<Formula>(*f);
      n->kids = std::move(kids);
      return n;
    }
  }
}
}  // namespace detail

inline FormulaPtr substitute(const FormulaPtr& f, std::size_t v, const TermPtr& t) {
  std::set<std::size_t> used = all_vars(f);
  std::set<std::size_t> repl_vars = vars_of_term(t);
  used.insert(repl_vars.begin(), repl_vars.end());
  return detail::subst_rec(f, v, t, repl_vars, used);
}

// ---------------------------------------------------------------------------
// Syntactic hierarchy classification (no prenexing, no provable-equivalence
// search). Delta0 is closed under propositional connectives and under the
// bounded-quantifier patterns
//   exists v (v < t /\ phi)   and   forall v (v < t -> phi)
// with v not occurring in t. Sigma(0) = Pi(0) = Delta0. Reserved predicates
// and extra relations count as atomic.

struct SyntacticClass {
  enum Tag { Delta0, Sigma, Pi, Unclassified } tag = Unclassified;
  unsigned n = 0;

  friend bool operator==(const SyntacticClass&, const SyntacticClass&) = default;

  std::string str() const {
    switch (tag) {
      case Delta0: return "Delta0";
      case Sigma: return "Sigma(" + std::to_string(n) + ")";
      case Pi: return "Pi(" + std::to_string(n) + ")";
      default: return "Unclassified";
    }
  }
};

namespace detail {
inline bool bounded_pattern(const FormulaPtr& f, FormulaPtr& body) {
  // exists v (v < t /\ phi) | forall v (v < t -> phi), v not in t
  if (f->kind != FormulaKind::Exists && f->kind != FormulaKind::Forall) return false;
  const FormulaPtr& m = f->kids[0];
  FormulaKind want =
      f->kind == FormulaKind::Exists ? FormulaKind::And : FormulaKind::Implies;
  if (m->kind != want) return false;
  const FormulaPtr& guard = m->kids[0];
  if (guard->kind != FormulaKind::Less) return false;
  if (guard->terms[0]->kind != TermKind::Var || guard->terms[0]->var != f->var)
    return false;
  if (vars_of_term(guard->terms[1]).count(f->var)) return false;
  body = m->kids[1];
  return true;
}
}  // namespace detail

inline SyntacticClass classify(const FormulaPtr& f) {
  using SC = SyntacticClass;
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Less:
    case FormulaKind::Rel:
    case FormulaKind::Pred:
      return {SC::Delta0, 0};
    case FormulaKind::Not: {
      SC c = classify(f->kids[0]);
      return c.tag == SC::Delta0 ? c : SC{SC::Unclassified, 0};
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
      SC a = classify(f->kids[0]);
      SC b = classify(f->kids[1]);
      if (a.tag == SC::Delta0 && b.tag == SC::Delta0) return {SC::Delta0, 0};
      return {SC::Unclassified, 0};
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      FormulaPtr body;
      if (detail::bounded_pattern(f, body)) {
        SC c = classify(body);
        if (c.tag == SC::Delta0) return {SC::Delta0, 0};
      }
      SC c = classify(f->kids[0]);
      if (c.tag == SC::Unclassified) return c;
      bool ex = f->kind == FormulaKind::Exists;
      if (ex) {
        if (c.tag == SC::Sigma && c.n >= 1) return c;          // absorb
        if (c.tag == SC::Delta0) return {SC::Sigma, 1};
        return {SC::Sigma, c.n + 1};                           // over Pi(n)
      }
      if (c.tag == SC::Pi && c.n >= 1) return c;
      if (c.tag == SC::Delta0) return {SC::Pi, 1};
      return {SC::Pi, c.n + 1};
    }
  }
  return {SC::Unclassified, 0};
}

// True when classify(f) is Delta0, Pi(k<=n), or Sigma(k<n) folded under Pi(n).
inline bool within_pi(const FormulaPtr& f, unsigned n) {
  SyntacticClass c = classify(f);
  if (c.tag == SyntacticClass::Delta0) return true;
  if (c.tag == SyntacticClass::Pi) return c.n <= n;
  if (c.tag == SyntacticClass::Sigma) return c.n < n;
  return false;
}

// ---------------------------------------------------------------------------
// Signature checks: every Rel atom matches the signature's arity, every extra
// relation used is declared.

inline void check_signature(const FormulaPtr& f, const Signature& sig) {
  if (f->kind == FormulaKind::Rel) {
    const RelSym* r = sig.find(f->rel);
    if (!r) throw std::invalid_argument("unknown relation: " + f->rel);
    if (r->arity != f->terms.size())
      throw std::invalid_argument("arity mismatch for relation " + f->rel);
  }
  for (auto& k : f->kids) check_signature(k, sig);
}

// Names of extra relations occurring in f.
inline std::set<std::string> rels_of(const FormulaPtr& f) {
  std::set<std::string> out;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* cur = stack.back();
    stack.pop_back();
    if (cur->kind == FormulaKind::Rel) out.insert(cur->rel);
    for (auto& k : cur->kids) stack.push_back(k.get());
  }
  return out;
}

}  // namespace truthlat
