#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "truthlat/formula.hpp"
#include "truthlat/godel.hpp"
#include "truthlat/sexpr.hpp"

namespace truthlat {

// Budgeted evaluation in the standard model N, with native oracles for the
// reserved syntax vocabulary, plus exact Tarskian evaluation in finite
// relational structures.
//
// Verdicts are three-valued with strong-Kleene propagation: True and False
// are always correct; Unknown records budget exhaustion at some unbounded
// quantifier. Quantifier blocks are solved by functional-witness
// propagation first: an equation conjunct whose one side is closed and whose
// other side is a quantified variable, a reserved-function application with
// the variable among its arguments (inverted via decoding), or a forward
// application with closed arguments, pins the variable exactly. Remaining
// variables with a closed strict bound are enumerated exhaustively; the rest
// fall back to witness/counterexample search up to the budget.

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  enum Value { True, False, Unknown } value = Unknown;
  std::string note;  // set for Unknown: where the budget ran out

  bool decided() const { return value != Unknown; }
  bool is_true() const { return value == True; }
  bool is_false() const { return value == False; }

  std::string str() const {
    switch (value) {
      case True: return "true";
      case False: return "false";
      default: return note.empty() ? "unknown" : "unknown (" + note + ")";
    }
  }

  friend bool operator==(const Verdict& a, const Verdict& b) { return a.value == b.value; }
};

inline Verdict v_true() { return {Verdict::True, {}}; }
inline Verdict v_false() { return {Verdict::False, {}}; }
inline Verdict v_unknown(std::string note) { return {Verdict::Unknown, std::move(note)}; }

inline Verdict neg3(Verdict a) {
  if (a.value == Verdict::True) return v_false();
  if (a.value == Verdict::False) return v_true();
  return a;
}

struct EvalOptions {
  std::uint64_t budget = 10000;               // per unbounded quantifier node
  std::optional<std::uint64_t> universe_bound;  // fragment-relative evaluation
  std::uint64_t iter_cap = 2000000;           // safety cap on exact bounded search
  std::uint64_t step_cap = 4000000;           // quantifier candidates per sentence
  std::size_t exp_bit_cap = 1u << 22;
  std::uint64_t numsub_cap = 1000000;         // largest unary numeral an oracle builds
};

// --------------------------------------------------------------------------
// Oracle registry. Reserved functions are total (0 outside their intended
// domain); reserved predicates are total booleans. Slots for the symbols of
// higher modules (tr-code, wct-code, the algebra and proof oracles) start
// empty and are installed by those modules; see truthlat.hpp.

struct Oracles {
  std::array<std::function<BigNat(const std::vector<BigNat>&)>, kNumReservedFns> fns;
  std::array<std::function<bool(const std::vector<BigNat>&)>, kNumReservedPreds> preds;
};

using Env = std::unordered_map<std::size_t, BigNat>;

class Evaluator {
public:
  explicit Evaluator(Signature sig = {}, EvalOptions opt = {})
      : sig_(std::move(sig)), opt_(opt) {
    install_core();
  }

  const Signature& signature() const { return sig_; }
  EvalOptions& options() { return opt_; }
  Oracles& oracles() { return oracles_; }

  // Native interpretation of an extra relation symbol (e.g. T or a flexible
  // eta supplied by a test); arguments arrive as evaluated naturals.
  void set_rel_hook(const std::string& name, std::function<bool(const std::vector<BigNat>&)> h) {
    rel_hooks_[name] = std::move(h);
  }

  Verdict eval_sentence(const FormulaPtr& f) {
    if (!free_vars(f).empty()) throw EvalError("eval_nat requires a sentence");
    steps_ = 0;
    fn_memo_.clear();
    Env env;
    return eval(f, env);
  }

  Verdict eval(const FormulaPtr& f, Env& env) {
    switch (f->kind) {
      case FormulaKind::Equal: {
        BigNat a = eval_term(f->terms[0], env);
        BigNat b = eval_term(f->terms[1], env);
        return a == b ? v_true() : v_false();
      }
      case FormulaKind::Less: {
        BigNat a = eval_term(f->terms[0], env);
        BigNat b = eval_term(f->terms[1], env);
        return a < b ? v_true() : v_false();
      }
      case FormulaKind::Rel: {
        auto it = rel_hooks_.find(f->rel);
        if (it == rel_hooks_.end())
          throw EvalError("uninterpreted extra relation: " + f->rel);
        return it->second(eval_args(f, env)) ? v_true() : v_false();
      }
      case FormulaKind::Pred: {
        auto& oracle = oracles_.preds[f->pred];
        if (!oracle)
          throw EvalError(std::string("oracle not installed: ") +
                          std::string(kReservedPreds[f->pred].name));
        return oracle(eval_args(f, env)) ? v_true() : v_false();
      }
      case FormulaKind::Not:
        return neg3(eval(f->kids[0], env));
      case FormulaKind::And: {
        Verdict a = eval(f->kids[0], env);
        if (a.is_false()) return a;
        Verdict b = eval(f->kids[1], env);
        if (b.is_false()) return b;
        return a.is_true() && b.is_true() ? v_true()
                                          : (a.decided() ? b : a);
      }
      case FormulaKind::Or: {
        Verdict a = eval(f->kids[0], env);
        if (a.is_true()) return a;
        Verdict b = eval(f->kids[1], env);
        if (b.is_true()) return b;
        return a.is_false() && b.is_false() ? v_false()
                                            : (a.decided() ? b : a);
      }
      case FormulaKind::Implies: {
        Verdict a = eval(f->kids[0], env);
        if (a.is_false()) return v_true();
        Verdict b = eval(f->kids[1], env);
        if (b.is_true()) return b;
        if (a.is_true() && b.is_false()) return v_false();
        return a.decided() ? b : a;
      }
      case FormulaKind::Exists: {
        std::vector<std::size_t> vars;
        FormulaPtr matrix = f;
        while (matrix->kind == FormulaKind::Exists) {
          vars.push_back(matrix->var);
          matrix = matrix->kids[0];
        }
        return solve_exists(vars, matrix, env);
      }
      case FormulaKind::Forall: {
        std::vector<std::size_t> vars;
        FormulaPtr matrix = f;
        while (matrix->kind == FormulaKind::Forall) {
          vars.push_back(matrix->var);
          matrix = matrix->kids[0];
        }
        return neg3(solve_exists(vars, nnf_not(matrix), env));
      }
    }
    throw EvalError("unreachable formula kind");
  }

  BigNat eval_term(const TermPtr& t, const Env& env) {
    switch (t->kind) {
      case TermKind::Zero: return BigNat{0};
      case TermKind::One: return BigNat{1};
      case TermKind::Num: return t->value;
      case TermKind::Var: {
        auto it = env.find(t->var);
        if (it == env.end())
          throw EvalError("unbound variable v" + std::to_string(t->var));
        return it->second;
      }
      case TermKind::Add:
        return eval_term(t->args[0], env) + eval_term(t->args[1], env);
      case TermKind::Mul:
        return eval_term(t->args[0], env) * eval_term(t->args[1], env);
      case TermKind::App: {
        auto& oracle = oracles_.fns[t->fn];
        if (!oracle)
          throw EvalError(std::string("oracle not installed: ") +
                          std::string(kReservedFns[t->fn].name));
        std::vector<BigNat> args;
        args.reserve(t->args.size());
        for (auto& a : t->args) args.push_back(eval_term(a, env));
        auto key = std::make_pair(t->fn, std::move(args));
        auto it = fn_memo_.find(key);
        if (it != fn_memo_.end()) return it->second;
        BigNat r = oracle(key.second);
        fn_memo_.emplace(std::move(key), r);
        return r;
      }
    }
    throw EvalError("unreachable term kind");
  }

  // Negation pushed through connectives and quantifiers down to literals.
  static FormulaPtr nnf_not(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::Not: return f->kids[0];
      case FormulaKind::And: return f_or(nnf_not(f->kids[0]), nnf_not(f->kids[1]));
      case FormulaKind::Or: return f_and(nnf_not(f->kids[0]), nnf_not(f->kids[1]));
      case FormulaKind::Implies: return f_and(f->kids[0], nnf_not(f->kids[1]));
      case FormulaKind::Exists: return f_forall(f->var, nnf_not(f->kids[0]));
      case FormulaKind::Forall: return f_exists(f->var, nnf_not(f->kids[0]));
      default: return f_not(f);
    }
  }

private:
  std::vector<BigNat> eval_args(const FormulaPtr& f, const Env& env) {
    std::vector<BigNat> args;
    args.reserve(f->terms.size());
    for (auto& t : f->terms) args.push_back(eval_term(t, env));
    return args;
  }

  bool closed_in(const TermPtr& t, const Env& env) const {
    for (auto v : vars_of_term(t))
      if (!env.count(v)) return false;
    return true;
  }

  // Components of a constructor-shaped code, as codes; nullopt when the
  // value does not decode to the expected shape.
  std::optional<std::vector<BigNat>> invert_fn(int fn, const BigNat& value) {
    FormulaPtr f;
    try {
      switch (fn) {
        case kFnEqCode: {
          f = decode_formula(value, sig_);
          if (f->kind != FormulaKind::Equal) return std::nullopt;
          return std::vector<BigNat>{encode_term(f->terms[0], sig_),
                                     encode_term(f->terms[1], sig_)};
        }
        case kFnNegCode: {
          f = decode_formula(value, sig_);
          if (f->kind != FormulaKind::Not) return std::nullopt;
          return std::vector<BigNat>{encode(f->kids[0], sig_)};
        }
        case kFnAndCode: {
          f = decode_formula(value, sig_);
          if (f->kind != FormulaKind::And) return std::nullopt;
          return std::vector<BigNat>{encode(f->kids[0], sig_), encode(f->kids[1], sig_)};
        }
        case kFnExCode: {
          f = decode_formula(value, sig_);
          if (f->kind != FormulaKind::Exists) return std::nullopt;
          return std::vector<BigNat>{encode_term(t_var(f->var), sig_),
                                     encode(f->kids[0], sig_)};
        }
        case kFnRelCode1:
        case kFnRelCode2:
        case kFnRelCode3:
        case kFnRelCode4: {
          std::size_t k = static_cast<std::size_t>(fn - kFnRelCode1) + 1;
          f = decode_formula(value, sig_);
          if (f->kind != FormulaKind::Rel || f->terms.size() != k) return std::nullopt;
          std::vector<BigNat> comps{BigNat{sig_.id_of(f->rel)}};
          for (auto& t : f->terms) comps.push_back(encode_term(t, sig_));
          return comps;
        }
        default: return std::nullopt;
      }
    } catch (const CodeError&) {
      return std::nullopt;
    }
  }

  static bool invertible(int fn) {
    return fn == kFnEqCode || fn == kFnNegCode || fn == kFnAndCode ||
           fn == kFnExCode ||
           (fn >= kFnRelCode1 && fn <= kFnRelCode4);
  }

  static void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->kind == FormulaKind::And) {
      flatten_and(f->kids[0], out);
      flatten_and(f->kids[1], out);
    } else {
      out.push_back(f);
    }
  }

  static void flatten_or(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->kind == FormulaKind::Or) {
      flatten_or(f->kids[0], out);
      flatten_or(f->kids[1], out);
    } else {
      out.push_back(f);
    }
  }

  // whether propagation could pin one of the variables inside this disjunct:
  // a top-level equation with a bare variable side, or with an invertible
  // constructor application taking one of them as a direct argument
  static bool can_pin(const FormulaPtr& d, const std::vector<std::size_t>& vars) {
    std::vector<FormulaPtr> conjs;
    flatten_and(d, conjs);
    auto is_block_var = [&](const TermPtr& t) {
      return t->kind == TermKind::Var &&
             std::find(vars.begin(), vars.end(), t->var) != vars.end();
    };
    for (auto& c : conjs) {
      if (c->kind != FormulaKind::Equal) continue;
      for (auto& side : c->terms) {
        if (is_block_var(side)) return true;
        if (side->kind == TermKind::App && invertible(side->fn))
          for (auto& a : side->args)
            if (is_block_var(a)) return true;
      }
    }
    return false;
  }

  // exists vars. matrix, under env. Disjunctions are split off only where a
  // disjunct can pin a variable exactly; the remaining disjuncts share one
  // search loop, so failing branches do not each exhaust the budget.
  Verdict solve_exists(std::vector<std::size_t> vars, const FormulaPtr& matrix, Env& env,
                       bool split_or = true) {
    if (split_or && matrix->kind == FormulaKind::Or) {
      std::vector<FormulaPtr> disjuncts;
      flatten_or(matrix, disjuncts);
      std::vector<FormulaPtr> rest;
      Verdict acc = v_false();
      for (auto& d : disjuncts) {
        if (!can_pin(d, vars)) {
          rest.push_back(d);
          continue;
        }
        Verdict r = solve_exists(vars, d, env);
        if (r.is_true()) return r;
        if (!r.decided()) acc = r;
      }
      if (!rest.empty()) {
        FormulaPtr grouped = rest.size() == 1 ? rest[0] : f_or_all(rest);
        Verdict r = solve_exists(vars, grouped, env, false);
        if (r.is_true()) return r;
        if (!r.decided()) acc = r;
      }
      return acc;
    }
    if (matrix->kind == FormulaKind::Exists) {
      FormulaPtr m = matrix;
      while (m->kind == FormulaKind::Exists) {
        vars.push_back(m->var);
        m = m->kids[0];
      }
      return solve_exists(std::move(vars), m, env);
    }

    std::vector<FormulaPtr> conjuncts;
    flatten_and(matrix, conjuncts);

    std::set<std::size_t> unbound;
    for (auto v : vars)
      if (!env.count(v)) unbound.insert(v);
    // variables of the block shadow any outer binding
    std::vector<std::pair<std::size_t, BigNat>> shadowed;
    for (auto v : vars) {
      auto it = env.find(v);
      if (it != env.end()) {
        shadowed.emplace_back(v, it->second);
        env.erase(it);
        unbound.insert(v);
      }
    }
    std::vector<std::size_t> bound_here;
    auto cleanup = [&](Verdict r) {
      for (auto v : bound_here) env.erase(v);
      for (auto& [v, val] : shadowed) env[v] = val;
      return r;
    };

    // propagation
    bool progress = true, contradiction = false;
    while (progress && !contradiction) {
      progress = false;
      for (auto& c : conjuncts) {
        if (c->kind != FormulaKind::Equal) continue;
        for (int side = 0; side < 2 && !progress; ++side) {
          const TermPtr& lhs = c->terms[side];
          const TermPtr& rhs = c->terms[1 - side];
          if (!closed_in(rhs, env)) continue;
          // rhs closed; try to pin variables of lhs
          if (lhs->kind == TermKind::Var && !env.count(lhs->var) &&
              unbound.count(lhs->var)) {
            BigNat val = eval_term(rhs, env);
            env[lhs->var] = std::move(val);
            bound_here.push_back(lhs->var);
            unbound.erase(lhs->var);
            progress = true;
            break;
          }
          if (lhs->kind == TermKind::App && !closed_in(lhs, env)) {
            if (!invertible(lhs->fn)) continue;
            bool args_ok = true;
            for (auto& a : lhs->args)
              if (a->kind != TermKind::Var && !closed_in(a, env)) args_ok = false;
            if (!args_ok) continue;
            BigNat val = eval_term(rhs, env);
            // a zero value is the oracles' off-domain default and may have
            // garbage preimages; leave it to the search fallback
            if (val.is_zero()) continue;
            auto comps = invert_fn(lhs->fn, val);
            if (!comps) { contradiction = true; break; }
            for (std::size_t i = 0; i < lhs->args.size(); ++i) {
              const TermPtr& a = lhs->args[i];
              if (closed_in(a, env)) {
                if (eval_term(a, env) != (*comps)[i]) { contradiction = true; break; }
              } else if (a->kind == TermKind::Var && unbound.count(a->var)) {
                env[a->var] = (*comps)[i];
                bound_here.push_back(a->var);
                unbound.erase(a->var);
                progress = true;
              }
            }
            if (contradiction) break;
          }
        }
        if (contradiction || progress) break;
      }
    }
    if (contradiction) return cleanup(v_false());

    if (unbound.empty()) {
      Verdict r = v_true();
      for (auto& c : conjuncts) {
        Verdict cv = eval(c, env);
        if (cv.is_false()) return cleanup(v_false());
        if (!cv.decided()) r = cv;
      }
      return cleanup(r);
    }

    // evaluate conjuncts that are already closed once, instead of once per
    // candidate; a false one settles the whole block
    {
      std::vector<FormulaPtr> open;
      Verdict closed_taint = v_true();
      for (auto& c : conjuncts) {
        bool is_open = false;
        for (auto v : free_vars(c))
          if (unbound.count(v)) is_open = true;
        if (is_open) {
          open.push_back(c);
          continue;
        }
        Verdict cv = eval(c, env);
        if (cv.is_false()) return cleanup(v_false());
        if (!cv.decided()) closed_taint = cv;
      }
      if (open.size() < conjuncts.size()) {
        if (open.empty())
          return cleanup(closed_taint);  // any candidate witnesses the block
        Env sub = env;
        Verdict inner =
            solve_exists(std::vector<std::size_t>(unbound.begin(), unbound.end()),
                         f_and_all(open), sub);
        if (inner.is_false() || !closed_taint.decided())
          return cleanup(inner.is_false() ? v_false()
                                          : (inner.is_true() ? closed_taint : inner));
        return cleanup(inner);
      }
    }

    // choose a variable: prefer one with a closed strict bound
    std::size_t pick = *unbound.begin();
    std::optional<BigNat> bound;
    for (auto v : unbound) {
      for (auto& c : conjuncts) {
        if (c->kind != FormulaKind::Less) continue;
        if (c->terms[0]->kind != TermKind::Var || c->terms[0]->var != v) continue;
        if (!closed_in(c->terms[1], env)) continue;
        BigNat b = eval_term(c->terms[1], env);
        if (!bound || b < *bound) {
          bound = b;
          pick = v;
        }
      }
    }

    bool exhaustive = bound.has_value();
    std::uint64_t limit;
    std::string why;
    if (bound) {
      if (!bound->fits_u64() || bound->to_u64() > opt_.iter_cap) {
        limit = opt_.iter_cap;
        exhaustive = false;
        why = "bound beyond iteration cap at exists v" + std::to_string(pick);
      } else {
        limit = bound->to_u64();
      }
    } else if (opt_.universe_bound) {
      limit = *opt_.universe_bound;
      exhaustive = true;  // fragment-relative
    } else {
      limit = opt_.budget;
      why = "budget exhausted at exists v" + std::to_string(pick);
    }

    std::vector<std::size_t> rest;
    for (auto v : unbound)
      if (v != pick) rest.push_back(v);

    bool saw_unknown = false;
    for (std::uint64_t w = 0; w < limit; ++w) {
      if (++steps_ > opt_.step_cap)
        return cleanup(v_unknown("step cap exhausted at exists v" + std::to_string(pick)));
      env[pick] = BigNat{w};
      Verdict r = rest.empty() ? eval_conjunction(conjuncts, env)
                               : solve_exists(rest, matrix, env);
      env.erase(pick);
      if (r.is_true()) return cleanup(v_true());
      if (!r.decided()) saw_unknown = true;
    }
    if (exhaustive && !saw_unknown) return cleanup(v_false());
    return cleanup(v_unknown(saw_unknown ? "undecided instance under exists v" + std::to_string(pick) : why));
  }

  Verdict eval_conjunction(const std::vector<FormulaPtr>& conjuncts, Env& env) {
    Verdict r = v_true();
    for (auto& c : conjuncts) {
      Verdict cv = eval(c, env);
      if (cv.is_false()) return cv;
      if (!cv.decided()) r = cv;
    }
    return r;
  }

  void install_core();

  Signature sig_;
  EvalOptions opt_;
  Oracles oracles_;
  std::uint64_t steps_ = 0;
  std::map<std::pair<int, std::vector<BigNat>>, BigNat> fn_memo_;
  std::map<std::string, std::function<bool(const std::vector<BigNat>&)>> rel_hooks_;
};

// --------------------------------------------------------------------------
// Core oracles: syntax functions over codes of the ambient signature. All
// total, returning 0 off their intended domain.

namespace detail {

inline bool pure_arith_term(const TermPtr& t) {
  if (t->kind == TermKind::App || t->kind == TermKind::Num) return false;
  for (auto& a : t->args)
    if (!pure_arith_term(a)) return false;
  return true;
}

inline bool pure_arith(const FormulaPtr& f, bool allow_num = true) {
  if (f->kind == FormulaKind::Rel || f->kind == FormulaKind::Pred) return false;
  for (auto& t : f->terms) {
    std::vector<const Term*> st{t.get()};
    while (!st.empty()) {
      const Term* cur = st.back();
      st.pop_back();
      if (cur->kind == TermKind::App) return false;
      if (cur->kind == TermKind::Num && !allow_num) return false;
      for (auto& a : cur->args) st.push_back(a.get());
    }
  }
  for (auto& k : f->kids)
    if (!pure_arith(k, allow_num)) return false;
  return true;
}

}  // namespace detail

inline void Evaluator::install_core() {
  Signature sig = sig_;
  const EvalOptions opt = opt_;

  oracles_.fns[kFnVal] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      TermPtr t = decode_term(a[0], sig);
      Env env;
      Evaluator ev(sig);
      return ev.eval_term(t, env);
    } catch (...) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnDpt] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      return BigNat{depth(decode_formula(a[0], sig))};
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnNumsub] = [sig, opt](const std::vector<BigNat>& a) -> BigNat {
    try {
      FormulaPtr f = decode_formula(a[0], sig);
      TermPtr v = decode_term(a[1], sig);
      if (v->kind != TermKind::Var) return BigNat{0};
      if (!a[2].fits_u64() || a[2].to_u64() > opt.numsub_cap) return BigNat{0};
      return numsub_code(f, v->var, a[2].to_u64(), sig);
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnNegCode] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      return encode(f_not(decode_formula(a[0], sig)), sig);
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnAndCode] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      return encode(f_and(decode_formula(a[0], sig), decode_formula(a[1], sig)), sig);
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnExCode] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      TermPtr v = decode_term(a[0], sig);
      if (v->kind != TermKind::Var) return BigNat{0};
      return encode(f_exists(v->var, decode_formula(a[1], sig)), sig);
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnEqCode] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      return encode(f_equal(decode_term(a[0], sig), decode_term(a[1], sig)), sig);
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  for (int k = 1; k <= 4; ++k) {
    oracles_.fns[kFnRelCode1 + k - 1] = [sig, k](const std::vector<BigNat>& a) -> BigNat {
      try {
        if (!a[0].fits_u64() || a[0].to_u64() >= sig.extras().size()) return BigNat{0};
        const RelSym& r = sig.extras()[a[0].to_u64()];
        if (r.arity != static_cast<std::size_t>(k)) return BigNat{0};
        std::vector<TermPtr> args;
        for (int i = 1; i <= k; ++i) args.push_back(decode_term(a[i], sig));
        return encode(f_rel(r.name, std::move(args)), sig);
      } catch (const CodeError&) {
        return BigNat{0};
      }
    };
  }
  oracles_.fns[kFnDiag] = [sig](const std::vector<BigNat>& a) -> BigNat {
    try {
      FormulaPtr f = decode_formula(a[0], sig);
      auto frees = free_vars(f);
      std::size_t v = frees.empty() ? 0 : *frees.begin();
      return encode(substitute(f, v, t_num(a[0])), sig);
    } catch (const CodeError&) {
      return BigNat{0};
    }
  };
  oracles_.fns[kFnExp] = [opt](const std::vector<BigNat>& a) -> BigNat {
    return BigNat::pow_capped(a[0], a[1], opt.exp_bit_cap);
  };

  oracles_.preds[kPredVar] = [sig](const std::vector<BigNat>& a) {
    try {
      return decode_term(a[0], sig)->kind == TermKind::Var;
    } catch (const CodeError&) {
      return false;
    }
  };
  oracles_.preds[kPredTmc] = [sig](const std::vector<BigNat>& a) {
    try {
      TermPtr t = decode_term(a[0], sig);
      return detail::pure_arith_term(t) && vars_of_term(t).empty();
    } catch (const CodeError&) {
      return false;
    }
  };
  oracles_.preds[kPredSent] = [sig](const std::vector<BigNat>& a) {
    try {
      FormulaPtr f = decode_formula(a[0], sig);
      return detail::pure_arith(f) && is_sentence(f);
    } catch (const CodeError&) {
      return false;
    }
  };
  oracles_.preds[kPredSentL] = [sig](const std::vector<BigNat>& a) {
    try {
      FormulaPtr f = decode_formula(a[0], sig);
      return is_sentence(f);
    } catch (const CodeError&) {
      return false;
    }
  };
  oracles_.preds[kPredPi1] = [sig](const std::vector<BigNat>& a) {
    try {
      return within_pi(decode_formula(a[0], sig), 1);
    } catch (const CodeError&) {
      return false;
    }
  };
}

// --------------------------------------------------------------------------
// Finite relational structures and exact Tarskian evaluation.

struct FiniteStructure {
  std::size_t universe = 1;
  std::map<std::string, std::set<std::vector<std::size_t>>> relations;

  static FiniteStructure from_json(const nlohmann::json& j) {
    FiniteStructure m;
    m.universe = j.at("universe").get<std::size_t>();
    if (m.universe == 0) throw EvalError("empty universe");
    if (j.contains("relations"))
      for (auto& [name, tuples] : j.at("relations").items()) {
        auto& ext = m.relations[name];
        for (auto& tup : tuples) ext.insert(tup.get<std::vector<std::size_t>>());
      }
    for (auto& [name, ext] : m.relations)
      for (auto& tup : ext)
        for (auto e : tup)
          if (e >= m.universe) throw EvalError("tuple element outside universe");
    return m;
  }

  nlohmann::json to_json() const {
    nlohmann::json rels = nlohmann::json::object();
    for (auto& [name, ext] : relations) {
      nlohmann::json tuples = nlohmann::json::array();
      for (auto& t : ext) tuples.push_back(t);
      rels[name] = tuples;
    }
    return {{"universe", universe}, {"relations", rels}};
  }
};

namespace detail {
inline std::size_t fin_term(const TermPtr& t, const std::map<std::size_t, std::size_t>& env) {
  if (t->kind != TermKind::Var) throw EvalError("symbol not interpreted in finite structure");
  auto it = env.find(t->var);
  if (it == env.end()) throw EvalError("unbound variable in finite evaluation");
  return it->second;
}

inline bool fin_eval(const FiniteStructure& m, const FormulaPtr& f,
                     std::map<std::size_t, std::size_t>& env) {
  switch (f->kind) {
    case FormulaKind::Equal:
      return fin_term(f->terms[0], env) == fin_term(f->terms[1], env);
    case FormulaKind::Less:
    case FormulaKind::Pred:
      throw EvalError("symbol not interpreted in finite structure");
    case FormulaKind::Rel: {
      auto it = m.relations.find(f->rel);
      if (it == m.relations.end())
        throw EvalError("relation not interpreted: " + f->rel);
      std::vector<std::size_t> tup;
      for (auto& t : f->terms) tup.push_back(fin_term(t, env));
      return it->second.count(tup) > 0;
    }
    case FormulaKind::Not: return !fin_eval(m, f->kids[0], env);
    case FormulaKind::And:
      return fin_eval(m, f->kids[0], env) && fin_eval(m, f->kids[1], env);
    case FormulaKind::Or:
      return fin_eval(m, f->kids[0], env) || fin_eval(m, f->kids[1], env);
    case FormulaKind::Implies:
      return !fin_eval(m, f->kids[0], env) || fin_eval(m, f->kids[1], env);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool ex = f->kind == FormulaKind::Exists;
      auto saved = env.find(f->var) != env.end()
                       ? std::optional<std::size_t>(env[f->var])
                       : std::nullopt;
      for (std::size_t e = 0; e < m.universe; ++e) {
        env[f->var] = e;
        bool r = fin_eval(m, f->kids[0], env);
        if (ex == r) {
          if (saved) env[f->var] = *saved; else env.erase(f->var);
          return ex;
        }
      }
      if (saved) env[f->var] = *saved; else env.erase(f->var);
      return !ex;
    }
  }
  throw EvalError("unreachable");
}
}  // namespace detail

inline bool eval_fin(const FiniteStructure& m, const FormulaPtr& s) {
  std::map<std::size_t, std::size_t> env;
  return detail::fin_eval(m, s, env);
}

// --------------------------------------------------------------------------
// eval_nat and the standard-model truth set as an oracle over codes.

inline Verdict eval_nat(const FormulaPtr& s, std::uint64_t budget = 10000,
                        Signature sig = {}) {
  EvalOptions opt;
  opt.budget = budget;
  Evaluator ev(std::move(sig), opt);
  return ev.eval_sentence(s);
}

// The reserved syntax vocabulary counts as arithmetical here: those symbols
// abbreviate elementary L_A formulas, so sentences carrying them are in the
// oracle's domain. Extra relation symbols are not.
inline Verdict truth_oracle(const GodelCode& code, std::uint64_t budget = 10000) {
  FormulaPtr f;
  try {
    f = decode_formula(code, {});
  } catch (const CodeError& e) {
    throw EvalError(std::string("not a sentence: ") + e.what());
  }
  if (!rels_of(f).empty() || !is_sentence(f))
    throw EvalError("not a sentence of L_A");
  return eval_nat(f, budget);
}

}  // namespace truthlat
