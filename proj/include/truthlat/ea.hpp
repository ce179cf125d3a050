#pragma once

#include <vector>

#include "truthlat/formula.hpp"

namespace truthlat {

// The finitely axiomatized base theory all truth definitions extend:
// nonnegative discretely ordered ring axioms, the recursion and totality of
// exponentiation, and a small documented stock of Delta0-induction
// instances. Exposed both as a list (for the proof checker's axiom
// recognizer) and as a single conjunction (the distinguished first conjunct
// of every truth-definition sentence).

// phi(0) /\ forall v (phi(v) -> phi(v+1)) -> forall v phi(v), universally
// closed over the remaining free variables.
inline FormulaPtr induction_instance(const FormulaPtr& phi, std::size_t v) {
  FormulaPtr base = substitute(phi, v, t_zero());
  FormulaPtr step = f_forall(v, f_implies(phi, substitute(phi, v, t_add(t_var(v), t_one()))));
  FormulaPtr body = f_implies(f_and(base, step), f_forall(v, phi));
  auto frees = free_vars(body);
  for (auto it = frees.rbegin(); it != frees.rend(); ++it)
    body = f_forall(*it, body);
  return body;
}

inline const std::vector<FormulaPtr>& ea_axioms() {
  static const std::vector<FormulaPtr> axioms = [] {
    TermPtr x = t_var(0), y = t_var(1), z = t_var(2);
    auto all3 = [&](FormulaPtr f) { return f_forall(0, f_forall(1, f_forall(2, f))); };
    auto all2 = [&](FormulaPtr f) { return f_forall(0, f_forall(1, f)); };
    auto all1 = [&](FormulaPtr f) { return f_forall(0, f); };

    std::vector<FormulaPtr> v;
    // discretely ordered commutative semiring
    v.push_back(all3(f_equal(t_add(t_add(x, y), z), t_add(x, t_add(y, z)))));
    v.push_back(all2(f_equal(t_add(x, y), t_add(y, x))));
    v.push_back(all3(f_equal(t_mul(t_mul(x, y), z), t_mul(x, t_mul(y, z)))));
    v.push_back(all2(f_equal(t_mul(x, y), t_mul(y, x))));
    v.push_back(all3(f_equal(t_mul(x, t_add(y, z)), t_add(t_mul(x, y), t_mul(x, z)))));
    v.push_back(all1(f_and(f_equal(t_add(x, t_zero()), x), f_equal(t_mul(x, t_zero()), t_zero()))));
    v.push_back(all1(f_equal(t_mul(x, t_one()), x)));
    v.push_back(all3(f_implies(f_and(f_less(x, y), f_less(y, z)), f_less(x, z))));
    v.push_back(all1(f_not(f_less(x, x))));
    v.push_back(all2(f_or(f_less(x, y), f_or(f_equal(x, y), f_less(y, x)))));
    v.push_back(all3(f_implies(f_less(x, y), f_less(t_add(x, z), t_add(y, z)))));
    v.push_back(all3(f_implies(f_and(f_less(t_zero(), z), f_less(x, y)),
                               f_less(t_mul(x, z), t_mul(y, z)))));
    v.push_back(all2(f_implies(f_less(x, y), f_exists(2, f_equal(t_add(x, z), y)))));
    v.push_back(f_less(t_zero(), t_one()));
    v.push_back(all1(f_implies(f_less(t_zero(), x),
                               f_or(f_equal(t_one(), x), f_less(t_one(), x)))));
    v.push_back(all1(f_or(f_equal(t_zero(), x), f_less(t_zero(), x))));
    // exponentiation: recursion equations and totality
    v.push_back(all1(f_equal(t_app(kFnExp, {x, t_zero()}), t_one())));
    v.push_back(all2(f_equal(t_app(kFnExp, {x, t_add(y, t_one())}),
                             t_mul(t_app(kFnExp, {x, y}), x))));
    v.push_back(all2(f_exists(2, f_equal(t_app(kFnExp, {x, y}), z))));
    // Delta0-induction stock
    v.push_back(induction_instance(f_or(f_equal(t_var(0), t_zero()), f_less(t_zero(), t_var(0))), 0));
    v.push_back(induction_instance(f_less(t_var(0), t_add(t_var(0), t_one())), 0));
    v.push_back(induction_instance(f_equal(t_add(t_zero(), t_var(0)), t_var(0)), 0));
    v.push_back(induction_instance(
        f_exists(1, f_and(f_less(t_var(1), t_add(t_var(0), t_one())),
                          f_or(f_equal(t_add(t_var(1), t_var(1)), t_var(0)),
                               f_equal(t_add(t_add(t_var(1), t_var(1)), t_one()), t_var(0))))),
        0));
    return v;
  }();
  return axioms;
}

// EA as one sentence: the conjunction of ea_axioms().
inline FormulaPtr ea_sentence() {
  static const FormulaPtr s = f_and_all(ea_axioms());
  return s;
}

}  // namespace truthlat
