#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "truthlat/ea.hpp"
#include "truthlat/eval.hpp"
#include "truthlat/godel.hpp"
#include "truthlat/metalogic.hpp"
#include "truthlat/sexpr.hpp"

namespace truthlat {

// Generators for the concrete formula families: the partial truth predicates
// Tr_n, the compositional axioms CT-minus and their depth-relativized form,
// weakly compositional theories, CT0, Cut, the TB/UTB/DEF schemes, the
// definability truth formula Theta, the UTB-from-CT(n) predicate T', and the
// epsilon_k family. All generators are pure: byte-identical output per input.

// A truth-definition candidate: a sentence over arithmetic plus finitely many
// extras (first conjunct the EA constant) paired with its truth-formula
// witness Theta (one free variable, v0).
struct TruthDefinition {
  FormulaPtr sentence;
  FormulaPtr theta;
  Signature sig;
};

namespace trvars {
// Builder variable conventions. Level k of Tr uses the band 4(k-1)+1..4k;
// the atomic clause uses a fixed band above every level; the wCT/Cut
// quantifier sits above both.
inline constexpr std::size_t kTr0S = 101, kTr0T = 102;
inline constexpr std::size_t kExtBase = 103;
inline constexpr std::size_t kCutX = 200, kCutY = 201;
inline constexpr unsigned kMaxTrLevel = 24;
}  // namespace trvars

// --------------------------------------------------------------------------
// Tr_n. Shape per the defining recursion: Tr_0(x) is the closed-equation
// clause; Tr_n is the disjunction of the depth-passthrough, negation,
// conjunction and existential clauses. Construction is memoized per
// (level, argument) so the in-memory DAG is polynomial even though the
// logical tree has ~5^n nodes.

namespace detail {

struct TrBuilder {
  // caller-supplied atom clause extension: extra relation name ->
  // (formula, designated variables), see build_Tr_ext
  struct AtomInterp {
    FormulaPtr formula;
    std::vector<std::size_t> vars;
  };
  const Signature* sig = nullptr;
  const std::map<std::string, AtomInterp>* atoms = nullptr;
  std::map<std::pair<unsigned, std::string>, FormulaPtr> memo;

  FormulaPtr atom_clause(const TermPtr& arg) {
    using namespace trvars;
    TermPtr s = t_var(kTr0S), t = t_var(kTr0T);
    FormulaPtr eq_clause = f_exists(
        kTr0S,
        f_exists(kTr0T,
                 f_and(f_pred(kPredTmc, {s}),
                       f_and(f_pred(kPredTmc, {t}),
                             f_and(f_equal(arg, t_app(kFnEqCode, {s, t})),
                                   f_equal(t_app(kFnVal, {s}), t_app(kFnVal, {t})))))));
    if (!atoms || atoms->empty()) return eq_clause;
    std::vector<FormulaPtr> clauses{eq_clause};
    for (auto& [name, interp] : *atoms) {
      std::size_t rid = sig->id_of(name);
      std::size_t k = sig->find(name)->arity;
      if (k < 1 || k > 4) throw std::invalid_argument("extra relation arity beyond coding");
      std::vector<TermPtr> tvars;
      for (std::size_t i = 0; i < k; ++i) tvars.push_back(t_var(kExtBase + i));
      std::vector<TermPtr> code_args{t_num(BigNat{rid})};
      for (auto& tv : tvars) code_args.push_back(tv);
      FormulaPtr body = interp.formula;
      if (interp.vars.size() != k)
        throw std::invalid_argument("atom interpretation arity mismatch");
      for (std::size_t i = 0; i < k; ++i)
        body = substitute(body, interp.vars[i], t_app(kFnVal, {tvars[i]}));
      body = f_and(f_equal(arg, t_app(kFnRelCode1 + static_cast<int>(k) - 1,
                                      code_args)),
                   body);
      for (std::size_t i = 0; i < k; ++i)
        body = f_and(f_pred(kPredTmc, {tvars[i]}), body);
      for (std::size_t i = k; i-- > 0;)
        body = f_exists(kExtBase + i, body);
      clauses.push_back(body);
    }
    return f_or_all(clauses);
  }

  FormulaPtr build(unsigned n, const TermPtr& arg) {
    if (n > trvars::kMaxTrLevel) throw std::invalid_argument("Tr level beyond desk scale");
    auto key = std::make_pair(n, print_term(arg));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    FormulaPtr out;
    if (n == 0) {
      out = atom_clause(arg);
    } else {
      std::size_t base = 4 * (n - 1) + 1;
      std::size_t phi = base, psi = base + 1, v = base + 2, z = base + 3;
      TermPtr dpt_arg = t_app(kFnDpt, {arg});
      TermPtr level = numeral(n);
      FormulaPtr c1 = f_and(f_less(dpt_arg, level), build(n - 1, arg));
      FormulaPtr c2 = f_and(
          f_equal(dpt_arg, level),
          f_exists(phi, f_and(f_equal(arg, t_app(kFnNegCode, {t_var(phi)})),
                              f_not(build(n - 1, t_var(phi))))));
      FormulaPtr c3 = f_and(
          f_equal(dpt_arg, level),
          f_exists(phi,
                   f_exists(psi,
                            f_and(f_equal(arg, t_app(kFnAndCode, {t_var(phi), t_var(psi)})),
                                  f_and(build(n - 1, t_var(phi)),
                                        build(n - 1, t_var(psi)))))));
      FormulaPtr c4 = f_and(
          f_equal(dpt_arg, level),
          f_exists(phi,
                   f_exists(v,
                            f_and(f_pred(kPredVar, {t_var(v)}),
                                  f_and(f_equal(arg, t_app(kFnExCode, {t_var(v), t_var(phi)})),
                                        f_exists(z, build(n - 1,
                                                          t_app(kFnNumsub,
                                                                {t_var(phi), t_var(v),
                                                                 t_var(z)}))))))));
      out = f_or_all({c1, c2, c3, c4});
    }
    memo.emplace(std::move(key), out);
    return out;
  }
};

}  // namespace detail

// Tr_n(x), free variable v0, over the pure arithmetic language.
inline FormulaPtr build_Tr(unsigned n) {
  detail::TrBuilder b;
  return b.build(n, t_var(0));
}

// Tr_n for a language with extra relation symbols: the atomic clause is
// extended with one disjunct per extra relation, whose truth is supplied by
// the caller as a formula with designated variables for the argument values.
inline FormulaPtr build_Tr_ext(
    unsigned n, const Signature& sig,
    const std::map<std::string, std::pair<FormulaPtr, std::vector<std::size_t>>>& atom_interps) {
  std::map<std::string, detail::TrBuilder::AtomInterp> atoms;
  for (auto& r : sig.extras()) {
    auto it = atom_interps.find(r.name);
    if (it == atom_interps.end())
      throw std::invalid_argument("missing atom interpretation for " + r.name);
    atoms[r.name] = {it->second.first, it->second.second};
  }
  detail::TrBuilder b;
  b.sig = &sig;
  b.atoms = &atoms;
  return b.build(n, t_var(0));
}

// --------------------------------------------------------------------------
// CT-minus and the depth-relativized CT-minus(x).

inline Signature lt_signature() {
  Signature s;
  s.add("T", 1);
  return s;
}

namespace detail {

inline FormulaPtr t_of(TermPtr arg) { return f_rel("T", {std::move(arg)}); }

// The four compositional clauses; when guarded, the negation, conjunction
// and quantifier clauses carry dpt[.] <= x with x := v0 free.
inline FormulaPtr ct_clause(int i, bool guarded) {
  std::size_t s = 1, t = 2, phi = 1, psi = 2, v = 3, z = 4;
  auto leq = [](TermPtr a, TermPtr b) {
    return f_or(f_less(a, b), f_equal(a, b));
  };
  TermPtr x = t_var(0);
  switch (i) {
    case 0:
      return f_forall(
          s, f_forall(t, f_implies(f_and(f_pred(kPredTmc, {t_var(s)}),
                                         f_pred(kPredTmc, {t_var(t)})),
                                   f_iff(t_of(t_app(kFnEqCode, {t_var(s), t_var(t)})),
                                         f_equal(t_app(kFnVal, {t_var(s)}),
                                                 t_app(kFnVal, {t_var(t)}))))));
    case 1: {
      TermPtr neg = t_app(kFnNegCode, {t_var(phi)});
      FormulaPtr ant = f_pred(kPredSent, {t_var(phi)});
      if (guarded) ant = f_and(ant, leq(t_app(kFnDpt, {neg}), x));
      return f_forall(phi, f_implies(ant, f_iff(t_of(neg), f_not(t_of(t_var(phi))))));
    }
    case 2: {
      TermPtr conj = t_app(kFnAndCode, {t_var(phi), t_var(psi)});
      FormulaPtr ant = f_and(f_pred(kPredSent, {t_var(phi)}),
                             f_pred(kPredSent, {t_var(psi)}));
      if (guarded) ant = f_and(ant, leq(t_app(kFnDpt, {conj}), x));
      return f_forall(
          phi, f_forall(psi, f_implies(ant, f_iff(t_of(conj),
                                                  f_and(t_of(t_var(phi)),
                                                        t_of(t_var(psi)))))));
    }
    case 3: {
      TermPtr ex = t_app(kFnExCode, {t_var(v), t_var(phi)});
      FormulaPtr ant = f_and(f_pred(kPredVar, {t_var(v)}),
                             f_pred(kPredSent, {ex}));
      if (guarded) ant = f_and(ant, leq(t_app(kFnDpt, {ex}), x));
      return f_forall(
          phi,
          f_forall(v, f_implies(ant, f_iff(t_of(ex),
                                           f_exists(z, t_of(t_app(kFnNumsub,
                                                                  {t_var(phi), t_var(v),
                                                                   t_var(z)})))))));
    }
  }
  throw std::invalid_argument("bad clause index");
}

}  // namespace detail

inline std::vector<FormulaPtr> ct_minus_clauses(bool guarded = false) {
  return {detail::ct_clause(0, false), detail::ct_clause(1, guarded),
          detail::ct_clause(2, guarded), detail::ct_clause(3, guarded)};
}

// EA /\ the four compositional axioms; theta = T(x).
inline TruthDefinition build_CTminus() {
  std::vector<FormulaPtr> parts{ea_sentence()};
  for (auto& c : ct_minus_clauses(false)) parts.push_back(c);
  return {f_and_all(parts), detail::t_of(t_var(0)), lt_signature()};
}

// CT-minus(x): the conjunction of EA and the guarded clauses; free variable v0.
inline FormulaPtr build_CTminus_at() {
  std::vector<FormulaPtr> parts{ea_sentence()};
  for (auto& c : ct_minus_clauses(true)) parts.push_back(c);
  return f_and_all(parts);
}

// EA /\ forall x (phi(x) -> CT-minus(x)); theta = T(x).
inline TruthDefinition build_wCT(const FormulaPtr& phi) {
  auto frees = free_vars(phi);
  if (frees.size() != 1)
    throw std::invalid_argument("build_wCT: phi needs exactly one free variable");
  std::size_t x = trvars::kCutX;
  FormulaPtr guard = substitute(phi, *frees.begin(), t_var(x));
  FormulaPtr ct_at = substitute(build_CTminus_at(), 0, t_var(x));
  FormulaPtr sentence = f_and(ea_sentence(), f_forall(x, f_implies(guard, ct_at)));
  return {sentence, detail::t_of(t_var(0)), lt_signature()};
}

// CT-minus /\ forall phi (Prov_PA(phi) -> T(phi)): the single-sentence form
// of CT0.
inline TruthDefinition build_CT0() {
  std::size_t phi = 1, y = 2;
  FormulaPtr reflection = f_forall(
      phi, f_implies(f_exists(y, f_pred(kPredProofPA, {t_var(y), t_var(phi)})),
                     detail::t_of(t_var(phi))));
  TruthDefinition ct = build_CTminus();
  return {f_and(ct.sentence, reflection), ct.theta, ct.sig};
}

// EA /\ forall x (forall y<x. CT-minus(y) -> CT-minus(x)); theta = T(x).
inline TruthDefinition build_Cut() {
  std::size_t x = trvars::kCutX, y = trvars::kCutY;
  FormulaPtr ct_at = build_CTminus_at();
  FormulaPtr cut = f_forall(
      x, f_implies(f_forall(y, f_implies(f_less(t_var(y), t_var(x)),
                                         substitute(ct_at, 0, t_var(y)))),
                   substitute(ct_at, 0, t_var(x))));
  return {f_and(ea_sentence(), cut), detail::t_of(t_var(0)), lt_signature()};
}

// --------------------------------------------------------------------------
// Scheme instances, indexed by the code-ordered enumeration of their
// parameter formulas.

namespace detail {

inline bool la_sentence(const FormulaPtr& f) {
  return pure_arith(f, /*allow_num=*/false) && is_sentence(f);
}

inline bool la_one_free(const FormulaPtr& f) {
  return pure_arith(f, /*allow_num=*/false) && free_vars(f).size() == 1;
}

// n-th (0-based) formula in increasing code order satisfying pred.
inline FormulaPtr nth_by_code(std::uint64_t n, bool (*pred)(const FormulaPtr&)) {
  std::uint64_t seen = 0;
  for (std::uint64_t c = 1; c <= (1u << 22); ++c) {
    auto f = try_decode_formula(BigNat{c}, {});
    if (f && pred(*f)) {
      if (seen == n) return *f;
      ++seen;
    }
  }
  throw std::invalid_argument("scheme index beyond desk-scale enumeration");
}

}  // namespace detail

// T([sigma]) <-> sigma, sigma the n-th L_A sentence by code.
inline FormulaPtr scheme_TB(std::uint64_t n) {
  FormulaPtr sigma = detail::nth_by_code(n, detail::la_sentence);
  return f_iff(detail::t_of(t_num(encode(sigma, {}))), sigma);
}

// forall x (T[sigma(x-dot)] <-> sigma(x)), sigma the n-th one-free-variable
// L_A formula by code.
inline FormulaPtr scheme_UTB(std::uint64_t n) {
  FormulaPtr sigma = detail::nth_by_code(n, detail::la_one_free);
  std::size_t w = *free_vars(sigma).begin();
  std::size_t x = trvars::kCutX;
  GodelCode sc = encode(sigma, {});
  GodelCode vc = encode_term(t_var(w), {});
  return f_forall(
      x, f_iff(detail::t_of(t_app(kFnNumsub, {t_num(sc), t_num(vc), t_var(x)})),
               substitute(sigma, w, t_var(x))));
}

// forall a (D([sigma], a) <-> exists! x. sigma /\ sigma(a)), with exists!
// expanded; sigma the n-th one-free-variable L_A formula by code.
inline FormulaPtr scheme_DEF(std::uint64_t n) {
  FormulaPtr sigma = detail::nth_by_code(n, detail::la_one_free);
  std::size_t w = *free_vars(sigma).begin();
  std::size_t a = trvars::kCutX, u = trvars::kCutY;
  GodelCode sc = encode(sigma, {});
  FormulaPtr unique =
      f_exists(w, f_and(sigma, f_forall(u, f_implies(substitute(sigma, w, t_var(u)),
                                                     f_equal(t_var(u), t_var(w))))));
  return f_forall(
      a, f_iff(f_rel("D", {t_num(sc), t_var(a)}),
               f_and(unique, substitute(sigma, w, t_var(a)))));
}

// The DEF-minus truth formula: Theta(z) := D([z /\ x=0], 0), z free (v0).
inline FormulaPtr def_theta() {
  GodelCode xe0 = encode(f_equal(t_var(0), t_zero()), {});
  return f_rel("D", {t_app(kFnAndCode, {t_var(0), t_num(xe0)}), t_zero()});
}

// T'(x) := Sent(x) /\ exists z (dpt(x) = z /\ T[Tr_z(x-dot)]); free v0.
inline FormulaPtr utb_from_ct() {
  std::size_t z = 1;
  GodelCode v0c = encode_term(t_var(0), {});
  return f_and(
      f_pred(kPredSent, {t_var(0)}),
      f_exists(z, f_and(f_equal(t_app(kFnDpt, {t_var(0)}), t_var(z)),
                        detail::t_of(t_app(kFnNumsub,
                                           {t_app(kFnTrCode, {t_var(z)}), t_num(v0c),
                                            t_var(0)})))));
}

// epsilon_0(x) := x=x; epsilon_{k+1} := epsilon_k \/ epsilon_k (shared).
inline FormulaPtr build_epsilon(unsigned k) {
  FormulaPtr e = f_equal(t_var(0), t_var(0));
  for (unsigned i = 0; i < k; ++i) e = f_or(e, e);
  return e;
}

// --------------------------------------------------------------------------
// Oracles backed by this module: the elementary map z |-> [Tr_z] and the
// weakly compositional sentence builder d |-> [EA /\ forall x (forall y<x.
// not delta(y) -> CT-minus(x))] used by the fixed-point template.

inline FormulaPtr wct_guard_from_delta(const FormulaPtr& delta) {
  auto frees = free_vars(delta);
  if (frees.size() != 1)
    throw std::invalid_argument("guard needs a one-free-variable delta");
  std::size_t x = trvars::kCutX, y = trvars::kCutY;
  FormulaPtr inst = substitute(delta, *frees.begin(), t_var(y));
  FormulaPtr guard =
      f_forall(y, f_implies(f_less(t_var(y), t_var(x)), f_not(inst)));
  return substitute(guard, x, t_var(0));  // free variable v0
}

inline void install_truth_oracles(Oracles& o) {
  auto tr_cache = std::make_shared<std::map<std::uint64_t, BigNat>>();
  o.fns[kFnTrCode] = [tr_cache](const std::vector<BigNat>& a) -> BigNat {
    if (!a[0].fits_u64() || a[0].to_u64() > 6) return BigNat{0};
    std::uint64_t z = a[0].to_u64();
    auto it = tr_cache->find(z);
    if (it != tr_cache->end()) return it->second;
    BigNat c = encode(build_Tr(static_cast<unsigned>(z)), {});
    tr_cache->emplace(z, c);
    return c;
  };
  o.fns[kFnWctCode] = [](const std::vector<BigNat>& a) -> BigNat {
    if (a[0].bit_length() > 4096) return BigNat{0};
    try {
      FormulaPtr delta = decode_formula(a[0], {});
      if (free_vars(delta).size() != 1) return BigNat{0};
      return encode(build_wCT(wct_guard_from_delta(delta)).sentence, lt_signature());
    } catch (const CodeError&) {
      return BigNat{0};
    } catch (const std::invalid_argument&) {
      return BigNat{0};
    }
  };
}

}  // namespace truthlat
