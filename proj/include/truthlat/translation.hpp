#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "truthlat/eval.hpp"
#include "truthlat/truth_theories.hpp"

namespace truthlat {

// Conservative translations: maps on extra relation symbols, identity on
// arithmetic (and on the reserved syntax vocabulary), extended
// homomorphically to formulas. These are the morphisms of the definability
// order; the lattice constructions of the supremum/infimum theorem and its
// appendix are built here, together with a finite-model soundness checker.

struct TranslationImage {
  std::vector<std::size_t> vars;  // designated variables, one per argument
  FormulaPtr formula;
};

struct Translation {
  Signature source, target;
  std::map<std::string, TranslationImage> images;
};

class TranslationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --------------------------------------------------------------------------
// Application

namespace detail {

// Simultaneous substitution of designated variables by argument terms, via
// fresh temporaries so argument variables are never re-substituted.
inline FormulaPtr plug_args(const TranslationImage& img, const std::vector<TermPtr>& args) {
  if (img.vars.size() != args.size())
    throw TranslationError("translation image arity mismatch");
  std::set<std::size_t> used = all_vars(img.formula);
  for (auto& a : args) {
    auto vs = vars_of_term(a);
    used.insert(vs.begin(), vs.end());
  }
  std::size_t base = used.empty() ? 0 : *used.rbegin() + 1;
  FormulaPtr f = img.formula;
  for (std::size_t i = 0; i < args.size(); ++i)
    f = substitute(f, img.vars[i], t_var(base + i));
  for (std::size_t i = 0; i < args.size(); ++i)
    f = substitute(f, base + i, args[i]);
  return f;
}

}  // namespace detail

inline FormulaPtr apply_translation(const Translation& tr, const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Rel: {
      auto it = tr.images.find(f->rel);
      if (it == tr.images.end())
        throw TranslationError("unmapped relation symbol: " + f->rel);
      return detail::plug_args(it->second, f->terms);
    }
    case FormulaKind::Equal:
    case FormulaKind::Less:
    case FormulaKind::Pred:
      return f;
    case FormulaKind::Not:
      return f_not(apply_translation(tr, f->kids[0]));
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return f_binary(f->kind, apply_translation(tr, f->kids[0]), apply_translation(tr, f->kids[1]));
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return f_quant(f->kind, f->var, apply_translation(tr, f->kids[0]));
  }
  throw TranslationError("unreachable");
}

// first tau, then sigma
inline Translation compose(const Translation& sigma, const Translation& tau) {
  Translation out;
  out.source = tau.source;
  out.target = sigma.target;
  for (auto& [name, img] : tau.images)
    out.images[name] = {img.vars, apply_translation(sigma, img.formula)};
  return out;
}

inline Translation identity_translation(const Signature& sig) {
  Translation t;
  t.source = t.target = sig;
  for (auto& r : sig.extras()) {
    std::vector<std::size_t> vars;
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < r.arity; ++i) {
      vars.push_back(i);
      args.push_back(t_var(i));
    }
    t.images[r.name] = {vars, f_rel(r.name, args)};
  }
  return t;
}

// --------------------------------------------------------------------------
// Signature plumbing

inline Signature sig_union(const Signature& a, const Signature& b) {
  Signature u = a;
  for (auto& r : b.extras()) {
    const RelSym* have = u.find(r.name);
    if (have) {
      if (have->arity != r.arity)
        throw TranslationError("arity clash on shared symbol " + r.name);
      continue;
    }
    u.add(r.name, r.arity);
  }
  return u;
}

inline Signature sig_of_sentence(const FormulaPtr& f, const Signature& hint = {}) {
  Signature s;
  std::map<std::string, std::size_t> arities;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (g->kind == FormulaKind::Rel) arities[g->rel] = g->terms.size();
    for (auto& k : g->kids) walk(k);
  };
  walk(f);
  for (auto& r : hint.extras())
    if (!arities.count(r.name)) arities[r.name] = r.arity;
  for (auto& [name, ar] : arities) s.add(name, ar);
  return s;
}

// --------------------------------------------------------------------------
// rep: renames each extra symbol of beta to a same-arity symbol absent from
// alpha, by priming until fresh. Returns the renamed sentence and the
// renaming translation (from beta's language into the renamed one).

struct RepResult {
  FormulaPtr renamed;
  Translation renaming;          // beta-symbol |-> fresh-symbol atom
  Translation inverse;           // fresh-symbol |-> beta-symbol atom
  std::map<std::string, std::string> names;  // original -> fresh
};

inline RepResult rep(const FormulaPtr& alpha_sentence, const FormulaPtr& beta_sentence,
                     const Signature& alpha_sig, const Signature& beta_sig) {
  std::set<std::string> taken;
  for (auto& r : alpha_sig.extras()) taken.insert(r.name);
  for (auto& r : beta_sig.extras()) taken.insert(r.name);
  (void)alpha_sentence;

  RepResult out;
  out.renaming.source = beta_sig;
  out.inverse.target = beta_sig;
  Signature renamed_sig;
  for (auto& r : beta_sig.extras()) {
    std::string fresh = r.name;
    do {
      fresh += "'";
    } while (taken.count(fresh));
    taken.insert(fresh);
    out.names[r.name] = fresh;
    renamed_sig.add(fresh, r.arity);
    std::vector<std::size_t> vars;
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < r.arity; ++i) {
      vars.push_back(i);
      args.push_back(t_var(i));
    }
    out.renaming.images[r.name] = {vars, f_rel(fresh, args)};
    out.inverse.images[fresh] = {vars, f_rel(r.name, args)};
  }
  out.renaming.target = renamed_sig;
  out.inverse.source = renamed_sig;
  out.renamed = apply_translation(out.renaming, beta_sentence);
  return out;
}

inline RepResult rep(const TruthDefinition& alpha, const TruthDefinition& beta) {
  return rep(alpha.sentence, beta.sentence, alpha.sig, beta.sig);
}

// --------------------------------------------------------------------------
// Lattice operations on truth definitions. The infimum of alpha and beta is
// alpha \/ beta, with the case-split truth formula; the supremum is
// alpha /\ rep_alpha(beta), with alpha's truth formula.

namespace detail {
inline FormulaPtr theta_at_v0(const TruthDefinition& d) {
  auto frees = free_vars(d.theta);
  if (frees.size() != 1) throw TranslationError("theta needs one free variable");
  return substitute(d.theta, *frees.begin(), t_var(0));
}
}  // namespace detail

inline TruthDefinition inf_op(const TruthDefinition& alpha, const TruthDefinition& beta) {
  TruthDefinition out;
  out.sig = sig_union(alpha.sig, beta.sig);
  out.sentence = f_or(alpha.sentence, beta.sentence);
  out.theta = f_and(f_implies(alpha.sentence, detail::theta_at_v0(alpha)),
                    f_implies(f_not(alpha.sentence), detail::theta_at_v0(beta)));
  return out;
}

inline TruthDefinition sup_op(const TruthDefinition& alpha, const TruthDefinition& beta) {
  RepResult r = rep(alpha, beta);
  TruthDefinition out;
  out.sig = sig_union(alpha.sig, r.renaming.target);
  out.sentence = f_and(alpha.sentence, r.renamed);
  out.theta = alpha.theta;
  return out;
}

// --------------------------------------------------------------------------
// Witness constructors of the appendix.

// From sigma_alpha : gamma -> L_alpha and sigma_beta : gamma -> L_beta, the
// case-split translation witnessing that alpha \/ beta defines gamma:
//   R(x) |-> (alpha -> phi_R(x)) /\ (not alpha -> psi_R(x)).
inline Translation inf_witness(const Translation& sigma_alpha,
                               const Translation& sigma_beta,
                               const FormulaPtr& alpha_sentence) {
  if (!(sigma_alpha.source == sigma_beta.source))
    throw TranslationError("inf_witness: source signature mismatch");
  Translation out;
  out.source = sigma_alpha.source;
  out.target = sig_union(sigma_alpha.target, sigma_beta.target);
  for (auto& r : out.source.extras()) {
    auto ia = sigma_alpha.images.find(r.name);
    auto ib = sigma_beta.images.find(r.name);
    if (ia == sigma_alpha.images.end() || ib == sigma_beta.images.end())
      throw TranslationError("inf_witness: unmapped symbol " + r.name);
    // common designated variables, fresh across both images and alpha
    std::set<std::size_t> used = all_vars(ia->second.formula);
    auto ub = all_vars(ib->second.formula);
    used.insert(ub.begin(), ub.end());
    auto ua = all_vars(alpha_sentence);
    used.insert(ua.begin(), ua.end());
    std::size_t base = used.empty() ? 0 : *used.rbegin() + 1;
    std::vector<std::size_t> vars;
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < r.arity; ++i) {
      vars.push_back(base + i);
      args.push_back(t_var(base + i));
    }
    FormulaPtr phi = detail::plug_args(ia->second, args);
    FormulaPtr psi = detail::plug_args(ib->second, args);
    out.images[r.name] = {vars, f_and(f_implies(alpha_sentence, phi),
                                      f_implies(f_not(alpha_sentence), psi))};
  }
  return out;
}

namespace detail {

inline TranslationImage atom_image(const std::string& name, std::size_t arity) {
  std::vector<std::size_t> vars;
  std::vector<TermPtr> args;
  for (std::size_t i = 0; i < arity; ++i) {
    vars.push_back(i);
    args.push_back(t_var(i));
  }
  return {vars, f_rel(name, args)};
}

inline TranslationImage guarded_pair(const FormulaPtr& cond, const std::string& then_name,
                                     const std::string& else_name, std::size_t arity) {
  std::set<std::size_t> used = all_vars(cond);
  std::size_t base = used.empty() ? 0 : *used.rbegin() + 1;
  std::vector<std::size_t> vars;
  std::vector<TermPtr> args;
  for (std::size_t i = 0; i < arity; ++i) {
    vars.push_back(base + i);
    args.push_back(t_var(base + i));
  }
  return {vars, f_and(f_implies(cond, f_rel(then_name, args)),
                      f_implies(f_not(cond), f_rel(else_name, args)))};
}

}  // namespace detail

// The two four-case translations witnessing the distributivity identity
//   alpha \/ (beta /\ rep_beta(gamma))  <|>  (alpha \/ beta) /\
//   rep_{alpha\/beta}(alpha \/ gamma).
// Symbol sets are partitioned literally as in the appendix. fwd maps the
// right-hand language into the left-hand one; bwd the converse.

struct DistSetup {
  RepResult rep1;  // gamma renamed away from beta
  RepResult rep2;  // alpha \/ gamma renamed away from alpha \/ beta
  TruthDefinition lhs, rhs;
};

namespace detail {
// original gamma symbol behind a rep1-renamed name
inline std::string rep1_original(const std::map<std::string, std::string>& names,
                                 const std::string& fresh) {
  for (auto& [orig, f] : names)
    if (f == fresh) return orig;
  throw TranslationError("not a rep-renamed symbol: " + fresh);
}
}  // namespace detail

inline DistSetup dist_setup(const TruthDefinition& alpha, const TruthDefinition& beta,
                            const TruthDefinition& gamma) {
  DistSetup s;
  s.rep1 = rep(beta, gamma);
  TruthDefinition av_g = inf_op(alpha, gamma);  // alpha \/ gamma
  TruthDefinition av_b = inf_op(alpha, beta);   // alpha \/ beta
  s.rep2 = rep(av_b.sentence, av_g.sentence, av_b.sig, av_g.sig);
  // lhs = alpha \/ (beta /\ rep_beta(gamma))
  TruthDefinition bg;
  bg.sig = sig_union(beta.sig, s.rep1.renaming.target);
  bg.sentence = f_and(beta.sentence, s.rep1.renamed);
  bg.theta = beta.theta;
  s.lhs = inf_op(alpha, bg);
  // rhs = (alpha \/ beta) /\ rep2(alpha \/ gamma)
  s.rhs.sig = sig_union(av_b.sig, s.rep2.renaming.target);
  s.rhs.sentence = f_and(av_b.sentence, s.rep2.renamed);
  s.rhs.theta = av_b.theta;
  return s;
}

inline Translation dist_witness_fwd(const TruthDefinition& alpha,
                                    const TruthDefinition& beta,
                                    const TruthDefinition& gamma) {
  DistSetup s = dist_setup(alpha, beta, gamma);
  std::set<std::string> in_alpha, in_gamma;
  for (auto& r : alpha.sig.extras()) in_alpha.insert(r.name);
  for (auto& r : gamma.sig.extras()) in_gamma.insert(r.name);

  Translation out;
  out.source = s.rhs.sig;
  out.target = s.lhs.sig;
  for (auto& r : alpha.sig.extras()) out.images[r.name] = detail::atom_image(r.name, r.arity);
  for (auto& r : beta.sig.extras())
    if (!out.images.count(r.name)) out.images[r.name] = detail::atom_image(r.name, r.arity);
  for (auto& [orig, fresh] : s.rep2.names) {
    std::size_t arity = s.rep2.renaming.target.find(fresh)->arity;
    bool a = in_alpha.count(orig) > 0, g = in_gamma.count(orig) > 0;
    if (a && !g) {
      out.images[fresh] = detail::atom_image(orig, arity);
    } else if (g && !a) {
      out.images[fresh] = detail::atom_image(s.rep1.names.at(orig), arity);
    } else if (a && g) {
      out.images[fresh] =
          detail::guarded_pair(alpha.sentence, orig, s.rep1.names.at(orig), arity);
    }
  }
  return out;
}

inline Translation dist_witness_bwd(const TruthDefinition& alpha,
                                    const TruthDefinition& beta,
                                    const TruthDefinition& gamma) {
  DistSetup s = dist_setup(alpha, beta, gamma);
  std::set<std::string> in_alpha, in_rep1;
  for (auto& r : alpha.sig.extras()) in_alpha.insert(r.name);
  for (auto& r : s.rep1.renaming.target.extras()) in_rep1.insert(r.name);

  FormulaPtr rep2_alpha = apply_translation(s.rep2.renaming, alpha.sentence);

  Translation out;
  out.source = s.lhs.sig;
  out.target = s.rhs.sig;
  for (auto& r : s.lhs.sig.extras()) {
    const std::string& name = r.name;
    bool a = in_alpha.count(name) > 0, g = in_rep1.count(name) > 0;
    if (!a && !g) {
      // L_beta minus L_alpha
      out.images[name] = detail::atom_image(name, r.arity);
    } else if (a && g) {
      // [rep2(alpha) -> rep2(R)] /\ [not rep2(alpha) ->
      //   ((alpha -> R) /\ (not alpha -> rep2(rep1^-1(R))))]
      std::string rep2R = s.rep2.names.at(name);
      std::string inner = s.rep2.names.at(detail::rep1_original(s.rep1.names, name));
      std::set<std::size_t> used = all_vars(rep2_alpha);
      auto ua = all_vars(alpha.sentence);
      used.insert(ua.begin(), ua.end());
      std::size_t base = used.empty() ? 0 : *used.rbegin() + 1;
      std::vector<std::size_t> vars;
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < r.arity; ++i) {
        vars.push_back(base + i);
        args.push_back(t_var(base + i));
      }
      FormulaPtr inner_case = f_and(f_implies(alpha.sentence, f_rel(name, args)),
                                    f_implies(f_not(alpha.sentence), f_rel(inner, args)));
      out.images[name] = {vars, f_and(f_implies(rep2_alpha, f_rel(rep2R, args)),
                                      f_implies(f_not(rep2_alpha), inner_case))};
    } else if (a && !g) {
      std::string rep2R = s.rep2.names.at(name);
      std::set<std::size_t> used = all_vars(rep2_alpha);
      std::size_t base = used.empty() ? 0 : *used.rbegin() + 1;
      std::vector<std::size_t> vars;
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < r.arity; ++i) {
        vars.push_back(base + i);
        args.push_back(t_var(base + i));
      }
      out.images[name] = {vars, f_and(f_implies(rep2_alpha, f_rel(rep2R, args)),
                                      f_implies(f_not(rep2_alpha), f_rel(name, args)))};
    } else {
      // L_rep1(gamma) minus L_alpha
      out.images[name] = detail::atom_image(
          s.rep2.names.at(detail::rep1_original(s.rep1.names, name)), r.arity);
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// The comparability translation: the predicate image measuring which of
// alpha, beta defines the longer initial segment,
//   (alpha subseteq beta -> T'(x)) /\ (beta subsetneq alpha -> T(x)),
// witnessing that the shared-T conjunction defines the renamed-T one.

inline Translation case_translation_ab(const FormulaPtr& alpha, const FormulaPtr& beta) {
  if (free_vars(alpha).size() != 1 || free_vars(beta).size() != 1)
    throw TranslationError("case_translation_ab: one-free-variable formulas required");
  std::set<std::size_t> used = all_vars(alpha);
  auto ub = all_vars(beta);
  used.insert(ub.begin(), ub.end());
  std::size_t q = *used.rbegin() + 1;
  std::size_t x = q + 1;
  auto at = [&](const FormulaPtr& f, std::size_t v) {
    return substitute(f, *free_vars(f).begin(), t_var(v));
  };
  FormulaPtr a_sub_b = f_forall(q, f_implies(at(alpha, q), at(beta, q)));
  FormulaPtr b_sub_a = f_forall(q, f_implies(at(beta, q), at(alpha, q)));
  FormulaPtr b_strict = f_and(b_sub_a, f_not(a_sub_b));

  Translation out;
  out.source.add("T", 1);
  out.target.add("T", 1);
  out.target.add("T'", 1);
  out.images["T"] = {{x},
                     f_and(f_implies(a_sub_b, f_rel("T'", {t_var(x)})),
                           f_implies(b_strict, f_rel("T", {t_var(x)})))};
  return out;
}

// --------------------------------------------------------------------------
// Finite-model soundness: for every listed model of the target, the
// translated source must hold. Counterexamples are reported by index.

struct SoundnessReport {
  std::size_t models_checked = 0;
  std::size_t models_of_target = 0;
  std::vector<std::size_t> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

inline SoundnessReport soundness_check(const Translation& sigma, const FormulaPtr& source,
                                       const FormulaPtr& target,
                                       const std::vector<FiniteStructure>& models) {
  SoundnessReport rep;
  FormulaPtr translated = apply_translation(sigma, source);
  for (std::size_t i = 0; i < models.size(); ++i) {
    ++rep.models_checked;
    if (!eval_fin(models[i], target)) continue;
    ++rep.models_of_target;
    if (!eval_fin(models[i], translated)) rep.counterexamples.push_back(i);
  }
  return rep;
}

}  // namespace truthlat
