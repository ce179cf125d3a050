#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "truthlat/ea.hpp"
#include "truthlat/eval.hpp"
#include "truthlat/godel.hpp"
#include "truthlat/sexpr.hpp"

namespace truthlat {

// Hilbert-style proof objects and checker, Proof/Prov/Con builders, the
// diagonal lemma, the fixed-point sentence of the non-Sigma2-definability
// argument, and the flexible-formula skeleton.
//
// The calculus is fixed and documented in docs/calculus.md: propositional
// schemes K, S, contraposition and the lattice connective axioms; quantifier
// instantiation, distribution, exists-introduction and exists-elimination;
// equality reflexivity and Leibniz; rules modus ponens and generalization.

// --------------------------------------------------------------------------
// Proof objects

struct Justification {
  enum Kind { TheoryAxiom, LogicalAxiom, ModusPonens, Generalization } kind;
  std::size_t ref1 = 0, ref2 = 0;  // earlier line indices (MP), ref1 for Gen
  std::size_t var = 0;             // Gen
  std::string scheme;              // optional scheme name for LogicalAxiom
};

struct ProofLine {
  FormulaPtr formula;
  Justification just;
};

struct ProofObject {
  std::vector<ProofLine> lines;
};

// --------------------------------------------------------------------------
// Axiom recognizers: a finite sentence list or a named native recognizer.

class AxiomRecognizer {
public:
  enum Named { EA, PA, CT0 };

  static AxiomRecognizer from_list(std::vector<FormulaPtr> axioms, Signature sig = {}) {
    AxiomRecognizer r;
    r.list_ = std::move(axioms);
    r.sig_ = std::move(sig);
    return r;
  }

  // PA: the ordered-semiring axioms plus every induction instance of the
  // given language. EA: the finite list from ea.hpp. CT0 is finite as well
  // but its sentence lives upstream, so it arrives here as a list.
  static AxiomRecognizer named(Named which, Signature sig = {}) {
    AxiomRecognizer r;
    r.named_ = which;
    r.sig_ = std::move(sig);
    if (which == EA) r.list_ = ea_axioms();
    return r;
  }

  const Signature& signature() const { return sig_; }

  bool is_axiom(const FormulaPtr& f) const {
    for (auto& a : list_)
      if (equal_formula(a, f)) return true;
    if (named_ && *named_ == PA) {
      for (auto& a : ea_axioms())
        if (equal_formula(a, f)) return true;
      return is_induction_instance(f);
    }
    return false;
  }

  bool is_axiom_code(const BigNat& c) const {
    try {
      return is_axiom(decode_formula(c, sig_));
    } catch (const CodeError&) {
      return false;
    }
  }

  // phi(0) /\ forall v (phi -> phi(v+1)) -> forall v phi, universally closed.
  static bool is_induction_instance(FormulaPtr f) {
    while (f->kind == FormulaKind::Forall) f = f->kids[0];
    if (f->kind != FormulaKind::Implies) return false;
    const FormulaPtr& concl = f->kids[1];
    if (concl->kind != FormulaKind::Forall) return false;
    std::size_t v = concl->var;
    const FormulaPtr& phi = concl->kids[0];
    const FormulaPtr& ant = f->kids[0];
    if (ant->kind != FormulaKind::And) return false;
    if (!equal_formula(ant->kids[0], substitute(phi, v, t_zero()))) return false;
    const FormulaPtr& step = ant->kids[1];
    if (step->kind != FormulaKind::Forall || step->var != v) return false;
    if (step->kids[0]->kind != FormulaKind::Implies) return false;
    if (!equal_formula(step->kids[0]->kids[0], phi)) return false;
    return equal_formula(step->kids[0]->kids[1],
                         substitute(phi, v, t_add(t_var(v), t_one())));
  }

private:
  std::vector<FormulaPtr> list_;
  std::optional<Named> named_;
  Signature sig_;
};

// --------------------------------------------------------------------------
// Scheme matching. Validation never needs instantiation hints: every scheme
// is recognizable from the line's formula alone.

namespace schemes {

inline bool is_implies(const FormulaPtr& f) { return f->kind == FormulaKind::Implies; }

// phi -> (psi -> phi)
inline bool match_k(const FormulaPtr& f) {
  return is_implies(f) && is_implies(f->kids[1]) &&
         equal_formula(f->kids[0], f->kids[1]->kids[1]);
}

// (phi -> (psi -> chi)) -> ((phi -> psi) -> (phi -> chi))
inline bool match_s(const FormulaPtr& f) {
  if (!is_implies(f) || !is_implies(f->kids[0]) || !is_implies(f->kids[1])) return false;
  const FormulaPtr& a = f->kids[0];
  if (!is_implies(a->kids[1])) return false;
  const FormulaPtr& b = f->kids[1];
  if (!is_implies(b->kids[0]) || !is_implies(b->kids[1])) return false;
  const FormulaPtr &phi = a->kids[0], &psi = a->kids[1]->kids[0], &chi = a->kids[1]->kids[1];
  return equal_formula(b->kids[0]->kids[0], phi) &&
         equal_formula(b->kids[0]->kids[1], psi) &&
         equal_formula(b->kids[1]->kids[0], phi) &&
         equal_formula(b->kids[1]->kids[1], chi);
}

// (not phi -> not psi) -> (psi -> phi)
inline bool match_contra(const FormulaPtr& f) {
  if (!is_implies(f) || !is_implies(f->kids[0]) || !is_implies(f->kids[1])) return false;
  const FormulaPtr& a = f->kids[0];
  if (a->kids[0]->kind != FormulaKind::Not || a->kids[1]->kind != FormulaKind::Not)
    return false;
  return equal_formula(a->kids[0]->kids[0], f->kids[1]->kids[1]) &&
         equal_formula(a->kids[1]->kids[0], f->kids[1]->kids[0]);
}

// phi -> (psi -> phi /\ psi)
inline bool match_and_intro(const FormulaPtr& f) {
  if (!is_implies(f) || !is_implies(f->kids[1])) return false;
  const FormulaPtr& c = f->kids[1]->kids[1];
  return c->kind == FormulaKind::And && equal_formula(c->kids[0], f->kids[0]) &&
         equal_formula(c->kids[1], f->kids[1]->kids[0]);
}

// phi /\ psi -> phi | phi /\ psi -> psi
inline bool match_and_elim(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[0]->kind != FormulaKind::And) return false;
  return equal_formula(f->kids[0]->kids[0], f->kids[1]) ||
         equal_formula(f->kids[0]->kids[1], f->kids[1]);
}

// phi -> phi \/ psi | psi -> phi \/ psi
inline bool match_or_intro(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[1]->kind != FormulaKind::Or) return false;
  return equal_formula(f->kids[1]->kids[0], f->kids[0]) ||
         equal_formula(f->kids[1]->kids[1], f->kids[0]);
}

// (phi -> chi) -> ((psi -> chi) -> (phi \/ psi -> chi))
inline bool match_or_elim(const FormulaPtr& f) {
  if (!is_implies(f) || !is_implies(f->kids[0]) || !is_implies(f->kids[1])) return false;
  const FormulaPtr& b = f->kids[1];
  if (!is_implies(b->kids[0]) || !is_implies(b->kids[1])) return false;
  const FormulaPtr& c = b->kids[1];
  if (c->kids[0]->kind != FormulaKind::Or) return false;
  const FormulaPtr &phi = f->kids[0]->kids[0], &chi = f->kids[0]->kids[1];
  return equal_formula(b->kids[0]->kids[1], chi) && equal_formula(c->kids[1], chi) &&
         equal_formula(c->kids[0]->kids[0], phi) &&
         equal_formula(c->kids[0]->kids[1], b->kids[0]->kids[0]);
}

// ex falso: not phi -> (phi -> psi)
inline bool match_explosion(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[0]->kind != FormulaKind::Not || !is_implies(f->kids[1]))
    return false;
  return equal_formula(f->kids[0]->kids[0], f->kids[1]->kids[0]);
}

// Finds t such that substitute(phi, v, t) == target.
inline std::optional<TermPtr> substitution_witness(const FormulaPtr& phi, std::size_t v,
                                                   const FormulaPtr& target) {
  if (!free_vars(phi).count(v))
    return equal_formula(phi, target) ? std::optional<TermPtr>(t_var(v)) : std::nullopt;
  // collect candidate terms appearing in target, try each
  std::vector<TermPtr> cands{t_var(v), t_zero(), t_one()};
  std::function<void(const TermPtr&)> collect_t = [&](const TermPtr& t) {
    cands.push_back(t);
    for (auto& a : t->args) collect_t(a);
  };
  std::function<void(const FormulaPtr&)> collect_f = [&](const FormulaPtr& g) {
    for (auto& t : g->terms) collect_t(t);
    for (auto& k : g->kids) collect_f(k);
  };
  collect_f(target);
  for (auto& t : cands)
    if (equal_formula(substitute(phi, v, t), target)) return t;
  return std::nullopt;
}

// forall v phi -> phi[t/v]
inline bool match_inst(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[0]->kind != FormulaKind::Forall) return false;
  return substitution_witness(f->kids[0]->kids[0], f->kids[0]->var, f->kids[1])
      .has_value();
}

// phi[t/v] -> exists v phi
inline bool match_ex_intro(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[1]->kind != FormulaKind::Exists) return false;
  return substitution_witness(f->kids[1]->kids[0], f->kids[1]->var, f->kids[0])
      .has_value();
}

// forall v (phi -> psi) -> (phi -> forall v psi), v not free in phi
inline bool match_dist(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[0]->kind != FormulaKind::Forall) return false;
  std::size_t v = f->kids[0]->var;
  const FormulaPtr& inner = f->kids[0]->kids[0];
  if (!is_implies(inner) || !is_implies(f->kids[1])) return false;
  const FormulaPtr& rhs = f->kids[1];
  if (rhs->kids[1]->kind != FormulaKind::Forall || rhs->kids[1]->var != v) return false;
  return equal_formula(inner->kids[0], rhs->kids[0]) &&
         equal_formula(inner->kids[1], rhs->kids[1]->kids[0]) &&
         !free_vars(inner->kids[0]).count(v);
}

// forall v (phi -> psi) -> (exists v phi -> psi), v not free in psi
inline bool match_ex_elim(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[0]->kind != FormulaKind::Forall) return false;
  std::size_t v = f->kids[0]->var;
  const FormulaPtr& inner = f->kids[0]->kids[0];
  if (!is_implies(inner) || !is_implies(f->kids[1])) return false;
  const FormulaPtr& rhs = f->kids[1];
  if (rhs->kids[0]->kind != FormulaKind::Exists || rhs->kids[0]->var != v) return false;
  return equal_formula(inner->kids[0], rhs->kids[0]->kids[0]) &&
         equal_formula(inner->kids[1], rhs->kids[1]) &&
         !free_vars(inner->kids[1]).count(v);
}

// t = t
inline bool match_eq_refl(const FormulaPtr& f) {
  return f->kind == FormulaKind::Equal && equal_term(f->terms[0], f->terms[1]);
}

namespace detail {
inline bool leibniz_terms(const TermPtr& a, const TermPtr& b, const TermPtr& s,
                          const TermPtr& t);

inline bool leibniz_formulas(const FormulaPtr& a, const FormulaPtr& b,
                             const TermPtr& s, const TermPtr& t) {
  if (a->kind != b->kind || a->rel != b->rel || a->pred != b->pred ||
      a->var != b->var || a->terms.size() != b->terms.size() ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i)
    if (!leibniz_terms(a->terms[i], b->terms[i], s, t)) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!leibniz_formulas(a->kids[i], b->kids[i], s, t)) return false;
  return true;
}

inline bool leibniz_terms(const TermPtr& a, const TermPtr& b, const TermPtr& s,
                          const TermPtr& t) {
  if (equal_term(a, b)) return true;
  if (equal_term(a, s) && equal_term(b, t)) return true;
  if (a->kind != b->kind || a->var != b->var || a->fn != b->fn ||
      a->args.size() != b->args.size())
    return false;
  if (a->kind == TermKind::Num) return a->value == b->value;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!leibniz_terms(a->args[i], b->args[i], s, t)) return false;
  return true;
}
}  // namespace detail

// s = t -> (phi -> phi'), phi' from phi by replacing some occurrences of s by t
inline bool match_leibniz(const FormulaPtr& f) {
  if (!is_implies(f) || f->kids[0]->kind != FormulaKind::Equal || !is_implies(f->kids[1]))
    return false;
  return detail::leibniz_formulas(f->kids[1]->kids[0], f->kids[1]->kids[1],
                                  f->kids[0]->terms[0], f->kids[0]->terms[1]);
}

struct SchemeEntry {
  const char* name;
  bool (*match)(const FormulaPtr&);
};

inline constexpr SchemeEntry kSchemes[] = {
    {"K", match_k},           {"S", match_s},
    {"contra", match_contra}, {"and-intro", match_and_intro},
    {"and-elim", match_and_elim}, {"or-intro", match_or_intro},
    {"or-elim", match_or_elim},   {"explosion", match_explosion},
    {"inst", match_inst},     {"dist", match_dist},
    {"ex-intro", match_ex_intro}, {"ex-elim", match_ex_elim},
    {"eq-refl", match_eq_refl},   {"leibniz", match_leibniz},
};

inline std::optional<std::string> match_any(const FormulaPtr& f) {
  for (auto& s : kSchemes)
    if (s.match(f)) return std::string(s.name);
  return std::nullopt;
}

}  // namespace schemes

// --------------------------------------------------------------------------
// Checker

inline bool proof_check(const ProofObject& p, const AxiomRecognizer& th) {
  if (p.lines.empty()) return false;
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const ProofLine& line = p.lines[i];
    if (!line.formula) return false;
    switch (line.just.kind) {
      case Justification::TheoryAxiom:
        if (!th.is_axiom(line.formula)) return false;
        break;
      case Justification::LogicalAxiom: {
        if (!line.just.scheme.empty()) {
          bool ok = false;
          for (auto& s : schemes::kSchemes)
            if (line.just.scheme == s.name && s.match(line.formula)) ok = true;
          if (!ok) return false;
        } else if (!schemes::match_any(line.formula)) {
          return false;
        }
        break;
      }
      case Justification::ModusPonens: {
        std::size_t a = line.just.ref1, b = line.just.ref2;
        if (a >= i || b >= i) return false;
        const FormulaPtr& impl = p.lines[b].formula;
        if (impl->kind != FormulaKind::Implies) return false;
        if (!equal_formula(impl->kids[0], p.lines[a].formula)) return false;
        if (!equal_formula(impl->kids[1], line.formula)) return false;
        break;
      }
      case Justification::Generalization: {
        std::size_t a = line.just.ref1;
        if (a >= i) return false;
        if (line.formula->kind != FormulaKind::Forall) return false;
        if (line.formula->var != line.just.var) return false;
        if (!equal_formula(line.formula->kids[0], p.lines[a].formula)) return false;
        break;
      }
    }
  }
  return true;
}

inline FormulaPtr conclusion(const ProofObject& p) {
  if (p.lines.empty()) throw std::invalid_argument("empty proof");
  return p.lines.back().formula;
}

// --------------------------------------------------------------------------
// Proof JSON: {"lines": [{"formula": sexpr, "rule": ..., "refs": [...],
// "var": n, "scheme": name}]}

inline nlohmann::json proof_to_json(const ProofObject& p) {
  nlohmann::json lines = nlohmann::json::array();
  for (auto& l : p.lines) {
    nlohmann::json j;
    j["formula"] = print_formula(l.formula);
    switch (l.just.kind) {
      case Justification::TheoryAxiom: j["rule"] = "axiom"; break;
      case Justification::LogicalAxiom:
        j["rule"] = "logax";
        if (!l.just.scheme.empty()) j["scheme"] = l.just.scheme;
        break;
      case Justification::ModusPonens:
        j["rule"] = "mp";
        j["refs"] = {l.just.ref1, l.just.ref2};
        break;
      case Justification::Generalization:
        j["rule"] = "gen";
        j["refs"] = {l.just.ref1};
        j["var"] = l.just.var;
        break;
    }
    lines.push_back(j);
  }
  return {{"lines", lines}};
}

inline ProofObject proof_from_json(const nlohmann::json& j, const Signature& sig = {}) {
  ProofObject p;
  for (auto& lj : j.at("lines")) {
    ProofLine l;
    l.formula = parse_formula(lj.at("formula").get<std::string>(), sig);
    const std::string rule = lj.at("rule").get<std::string>();
    if (rule == "axiom") {
      l.just.kind = Justification::TheoryAxiom;
    } else if (rule == "logax") {
      l.just.kind = Justification::LogicalAxiom;
      if (lj.contains("scheme")) l.just.scheme = lj.at("scheme").get<std::string>();
    } else if (rule == "mp") {
      l.just.kind = Justification::ModusPonens;
      l.just.ref1 = lj.at("refs").at(0).get<std::size_t>();
      l.just.ref2 = lj.at("refs").at(1).get<std::size_t>();
    } else if (rule == "gen") {
      l.just.kind = Justification::Generalization;
      l.just.ref1 = lj.at("refs").at(0).get<std::size_t>();
      l.just.var = lj.at("var").get<std::size_t>();
    } else {
      throw std::invalid_argument("bad proof rule: " + rule);
    }
    p.lines.push_back(std::move(l));
  }
  return p;
}

// --------------------------------------------------------------------------
// Arithmetized proofs. A proof is coded as a sequence of line codes; a line
// is the sequence [formula code, rule tag, aux...] with tags 1 axiom,
// 2 logax, 3 mp (aux: two refs), 4 gen (aux: ref, variable index).

inline GodelCode encode_proof(const ProofObject& p, const Signature& sig = {}) {
  std::vector<BigNat> lines;
  for (auto& l : p.lines) {
    std::vector<BigNat> rec{encode(l.formula, sig)};
    switch (l.just.kind) {
      case Justification::TheoryAxiom: rec.push_back(BigNat{1}); break;
      case Justification::LogicalAxiom: rec.push_back(BigNat{2}); break;
      case Justification::ModusPonens:
        rec.push_back(BigNat{3});
        rec.push_back(BigNat{l.just.ref1});
        rec.push_back(BigNat{l.just.ref2});
        break;
      case Justification::Generalization:
        rec.push_back(BigNat{4});
        rec.push_back(BigNat{l.just.ref1});
        rec.push_back(BigNat{l.just.var});
        break;
    }
    lines.push_back(encode_sequence(rec));
  }
  return encode_sequence(lines);
}

inline std::optional<ProofObject> try_decode_proof(const GodelCode& c,
                                                   const Signature& sig = {}) {
  auto lines = try_decode_sequence(c);
  if (!lines) return std::nullopt;
  ProofObject p;
  for (auto& lc : *lines) {
    auto rec = try_decode_sequence(lc);
    if (!rec || rec->size() < 2) return std::nullopt;
    ProofLine l;
    try {
      l.formula = decode_formula((*rec)[0], sig);
    } catch (const CodeError&) {
      return std::nullopt;
    }
    if (!(*rec)[1].fits_u64()) return std::nullopt;
    switch ((*rec)[1].to_u64()) {
      case 1:
        if (rec->size() != 2) return std::nullopt;
        l.just.kind = Justification::TheoryAxiom;
        break;
      case 2:
        if (rec->size() != 2) return std::nullopt;
        l.just.kind = Justification::LogicalAxiom;
        break;
      case 3:
        if (rec->size() != 4 || !(*rec)[2].fits_u64() || !(*rec)[3].fits_u64())
          return std::nullopt;
        l.just.kind = Justification::ModusPonens;
        l.just.ref1 = (*rec)[2].to_u64();
        l.just.ref2 = (*rec)[3].to_u64();
        break;
      case 4:
        if (rec->size() != 4 || !(*rec)[2].fits_u64() || !(*rec)[3].fits_u64())
          return std::nullopt;
        l.just.kind = Justification::Generalization;
        l.just.ref1 = (*rec)[2].to_u64();
        l.just.var = (*rec)[3].to_u64();
        break;
      default:
        return std::nullopt;
    }
    p.lines.push_back(std::move(l));
  }
  return p;
}

// Meta-level Proof_Th(y, x): y codes a checker-valid proof from th whose
// conclusion has code x.
inline bool proof_pred(const BigNat& y, const BigNat& x, const AxiomRecognizer& th) {
  auto p = try_decode_proof(y, th.signature());
  if (!p || p->lines.empty()) return false;
  if (!proof_check(*p, th)) return false;
  return encode(conclusion(*p), th.signature()) == x;
}

// --------------------------------------------------------------------------
// Proof/Prov/Con formula builders over the reserved proof predicates.

inline int proof_pred_id(AxiomRecognizer::Named th) {
  switch (th) {
    case AxiomRecognizer::EA: return kPredProofEA;
    case AxiomRecognizer::PA: return kPredProofPA;
    case AxiomRecognizer::CT0: return kPredProofCT0;
  }
  throw std::invalid_argument("unknown theory");
}

// Proof_Th(y, x) with y := v0, x := v1 free.
inline FormulaPtr build_Proof(AxiomRecognizer::Named th) {
  return f_pred(proof_pred_id(th), {t_var(0), t_var(1)});
}

// Prov_Th(x) := exists y. Proof_Th(y, x); free variable v0.
inline FormulaPtr build_Prov(AxiomRecognizer::Named th) {
  return f_exists(1, f_pred(proof_pred_id(th), {t_var(1), t_var(0)}));
}

inline GodelCode absurdity_code() {
  static const GodelCode c = encode(f_equal(t_zero(), t_one()), {});
  return c;
}

// Con_Th(x) := forall y < x. not Proof_Th(y, [0=1]); free variable v0.
inline FormulaPtr build_Con_at(AxiomRecognizer::Named th) {
  return f_forall(1, f_implies(f_less(t_var(1), t_var(0)),
                               f_not(f_pred(proof_pred_id(th),
                                            {t_var(1), t_num(absurdity_code())}))));
}

// Con_Th := forall x. Con_Th(x).
inline FormulaPtr build_Con(AxiomRecognizer::Named th) {
  return f_forall(0, build_Con_at(th));
}

// --------------------------------------------------------------------------
// Diagonal lemma. For psi with one free variable, delta is built by the
// standard diagonalization through the diag syntax function:
//
//   theta(x) := exists y (y = diag(x) /\ psi(y))
//   delta := theta([theta]-literal), so diag([theta]) = [delta]
//
// and semantically eval(delta) = eval(psi([delta])) whenever both decide.

struct DiagonalCertificate {
  GodelCode theta_code;
  GodelCode delta_code;
  bool identity_checked = false;  // diag oracle applied to theta gives delta
};

namespace detail {
// psi with its single free variable renamed to v, capture-free.
inline FormulaPtr with_free_var(const FormulaPtr& psi, std::size_t v) {
  auto frees = free_vars(psi);
  if (frees.size() != 1) throw std::invalid_argument("expected exactly one free variable");
  return substitute(psi, *frees.begin(), t_var(v));
}
}  // namespace detail

inline std::pair<FormulaPtr, DiagonalCertificate> diagonal(const FormulaPtr& psi,
                                                           const Signature& sig = {}) {
  auto frees = free_vars(psi);
  if (frees.size() != 1) throw std::invalid_argument("diagonal: psi needs one free variable");
  // x := v0 must be the least free variable of theta for the diag convention
  std::size_t y = 1;
  FormulaPtr psi_y = detail::with_free_var(psi, y);
  FormulaPtr theta = f_exists(
      y, f_and(f_equal(t_var(y), t_app(kFnDiag, {t_var(0)})), psi_y));
  GodelCode theta_code = encode(theta, sig);
  FormulaPtr delta = substitute(theta, 0, t_num(theta_code));
  DiagonalCertificate cert;
  cert.theta_code = theta_code;
  cert.delta_code = encode(delta, sig);
  Evaluator ev(sig);
  cert.identity_checked =
      ev.oracles().fns[kFnDiag]({theta_code}) == cert.delta_code;
  return {delta, cert};
}

// --------------------------------------------------------------------------
// The fixed-point construction behind the non-Sigma2-definability theorem.
// sigma must be in proper Sigma2 form: exactly one leading existential over a
// (syntactic) Pi1 matrix, with one free variable. The result is the Pi1
// formula delta(x) (free variable v1 renamed to v0 on return) such that
// exists x. delta(x) diagonalizes
//
//   z in Sent /\ exists d in Pi1 (z = [exists x. d] /\ sigma[wct-code(d)])
//
// together with the weakly compositional guard formula forall y<x. not
// delta(y), ready for the CT-minus cut. The reductio itself is out of scope;
// the construction and its shape are what the artifact provides.

struct PvResult {
  FormulaPtr delta;        // one free variable, classifies as Pi(1)
  FormulaPtr guard;        // forall y < x. not delta(y); free variable v0
  DiagonalCertificate cert;
};

inline PvResult pv_sentence(const FormulaPtr& sigma, const Signature& sig = {}) {
  auto frees = free_vars(sigma);
  if (frees.size() != 1)
    throw std::invalid_argument("pv_sentence: sigma needs one free variable");
  std::size_t zvar = *frees.begin();
  if (sigma->kind != FormulaKind::Exists)
    throw std::invalid_argument("pv_sentence: sigma not in proper Sigma2 form");
  FormulaPtr pi = sigma->kids[0];
  std::size_t uvar = sigma->var;
  std::vector<std::size_t> pi_prefix;
  FormulaPtr rho = pi;
  while (rho->kind == FormulaKind::Forall) {
    pi_prefix.push_back(rho->var);
    rho = rho->kids[0];
  }
  if (classify(rho).tag != SyntacticClass::Delta0)
    throw std::invalid_argument("pv_sentence: sigma not in proper Sigma2 form");

  // variable layout: v0 = self-reference slot w, v1 = x, then fresh ones
  std::set<std::size_t> used = all_vars(sigma);
  used.insert({0, 1, zvar, uvar});
  auto fresh = [&used] {
    std::size_t v = 0;
    while (used.count(v)) ++v;
    used.insert(v);
    return v;
  };
  std::size_t w = 0, x = 1;
  std::size_t c = fresh(), yv = fresh(), dv = fresh(), vv = fresh(), uu = fresh();

  // rho with sigma's witness u |-> uu and its free z |-> c (the wct code)
  FormulaPtr rho2 = substitute(substitute(rho, uvar, t_var(uu)), zvar, t_var(c));

  // Delta0 matrix:
  //   exists y <= x: y = ex-code(v1-code, diag(w)) /\ Sent(y)
  //     /\ exists d < y: Pi1(d) /\ exists v < y: Var(v) /\ y = ex-code(v, d)
  //       /\ exists u <= x: (c = wct-code(d) -> rho2)
  GodelCode xvar_code = encode_term(t_var(x), sig);
  FormulaPtr sig_part = f_exists(
      uu, f_and(f_less(t_var(uu), t_add(t_var(x), t_one())),
                f_implies(f_equal(t_var(c), t_app(kFnWctCode, {t_var(dv)})), rho2)));
  FormulaPtr d_part = f_exists(
      dv,
      f_and(f_less(t_var(dv), t_var(yv)),
            f_and(f_pred(kPredPi1, {t_var(dv)}),
                  f_exists(vv, f_and(f_less(t_var(vv), t_var(yv)),
                                     f_and(f_pred(kPredVar, {t_var(vv)}),
                                           f_and(f_equal(t_var(yv),
                                                         t_app(kFnExCode,
                                                               {t_var(vv), t_var(dv)})),
                                                 sig_part)))))));
  FormulaPtr y_matrix =
      f_and(f_less(t_var(yv), t_add(t_var(x), t_one())),
            f_and(f_equal(t_var(yv),
                          t_app(kFnExCode,
                                {t_num(xvar_code), t_app(kFnDiag, {t_var(w)})})),
                  f_and(f_pred(kPredSent, {t_var(yv)}), d_part)));
  FormulaPtr template_body = f_forall(c, f_exists(yv, y_matrix));
  for (auto it = pi_prefix.rbegin(); it != pi_prefix.rend(); ++it)
    template_body = f_forall(*it, template_body);
  // template has free w (v0) and x (v1); self-apply on w
  GodelCode n = encode(template_body, sig);
  FormulaPtr delta_x = substitute(template_body, w, t_num(n));

  PvResult r;
  r.cert.theta_code = n;
  r.cert.delta_code = encode(delta_x, sig);
  {
    Evaluator ev(sig);
    r.cert.identity_checked = ev.oracles().fns[kFnDiag]({n}) == r.cert.delta_code;
  }
  // present delta with free variable v0
  r.delta = substitute(delta_x, x, t_var(0));
  std::size_t gy = 1;
  r.guard = f_forall(gy, f_implies(f_less(t_var(gy), t_var(0)),
                                   f_not(substitute(r.delta, 0, t_var(gy)))));
  return r;
}

// --------------------------------------------------------------------------
// Flexible-formula skeleton: a Sigma_n formula with one free variable built
// by the same diagonal construction over Prov_Th ("some proof pins my
// extension at x"). The syntactic class is verified by construction;
// flexibility itself is a consistency meta-property and is not verified.

inline std::pair<FormulaPtr, DiagonalCertificate> flexible_skeleton(
    unsigned n, AxiomRecognizer::Named th, const Signature& sig = {}) {
  if (n < 1) throw std::invalid_argument("flexible_skeleton: n >= 1");
  std::size_t w = 0, x = 1, y = 2, p = 3;
  GodelCode xcode = encode_term(t_var(x), sig);
  FormulaPtr matrix =
      f_and(f_equal(t_var(y), t_app(kFnDiag, {t_var(w)})),
            f_pred(proof_pred_id(th),
                   {t_var(p), t_app(kFnNumsub, {t_var(y), t_num(xcode), t_var(x)})}));
  // dummy alternation tail: wrap a Pi_{n-1} prefix (outermost forall) around
  // the Delta0 matrix so the leading existential block lands in Sigma_n
  std::size_t next = 4;
  FormulaPtr body = matrix;
  for (unsigned i = 1; i < n; ++i) {
    std::size_t q = next++;
    body = (n - 1 - i) % 2 == 0 ? f_forall(q, body) : f_exists(q, body);
  }
  FormulaPtr templ = f_exists(y, f_exists(p, body));
  GodelCode ncode = encode(templ, sig);
  FormulaPtr out = substitute(templ, w, t_num(ncode));
  DiagonalCertificate cert;
  cert.theta_code = ncode;
  cert.delta_code = encode(out, sig);
  Evaluator ev(sig);
  cert.identity_checked = ev.oracles().fns[kFnDiag]({ncode}) == cert.delta_code;
  return {out, cert};
}

// --------------------------------------------------------------------------
// Oracle installation for the reserved proof predicates.

inline void install_proof_oracles(Oracles& o, const FormulaPtr& ct0_sentence) {
  auto ea = std::make_shared<AxiomRecognizer>(AxiomRecognizer::named(AxiomRecognizer::EA));
  auto pa = std::make_shared<AxiomRecognizer>(AxiomRecognizer::named(AxiomRecognizer::PA));
  Signature lt;
  lt.add("T", 1);
  auto ct0 = std::make_shared<AxiomRecognizer>(
      AxiomRecognizer::from_list({ct0_sentence}, lt));
  o.preds[kPredProofEA] = [ea](const std::vector<BigNat>& a) {
    return proof_pred(a[0], a[1], *ea);
  };
  o.preds[kPredProofPA] = [pa](const std::vector<BigNat>& a) {
    return proof_pred(a[0], a[1], *pa);
  };
  o.preds[kPredProofCT0] = [ct0](const std::vector<BigNat>& a) {
    return proof_pred(a[0], a[1], *ct0);
  };
}

}  // namespace truthlat
