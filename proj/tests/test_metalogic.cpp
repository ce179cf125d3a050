#include <doctest.h>

#include "test_util.hpp"
#include "truthlat/truthlat.hpp"

using namespace truthlat;

namespace {

ProofLine ax(FormulaPtr f) { return {std::move(f), {Justification::TheoryAxiom}}; }
ProofLine logax(FormulaPtr f, std::string scheme = {}) {
  ProofLine l{std::move(f), {Justification::LogicalAxiom}};
  l.just.scheme = std::move(scheme);
  return l;
}
ProofLine mp(FormulaPtr f, std::size_t a, std::size_t b) {
  ProofLine l{std::move(f), {Justification::ModusPonens}};
  l.just.ref1 = a;
  l.just.ref2 = b;
  return l;
}
ProofLine gen_line(FormulaPtr f, std::size_t ref, std::size_t var) {
  ProofLine l{std::move(f), {Justification::Generalization}};
  l.just.ref1 = ref;
  l.just.var = var;
  return l;
}

// the K,S modus-ponens derivation of A -> A
ProofObject identity_proof(const FormulaPtr& a) {
  FormulaPtr aa = f_implies(a, a);
  // S at (a, a->a, a); K at (a, a->a); K at (a, a)
  FormulaPtr s_inst = f_implies(f_implies(a, f_implies(aa, a)),
                                f_implies(f_implies(a, aa), aa));
  ProofObject p;
  p.lines.push_back(logax(s_inst, "S"));
  p.lines.push_back(logax(f_implies(a, f_implies(aa, a)), "K"));
  p.lines.push_back(mp(f_implies(f_implies(a, aa), aa), 1, 0));
  p.lines.push_back(logax(f_implies(a, aa), "K"));
  p.lines.push_back(mp(aa, 3, 2));
  return p;
}

}  // namespace

TEST_CASE("checker accepts the K,S modus-ponens derivation") {
  auto ea = AxiomRecognizer::named(AxiomRecognizer::EA);
  FormulaPtr a = parse_formula("(= 0 0)");
  ProofObject p = identity_proof(a);
  CHECK(proof_check(p, ea));
  CHECK(equal_formula(conclusion(p), f_implies(a, a)));
}

TEST_CASE("checker rejections") {
  auto ea = AxiomRecognizer::named(AxiomRecognizer::EA);
  CHECK_FALSE(proof_check({}, ea));  // empty proof
  FormulaPtr a = parse_formula("(= 0 0)");
  // modus ponens citing a later line
  ProofObject bad1 = identity_proof(a);
  bad1.lines[2].just.ref1 = 4;
  CHECK_FALSE(proof_check(bad1, ea));
  // altered conclusion
  ProofObject bad2 = identity_proof(a);
  bad2.lines[4].formula = f_implies(a, parse_formula("(= 0 1)"));
  CHECK_FALSE(proof_check(bad2, ea));
  // theory axiom not in the theory
  ProofObject bad3;
  bad3.lines.push_back(ax(parse_formula("(= 0 1)")));
  CHECK_FALSE(proof_check(bad3, ea));
  // scheme name that does not match the line
  ProofObject bad4;
  bad4.lines.push_back(logax(parse_formula("(= 0 1)"), "K"));
  CHECK_FALSE(proof_check(bad4, ea));
}

TEST_CASE("quantifier and equality schemes") {
  auto ea = AxiomRecognizer::named(AxiomRecognizer::EA);
  ProofObject p;
  // 0: v0 = v0                      (eq-refl)
  // 1: forall v0 (v0 = v0)          (gen 0)
  // 2: forall v0 (v0=v0) -> 0+1=0+1 (inst)
  // 3: 0+1 = 0+1                    (mp 1,2)
  FormulaPtr refl = f_equal(t_var(0), t_var(0));
  FormulaPtr all = f_forall(0, refl);
  TermPtr t01 = t_add(t_zero(), t_one());
  FormulaPtr inst = f_implies(all, f_equal(t01, t01));
  p.lines.push_back(logax(refl, "eq-refl"));
  p.lines.push_back(gen_line(all, 0, 0));
  p.lines.push_back(logax(inst, "inst"));
  p.lines.push_back(mp(f_equal(t01, t01), 1, 2));
  CHECK(proof_check(p, ea));

  // generalization on the wrong variable
  ProofObject bad = p;
  bad.lines[1].just.var = 1;
  CHECK_FALSE(proof_check(bad, ea));

  CHECK(schemes::match_leibniz(parse_formula(
      "(-> (= 0 (+ 0 0)) (-> (< 0 1) (< (+ 0 0) 1)))")));
  CHECK_FALSE(schemes::match_leibniz(parse_formula(
      "(-> (= 0 (+ 0 0)) (-> (< 0 1) (< (+ 0 1) 1)))")));
  CHECK(schemes::match_dist(parse_formula(
      "(-> (forall v0 (-> (= v1 v1) (= v0 v0))) (-> (= v1 v1) (forall v0 (= v0 v0))))")));
  CHECK_FALSE(schemes::match_dist(parse_formula(
      "(-> (forall v0 (-> (= v0 v0) (= v0 v0))) (-> (= v0 v0) (forall v0 (= v0 v0))))")));
  CHECK(schemes::match_ex_intro(parse_formula("(-> (= 1 1) (exists v0 (= v0 v0)))")));
}

TEST_CASE("checker-accepted proofs of Delta0 sentences have true conclusions") {
  auto ea = AxiomRecognizer::named(AxiomRecognizer::EA);
  std::vector<FormulaPtr> targets = {
      parse_formula("(= 0 0)"), parse_formula("(< 0 1)"),
      parse_formula("(= (+ 0 1) (+ 0 1))"), parse_formula("(= 1 1)")};
  for (auto& a : targets) {
    ProofObject p = identity_proof(a);
    REQUIRE(proof_check(p, ea));
    FormulaPtr concl = conclusion(p);
    if (classify(concl).tag == SyntacticClass::Delta0)
      CHECK(eval_nat(concl, 0).is_true());
  }
}

TEST_CASE("PA recognizer accepts induction instances") {
  auto pa = AxiomRecognizer::named(AxiomRecognizer::PA);
  FormulaPtr phi = f_less(t_var(0), t_add(t_var(0), t_one()));
  CHECK(pa.is_axiom(induction_instance(phi, 0)));
  // with a parameter
  FormulaPtr psi = f_less(t_var(0), t_add(t_var(0), t_add(t_var(1), t_one())));
  CHECK(pa.is_axiom(induction_instance(psi, 0)));
  CHECK(pa.is_axiom(ea_axioms()[0]));
  CHECK_FALSE(pa.is_axiom(parse_formula("(= 0 1)")));
  auto ea = AxiomRecognizer::named(AxiomRecognizer::EA);
  CHECK_FALSE(ea.is_axiom(induction_instance(psi, 0)));
  CHECK(pa.is_axiom_code(encode(induction_instance(phi, 0))));
}

TEST_CASE("proof json and arithmetization round-trip") {
  FormulaPtr a = parse_formula("(= 0 0)");
  ProofObject p = identity_proof(a);
  ProofObject back = proof_from_json(proof_to_json(p));
  CHECK(back.lines.size() == p.lines.size());
  auto ea = AxiomRecognizer::named(AxiomRecognizer::EA);
  CHECK(proof_check(back, ea));
  GodelCode y = encode_proof(p);
  auto dec = try_decode_proof(y);
  REQUIRE(dec.has_value());
  CHECK(proof_check(*dec, ea));
  CHECK(proof_pred(y, encode(f_implies(a, a)), ea));
  CHECK_FALSE(proof_pred(y, encode(a), ea));       // wrong conclusion
  CHECK_FALSE(proof_pred(BigNat{5}, encode(a), ea));  // garbage
}

TEST_CASE("Proof, Prov and Con builders") {
  // Prov has exactly one unbounded existential over the Proof atom
  FormulaPtr prov = build_Prov(AxiomRecognizer::EA);
  CHECK(prov->kind == FormulaKind::Exists);
  CHECK(prov->kids[0]->kind == FormulaKind::Pred);
  CHECK(prov->kids[0]->pred == kPredProofEA);
  CHECK(free_vars(prov) == std::set<std::size_t>{0});
  // Con_Th = forall x. Con_Th(x)
  CHECK(equal_formula(build_Con(AxiomRecognizer::EA),
                      f_forall(0, build_Con_at(AxiomRecognizer::EA))));

  auto ev = make_evaluator();
  // small codes are not proofs of 0=1
  FormulaPtr con5 = substitute(build_Con_at(AxiomRecognizer::EA), 0, numeral(5));
  CHECK(ev.eval_sentence(con5).is_true());
  // the native checker drives the Proof atom on a real proof code
  FormulaPtr a = parse_formula("(= 0 0)");
  GodelCode y = encode_proof(identity_proof(a));
  GodelCode c = encode(f_implies(a, a));
  FormulaPtr atom = f_pred(kPredProofEA, {t_num(y), t_num(c)});
  CHECK(ev.eval_sentence(atom).is_true());
  CHECK(ev.eval_sentence(f_pred(kPredProofEA, {t_num(y), t_num(encode(a))})).is_false());
}

TEST_CASE("Con monotone below a true bound") {
  auto ev = make_evaluator();
  FormulaPtr con_at = build_Con_at(AxiomRecognizer::EA);
  bool all_true = true;
  for (std::uint64_t n = 12; n + 1 > 0 && all_true; --n) {
    Verdict v = ev.eval_sentence(substitute(con_at, 0, numeral(n)));
    CHECK(v.is_true());
    if (!v.is_true()) all_true = false;
    if (n == 0) break;
  }
}

TEST_CASE("diagonal lemma: certificate and fixed-point law") {
  Signature sig;
  std::vector<FormulaPtr> family = {
      parse_formula("(= v0 v0)"),
      parse_formula("(not (= v0 v0))"),
      parse_formula("(< v0 1)"),
      parse_formula("(< 1 v0)"),
      parse_formula("(Var v0)"),
      parse_formula("(Sent v0)"),
      parse_formula("(Tmc v0)"),
      parse_formula("(existsb v1 3 (= (* v1 v1) v0))"),
      parse_formula("(= (dpt v0) 0)"),
      parse_formula("(not (= (dpt v0) 0))"),
  };
  int decided_pairs = 0;
  for (auto& psi : family) {
    auto [delta, cert] = diagonal(psi, sig);
    CHECK(cert.identity_checked);
    CHECK(is_sentence(delta));
    auto ev = make_evaluator();
    Verdict lhs = ev.eval_sentence(delta);
    FormulaPtr rhs_f = substitute(psi, *free_vars(psi).begin(), t_num(cert.delta_code));
    Verdict rhs = ev.eval_sentence(rhs_f);
    if (lhs.decided() && rhs.decided()) {
      ++decided_pairs;
      CHECK(lhs.value == rhs.value);
    }
  }
  CHECK(decided_pairs == 10);
}

TEST_CASE("fixed-point sentence of the definability argument") {
  // canonical false proper-Sigma2 template: exists u forall w (not w=w /\ z=z)
  FormulaPtr sigma = f_exists(5, f_forall(6, f_and(f_not(f_equal(t_var(6), t_var(6))),
                                                   f_equal(t_var(4), t_var(4)))));
  PvResult r = pv_sentence(sigma);
  CHECK(free_vars(r.delta) == std::set<std::size_t>{0});
  CHECK(classify(r.delta).str() == "Pi(1)");
  CHECK(r.cert.identity_checked);
  // guard shape: forall y (y < x -> not delta(y))
  CHECK(r.guard->kind == FormulaKind::Forall);
  CHECK(free_vars(r.guard) == std::set<std::size_t>{0});
  // the weakly compositional sentence built on the guard has the wCT shape
  TruthDefinition wct = build_wCT(r.guard);
  CHECK(wct.sentence->kind == FormulaKind::And);
  CHECK(equal_formula(wct.sentence->kids[0], ea_sentence()));
  CHECK(wct.sentence->kids[1]->kind == FormulaKind::Forall);
  // N |= not delta(n) for small n, by the finite-search failure
  auto ev = make_evaluator();
  for (std::uint64_t n = 0; n <= 50; ++n) {
    FormulaPtr nd = f_not(substitute(r.delta, 0, numeral(n)));
    CHECK(ev.eval_sentence(nd).is_true());
  }
  // a sigma that is not in proper form is rejected
  CHECK_THROWS_AS(pv_sentence(parse_formula("(forall v0 (= v0 v1))")),
                  std::invalid_argument);
  CHECK_THROWS_AS(pv_sentence(parse_formula("(exists v0 (exists v1 (= v0 v2)))")),
                  std::invalid_argument);
}

TEST_CASE("flexible skeleton") {
  for (unsigned n = 1; n <= 3; ++n) {
    auto [theta, cert] = flexible_skeleton(n, AxiomRecognizer::EA);
    CHECK(classify(theta).str() == "Sigma(" + std::to_string(n) + ")");
    CHECK(free_vars(theta).size() == 1);
    CHECK(cert.identity_checked);
  }
  CHECK_THROWS(flexible_skeleton(0, AxiomRecognizer::EA));
}
