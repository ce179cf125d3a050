#include <doctest.h>

#include "test_util.hpp"
#include "truthlat/suites.hpp"
#include "truthlat/truthlat.hpp"

using namespace truthlat;

namespace {
Signature unary(const std::string& name) {
  Signature s;
  s.add(name, 1);
  return s;
}
}  // namespace

TEST_CASE("application is homomorphic and identity on arithmetic") {
  Signature sp = unary("P");
  Translation flip;
  flip.source = flip.target = sp;
  flip.images["P"] = {{0}, f_not(f_rel("P", {t_var(0)}))};
  FormulaPtr f = parse_formula("(forall v0 (REL P v0))", sp);
  CHECK(print_formula(apply_translation(flip, f)) == "(forall v0 (not (REL P v0)))");
  // arithmetical formulas pass through untouched
  testutil::Gen gen(55);
  testutil::GenOptions o;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr g = gen.formula(o, 4);
    CHECK(equal_formula(apply_translation(flip, g), g));
  }
  CHECK_THROWS_AS(
      apply_translation(Translation{}, f_rel("P", {t_zero()})), TranslationError);
}

TEST_CASE("argument plugging renames captured binders") {
  Signature sp = unary("P");
  Translation tr;
  tr.source = tr.target = sp;
  // image with a bound variable that collides with the argument
  tr.images["P"] = {{0}, f_exists(1, f_equal(t_var(1), t_var(0)))};
  FormulaPtr atom = f_rel("P", {t_var(1)});
  FormulaPtr out = apply_translation(tr, atom);
  CHECK(free_vars(out) == std::set<std::size_t>{1});
  CHECK(eval_nat(f_forall(1, out), 32).note.empty() == false);  // stays well-formed
}

TEST_CASE("composition agrees with sequential application") {
  Signature sp = unary("P");
  Translation sigma, tau;
  sigma.source = sigma.target = sp;
  sigma.images["P"] = {{0}, f_not(f_rel("P", {t_var(0)}))};
  tau.source = tau.target = sp;
  tau.images["P"] = {{0}, f_and(f_rel("P", {t_var(0)}), f_equal(t_var(0), t_var(0)))};
  Translation st = compose(sigma, tau);
  testutil::Gen gen(77);
  for (int i = 0; i < 1000; ++i) {
    // random relational formulas over P
    FormulaPtr f = gen.coin() ? f_rel("P", {t_var(gen.u(0, 2))})
                              : f_forall(gen.u(0, 2), f_rel("P", {t_var(gen.u(0, 2))}));
    if (gen.coin()) f = f_not(f);
    if (gen.coin()) f = f_and(f, f_rel("P", {t_zero()}));
    CHECK(equal_formula(apply_translation(st, f),
                        apply_translation(sigma, apply_translation(tau, f))));
  }
}

TEST_CASE("apply preserves free variables") {
  Signature sp;
  sp.add("P", 1);
  sp.add("Q", 2);
  Translation tr;
  tr.source = tr.target = sp;
  tr.images["P"] = {{0}, f_exists(3, f_and(f_rel("Q", {t_var(3), t_var(0)}),
                                           f_equal(t_var(0), t_var(0))))};
  tr.images["Q"] = {{0, 1}, f_or(f_rel("P", {t_var(0)}), f_rel("P", {t_var(1)}))};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = rng() % 2 ? f_rel("Q", {t_var(rng() % 4), t_var(rng() % 4)})
                             : f_rel("P", {t_var(rng() % 4)});
    if (rng() % 2) f = f_exists(rng() % 4, f);
    CHECK(free_vars(apply_translation(tr, f)) == free_vars(f));
  }
}

TEST_CASE("rep renaming is fresh and invertible") {
  Signature st = unary("T");
  FormulaPtr alpha = parse_formula("(forall v0 (REL T v0))", st);
  FormulaPtr beta = parse_formula("(exists v0 (REL T v0))", st);
  RepResult r = rep(alpha, beta, st, st);
  CHECK(r.names.at("T") == "T'");
  CHECK(rels_of(r.renamed) == std::set<std::string>{"T'"});
  // inverse recovers beta
  CHECK(equal_formula(apply_translation(r.inverse, r.renamed), beta));
  // the union signature splits the symbols
  Signature u = sig_union(st, r.renaming.target);
  CHECK(u.extras().size() == 2);
  // priming repeats until fresh
  Signature both;
  both.add("T", 1);
  both.add("T'", 1);
  RepResult r2 = rep(alpha, beta, both, st);
  CHECK(r2.names.at("T") == "T''");
}

TEST_CASE("infimum and supremum shapes") {
  TruthDefinition ct = build_CTminus();
  TruthDefinition cut = build_Cut();
  TruthDefinition inf = inf_op(ct, cut);
  CHECK(inf.sentence->kind == FormulaKind::Or);
  CHECK(equal_formula(inf.sentence->kids[0], ct.sentence));
  CHECK(free_vars(inf.theta) == std::set<std::size_t>{0});
  // theta case-splits on the first disjunct
  REQUIRE(inf.theta->kind == FormulaKind::And);
  CHECK(equal_formula(inf.theta->kids[0]->kids[0], ct.sentence));

  TruthDefinition sup = sup_op(ct, cut);
  CHECK(sup.sentence->kind == FormulaKind::And);
  CHECK(equal_formula(sup.sentence->kids[0], ct.sentence));
  // the second conjunct uses the renamed copy, so extras are disjoint
  CHECK(rels_of(sup.sentence->kids[1]) == std::set<std::string>{"T'"});
  CHECK(equal_formula(sup.theta, ct.theta));
  // the renaming witness direction: sup proves alpha literally
  CHECK(equal_formula(sup.sentence->kids[0], ct.sentence));
}

TEST_CASE("inf theta selects the live branch in a toy model") {
  // relational analog: alpha = forall x A(x), beta = forall x not A(x),
  // thetas pick different relations
  Signature sig;
  sig.add("A", 1);
  sig.add("TA", 1);
  sig.add("TB", 1);
  TruthDefinition alpha{parse_formula("(forall v0 (REL A v0))", sig),
                        f_rel("TA", {t_var(0)}), sig};
  TruthDefinition beta{parse_formula("(forall v0 (not (REL A v0)))", sig),
                       f_rel("TB", {t_var(0)}), sig};
  TruthDefinition inf = inf_op(alpha, beta);
  FiniteStructure m;  // a model of alpha: theta must behave like TA
  m.universe = 2;
  m.relations["A"] = {{0}, {1}};
  m.relations["TA"] = {{0}};
  m.relations["TB"] = {{1}};
  FormulaPtr theta0 = substitute(inf.theta, 0, t_var(5));
  CHECK(eval_fin(m, f_forall(5, f_iff(theta0, f_rel("TA", {t_var(5)})))));
  FiniteStructure mb;  // a model of beta
  mb.universe = 2;
  mb.relations["A"] = {};
  mb.relations["TA"] = {{0}};
  mb.relations["TB"] = {{1}};
  CHECK(eval_fin(mb, f_forall(5, f_iff(theta0, f_rel("TB", {t_var(5)})))));
}

TEST_CASE("inf witness collapses when both translations agree") {
  Signature sg = unary("Q"), sa = unary("A");
  Translation s1{sg, sa, {{"Q", {{0}, f_rel("A", {t_var(0)})}}}};
  Translation w = inf_witness(s1, s1, parse_formula("(forall v0 (REL A v0))", sa));
  // pointwise equivalent to s1 in every finite model
  auto models = suites::detail::all_models(sa, 3);
  FormulaPtr q_at = f_rel("Q", {t_var(9)});
  FormulaPtr left = substitute(apply_translation(w, q_at), 9, t_var(9));
  FormulaPtr right = apply_translation(s1, q_at);
  for (auto& m : models)
    CHECK(eval_fin(m, f_forall(9, f_iff(left, right))));
}

TEST_CASE("comparability translation") {
  FormulaPtr alpha = parse_formula("(< v0 5)");
  FormulaPtr beta = parse_formula("(< v0 7)");
  Translation tr = case_translation_ab(alpha, beta);
  REQUIRE(tr.images.count("T"));
  const TranslationImage& img = tr.images.at("T");
  CHECK(rels_of(img.formula) == std::set<std::string>{"T", "T'"});
  CHECK(img.vars.size() == 1);
  // the subset guard is the literal universal implication
  FormulaPtr guard = img.formula->kids[0]->kids[0];
  CHECK(guard->kind == FormulaKind::Forall);
  CHECK(guard->kids[0]->kind == FormulaKind::Implies);

  // alpha <= beta here, so the first branch drives the predicate
  Signature both;
  both.add("T", 1);
  both.add("T'", 1);
  Evaluator ev(both);
  ev.set_rel_hook("T", [](const std::vector<BigNat>&) { return false; });
  ev.set_rel_hook("T'", [](const std::vector<BigNat>&) { return true; });
  FormulaPtr inst = substitute(img.formula, img.vars[0], t_zero());
  CHECK(ev.eval_sentence(inst).is_true());
  // with alpha = beta both subset guards decide and pick the primed copy
  Translation same = case_translation_ab(alpha, alpha);
  FormulaPtr inst2 = substitute(same.images.at("T").formula,
                                same.images.at("T").vars[0], t_zero());
  CHECK(ev.eval_sentence(inst2).is_true());
  // swapped hooks flip the verdict
  Evaluator ev2(both);
  ev2.set_rel_hook("T", [](const std::vector<BigNat>&) { return true; });
  ev2.set_rel_hook("T'", [](const std::vector<BigNat>&) { return false; });
  CHECK(ev2.eval_sentence(inst).is_false());
}

TEST_CASE("soundness check reports counterexamples") {
  Signature sp = unary("P");
  FormulaPtr u = parse_formula("(forall v0 (REL P v0))", sp);
  FormulaPtr v = parse_formula("(forall v0 (not (REL P v0)))", sp);
  Translation flip{sp, sp, {{"P", {{0}, f_not(f_rel("P", {t_var(0)}))}}}};
  auto models = suites::detail::all_models(sp, 3);
  SoundnessReport ok = soundness_check(flip, u, v, models);
  CHECK(ok.ok());
  CHECK(ok.models_of_target == 3);  // the empty extension per size
  SoundnessReport bad = soundness_check(identity_translation(sp), u, v, models);
  CHECK_FALSE(bad.ok());
  CHECK(!bad.counterexamples.empty());
}

TEST_CASE("distributivity witnesses validate on the toy triple") {
  Signature s_alpha, s_beta, s_gamma;
  s_alpha.add("P", 1);
  s_alpha.add("R'", 1);
  s_beta.add("Q", 1);
  s_gamma.add("R", 1);
  TruthDefinition alpha{parse_formula("(forall v0 (-> (REL P v0) (REL R' v0)))", s_alpha),
                        f_rel("P", {t_var(0)}), s_alpha};
  TruthDefinition beta{parse_formula("(exists v0 (REL Q v0))", s_beta),
                       f_rel("Q", {t_var(0)}), s_beta};
  TruthDefinition gamma{parse_formula("(forall v0 (REL R v0))", s_gamma),
                        f_rel("R", {t_var(0)}), s_gamma};
  DistSetup setup = dist_setup(alpha, beta, gamma);
  // the renamed copies hit the overlap case on purpose: rep_beta sends R to
  // R', which alpha also uses
  CHECK(setup.rep1.names.at("R") == "R'");

  Translation fwd = dist_witness_fwd(alpha, beta, gamma);
  auto fwd_models = suites::detail::all_models(fwd.target, 2);
  SoundnessReport fr = soundness_check(fwd, setup.rhs.sentence, setup.lhs.sentence, fwd_models);
  CHECK(fr.ok());
  CHECK(fr.models_of_target > 0);

  Translation bwd = dist_witness_bwd(alpha, beta, gamma);
  auto bwd_models = suites::detail::all_models(bwd.target, 2);
  SoundnessReport br = soundness_check(bwd, setup.lhs.sentence, setup.rhs.sentence, bwd_models);
  CHECK(br.ok());
  CHECK(br.models_of_target > 0);

  // translation well-formedness: arities and free variables line up
  for (auto& [name, img] : fwd.images) {
    const RelSym* r = fwd.source.find(name);
    REQUIRE(r != nullptr);
    CHECK(img.vars.size() == r->arity);
    for (auto v : img.vars) CHECK(free_vars(img.formula).count(v));
  }
}

TEST_CASE("appendix partition is exhaustive and disjoint") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 100; ++trial) {
    Signature qa, qb, qg;
    std::size_t na = 1 + rng() % 3, nb = 1 + rng() % 3, ng = 1 + rng() % 3;
    for (std::size_t i = 0; i < na; ++i) qa.add("A" + std::to_string(i), 1);
    for (std::size_t i = 0; i < nb; ++i) qb.add("B" + std::to_string(i), 1);
    for (std::size_t i = 0; i < ng; ++i) qg.add("G" + std::to_string(i), 1);
    if (rng() % 2) qa.add("G0'", 1);  // overlap with the renamed gamma
    FormulaPtr triv = f_equal(t_zero(), t_zero());
    RepResult r1 = rep(triv, triv, qb, qg);
    std::set<std::string> la, lb, lr, uni;
    for (auto& r : qa.extras()) la.insert(r.name);
    for (auto& r : qb.extras()) lb.insert(r.name);
    for (auto& r : r1.renaming.target.extras()) lr.insert(r.name);
    uni.insert(la.begin(), la.end());
    uni.insert(lb.begin(), lb.end());
    uni.insert(lr.begin(), lr.end());
    std::vector<std::set<std::string>> blocks(4);
    for (auto& s : lb)
      if (!la.count(s)) blocks[0].insert(s);
    for (auto& s : la)
      if (lr.count(s)) blocks[1].insert(s);
    for (auto& s : la)
      if (!lr.count(s)) blocks[2].insert(s);
    for (auto& s : lr)
      if (!la.count(s)) blocks[3].insert(s);
    std::set<std::string> rebuilt;
    std::size_t total = 0;
    for (auto& b : blocks) {
      total += b.size();
      rebuilt.insert(b.begin(), b.end());
    }
    CHECK(rebuilt == uni);
    CHECK(total == uni.size());
  }
}
