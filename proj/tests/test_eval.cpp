#include <doctest.h>

#include "test_util.hpp"
#include "truthlat/truthlat.hpp"

using namespace truthlat;

namespace {

// Independent naive Tarskian evaluator over finite structures, used as the
// oracle for eval_fin. No shared code with the implementation under test.
bool naive_fin(const FiniteStructure& m, const FormulaPtr& f,
               std::map<std::size_t, std::size_t> env) {
  switch (f->kind) {
    case FormulaKind::Equal:
      return env.at(f->terms[0]->var) == env.at(f->terms[1]->var);
    case FormulaKind::Rel: {
      std::vector<std::size_t> tup;
      for (auto& t : f->terms) tup.push_back(env.at(t->var));
      return m.relations.at(f->rel).count(tup) > 0;
    }
    case FormulaKind::Not: return !naive_fin(m, f->kids[0], env);
    case FormulaKind::And:
      return naive_fin(m, f->kids[0], env) && naive_fin(m, f->kids[1], env);
    case FormulaKind::Or:
      return naive_fin(m, f->kids[0], env) || naive_fin(m, f->kids[1], env);
    case FormulaKind::Implies:
      return !naive_fin(m, f->kids[0], env) || naive_fin(m, f->kids[1], env);
    case FormulaKind::Exists:
      for (std::size_t e = 0; e < m.universe; ++e) {
        env[f->var] = e;
        if (naive_fin(m, f->kids[0], env)) return true;
      }
      return false;
    case FormulaKind::Forall:
      for (std::size_t e = 0; e < m.universe; ++e) {
        env[f->var] = e;
        if (!naive_fin(m, f->kids[0], env)) return false;
      }
      return true;
    default:
      throw std::runtime_error("unexpected atom in finite oracle");
  }
}

FormulaPtr random_rel_formula(testutil::Gen& gen, const std::vector<RelSym>& rels,
                              std::size_t nvars, unsigned depth) {
  if (depth == 0) {
    if (gen.coin(0.3))
      return f_equal(t_var(gen.u(0, nvars - 1)), t_var(gen.u(0, nvars - 1)));
    const RelSym& r = rels[gen.u(0, rels.size() - 1)];
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < r.arity; ++i) args.push_back(t_var(gen.u(0, nvars - 1)));
    return f_rel(r.name, args);
  }
  switch (gen.u(0, 4)) {
    case 0: return f_not(random_rel_formula(gen, rels, nvars, depth - 1));
    case 1:
      return f_and(random_rel_formula(gen, rels, nvars, depth - 1),
                   random_rel_formula(gen, rels, nvars, depth - 1));
    case 2:
      return f_or(random_rel_formula(gen, rels, nvars, depth - 1),
                  random_rel_formula(gen, rels, nvars, depth - 1));
    case 3:
      return f_exists(gen.u(0, nvars - 1), random_rel_formula(gen, rels, nvars, depth - 1));
    default:
      return f_forall(gen.u(0, nvars - 1), random_rel_formula(gen, rels, nvars, depth - 1));
  }
}

}  // namespace

TEST_CASE("standard-model basics") {
  CHECK(eval_nat(parse_formula("(existsb v0 5 (= (+ v0 v0) 4))")).is_true());
  CHECK(eval_nat(parse_formula("(forall v0 (< v0 v0))"), 100).is_false());
  CHECK(eval_nat(parse_formula("(= (exp 2 3) 8)")).is_true());
  CHECK(eval_nat(parse_formula("(= (exp 2 3) 9)")).is_false());
  CHECK(eval_nat(parse_formula("(= (exp 10 0) 1)")).is_true());
  CHECK(eval_nat(parse_formula("(exists v0 (= (* v0 v0) 49))")).is_true());
  // an unbounded true universal cannot be decided, only exhausted
  Verdict v = eval_nat(parse_formula("(forall v0 (< v0 (+ v0 1)))"), 50);
  CHECK(!v.decided());
}

TEST_CASE("strong-Kleene propagation") {
  FormulaPtr unknown = parse_formula("(forall v0 (= v0 v0))");  // true, not decidable
  FormulaPtr truth = parse_formula("(= 0 0)");
  FormulaPtr lie = parse_formula("(= 0 1)");
  CHECK(!eval_nat(unknown, 10).decided());
  CHECK(eval_nat(f_or(unknown, truth), 10).is_true());
  CHECK(eval_nat(f_and(unknown, lie), 10).is_false());
  CHECK(!eval_nat(f_and(unknown, truth), 10).decided());
  CHECK(eval_nat(f_implies(lie, unknown), 10).is_true());
  CHECK(eval_nat(f_implies(unknown, truth), 10).is_true());
}

TEST_CASE("Delta0 sentences decide at budget zero") {
  testutil::Gen gen(42);
  testutil::GenOptions o;
  o.max_depth = 4;
  o.allow_unbounded = false;
  o.max_numeral = 4;
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    FormulaPtr s = gen.sentence(o);
    if (classify(s).tag != SyntacticClass::Delta0) continue;
    ++checked;
    CHECK(eval_nat(s, 0).decided());
  }
  CHECK(checked > 100);
}

TEST_CASE("verdict monotone in budget") {
  testutil::Gen gen(43);
  testutil::GenOptions o;
  o.max_depth = 3;
  o.max_numeral = 3;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr s = gen.sentence(o);
    Verdict small = eval_nat(s, 8);
    Verdict large = eval_nat(s, 60);
    // a run that hit the global step cap is an incomplete search, not a verdict
    if (large.note.find("step cap") != std::string::npos) continue;
    if (small.decided()) CHECK(small.value == large.value);
  }
}

TEST_CASE("functional witness propagation solves code decompositions") {
  // exists s exists t: x = eq-code(s, t) pinned from a closed x
  GodelCode c = encode(f_equal(numeral(2), t_add(t_one(), t_one())));
  std::string sexpr =
      "(exists v1 (exists v2 (and (= (num " + c.to_decimal() +
      ") (eq-code v1 v2)) (= (val v1) (val v2)))))";
  CHECK(eval_nat(parse_formula(sexpr)).is_true());
  // a non-equation code makes the block exactly false
  GodelCode d = encode(f_not(f_equal(t_zero(), t_zero())));
  std::string refuted =
      "(exists v1 (exists v2 (and (= (num " + d.to_decimal() +
      ") (eq-code v1 v2)) (= (val v1) (val v2)))))";
  CHECK(eval_nat(parse_formula(refuted)).is_false());
}

TEST_CASE("uninterpreted extras are an error, hooks interpret them") {
  Signature sig;
  sig.add("T", 1);
  FormulaPtr f = parse_formula("(REL T 0)", sig);
  Evaluator ev(sig);
  CHECK_THROWS_AS(ev.eval_sentence(f), EvalError);
  ev.set_rel_hook("T", [](const std::vector<BigNat>& args) {
    return args[0].is_zero();
  });
  CHECK(ev.eval_sentence(f).is_true());
}

TEST_CASE("finite structures: examples") {
  FiniteStructure m;
  m.universe = 2;
  m.relations["P"] = {{0}};
  Signature sig;
  sig.add("P", 1);
  CHECK(eval_fin(m, parse_formula("(exists v0 (REL P v0))", sig)));
  FiniteStructure empty;
  empty.universe = 2;
  empty.relations["P"] = {};
  CHECK(eval_fin(empty, parse_formula("(forall v0 (not (REL P v0)))", sig)));
  CHECK_THROWS_AS(eval_fin(m, parse_formula("(< 0 1)")), EvalError);
}

TEST_CASE("finite structures agree with an independent evaluator") {
  std::vector<RelSym> rels{{"P", 1}, {"Q", 2}};
  testutil::Gen gen(2718);
  for (int i = 0; i < 1000; ++i) {
    FiniteStructure m;
    m.universe = gen.u(1, 3);
    for (auto& r : rels) {
      auto& ext = m.relations[r.name];
      std::function<void(std::vector<std::size_t>&)> fill =
          [&](std::vector<std::size_t>& tup) {
            if (tup.size() == r.arity) {
              if (gen.coin()) ext.insert(tup);
              return;
            }
            for (std::size_t e = 0; e < m.universe; ++e) {
              tup.push_back(e);
              fill(tup);
              tup.pop_back();
            }
          };
      std::vector<std::size_t> tup;
      fill(tup);
    }
    FormulaPtr f = random_rel_formula(gen, rels, 2, gen.u(1, 3));
    for (auto v : free_vars(f)) f = f_forall(v, f);
    CHECK(eval_fin(m, f) == naive_fin(m, f, {}));
  }
}

TEST_CASE("finite structure json") {
  auto j = nlohmann::json::parse(R"({"universe": 3, "relations": {"P": [[0],[2]]}})");
  FiniteStructure m = FiniteStructure::from_json(j);
  CHECK(m.universe == 3);
  CHECK(m.relations.at("P").size() == 2);
  CHECK(FiniteStructure::from_json(m.to_json()).relations == m.relations);
  CHECK_THROWS(FiniteStructure::from_json(
      nlohmann::json::parse(R"({"universe": 1, "relations": {"P": [[4]]}})")));
}

TEST_CASE("truth oracle over codes") {
  CHECK(truth_oracle(encode(parse_formula("(= 0 0)"))).is_true());
  CHECK(truth_oracle(encode(parse_formula("(< 1 0)"))).is_false());
  CHECK_THROWS_AS(truth_oracle(BigNat{2}), EvalError);
  CHECK_THROWS_AS(truth_oracle(encode(parse_formula("(= v0 v0)"))), EvalError);
  testutil::Gen gen(11);
  testutil::GenOptions o;
  o.max_depth = 3;
  o.max_numeral = 3;
  for (int i = 0; i < 200; ++i) {
    FormulaPtr s = gen.sentence(o);
    GodelCode c = encode(s);
    CHECK(truth_oracle(c) == eval_nat(s));
  }
}

TEST_CASE("syntax oracle coherence with meta-level computation") {
  Signature sig;
  Evaluator ev(sig);
  auto& o = ev.oracles();
  for (std::uint64_t c = 1; c <= (1u << 14); ++c) {
    BigNat code{c};
    bool var = false, tmc = false, sent = false;
    std::size_t dpt = 0;
    bool is_formula = false;
    BigNat val{0};
    try {
      Decoded d = decode(code, sig);
      if (auto* t = std::get_if<TermPtr>(&d)) {
        var = (*t)->kind == TermKind::Var;
        if (vars_of_term(*t).empty() && detail::pure_arith_term(*t)) {
          tmc = true;
          Env env;
          val = ev.eval_term(*t, env);
        }
      } else {
        auto& f = std::get<FormulaPtr>(d);
        is_formula = true;
        sent = detail::pure_arith(f) && is_sentence(f);
        dpt = depth(f);
      }
    } catch (const CodeError&) {
    }
    CHECK(o.preds[kPredVar]({code}) == var);
    CHECK(o.preds[kPredTmc]({code}) == tmc);
    CHECK(o.preds[kPredSent]({code}) == sent);
    if (is_formula) CHECK(o.fns[kFnDpt]({code}) == BigNat{dpt});
    if (tmc) CHECK(o.fns[kFnVal]({code}) == val);
  }
}

TEST_CASE("universe-bounded evaluation decides unbounded quantifiers") {
  EvalOptions opt;
  opt.universe_bound = 16;
  Evaluator ev({}, opt);
  CHECK(ev.eval_sentence(parse_formula("(forall v0 (< v0 16))")).is_true());
  CHECK(ev.eval_sentence(parse_formula("(forall v0 (< v0 15))")).is_false());
  CHECK(ev.eval_sentence(parse_formula("(exists v0 (= v0 9))")).is_true());
}
