#include <doctest.h>

#include "test_util.hpp"
#include "truthlat/formula.hpp"
#include "truthlat/godel.hpp"
#include "truthlat/sexpr.hpp"

using namespace truthlat;

TEST_CASE("depth recursion") {
  FormulaPtr atom = f_equal(t_zero(), t_zero());
  CHECK(depth(atom) == 0);
  CHECK(depth(f_not(atom)) == 1);
  CHECK(depth(f_exists(0, atom)) == 1);
  FormulaPtr other = f_equal(t_zero(), t_one());
  CHECK(depth(f_and(atom, other)) == 1);
  CHECK(depth(f_and(f_not(atom), other)) == 2);
  CHECK(depth(f_implies(atom, f_or(atom, f_not(other)))) == 3);
}

TEST_CASE("free variables") {
  FormulaPtr f = f_exists(0, f_equal(t_var(0), t_var(1)));
  CHECK(free_vars(f) == std::set<std::size_t>{1});
  CHECK(free_vars(f_equal(t_zero(), t_zero())).empty());
  FormulaPtr g = f_less(t_var(0), t_add(t_var(0), t_one()));
  CHECK(free_vars(g) == std::set<std::size_t>{0});
  CHECK(is_sentence(f_forall(0, g)));
}

TEST_CASE("substitution") {
  // direct replacement
  FormulaPtr f = f_equal(t_var(0), t_var(1));
  FormulaPtr r = substitute(f, 0, numeral(2));
  CHECK(print_formula(r) == "(= (+ (+ 0 1) 1) v1)");
  // forced renaming to avoid capture
  FormulaPtr g = f_exists(0, f_equal(t_var(0), t_var(1)));
  FormulaPtr rg = substitute(g, 1, t_var(0));
  CHECK(print_formula(rg) == "(exists v2 (= v2 v0))");
  // no free occurrence
  FormulaPtr h = f_exists(0, f_equal(t_var(0), t_var(0)));
  CHECK(substitute(h, 0, t_zero()) == h);
}

TEST_CASE("substitution properties") {
  testutil::Gen gen(1234);
  testutil::GenOptions o;
  o.max_depth = 4;
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = gen.formula(o, o.max_depth);
    std::size_t v = gen.u(0, 3);
    // numeral substitution never changes depth
    CHECK(depth(substitute(f, v, numeral(gen.u(0, 5)))) == depth(f));
    // substitution is identity in absent variables
    if (!free_vars(f).count(v))
      CHECK(equal_formula(substitute(f, v, t_add(t_one(), t_one())), f));
  }
}

TEST_CASE("classification") {
  Signature sig;
  // bounded existential is Delta0
  FormulaPtr b = parse_formula("(exists v0 (and (< v0 v1) (= v0 v0)))", sig);
  CHECK(classify(b).str() == "Delta0");
  CHECK(classify(parse_formula("(exists v0 (= v0 v0))")).str() == "Sigma(1)");
  CHECK(classify(parse_formula("(forall v0 (exists v1 (< v0 v1)))")).str() == "Pi(2)");
  // sugar expands to the recognized patterns
  CHECK(classify(parse_formula("(existsb v0 5 (= v0 1))")).str() == "Delta0");
  CHECK(classify(parse_formula("(forallb v0 5 (= v0 1))")).str() == "Delta0");
  // absorbing repeated quantifiers of the same kind
  CHECK(classify(parse_formula("(exists v0 (exists v1 (= v0 v1)))")).str() == "Sigma(1)");
  // boolean combinations beyond Delta0 stay unclassified
  CHECK(classify(parse_formula("(and (exists v0 (= v0 v0)) (= 0 0))")).str() ==
        "Unclassified");
  CHECK(classify(parse_formula("(not (exists v0 (= v0 v0)))")).str() == "Unclassified");
  // Sigma(0) = Pi(0) = Delta0
  CHECK(classify(parse_formula("(= 0 0)")) == SyntacticClass{SyntacticClass::Delta0, 0});
}

TEST_CASE("parse and print round-trips") {
  CHECK(print_formula(parse_formula("(= 0 0)")) == "(= 0 0)");
  CHECK(print_formula(f_exists(0, f_less(t_var(0), t_one()))) == "(exists v0 (< v0 1))");
  // iff is declared sugar
  FormulaPtr iff = parse_formula("(iff (= 0 0) (= 0 1))");
  CHECK(iff->kind == FormulaKind::And);
  CHECK(iff->kids[0]->kind == FormulaKind::Implies);
  CHECK(iff->kids[1]->kind == FormulaKind::Implies);

  testutil::Gen gen(99);
  testutil::GenOptions o;
  o.max_depth = 8;
  o.num_vars = 4;
  for (int i = 0; i < 10000; ++i) {
    FormulaPtr f = gen.formula(o, gen.u(0, 8));
    FormulaPtr back = parse_formula(print_formula(f));
    CHECK(equal_formula(f, back));
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("(= 0"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("(= 0 0) junk"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("(frobnicate 0 0)"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("(REL T 0)"), SyntaxError);  // unknown relation
  Signature sig;
  sig.add("T", 1);
  CHECK_THROWS_AS(parse_formula("(REL T 0 0)", sig), SyntaxError);  // arity
  CHECK(parse_formula("(REL T 0)", sig)->kind == FormulaKind::Rel);
  try {
    parse_formula("(and (= 0 0) ?)");
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.pos > 0);
  }
}

TEST_CASE("json ast round-trip") {
  Signature sig;
  sig.add("T", 1);
  testutil::Gen gen(7);
  testutil::GenOptions o;
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = gen.formula(o, 4);
    CHECK(equal_formula(formula_from_json(formula_to_json(f)), f));
  }
  FormulaPtr t = parse_formula("(REL T (num 12345678901234567890))", sig);
  CHECK(equal_formula(formula_from_json(formula_to_json(t)), t));
}

TEST_CASE("signature invariants") {
  Signature sig;
  sig.add("T", 1);
  CHECK_THROWS(sig.add("T", 2));       // duplicate
  CHECK_THROWS(sig.add("exists", 1));  // builtin clash
  CHECK_THROWS(sig.add("val", 1));     // reserved clash
  CHECK_THROWS(sig.add("Q", 0));       // arity >= 1
  sig.add("D", 2);
  CHECK(sig.id_of("T") == 0);
  CHECK(sig.id_of("D") == 1);
  FormulaPtr bad = f_rel("T", {t_zero(), t_zero()});
  CHECK_THROWS(check_signature(bad, sig));
}
