// truthlat: batch front end over the workbench. Emits the formula families,
// evaluates sentences in the standard model or in finite structures, encodes
// and decodes, drives the Boolean algebra and the lattice constructions,
// checks proofs, and runs the acceptance suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "truthlat/suites.hpp"

using namespace truthlat;

namespace {

std::string read_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw CLI::ValidationError("cannot read file: " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Signature parse_sig(const std::string& spec) {
  Signature sig;
  if (spec.empty()) return sig;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("signature spec must be name:arity[,...]");
    sig.add(item.substr(0, colon), std::stoull(item.substr(colon + 1)));
  }
  return sig;
}

// propositional input: p0, (not p), (and p q), (or p q)
PropPtr parse_prop(const std::string& text);

PropPtr parse_prop_node(const truthlat::detail::SexprNode& n) {
  if (n.is_atom) {
    if (n.atom.size() >= 2 && n.atom[0] == 'p')
      return p_var(std::stoull(n.atom.substr(1)));
    throw SyntaxError("expected a propositional variable pN", n.pos);
  }
  if (n.children.empty() || !n.children[0].is_atom)
    throw SyntaxError("expected a propositional formula", n.pos);
  const std::string& head = n.children[0].atom;
  if (head == "not" && n.children.size() == 2)
    return p_not(parse_prop_node(n.children[1]));
  if ((head == "and" || head == "or") && n.children.size() == 3) {
    PropPtr a = parse_prop_node(n.children[1]);
    PropPtr b = parse_prop_node(n.children[2]);
    return head == "and" ? p_and(a, b) : p_or(a, b);
  }
  throw SyntaxError("expected not/and/or", n.pos);
}

PropPtr parse_prop(const std::string& text) {
  truthlat::detail::SexprReader r(text);
  return parse_prop_node(r.read_all());
}

void print_output(const FormulaPtr& f, const Signature& sig, const std::string& format) {
  if (format == "sexpr") {
    std::cout << print_formula(f) << "\n";
  } else if (format == "json") {
    std::cout << formula_to_json(f).dump(2) << "\n";
  } else if (format == "code") {
    std::cout << encode(f, sig).to_decimal() << "\n";
  } else if (format == "code-hex") {
    std::cout << encode(f, sig).to_hex() << "\n";
  } else {
    throw CLI::ValidationError("unknown format: " + format);
  }
}

TruthDefinition named_truthdef(const std::string& name) {
  if (name == "ct-minus") return build_CTminus();
  if (name == "ct0") return build_CT0();
  if (name == "cut") return build_Cut();
  if (name.rfind("wct:", 0) == 0)
    return build_wCT(parse_formula(name.substr(4)));
  if (name.rfind("@", 0) == 0) {
    auto j = nlohmann::json::parse(read_arg(name));
    Signature sig;
    for (auto& r : j.at("extras"))
      sig.add(r.at("name").get<std::string>(), r.at("arity").get<std::size_t>());
    return {parse_formula(j.at("sentence").get<std::string>(), sig),
            parse_formula(j.at("theta").get<std::string>(), sig), sig};
  }
  throw CLI::ValidationError(
      "truth definition must be ct-minus|ct0|cut|wct:<phi>|@file.json");
}

AxiomRecognizer named_theory(const std::string& name, const Signature& sig) {
  if (name == "ea") return AxiomRecognizer::named(AxiomRecognizer::EA, sig);
  if (name == "pa") return AxiomRecognizer::named(AxiomRecognizer::PA, sig);
  if (name == "ct0")
    return AxiomRecognizer::from_list({build_CT0().sentence}, lt_signature());
  if (name.rfind("@", 0) == 0) {
    auto j = nlohmann::json::parse(read_arg(name));
    std::vector<FormulaPtr> axioms;
    for (auto& s : j) axioms.push_back(parse_formula(s.get<std::string>(), sig));
    return AxiomRecognizer::from_list(std::move(axioms), sig);
  }
  throw CLI::ValidationError("theory must be ea|pa|ct0|@file.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic workbench for truth definitions over arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "sexpr";
  app.add_option("--format", format, "sexpr|json|code|code-hex")->capture_default_str();

  // ---- emit ------------------------------------------------------------
  auto* emit = app.add_subcommand("emit", "emit a formula family member");
  emit->require_subcommand(1);
  unsigned level = 2;
  std::uint64_t index = 0;
  std::string phi_arg, psi_arg, sigma_arg, eta_arg, a_arg, theory_arg = "ea";
  std::optional<std::uint64_t> at_n;

  auto* em_tr = emit->add_subcommand("tr", "partial truth predicate Tr_n");
  em_tr->add_option("--n", level, "level")->required();
  auto* em_ctm = emit->add_subcommand("ct-minus", "the compositional sentence");
  auto* em_cta = emit->add_subcommand("ct-at", "depth-relativized CT-minus(x)");
  auto* em_wct = emit->add_subcommand("wct", "weakly compositional sentence on a cut");
  em_wct->add_option("--phi", phi_arg, "guard formula, one free variable")->required();
  auto* em_ct0 = emit->add_subcommand("ct0", "CT-minus plus global reflection");
  auto* em_cut = emit->add_subcommand("cut", "the cut sentence");
  auto* em_tb = emit->add_subcommand("tb", "disquotation scheme instance");
  em_tb->add_option("--index", index, "position in code order")->required();
  auto* em_utb = emit->add_subcommand("utb", "uniform disquotation instance");
  em_utb->add_option("--index", index, "position in code order")->required();
  auto* em_def = emit->add_subcommand("def", "definability scheme instance");
  em_def->add_option("--index", index, "position in code order")->required();
  auto* em_eps = emit->add_subcommand("epsilon", "the full-binary-tree family");
  em_eps->add_option("--k", level, "depth")->required();
  auto* em_con = emit->add_subcommand("con", "consistency statement");
  em_con->add_option("--theory", theory_arg, "ea|pa|ct0")->capture_default_str();
  em_con->add_option("--at", at_n, "instantiate Con_Th(x) at a numeral");
  auto* em_diag = emit->add_subcommand("diag", "diagonal fixed point of psi");
  em_diag->add_option("--psi", psi_arg, "formula, one free variable")->required();
  auto* em_pv = emit->add_subcommand("pv", "fixed-point sentence matrix for sigma");
  em_pv->add_option("--sigma", sigma_arg, "proper Sigma2 formula")->required();
  auto* em_flex = emit->add_subcommand("flexible", "Sigma_n flexible-formula skeleton");
  em_flex->add_option("--n", level, "class level")->required();
  em_flex->add_option("--theory", theory_arg, "ea|pa")->capture_default_str();
  auto* em_phia = emit->add_subcommand("phi-a", "embedding cut formula phi_a");
  em_phia->add_option("--a", a_arg, "propositional formula for the element")->required();
  em_phia->add_option("--eta", eta_arg, "eta formula, one free variable")->required();
  auto* em_theta = emit->add_subcommand("def-theta", "the definability truth formula");
  auto* em_utbct = emit->add_subcommand("utb-from-ct", "the T' predicate");

  // ---- eval ------------------------------------------------------------
  auto* ev_cmd = app.add_subcommand("eval", "evaluate a sentence in N");
  std::string formula_arg, sig_spec;
  std::uint64_t budget = 10000;
  std::optional<std::uint64_t> universe_bound;
  ev_cmd->add_option("--formula", formula_arg, "sexpr or @file")->required();
  ev_cmd->add_option("--budget", budget, "per-quantifier witness budget")
      ->capture_default_str();
  ev_cmd->add_option("--universe-bound", universe_bound,
                     "evaluate unbounded quantifiers over [0,N)");
  ev_cmd->add_option("--sig", sig_spec, "extra relations, name:arity[,...]");

  // ---- encode / decode ---------------------------------------------------
  auto* enc = app.add_subcommand("encode", "Godel code of a formula");
  enc->add_option("--formula", formula_arg, "sexpr or @file")->required();
  enc->add_option("--sig", sig_spec, "extra relations, name:arity[,...]");
  auto* dec = app.add_subcommand("decode", "formula of a Godel code");
  std::string code_arg;
  dec->add_option("--code", code_arg, "decimal code")->required();
  dec->add_option("--sig", sig_spec, "extra relations, name:arity[,...]");

  // ---- ba ----------------------------------------------------------------
  auto* ba = app.add_subcommand("ba", "the propositional Lindenbaum algebra");
  ba->require_subcommand(1);
  std::string b_arg;
  std::uint64_t bound = 4096;
  std::size_t length_cap = 30;
  ba->add_option("--length-cap", length_cap,
                 "payload bit cap for canonical search")->capture_default_str();
  auto* ba_canon = ba->add_subcommand("canon", "canonical representative");
  ba_canon->add_option("--a", a_arg, "propositional formula")->required();
  auto* ba_meet = ba->add_subcommand("meet", "meet of two elements");
  ba_meet->add_option("--a", a_arg)->required();
  ba_meet->add_option("--b", b_arg)->required();
  auto* ba_join = ba->add_subcommand("join", "join of two elements");
  ba_join->add_option("--a", a_arg)->required();
  ba_join->add_option("--b", b_arg)->required();
  auto* ba_neg = ba->add_subcommand("neg", "complement");
  ba_neg->add_option("--a", a_arg)->required();
  auto* ba_leq = ba->add_subcommand("leq", "order test");
  ba_leq->add_option("--a", a_arg)->required();
  ba_leq->add_option("--b", b_arg)->required();
  auto* ba_trace = ba->add_subcommand("ultra-trace", "greedy ultrafilter trace");
  ba_trace->add_option("--a", a_arg)->required();
  ba_trace->add_option("--b", b_arg)->required();
  ba_trace->add_option("--bound", bound, "sweep bound")->capture_default_str();
  auto* ba_member = ba->add_subcommand("ultra-member", "mu membership of a code");
  ba_member->add_option("--a", a_arg)->required();
  ba_member->add_option("--b", b_arg)->required();
  ba_member->add_option("--y", code_arg, "decimal code")->required();

  // ---- lattice -----------------------------------------------------------
  auto* lat = app.add_subcommand("lattice", "definability-lattice constructions");
  lat->require_subcommand(1);
  std::string alpha_arg, beta_arg, gamma_arg, dir = "fwd";
  std::string sigma_file, source_arg, target_arg, models_arg;
  auto* lat_inf = lat->add_subcommand("inf", "infimum of two truth definitions");
  lat_inf->add_option("--alpha", alpha_arg, "ct-minus|ct0|cut|wct:<phi>|@json")->required();
  lat_inf->add_option("--beta", beta_arg)->required();
  auto* lat_sup = lat->add_subcommand("sup", "supremum of two truth definitions");
  lat_sup->add_option("--alpha", alpha_arg)->required();
  lat_sup->add_option("--beta", beta_arg)->required();
  auto* lat_dist = lat->add_subcommand("dist", "distributivity witness translation");
  lat_dist->add_option("--dir", dir, "fwd|bwd")->capture_default_str();
  lat_dist->add_option("--alpha", alpha_arg)->required();
  lat_dist->add_option("--beta", beta_arg)->required();
  lat_dist->add_option("--gamma", gamma_arg)->required();
  auto* lat_check = lat->add_subcommand("check", "finite-model soundness of a translation");
  lat_check->add_option("--sigma", sigma_file, "@file with the translation JSON")->required();
  lat_check->add_option("--source", source_arg, "sexpr or @file")->required();
  lat_check->add_option("--target", target_arg, "sexpr or @file")->required();
  lat_check->add_option("--models", models_arg, "@file with a JSON array of structures")
      ->required();
  lat_check->add_option("--sig", sig_spec, "extra relations, name:arity[,...]");

  // ---- prove -------------------------------------------------------------
  auto* prove = app.add_subcommand("prove", "proof checking");
  prove->require_subcommand(1);
  auto* prove_check = prove->add_subcommand("check", "validate a proof object");
  std::string proof_arg;
  prove_check->add_option("proof", proof_arg, "@file with the proof JSON")->required();
  prove_check->add_option("--theory", theory_arg, "ea|pa|ct0|@axioms.json")
      ->capture_default_str();
  prove_check->add_option("--sig", sig_spec, "extra relations, name:arity[,...]");

  // ---- suite -------------------------------------------------------------
  auto* suite = app.add_subcommand("suite", "acceptance suites");
  std::string suite_name = "all";
  std::uint64_t seed = 20250808;
  bool json_report = false;
  suite->add_option("name", suite_name,
                    "tarski|compositional|coding|boolalg|ultrafilter|embedding|"
                    "lattice|metalogic|depth-constant|all")
      ->capture_default_str();
  suite->add_option("--seed", seed, "corpus seed")->capture_default_str();
  suite->add_flag("--json", json_report, "machine-readable report");

  // global flags like --format may trail the subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (auto* sub : a->get_subcommands({})) enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Signature sig = parse_sig(sig_spec);

    if (emit->parsed()) {
      Signature out_sig = lt_signature();
      FormulaPtr out;
      if (em_tr->parsed()) {
        out = build_Tr(level);
        out_sig = {};
      } else if (em_ctm->parsed()) {
        out = build_CTminus().sentence;
      } else if (em_cta->parsed()) {
        out = build_CTminus_at();
      } else if (em_wct->parsed()) {
        out = build_wCT(parse_formula(read_arg(phi_arg))).sentence;
      } else if (em_ct0->parsed()) {
        out = build_CT0().sentence;
      } else if (em_cut->parsed()) {
        out = build_Cut().sentence;
      } else if (em_tb->parsed()) {
        out = scheme_TB(index);
      } else if (em_utb->parsed()) {
        out = scheme_UTB(index);
      } else if (em_def->parsed()) {
        out = scheme_DEF(index);
        out_sig = Signature{};
        out_sig.add("D", 2);
      } else if (em_eps->parsed()) {
        out = build_epsilon(level);
        out_sig = {};
      } else if (em_con->parsed()) {
        AxiomRecognizer::Named th = theory_arg == "pa" ? AxiomRecognizer::PA
                                  : theory_arg == "ct0" ? AxiomRecognizer::CT0
                                                        : AxiomRecognizer::EA;
        out = at_n ? substitute(build_Con_at(th), 0, numeral(*at_n)) : build_Con(th);
        out_sig = {};
      } else if (em_diag->parsed()) {
        auto [delta, cert] = diagonal(parse_formula(read_arg(psi_arg)));
        std::cout << "; delta code: " << cert.delta_code.to_decimal() << "\n";
        std::cout << "; identity checked: " << (cert.identity_checked ? "yes" : "no")
                  << "\n";
        out = delta;
        out_sig = {};
      } else if (em_pv->parsed()) {
        PvResult r = pv_sentence(parse_formula(read_arg(sigma_arg)));
        std::cout << "; delta classifies as " << classify(r.delta).str() << "\n";
        std::cout << "; identity checked: " << (r.cert.identity_checked ? "yes" : "no")
                  << "\n";
        out = r.delta;
        out_sig = {};
      } else if (em_flex->parsed()) {
        AxiomRecognizer::Named th =
            theory_arg == "pa" ? AxiomRecognizer::PA : AxiomRecognizer::EA;
        auto [theta, cert] = flexible_skeleton(level, th);
        std::cout << "; classifies as " << classify(theta).str() << "\n";
        out = theta;
        out_sig = {};
      } else if (em_phia->parsed()) {
        BAContext ctx;
        Signature esig;
        esig.add("Eta", 1);
        FormulaPtr eta = parse_formula(read_arg(eta_arg), esig);
        out = phi_a(ctx, from_prop(parse_prop(a_arg)), eta);
        out_sig = esig;
      } else if (em_theta->parsed()) {
        out = def_theta();
        out_sig = Signature{};
        out_sig.add("D", 2);
      } else if (em_utbct->parsed()) {
        out = utb_from_ct();
      }
      print_output(out, out_sig, format);
      return 0;
    }

    if (ev_cmd->parsed()) {
      EvalOptions opt;
      opt.budget = budget;
      opt.universe_bound = universe_bound;
      auto ba_ctx = std::make_shared<BAContext>();
      Evaluator evaluator(sig, opt);
      install_standard_oracles(evaluator.oracles(), ba_ctx);
      Verdict v = evaluator.eval_sentence(parse_formula(read_arg(formula_arg), sig));
      std::cout << v.str() << "\n";
      return v.decided() ? 0 : 1;
    }

    if (enc->parsed()) {
      GodelCode c = encode(parse_formula(read_arg(formula_arg), sig), sig);
      std::cout << (format == "code-hex" ? c.to_hex() : c.to_decimal()) << "\n";
      return 0;
    }
    if (dec->parsed()) {
      Decoded d = decode(BigNat::from_decimal(code_arg), sig);
      if (auto* f = std::get_if<FormulaPtr>(&d))
        std::cout << print_formula(*f) << "\n";
      else
        std::cout << print_term(std::get<TermPtr>(d)) << "\n";
      return 0;
    }

    if (ba->parsed()) {
      BAContext ctx(length_cap);
      auto elem = [&](const std::string& s) { return from_prop(parse_prop(s)); };
      if (ba_canon->parsed()) {
        BigNat c = ctx.canonical_code(elem(a_arg));
        std::cout << print_prop(decode_prop(c)) << "\n" << c.to_decimal() << "\n";
      } else if (ba_meet->parsed() || ba_join->parsed()) {
        BElem r = ba_meet->parsed() ? meet(elem(a_arg), elem(b_arg))
                                    : join(elem(a_arg), elem(b_arg));
        std::cout << print_prop(ctx.canonical_rep(r)) << "\n";
      } else if (ba_neg->parsed()) {
        std::cout << print_prop(ctx.canonical_rep(complement(elem(a_arg)))) << "\n";
      } else if (ba_leq->parsed()) {
        std::cout << (leq(elem(a_arg), elem(b_arg)) ? "true" : "false") << "\n";
      } else if (ba_trace->parsed()) {
        UltraTrace t = ultra_trace(ctx, elem(a_arg), elem(b_arg), bound);
        // print the distinct refinement steps
        for (std::size_t z = 0; z + 1 < t.s.size(); ++z) {
          if (z > 0 && t.s[z].factors == t.s[z - 1].factors) continue;
          std::cout << "s_" << z << " =";
          for (auto& f : t.s[z].factors)
            std::cout << " [" << print_prop(ctx.canonical_rep(*f)) << "]";
          std::cout << "\n";
        }
      } else if (ba_member->parsed()) {
        bool m = mu(ctx, elem(a_arg), elem(b_arg), BigNat::from_decimal(code_arg));
        std::cout << (m ? "true" : "false") << "\n";
      }
      return 0;
    }

    if (lat->parsed()) {
      if (lat_inf->parsed() || lat_sup->parsed()) {
        TruthDefinition a = named_truthdef(alpha_arg);
        TruthDefinition b = named_truthdef(beta_arg);
        TruthDefinition r = lat_inf->parsed() ? inf_op(a, b) : sup_op(a, b);
        std::cout << "; sentence\n";
        print_output(r.sentence, r.sig, format);
        std::cout << "; theta\n";
        print_output(r.theta, r.sig, format);
      } else if (lat_dist->parsed()) {
        TruthDefinition a = named_truthdef(alpha_arg);
        TruthDefinition b = named_truthdef(beta_arg);
        TruthDefinition g = named_truthdef(gamma_arg);
        Translation tr = dir == "bwd" ? dist_witness_bwd(a, b, g)
                                      : dist_witness_fwd(a, b, g);
        nlohmann::json out = nlohmann::json::object();
        for (auto& [name, img] : tr.images) {
          out[name] = {{"vars", img.vars}, {"formula", print_formula(img.formula)}};
        }
        std::cout << out.dump(2) << "\n";
      } else if (lat_check->parsed()) {
        auto j = nlohmann::json::parse(read_arg(sigma_file));
        Translation tr;
        tr.source = sig;
        tr.target = sig;
        for (auto& [name, imgj] : j.at("map").items()) {
          TranslationImage img;
          img.vars = imgj.at("vars").get<std::vector<std::size_t>>();
          img.formula = parse_formula(imgj.at("formula").get<std::string>(), sig);
          tr.images[name] = img;
        }
        std::vector<FiniteStructure> models;
        for (auto& mj : nlohmann::json::parse(read_arg(models_arg)))
          models.push_back(FiniteStructure::from_json(mj));
        SoundnessReport r = soundness_check(
            tr, parse_formula(read_arg(source_arg), sig),
            parse_formula(read_arg(target_arg), sig), models);
        nlohmann::json out{{"models_checked", r.models_checked},
                           {"models_of_target", r.models_of_target},
                           {"counterexamples", r.counterexamples}};
        std::cout << out.dump(2) << "\n";
        return r.ok() ? 0 : 1;
      }
      return 0;
    }

    if (prove->parsed()) {
      ProofObject p = proof_from_json(nlohmann::json::parse(read_arg(proof_arg)), sig);
      AxiomRecognizer th = named_theory(theory_arg, sig);
      bool ok = proof_check(p, th);
      std::cout << (ok ? "valid" : "invalid") << "\n";
      return ok ? 0 : 1;
    }

    if (suite->parsed()) {
      std::vector<suites::SuiteReport> reports;
      if (suite_name == "all")
        reports = suites::run_all_suites(seed);
      else
        reports.push_back(suites::run_suite(suite_name, seed));
      bool ok = true;
      nlohmann::json out = nlohmann::json::array();
      for (auto& r : reports) {
        ok &= r.ok();
        if (json_report)
          out.push_back(r.to_json());
        else
          std::cout << r.summary() << "\n";
      }
      if (json_report) std::cout << out.dump(2) << "\n";
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
