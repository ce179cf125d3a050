#pragma once

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "truthlat/formula.hpp"

namespace truthlat {

// S-expression grammar (print o parse = id on ASTs, parse o print = id on
// normalized text):
//
//   formula := (= t t) | (< t t) | (REL name t...) | (PredName t...)
//            | (not f) | (and f f) | (or f f) | (-> f f)
//            | (exists vN f) | (forall vN f)
//   sugar   := (iff f f) | (existsb vN t f) | (forallb vN t f)
//   term    := 0 | 1 | (+ t t) | (* t t) | vN | (num N) | (fname t...)
//   sugar   := a decimal literal k, expanding to the unary numeral of k
//
// iff expands to a conjunction of implications; bounded quantifiers expand to
// (exists vN (and (< vN t) f)) and (forall vN (-> (< vN t) f)).

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos(pos) {}
  std::size_t pos;
};

// --------------------------------------------------------------------------
// Printing

inline void print_term_to(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Zero: out += '0'; return;
    case TermKind::One: out += '1'; return;
    case TermKind::Var: out += 'v'; out += std::to_string(t->var); return;
    case TermKind::Num:
      out += "(num ";
      out += t->value.to_decimal();
      out += ')';
      return;
    case TermKind::Add:
    case TermKind::Mul:
      out += t->kind == TermKind::Add ? "(+" : "(*";
      for (auto& a : t->args) { out += ' '; print_term_to(a, out); }
      out += ')';
      return;
    case TermKind::App:
      out += '(';
      out += kReservedFns[t->fn].name;
      for (auto& a : t->args) { out += ' '; print_term_to(a, out); }
      out += ')';
      return;
  }
}

inline std::string print_term(const TermPtr& t) {
  std::string s;
  print_term_to(t, s);
  return s;
}

inline void print_formula_to(const FormulaPtr& f, std::string& out) {
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Less:
      out += f->kind == FormulaKind::Equal ? "(=" : "(<";
      for (auto& t : f->terms) { out += ' '; print_term_to(t, out); }
      out += ')';
      return;
    case FormulaKind::Rel:
      out += "(REL ";
      out += f->rel;
      for (auto& t : f->terms) { out += ' '; print_term_to(t, out); }
      out += ')';
      return;
    case FormulaKind::Pred:
      out += '(';
      out += kReservedPreds[f->pred].name;
      for (auto& t : f->terms) { out += ' '; print_term_to(t, out); }
      out += ')';
      return;
    case FormulaKind::Not:
      out += "(not ";
      print_formula_to(f->kids[0], out);
      out += ')';
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      out += f->kind == FormulaKind::And ? "(and"
           : f->kind == FormulaKind::Or ? "(or" : "(->";
      for (auto& k : f->kids) { out += ' '; print_formula_to(k, out); }
      out += ')';
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += f->kind == FormulaKind::Exists ? "(exists v" : "(forall v";
      out += std::to_string(f->var);
      out += ' ';
      print_formula_to(f->kids[0], out);
      out += ')';
      return;
  }
}

inline std::string print_formula(const FormulaPtr& f) {
  std::string s;
  print_formula_to(f, s);
  return s;
}

// --------------------------------------------------------------------------
// Parsing

namespace detail {

struct SexprNode {
  // atom when children empty and leaf set; otherwise a list
  std::string atom;
  bool is_atom = false;
  std::vector<SexprNode> children;
  std::size_t pos = 0;
};

class SexprReader {
public:
  explicit SexprReader(std::string_view text) : text_(text) {}

  SexprNode read_all() {
    SexprNode n = read();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("trailing input", pos_);
    return n;
  }

private:
  SexprNode read() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    SexprNode n;
    n.pos = pos_;
    if (text_[pos_] == '(') {
      ++pos_;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unclosed '('", n.pos);
        if (text_[pos_] == ')') { ++pos_; break; }
        n.children.push_back(read());
      }
      return n;
    }
    if (text_[pos_] == ')') throw SyntaxError("unexpected ')'", pos_);
    n.is_atom = true;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      n.atom += text_[pos_++];
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline bool parse_var_atom(const std::string& a, std::size_t& idx) {
  if (a.size() < 2 || a[0] != 'v') return false;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(a[i]))) return false;
  idx = std::stoull(a.substr(1));
  return true;
}

inline bool all_digits(const std::string& a) {
  if (a.empty()) return false;
  for (char c : a)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline TermPtr unary_numeral(std::uint64_t n);

inline TermPtr parse_term_node(const SexprNode& n, const Signature& sig);
inline FormulaPtr parse_formula_node(const SexprNode& n, const Signature& sig);

inline TermPtr parse_term_node(const SexprNode& n, const Signature& sig) {
  if (n.is_atom) {
    if (n.atom == "0") return t_zero();
    if (n.atom == "1") return t_one();
    std::size_t idx;
    if (parse_var_atom(n.atom, idx)) return t_var(idx);
    if (all_digits(n.atom)) {
      std::uint64_t k = std::stoull(n.atom);
      if (k > 100000) throw SyntaxError("unary numeral literal too large, use (num N)", n.pos);
      return unary_numeral(k);
    }
    throw SyntaxError("unknown term atom '" + n.atom + "'", n.pos);
  }
  if (n.children.empty() || !n.children[0].is_atom)
    throw SyntaxError("expected term", n.pos);
  const std::string& head = n.children[0].atom;
  auto args = [&](std::size_t want) {
    if (n.children.size() != want + 1)
      throw SyntaxError("arity mismatch for '" + head + "'", n.pos);
    std::vector<TermPtr> ts;
    for (std::size_t i = 1; i < n.children.size(); ++i)
      ts.push_back(parse_term_node(n.children[i], sig));
    return ts;
  };
  if (head == "+") { auto a = args(2); return t_add(a[0], a[1]); }
  if (head == "*") { auto a = args(2); return t_mul(a[0], a[1]); }
  if (head == "num") {
    if (n.children.size() != 2 || !n.children[1].is_atom || !all_digits(n.children[1].atom))
      throw SyntaxError("num expects one decimal argument", n.pos);
    return t_num(BigNat::from_decimal(n.children[1].atom));
  }
  if (auto fid = reserved_fn_id(head)) return t_app(*fid, args(kReservedFns[*fid].arity));
  throw SyntaxError("unknown term head '" + head + "'", n.pos);
}

inline TermPtr unary_numeral(std::uint64_t n) {
  TermPtr t = t_zero();
  if (n == 0) return t;
  for (std::uint64_t i = 0; i < n; ++i) t = t_add(t, t_one());
  return t;
}

inline FormulaPtr parse_formula_node(const SexprNode& n, const Signature& sig) {
  if (n.is_atom) throw SyntaxError("expected formula", n.pos);
  if (n.children.empty() || !n.children[0].is_atom)
    throw SyntaxError("expected formula head", n.pos);
  const std::string& head = n.children[0].atom;
  auto kid_f = [&](std::size_t i) { return parse_formula_node(n.children[i], sig); };
  auto kid_t = [&](std::size_t i) { return parse_term_node(n.children[i], sig); };
  auto expect = [&](std::size_t want) {
    if (n.children.size() != want + 1)
      throw SyntaxError("arity mismatch for '" + head + "'", n.pos);
  };

  if (head == "=") { expect(2); return f_equal(kid_t(1), kid_t(2)); }
  if (head == "<") { expect(2); return f_less(kid_t(1), kid_t(2)); }
  if (head == "not") { expect(1); return f_not(kid_f(1)); }
  if (head == "and") { expect(2); return f_and(kid_f(1), kid_f(2)); }
  if (head == "or") { expect(2); return f_or(kid_f(1), kid_f(2)); }
  if (head == "->") { expect(2); return f_implies(kid_f(1), kid_f(2)); }
  if (head == "iff") { expect(2); return f_iff(kid_f(1), kid_f(2)); }
  if (head == "exists" || head == "forall" || head == "existsb" || head == "forallb") {
    bool bounded = head == "existsb" || head == "forallb";
    bool ex = head == "exists" || head == "existsb";
    expect(bounded ? 3 : 2);
    std::size_t idx;
    if (!n.children[1].is_atom || !parse_var_atom(n.children[1].atom, idx))
      throw SyntaxError("expected variable after '" + head + "'", n.children[1].pos);
    if (!bounded)
      return f_quant(ex ? FormulaKind::Exists : FormulaKind::Forall, idx, kid_f(2));
    TermPtr bound = kid_t(2);
    FormulaPtr body = kid_f(3);
    FormulaPtr guard = f_less(t_var(idx), bound);
    return ex ? f_exists(idx, f_and(guard, body))
              : f_forall(idx, f_implies(guard, body));
  }
  if (head == "REL") {
    if (n.children.size() < 2 || !n.children[1].is_atom)
      throw SyntaxError("REL expects a relation name", n.pos);
    const std::string& name = n.children[1].atom;
    const RelSym* r = sig.find(name);
    if (!r) throw SyntaxError("unknown relation '" + name + "'", n.children[1].pos);
    if (n.children.size() != r->arity + 2)
      throw SyntaxError("arity mismatch for relation '" + name + "'", n.pos);
    std::vector<TermPtr> ts;
    for (std::size_t i = 2; i < n.children.size(); ++i) ts.push_back(kid_t(i));
    return f_rel(name, std::move(ts));
  }
  if (auto pid = reserved_pred_id(head)) {
    expect(kReservedPreds[*pid].arity);
    std::vector<TermPtr> ts;
    for (std::size_t i = 1; i < n.children.size(); ++i) ts.push_back(kid_t(i));
    return f_pred(*pid, std::move(ts));
  }
  // bare extra-relation application, (T x), accepted as input convenience
  if (const RelSym* r = sig.find(head)) {
    expect(r->arity);
    std::vector<TermPtr> ts;
    for (std::size_t i = 1; i < n.children.size(); ++i) ts.push_back(kid_t(i));
    return f_rel(head, std::move(ts));
  }
  throw SyntaxError("unknown formula head '" + head + "'", n.pos);
}

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text, const Signature& sig = {}) {
  detail::SexprReader r(text);
  return detail::parse_formula_node(r.read_all(), sig);
}

inline TermPtr parse_term(std::string_view text, const Signature& sig = {}) {
  detail::SexprReader r(text);
  return detail::parse_term_node(r.read_all(), sig);
}

// --------------------------------------------------------------------------
// JSON AST, mirroring the constructors with a "node" tag field.

inline nlohmann::json term_to_json(const TermPtr& t) {
  using nlohmann::json;
  switch (t->kind) {
    case TermKind::Zero: return json{{"node", "zero"}};
    case TermKind::One: return json{{"node", "one"}};
    case TermKind::Var: return json{{"node", "var"}, {"index", t->var}};
    case TermKind::Num: return json{{"node", "num"}, {"value", t->value.to_decimal()}};
    case TermKind::Add:
    case TermKind::Mul: {
      json j{{"node", t->kind == TermKind::Add ? "add" : "mul"}};
      j["left"] = term_to_json(t->args[0]);
      j["right"] = term_to_json(t->args[1]);
      return j;
    }
    case TermKind::App: {
      json j{{"node", "app"}, {"fn", std::string(kReservedFns[t->fn].name)}};
      json args = json::array();
      for (auto& a : t->args) args.push_back(term_to_json(a));
      j["args"] = args;
      return j;
    }
  }
  return {};
}

inline nlohmann::json formula_to_json(const FormulaPtr& f) {
  using nlohmann::json;
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Less:
      return json{{"node", f->kind == FormulaKind::Equal ? "equal" : "less"},
                  {"left", term_to_json(f->terms[0])},
                  {"right", term_to_json(f->terms[1])}};
    case FormulaKind::Rel:
    case FormulaKind::Pred: {
      json j{{"node", f->kind == FormulaKind::Rel ? "rel" : "pred"}};
      j["name"] = f->kind == FormulaKind::Rel
                      ? f->rel
                      : std::string(kReservedPreds[f->pred].name);
      json args = json::array();
      for (auto& t : f->terms) args.push_back(term_to_json(t));
      j["args"] = args;
      return j;
    }
    case FormulaKind::Not:
      return json{{"node", "not"}, {"body", formula_to_json(f->kids[0])}};
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return json{{"node", f->kind == FormulaKind::And ? "and"
                          : f->kind == FormulaKind::Or ? "or" : "implies"},
                  {"left", formula_to_json(f->kids[0])},
                  {"right", formula_to_json(f->kids[1])}};
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return json{{"node", f->kind == FormulaKind::Exists ? "exists" : "forall"},
                  {"var", f->var},
                  {"body", formula_to_json(f->kids[0])}};
  }
  return {};
}

inline TermPtr term_from_json(const nlohmann::json& j) {
  const std::string node = j.at("node").get<std::string>();
  if (node == "zero") return t_zero();
  if (node == "one") return t_one();
  if (node == "var") return t_var(j.at("index").get<std::size_t>());
  if (node == "num") return t_num(BigNat::from_decimal(j.at("value").get<std::string>()));
  if (node == "add") return t_add(term_from_json(j.at("left")), term_from_json(j.at("right")));
  if (node == "mul") return t_mul(term_from_json(j.at("left")), term_from_json(j.at("right")));
  if (node == "app") {
    auto fid = reserved_fn_id(j.at("fn").get<std::string>());
    if (!fid) throw std::invalid_argument("unknown function in JSON term");
    std::vector<TermPtr> args;
    for (auto& a : j.at("args")) args.push_back(term_from_json(a));
    return t_app(*fid, std::move(args));
  }
  throw std::invalid_argument("bad JSON term node: " + node);
}

inline FormulaPtr formula_from_json(const nlohmann::json& j) {
  const std::string node = j.at("node").get<std::string>();
  if (node == "equal") return f_equal(term_from_json(j.at("left")), term_from_json(j.at("right")));
  if (node == "less") return f_less(term_from_json(j.at("left")), term_from_json(j.at("right")));
  if (node == "rel" || node == "pred") {
    std::vector<TermPtr> args;
    for (auto& a : j.at("args")) args.push_back(term_from_json(a));
    const std::string name = j.at("name").get<std::string>();
    if (node == "pred") {
      auto pid = reserved_pred_id(name);
      if (!pid) throw std::invalid_argument("unknown predicate in JSON formula");
      return f_pred(*pid, std::move(args));
    }
    return f_rel(name, std::move(args));
  }
  if (node == "not") return f_not(formula_from_json(j.at("body")));
  if (node == "and") return f_and(formula_from_json(j.at("left")), formula_from_json(j.at("right")));
  if (node == "or") return f_or(formula_from_json(j.at("left")), formula_from_json(j.at("right")));
  if (node == "implies") return f_implies(formula_from_json(j.at("left")), formula_from_json(j.at("right")));
  if (node == "exists" || node == "forall")
    return f_quant(node == "exists" ? FormulaKind::Exists : FormulaKind::Forall,
                   j.at("var").get<std::size_t>(), formula_from_json(j.at("body")));
  throw std::invalid_argument("bad JSON formula node: " + node);
}

}  // namespace truthlat
