#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "truthlat/formula.hpp"

namespace truthlat {

// Godel coding. A term, formula or sequence is serialized in Polish prefix
// order to a token stream; each token is emitted as the Elias-gamma code of
// its ID, followed for payload tokens by the gamma code of payload+1. The
// code is the natural number whose binary expansion is "1" ++ the stream
// bits (self-framing, so every code is >= 1 and begins with 1).
//
// Token table (bit-exact, see docs/coding.md):
//   1..12  fixed symbols  0 1 + * < = not and or -> exists forall
//   13     VAR   + gamma(index+1)
//   14     REL   + gamma(relID+1)        relID = position in the signature
//   15     FUN   + gamma(fnID+1)         reserved functions, reserved.hpp
//   16     NUM   + gamma(value+1)        compact numeral literal
//   17     PRED  + gamma(predID+1)       reserved predicates, reserved.hpp
//
// The propositional coding used by the Lindenbaum algebra is separate:
//   1 not, 2 and, 3 or, 4 PVAR + gamma(index+1).

class CodeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using GodelCode = BigNat;

namespace tok {
inline constexpr std::uint64_t Zero = 1, One = 2, Add = 3, Mul = 4, Less = 5,
                               Equal = 6, Not = 7, And = 8, Or = 9, Implies = 10,
                               Exists = 11, Forall = 12, Var = 13, Rel = 14,
                               Fun = 15, Num = 16, Pred = 17;
inline constexpr std::uint64_t PNot = 1, PAnd = 2, POr = 3, PVar = 4;
}  // namespace tok

// --------------------------------------------------------------------------
// Elias-gamma bit streams

class BitWriter {
public:
  void put_gamma_u64(std::uint64_t n) {
    if (n == 0) throw CodeError("gamma code undefined for 0");
    int len = 0;
    for (std::uint64_t v = n; v; v >>= 1) ++len;
    for (int i = 0; i < len - 1; ++i) bits_.push_back(false);
    for (int i = len - 1; i >= 0; --i) bits_.push_back((n >> i) & 1);
  }

  void put_gamma(const BigNat& n) {
    if (n.is_zero()) throw CodeError("gamma code undefined for 0");
    std::size_t len = n.bit_length();
    for (std::size_t i = 0; i + 1 < len; ++i) bits_.push_back(false);
    for (std::size_t i = len; i-- > 0;) bits_.push_back(n.bit(i));
  }

  // Framed value: "1" ++ bits.
  BigNat finish() const {
    std::vector<bool> framed;
    framed.reserve(bits_.size() + 1);
    framed.push_back(true);
    framed.insert(framed.end(), bits_.begin(), bits_.end());
    return BigNat::from_bits(framed);
  }

  std::size_t size() const { return bits_.size(); }

private:
  std::vector<bool> bits_;
};

class BitReader {
public:
  // Strips the frame bit; fails if the code is 0 (no leading 1).
  explicit BitReader(const BigNat& code) {
    if (code.is_zero()) throw CodeError("not a code: zero");
    bits_ = code.to_bits();
    pos_ = 1;  // skip frame
  }

  BigNat get_gamma() {
    std::size_t zeros = 0;
    while (pos_ < bits_.size() && !bits_[pos_]) { ++zeros; ++pos_; }
    if (pos_ >= bits_.size())
      throw CodeError("not a code: truncated gamma prefix");
    if (pos_ + zeros + 1 > bits_.size())
      throw CodeError("not a code: truncated gamma payload");
    std::vector<bool> v(bits_.begin() + static_cast<std::ptrdiff_t>(pos_),
                        bits_.begin() + static_cast<std::ptrdiff_t>(pos_ + zeros + 1));
    pos_ += zeros + 1;
    return BigNat::from_bits(v);
  }

  std::uint64_t get_gamma_u64(std::uint64_t max) {
    BigNat n = get_gamma();
    if (!n.fits_u64() || n.to_u64() > max)
      throw CodeError("not a code: payload out of range");
    return n.to_u64();
  }

  bool exhausted() const { return pos_ == bits_.size(); }

private:
  std::vector<bool> bits_;
  std::size_t pos_ = 0;
};

// --------------------------------------------------------------------------
// Encoding

namespace detail {
inline void emit_term(const TermPtr& t, const Signature& sig, BitWriter& w) {
  switch (t->kind) {
    case TermKind::Zero: w.put_gamma_u64(tok::Zero); return;
    case TermKind::One: w.put_gamma_u64(tok::One); return;
    case TermKind::Add: w.put_gamma_u64(tok::Add); break;
    case TermKind::Mul: w.put_gamma_u64(tok::Mul); break;
    case TermKind::Var:
      w.put_gamma_u64(tok::Var);
      w.put_gamma_u64(t->var + 1);
      return;
    case TermKind::Num: {
      w.put_gamma_u64(tok::Num);
      BigNat p = t->value;
      ++p;
      w.put_gamma(p);
      return;
    }
    case TermKind::App:
      w.put_gamma_u64(tok::Fun);
      w.put_gamma_u64(static_cast<std::uint64_t>(t->fn) + 1);
      break;
  }
  for (auto& a : t->args) emit_term(a, sig, w);
}

inline void emit_formula(const FormulaPtr& f, const Signature& sig, BitWriter& w) {
  switch (f->kind) {
    case FormulaKind::Equal: w.put_gamma_u64(tok::Equal); break;
    case FormulaKind::Less: w.put_gamma_u64(tok::Less); break;
    case FormulaKind::Rel:
      w.put_gamma_u64(tok::Rel);
      w.put_gamma_u64(sig.id_of(f->rel) + 1);
      break;
    case FormulaKind::Pred:
      w.put_gamma_u64(tok::Pred);
      w.put_gamma_u64(static_cast<std::uint64_t>(f->pred) + 1);
      break;
    case FormulaKind::Not: w.put_gamma_u64(tok::Not); break;
    case FormulaKind::And: w.put_gamma_u64(tok::And); break;
    case FormulaKind::Or: w.put_gamma_u64(tok::Or); break;
    case FormulaKind::Implies: w.put_gamma_u64(tok::Implies); break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      w.put_gamma_u64(f->kind == FormulaKind::Exists ? tok::Exists : tok::Forall);
      w.put_gamma_u64(f->var + 1);
      break;
  }
  for (auto& t : f->terms) emit_term(t, sig, w);
  for (auto& k : f->kids) emit_formula(k, sig, w);
}
}  // namespace detail

inline GodelCode encode_term(const TermPtr& t, const Signature& sig = {}) {
  BitWriter w;
  detail::emit_term(t, sig, w);
  return w.finish();
}

inline GodelCode encode(const FormulaPtr& f, const Signature& sig = {}) {
  check_signature(f, sig);
  BitWriter w;
  detail::emit_formula(f, sig, w);
  return w.finish();
}

// --------------------------------------------------------------------------
// Decoding

using Decoded = std::variant<TermPtr, FormulaPtr>;

namespace detail {

inline constexpr std::uint64_t kMaxVarIndex = 1u << 24;

inline TermPtr read_term(BitReader& r, const Signature& sig);

inline FormulaPtr read_formula(BitReader& r, const Signature& sig) {
  std::uint64_t t = r.get_gamma_u64(tok::Pred);
  switch (t) {
    case tok::Equal: {
      TermPtr a = read_term(r, sig);
      TermPtr b = read_term(r, sig);
      return f_equal(a, b);
    }
    case tok::Less: {
      TermPtr a = read_term(r, sig);
      TermPtr b = read_term(r, sig);
      return f_less(a, b);
    }
    case tok::Rel: {
      std::uint64_t id = r.get_gamma_u64(sig.extras().size());
      if (id == 0 || id > sig.extras().size())
        throw CodeError("not a code: relation id out of signature");
      const RelSym& rs = sig.extras()[id - 1];
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < rs.arity; ++i) args.push_back(read_term(r, sig));
      return f_rel(rs.name, std::move(args));
    }
    case tok::Pred: {
      std::uint64_t id = r.get_gamma_u64(kNumReservedPreds);
      if (id == 0) throw CodeError("not a code: predicate id");
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < kReservedPreds[id - 1].arity; ++i)
        args.push_back(read_term(r, sig));
      return f_pred(static_cast<int>(id - 1), std::move(args));
    }
    case tok::Not: return f_not(read_formula(r, sig));
    case tok::And:
    case tok::Or:
    case tok::Implies: {
      FormulaPtr a = read_formula(r, sig);
      FormulaPtr b = read_formula(r, sig);
      return f_binary(t == tok::And ? FormulaKind::And
                      : t == tok::Or ? FormulaKind::Or : FormulaKind::Implies,
                      a, b);
    }
    case tok::Exists:
    case tok::Forall: {
      std::uint64_t v = r.get_gamma_u64(kMaxVarIndex);
      return f_quant(t == tok::Exists ? FormulaKind::Exists : FormulaKind::Forall,
                     v - 1, read_formula(r, sig));
    }
    default:
      throw CodeError("not a code: formula token expected");
  }
}

inline TermPtr read_term(BitReader& r, const Signature& sig) {
  std::uint64_t t = r.get_gamma_u64(tok::Pred);
  switch (t) {
    case tok::Zero: return t_zero();
    case tok::One: return t_one();
    case tok::Add: {
      TermPtr a = read_term(r, sig);
      TermPtr b = read_term(r, sig);
      return t_add(a, b);
    }
    case tok::Mul: {
      TermPtr a = read_term(r, sig);
      TermPtr b = read_term(r, sig);
      return t_mul(a, b);
    }
    case tok::Var: return t_var(r.get_gamma_u64(kMaxVarIndex) - 1);
    case tok::Num: {
      BigNat v = r.get_gamma();
      v -= BigNat{1};
      return t_num(v);
    }
    case tok::Fun: {
      std::uint64_t id = r.get_gamma_u64(kNumReservedFns);
      if (id == 0) throw CodeError("not a code: function id");
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < kReservedFns[id - 1].arity; ++i)
        args.push_back(read_term(r, sig));
      return t_app(static_cast<int>(id - 1), std::move(args));
    }
    default:
      throw CodeError("not a code: term token expected");
  }
}

}  // namespace detail

// Decodes exactly one term or formula; throws CodeError on truncated streams,
// trailing bits, or out-of-signature payloads.
inline Decoded decode(const GodelCode& c, const Signature& sig = {}) {
  BitReader r(c);
  // peek the first token to dispatch between term and formula space
  BitReader peek(c);
  std::uint64_t t = peek.get_gamma_u64(tok::Pred);
  Decoded d;
  bool is_term = t == tok::Zero || t == tok::One || t == tok::Add ||
                 t == tok::Mul || t == tok::Var || t == tok::Num || t == tok::Fun;
  if (is_term)
    d = detail::read_term(r, sig);
  else
    d = detail::read_formula(r, sig);
  if (!r.exhausted()) throw CodeError("not a code: trailing bits");
  return d;
}

inline FormulaPtr decode_formula(const GodelCode& c, const Signature& sig = {}) {
  Decoded d = decode(c, sig);
  if (auto* f = std::get_if<FormulaPtr>(&d)) return *f;
  throw CodeError("code denotes a term, not a formula");
}

inline TermPtr decode_term(const GodelCode& c, const Signature& sig = {}) {
  Decoded d = decode(c, sig);
  if (auto* t = std::get_if<TermPtr>(&d)) return *t;
  throw CodeError("code denotes a formula, not a term");
}

inline std::optional<FormulaPtr> try_decode_formula(const GodelCode& c,
                                                    const Signature& sig = {}) {
  try {
    return decode_formula(c, sig);
  } catch (const CodeError&) {
    return std::nullopt;
  }
}

// --------------------------------------------------------------------------
// Numerals: the unary expression 0+1+1+...+1 (n times 1), left-associated.
// The spines are shared through a global cache, so numeral(n) is amortized
// constant after the first request.

inline TermPtr numeral(std::uint64_t n) {
  static std::mutex mu;
  static std::vector<TermPtr> cache{t_zero()};
  std::lock_guard<std::mutex> lock(mu);
  if (n >= (std::uint64_t{1} << 24)) throw std::invalid_argument("numeral beyond desk scale");
  while (cache.size() <= n) cache.push_back(t_add(cache.back(), t_one()));
  return cache[n];
}

// The meta-level realization of [phi(n-dot / v)].
inline GodelCode numsub_code(const FormulaPtr& f, std::size_t v, std::uint64_t n,
                             const Signature& sig = {}) {
  return encode(substitute(f, v, numeral(n)), sig);
}

// --------------------------------------------------------------------------
// Sequences: "1" ++ gamma(len+1) ++ gamma(c_1+1) ++ ... ++ gamma(c_len+1).

inline GodelCode encode_sequence(const std::vector<BigNat>& items) {
  BitWriter w;
  w.put_gamma_u64(items.size() + 1);
  for (auto& c : items) {
    BigNat p = c;
    ++p;
    w.put_gamma(p);
  }
  return w.finish();
}

inline std::vector<BigNat> decode_sequence(const GodelCode& c) {
  BitReader r(c);
  BigNat lenB = r.get_gamma();
  lenB -= BigNat{1};
  if (!lenB.fits_u64() || lenB.to_u64() > (1u << 24))
    throw CodeError("not a sequence: length out of range");
  std::vector<BigNat> out;
  for (std::uint64_t i = 0, n = lenB.to_u64(); i < n; ++i) {
    BigNat v = r.get_gamma();
    v -= BigNat{1};
    out.push_back(std::move(v));
  }
  if (!r.exhausted()) throw CodeError("not a sequence: trailing bits");
  return out;
}

inline std::optional<std::vector<BigNat>> try_decode_sequence(const GodelCode& c) {
  try {
    return decode_sequence(c);
  } catch (const CodeError&) {
    return std::nullopt;
  } catch (const std::underflow_error&) {
    return std::nullopt;
  }
}

// --------------------------------------------------------------------------
// Code-ordered enumeration. All valid formula codes <= bound satisfying the
// predicate, in increasing code order. Desk scale only.

inline std::vector<FormulaPtr> enumerate_by_code(
    const Signature& sig, std::uint64_t bound,
    const std::function<bool(const FormulaPtr&)>& pred) {
  if (bound > (1u << 24)) throw std::invalid_argument("enumeration bound too large");
  std::vector<FormulaPtr> out;
  for (std::uint64_t c = 1; c <= bound; ++c) {
    if (auto f = try_decode_formula(BigNat{c}, sig))
      if (pred(*f)) out.push_back(*f);
  }
  return out;
}

// --------------------------------------------------------------------------
// Propositional formulas and their coding (used by the Lindenbaum algebra).

enum class PropKind { Var, Not, And, Or };

struct PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

struct PropFormula {
  PropKind kind;
  std::size_t var = 0;
  PropPtr left, right;  // Not uses left only
};

inline PropPtr p_var(std::size_t i) {
  auto p = std::make_shared<PropFormula>();
  p->kind = PropKind::Var;
  p->var = i;
  return p;
}

inline PropPtr p_not(PropPtr a) {
  auto p = std::make_shared<PropFormula>();
  p->kind = PropKind::Not;
  p->left = std::move(a);
  return p;
}

inline PropPtr p_and(PropPtr a, PropPtr b) {
  auto p = std::make_shared<PropFormula>();
  p->kind = PropKind::And;
  p->left = std::move(a);
  p->right = std::move(b);
  return p;
}

inline PropPtr p_or(PropPtr a, PropPtr b) {
  auto p = std::make_shared<PropFormula>();
  p->kind = PropKind::Or;
  p->left = std::move(a);
  p->right = std::move(b);
  return p;
}

namespace detail {
inline void emit_prop(const PropPtr& p, BitWriter& w) {
  switch (p->kind) {
    case PropKind::Var:
      w.put_gamma_u64(tok::PVar);
      w.put_gamma_u64(p->var + 1);
      return;
    case PropKind::Not:
      w.put_gamma_u64(tok::PNot);
      emit_prop(p->left, w);
      return;
    case PropKind::And:
    case PropKind::Or:
      w.put_gamma_u64(p->kind == PropKind::And ? tok::PAnd : tok::POr);
      emit_prop(p->left, w);
      emit_prop(p->right, w);
      return;
  }
}

inline PropPtr read_prop(BitReader& r) {
  std::uint64_t t = r.get_gamma_u64(tok::PVar);
  switch (t) {
    case tok::PNot: return p_not(read_prop(r));
    case tok::PAnd: {
      PropPtr a = read_prop(r);
      PropPtr b = read_prop(r);
      return p_and(a, b);
    }
    case tok::POr: {
      PropPtr a = read_prop(r);
      PropPtr b = read_prop(r);
      return p_or(a, b);
    }
    case tok::PVar: return p_var(r.get_gamma_u64(detail::kMaxVarIndex) - 1);
    default: throw CodeError("not a propositional code");
  }
}
}  // namespace detail

inline GodelCode encode_prop(const PropPtr& p) {
  BitWriter w;
  detail::emit_prop(p, w);
  return w.finish();
}

inline std::optional<PropPtr> try_decode_prop(const GodelCode& c) {
  try {
    BitReader r(c);
    PropPtr p = detail::read_prop(r);
    if (!r.exhausted()) return std::nullopt;
    return p;
  } catch (const CodeError&) {
    return std::nullopt;
  }
}

inline PropPtr decode_prop(const GodelCode& c) {
  auto p = try_decode_prop(c);
  if (!p) throw CodeError("not a propositional code");
  return *p;
}

inline std::string print_prop(const PropPtr& p) {
  switch (p->kind) {
    case PropKind::Var: return "p" + std::to_string(p->var);
    case PropKind::Not: return "(not " + print_prop(p->left) + ")";
    case PropKind::And:
      return "(and " + print_prop(p->left) + " " + print_prop(p->right) + ")";
    case PropKind::Or:
      return "(or " + print_prop(p->left) + " " + print_prop(p->right) + ")";
  }
  return {};
}

}  // namespace truthlat
