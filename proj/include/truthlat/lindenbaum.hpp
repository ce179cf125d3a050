#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "truthlat/godel.hpp"
#include "truthlat/metalogic.hpp"
#include "truthlat/truth_theories.hpp"

namespace truthlat {

// The elementarily presented countable atomless Boolean algebra: equivalence
// classes of propositional formulas over p0, p1, ... modulo propositional
// equivalence, identified by normalized truth tables and represented, where
// coding matters, by the least propositional Godel code of the class. On top
// of it: the greedy ultrafilter trace nu/mu and the embedding formulas phi_a.

class BAError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An algebra element: a truth table over its essential support. The support
// lists variable indices in increasing order; row r of the table assigns
// support[j] the j-th bit of r. Zero is the empty-support false table, one
// the empty-support true table. Tables are packed words, so elements over up
// to kMaxSupport variables are exact.
struct BElem {
  std::vector<std::size_t> support;
  std::vector<std::uint64_t> table;  // ceil(2^support.size() / 64) words

  BElem() : table{0} {}
  BElem(std::vector<std::size_t> s, std::vector<std::uint64_t> t)
      : support(std::move(s)), table(std::move(t)) {}

  std::uint64_t rows() const { return std::uint64_t{1} << support.size(); }

  bool bit(std::uint64_t r) const { return (table[r >> 6] >> (r & 63)) & 1; }

  void set_bit(std::uint64_t r) { table[r >> 6] |= std::uint64_t{1} << (r & 63); }

  friend bool operator==(const BElem&, const BElem&) = default;
  friend bool operator<(const BElem& a, const BElem& b) {
    return std::tie(a.support, a.table) < std::tie(b.support, b.table);
  }

  bool is_zero() const { return support.empty() && table[0] == 0; }
  bool is_one() const { return support.empty() && table[0] == 1; }
};

inline constexpr std::size_t kMaxSupport = 16;

namespace detail {

inline std::vector<std::uint64_t> blank_table(std::size_t vars) {
  std::uint64_t rows = std::uint64_t{1} << vars;
  return std::vector<std::uint64_t>(rows <= 64 ? 1 : rows / 64, 0);
}

inline void mask_table(std::vector<std::uint64_t>& t, std::size_t vars) {
  if (vars < 6) t[0] &= (std::uint64_t{1} << (1u << vars)) - 1;
}

// Drop non-essential variables.
inline BElem normalize(BElem e) {
  for (std::size_t j = 0; j < e.support.size();) {
    std::uint64_t rows = e.rows();
    bool essential = false;
    for (std::uint64_t r = 0; r < rows && !essential; ++r)
      if (e.bit(r) != e.bit(r ^ (std::uint64_t{1} << j))) essential = true;
    if (essential) {
      ++j;
      continue;
    }
    // project out variable j (keep rows with bit j = 0, compacted)
    BElem n;
    n.support = e.support;
    n.support.erase(n.support.begin() + static_cast<std::ptrdiff_t>(j));
    n.table = blank_table(n.support.size());
    for (std::uint64_t r = 0; r < rows; ++r) {
      if ((r >> j) & 1) continue;
      std::uint64_t low = r & ((std::uint64_t{1} << j) - 1);
      std::uint64_t high = (r >> (j + 1)) << j;
      if (e.bit(r)) n.set_bit(low | high);
    }
    e = std::move(n);
  }
  return e;
}

// Table of e over a superset support (merged must contain e.support).
inline std::vector<std::uint64_t> expand(const BElem& e,
                                         const std::vector<std::size_t>& merged) {
  std::vector<std::size_t> pos;
  for (auto v : e.support) {
    auto it = std::find(merged.begin(), merged.end(), v);
    pos.push_back(static_cast<std::size_t>(it - merged.begin()));
  }
  std::uint64_t rows = std::uint64_t{1} << merged.size();
  std::vector<std::uint64_t> out = blank_table(merged.size());
  for (std::uint64_t r = 0; r < rows; ++r) {
    std::uint64_t sub = 0;
    for (std::size_t j = 0; j < pos.size(); ++j)
      if ((r >> pos[j]) & 1) sub |= std::uint64_t{1} << j;
    if (e.bit(sub)) out[r >> 6] |= std::uint64_t{1} << (r & 63);
  }
  return out;
}

inline std::vector<std::size_t> merge_support(const BElem& a, const BElem& b) {
  std::vector<std::size_t> m;
  std::set_union(a.support.begin(), a.support.end(), b.support.begin(),
                 b.support.end(), std::back_inserter(m));
  if (m.size() > kMaxSupport) throw BAError("support beyond desk scale");
  return m;
}

}  // namespace detail

inline BElem b_zero() { return {}; }
inline BElem b_one() { return {{}, {1}}; }

inline BElem b_var(std::size_t i) { return {{i}, {0b10}}; }

inline BElem meet(const BElem& a, const BElem& b) {
  auto m = detail::merge_support(a, b);
  BElem e;
  e.support = m;
  e.table = detail::expand(a, m);
  auto tb = detail::expand(b, m);
  for (std::size_t i = 0; i < e.table.size(); ++i) e.table[i] &= tb[i];
  return detail::normalize(std::move(e));
}

inline BElem join(const BElem& a, const BElem& b) {
  auto m = detail::merge_support(a, b);
  BElem e;
  e.support = m;
  e.table = detail::expand(a, m);
  auto tb = detail::expand(b, m);
  for (std::size_t i = 0; i < e.table.size(); ++i) e.table[i] |= tb[i];
  return detail::normalize(std::move(e));
}

inline BElem complement(const BElem& a) {
  BElem e = a;
  for (auto& w : e.table) w = ~w;
  detail::mask_table(e.table, e.support.size());
  return detail::normalize(std::move(e));
}

inline bool leq(const BElem& a, const BElem& b) { return meet(a, b) == a; }

inline BElem from_prop(const PropPtr& p) {
  std::vector<std::size_t> vars;
  std::function<void(const PropPtr&)> collect = [&](const PropPtr& q) {
    if (q->kind == PropKind::Var) vars.push_back(q->var);
    if (q->left) collect(q->left);
    if (q->right) collect(q->right);
  };
  collect(p);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > kMaxSupport) throw BAError("support beyond desk scale");
  BElem raw;
  raw.support = vars;
  raw.table = detail::blank_table(vars.size());
  std::function<bool(const PropPtr&, std::uint64_t)> ev = [&](const PropPtr& q,
                                                              std::uint64_t r) -> bool {
    switch (q->kind) {
      case PropKind::Var: {
        auto it = std::lower_bound(vars.begin(), vars.end(), q->var);
        return (r >> (it - vars.begin())) & 1;
      }
      case PropKind::Not: return !ev(q->left, r);
      case PropKind::And: return ev(q->left, r) && ev(q->right, r);
      case PropKind::Or: return ev(q->left, r) || ev(q->right, r);
    }
    return false;
  };
  for (std::uint64_t r = 0; r < raw.rows(); ++r)
    if (ev(p, r)) raw.set_bit(r);
  return detail::normalize(std::move(raw));
}

// --------------------------------------------------------------------------
// Canonical representatives: the least propositional code of the class. The
// search enumerates only valid codes, by payload bit length and then by
// numeric value (shorter streams always give smaller framed values), keeping
// the least code first seen per truth table. Meets, joins and complements of
// desk-sized codes stay reachable because a connective applied to the
// operands' representatives bounds the representative's length.

class BAContext {
public:
  explicit BAContext(std::size_t length_cap = 30) : length_cap_(length_cap) {}

  std::size_t length_cap() const { return length_cap_; }

  // Least code whose formula is equivalent to e; explores payload lengths up
  // to the cap and reports scale-exceeded beyond it.
  BigNat canonical_code(const BElem& e) {
    auto it = first_seen_.find(e);
    if (it != first_seen_.end()) return it->second;
    while (enumerated_ < length_cap_) {
      enumerate_length(++enumerated_);
      it = first_seen_.find(e);
      if (it != first_seen_.end()) return it->second;
    }
    throw BAError("scale-exceeded: no representative within the length cap");
  }

  PropPtr canonical_rep(const BElem& e) { return decode_prop(canonical_code(e)); }

  // delta_B: true iff c is the least code of its own equivalence class.
  bool is_member(const BigNat& c) {
    if (c.is_zero() || c.bit_length() - 1 > length_cap_) return false;
    auto p = try_decode_prop(c);
    if (!p) return false;
    BElem e;
    try {
      e = from_prop(*p);
    } catch (const BAError&) {
      return false;
    }
    ensure_enumerated(c.bit_length() - 1);
    return first_seen_.at(e) == c;
  }

  bool is_member(std::uint64_t c) { return is_member(BigNat{c}); }

  // The element of a valid code (not necessarily canonical).
  std::optional<BElem> elem_of(const BigNat& c) {
    if (c.is_zero()) return std::nullopt;
    auto p = try_decode_prop(c);
    if (!p) return std::nullopt;
    try {
      return from_prop(*p);
    } catch (const BAError&) {
      return std::nullopt;
    }
  }

  std::optional<BElem> elem_of(std::uint64_t c) { return elem_of(BigNat{c}); }

  // Classes seen so far, by canonical code; enumerating through a length
  // first makes this the definitive list for that fragment.
  void ensure_enumerated(std::size_t payload_bits) {
    while (enumerated_ < std::min(payload_bits, length_cap_))
      enumerate_length(++enumerated_);
  }

  const std::map<BElem, BigNat>& first_seen() const { return first_seen_; }

private:
  // All valid streams of exactly `len` payload bits, in numeric order: a
  // depth-first walk choosing tokens in bit-lexicographic order
  // (PVar "00100..." < PAnd "010" < POr "011" < PNot "1").
  void enumerate_length(std::size_t len) {
    std::vector<bool> bits;
    bits.reserve(len);
    walk(len, 1, bits);
  }

  static std::size_t gamma_len(std::uint64_t n) {
    std::size_t b = 0;
    for (auto v = n; v; v >>= 1) ++b;
    return 2 * b - 1;
  }

  static void append_gamma(std::vector<bool>& bits, std::uint64_t n) {
    std::size_t b = 0;
    for (auto v = n; v; v >>= 1) ++b;
    for (std::size_t i = 0; i + 1 < b; ++i) bits.push_back(false);
    for (std::size_t i = b; i-- > 0;) bits.push_back((n >> i) & 1);
  }

  // need: how many complete formulas remain to be read
  void walk(std::size_t len, std::size_t need, std::vector<bool>& bits) {
    if (need == 0) {
      if (bits.size() != len) return;
      std::vector<bool> framed{true};
      framed.insert(framed.end(), bits.begin(), bits.end());
      BigNat code = BigNat::from_bits(framed);
      PropPtr p = decode_prop(code);
      BElem e;
      try {
        e = from_prop(p);
      } catch (const BAError&) {
        return;
      }
      // lengths are processed in increasing order, so only ties within one
      // length need the numeric comparison
      auto it = first_seen_.find(e);
      if (it == first_seen_.end())
        first_seen_.emplace(std::move(e), std::move(code));
      else if (code < it->second)
        it->second = std::move(code);
      return;
    }
    std::size_t room = len - bits.size();
    // a formula needs at least 6 bits (a variable); prune impossible branches
    if (room < 6 * need) return;
    // PVar: token gamma(4) then index payload, ascending index
    for (std::uint64_t i = 0;; ++i) {
      std::size_t w = gamma_len(4) + gamma_len(i + 1);
      if (gamma_len(i + 1) + 5 > room) break;
      if (w + 6 * (need - 1) > room) continue;
      std::size_t mark = bits.size();
      append_gamma(bits, 4);
      append_gamma(bits, i + 1);
      walk(len, need - 1, bits);
      bits.resize(mark);
    }
    // PAnd, POr: one token, two more formulas
    for (std::uint64_t t : {2, 3}) {
      if (gamma_len(t) + 6 * (need + 1) <= room) {
        std::size_t mark = bits.size();
        append_gamma(bits, t);
        walk(len, need + 1, bits);
        bits.resize(mark);
      }
    }
    // PNot: one bit, same need
    if (1 + 6 * need <= room) {
      bits.push_back(true);
      walk(len, need, bits);
      bits.pop_back();
    }
  }

  std::size_t length_cap_;
  std::size_t enumerated_ = 0;
  std::map<BElem, BigNat> first_seen_;
};

// a |-> a /\ p_k for the least p-index k outside the support: strictly
// between zero and a.
inline BElem atomless_witness(const BElem& a) {
  if (a.is_zero()) throw BAError("atomless witness of zero");
  std::size_t k = 0;
  while (std::find(a.support.begin(), a.support.end(), k) != a.support.end()) ++k;
  return meet(a, b_var(k));
}

// --------------------------------------------------------------------------
// The greedy ultrafilter process of the embedding proof. The trace is the
// unique sequence with s_0 = a /\ -b that sweeps element codes in order,
// refining by meet with each member code or its complement; mu(y) is
// membership of the member code y in the induced ultrafilter.
//
// Trace elements are kept in product form: a meet of factors with pairwise
// disjoint supports. Sweeping a fragment touches single-variable members
// over ever-larger indices, so the product's combined support outgrows any
// expandable table while each factor stays tiny; a product is zero exactly
// when one of its factors is.

struct TraceElem {
  std::vector<std::shared_ptr<const BElem>> factors;  // disjoint supports, none zero

  bool is_zero() const {
    return factors.size() == 1 && factors[0]->is_zero();
  }

  // the literal element, when the combined support is expandable
  BElem to_elem() const {
    BElem acc = b_one();
    for (auto& f : factors) acc = meet(acc, *f);
    return acc;
  }

  static TraceElem of(const BElem& e) {
    TraceElem t;
    t.factors.push_back(std::make_shared<BElem>(e));
    return t;
  }
};

// the product refined by e, or nullopt when the product meets e at zero
inline std::optional<TraceElem> trace_meet(const TraceElem& s, const BElem& e) {
  if (e.is_one()) return s;
  BElem merged = e;
  TraceElem out;
  for (auto& f : s.factors) {
    std::vector<std::size_t> common;
    std::set_intersection(f->support.begin(), f->support.end(), e.support.begin(),
                          e.support.end(), std::back_inserter(common));
    if (common.empty())
      out.factors.push_back(f);
    else
      merged = meet(merged, *f);
  }
  if (merged.is_zero()) return std::nullopt;
  if (!merged.is_one()) out.factors.push_back(std::make_shared<BElem>(std::move(merged)));
  return out;
}

struct UltraTrace {
  BElem a, b;
  std::uint64_t bound = 0;
  std::vector<TraceElem> s;  // s[0..bound+1]
};

namespace detail {
// one nu transition from cur at index z
inline TraceElem nu_step(BAContext& ctx, const TraceElem& cur, std::uint64_t z) {
  if (!ctx.is_member(z)) return cur;
  BElem e = *ctx.elem_of(z);
  if (auto refined = trace_meet(cur, e)) return *refined;
  // cur /\ e = 0 forces cur <= -e, so meeting the complement changes nothing
  return cur;
}
}  // namespace detail

inline UltraTrace ultra_trace(BAContext& ctx, const BElem& a, const BElem& b,
                              std::uint64_t y) {
  if (leq(a, b)) throw BAError("ultra trace requires a not<= b");
  if (y + 2 > (std::uint64_t{1} << 22)) throw BAError("trace bound beyond desk scale");
  UltraTrace t{a, b, y, {}};
  t.s.reserve(y + 2);
  t.s.push_back(TraceElem::of(meet(a, complement(b))));
  for (std::uint64_t z = 0; z <= y; ++z)
    t.s.push_back(detail::nu_step(ctx, t.s.back(), z));
  return t;
}

// mu(y) := the trace run to y leaves s_{y+1} /\ y nonzero; false off B.
// Streaming: only the current product is kept.
inline bool mu(BAContext& ctx, const BElem& a, const BElem& b, std::uint64_t y) {
  if (!ctx.is_member(y)) return false;
  if (leq(a, b)) throw BAError("mu requires a not<= b");
  TraceElem cur = TraceElem::of(meet(a, complement(b)));
  for (std::uint64_t z = 0; z <= y; ++z) cur = detail::nu_step(ctx, cur, z);
  return trace_meet(cur, *ctx.elem_of(y)).has_value();
}

inline bool mu(BAContext& ctx, const BElem& a, const BElem& b, const BigNat& y) {
  return y.fits_u64() && mu(ctx, a, b, y.to_u64());
}

// --------------------------------------------------------------------------
// "{y : eta(y)} is an ultrafilter on B containing [a]": the conjunction of
// the five bullets, over the algebra's reserved vocabulary, with the
// canonical codes of one, zero and a inserted as literals.

inline FormulaPtr ultrafilter_conditions(BAContext& ctx, const FormulaPtr& eta,
                                         const BElem& a) {
  auto frees = free_vars(eta);
  if (frees.size() != 1)
    throw std::invalid_argument("eta needs exactly one free variable");
  std::size_t ev = *frees.begin();
  std::set<std::size_t> used = all_vars(eta);
  auto fresh = [&used] {
    std::size_t v = 0;
    while (used.count(v)) ++v;
    used.insert(v);
    return v;
  };
  std::size_t y = fresh(), z = fresh();
  auto eta_at = [&](const TermPtr& t) { return substitute(eta, ev, t); };

  TermPtr one_c = t_num(ctx.canonical_code(b_one()));
  TermPtr zero_c = t_num(ctx.canonical_code(b_zero()));
  TermPtr a_c = t_num(ctx.canonical_code(a));

  FormulaPtr b1 = f_forall(y, f_implies(eta_at(t_var(y)), f_pred(kPredBMem, {t_var(y)})));
  FormulaPtr b2 = f_and(eta_at(one_c), f_and(f_not(eta_at(zero_c)), eta_at(a_c)));
  FormulaPtr b3 = f_forall(
      y, f_forall(z, f_implies(f_and(f_pred(kPredBMem, {t_var(y)}),
                                     f_and(f_pred(kPredBMem, {t_var(z)}),
                                           f_and(eta_at(t_var(y)), eta_at(t_var(z))))),
                               eta_at(t_app(kFnBMeet, {t_var(y), t_var(z)})))));
  FormulaPtr b4 = f_forall(
      y, f_forall(z, f_implies(f_and(f_pred(kPredBMem, {t_var(y)}),
                                     f_and(f_pred(kPredBMem, {t_var(z)}),
                                           f_and(eta_at(t_var(y)),
                                                 f_pred(kPredBLeq, {t_var(y), t_var(z)})))),
                               eta_at(t_var(z)))));
  FormulaPtr b5 = f_forall(
      y, f_implies(f_pred(kPredBMem, {t_var(y)}),
                   f_or(eta_at(t_var(y)), eta_at(t_app(kFnBNeg, {t_var(y)})))));
  return f_and_all({b1, b2, b3, b4, b5});
}

// phi_a(x) := Con_CT0(x) \/ "eta is an ultrafilter containing [a]"; free v0.
inline FormulaPtr phi_a(BAContext& ctx, const BElem& a, const FormulaPtr& eta) {
  return f_or(build_Con_at(AxiomRecognizer::CT0), ultrafilter_conditions(ctx, eta, a));
}

// F(a) := the weakly compositional truth definition on the cut phi_a.
inline TruthDefinition embed_F(BAContext& ctx, const BElem& a, const FormulaPtr& eta) {
  return build_wCT(phi_a(ctx, a, eta));
}

// --------------------------------------------------------------------------
// Oracles over canonical codes.

inline void install_ba_oracles(Oracles& o, std::shared_ptr<BAContext> ctx) {
  o.preds[kPredBMem] = [ctx](const std::vector<BigNat>& a) {
    return ctx->is_member(a[0]);
  };
  o.preds[kPredBLeq] = [ctx](const std::vector<BigNat>& a) {
    if (!a[0].fits_u64() || !a[1].fits_u64()) return false;
    auto x = ctx->elem_of(a[0].to_u64());
    auto y = ctx->elem_of(a[1].to_u64());
    return x && y && leq(*x, *y);
  };
  auto binop = [ctx](const std::vector<BigNat>& a,
                     BElem (*op)(const BElem&, const BElem&)) -> BigNat {
    if (!a[0].fits_u64() || !a[1].fits_u64()) return BigNat{0};
    auto x = ctx->elem_of(a[0].to_u64());
    auto y = ctx->elem_of(a[1].to_u64());
    if (!x || !y) return BigNat{0};
    try {
      return ctx->canonical_code(op(*x, *y));
    } catch (const BAError&) {
      return BigNat{0};
    }
  };
  o.fns[kFnBMeet] = [binop](const std::vector<BigNat>& a) { return binop(a, meet); };
  o.fns[kFnBJoin] = [binop](const std::vector<BigNat>& a) { return binop(a, join); };
  o.fns[kFnBNeg] = [ctx](const std::vector<BigNat>& a) -> BigNat {
    if (!a[0].fits_u64()) return BigNat{0};
    auto x = ctx->elem_of(a[0].to_u64());
    if (!x) return BigNat{0};
    try {
      return ctx->canonical_code(complement(*x));
    } catch (const BAError&) {
      return BigNat{0};
    }
  };
}

}  // namespace truthlat
