#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace truthlat {

// Reserved syntax vocabulary. These symbols may appear inside formulas of
// any signature and are evaluated by native oracles over Godel codes
// (never by search). IDs are frozen: they are the coding payloads, see
// docs/coding.md.

struct ReservedSym {
  std::string_view name;
  std::size_t arity;
};

// Function symbols (term-level).
inline constexpr ReservedSym kReservedFns[] = {
    {"val", 1},        // value of a closed L_A term code
    {"dpt", 1},        // logical depth of a formula code
    {"numsub", 3},     // numsub(f, v, z) = code of f with numeral(z) for variable coded v
    {"neg-code", 1},   // [not f]
    {"and-code", 2},   // [f /\ g]
    {"ex-code", 2},    // ex-code(v, f) = [exists v. f], v a variable code
    {"eq-code", 2},    // eq-code(s, t) = [s = t], s,t term codes
    {"rel-code1", 2},  // rel-codeK(r, t1..tK) = [R_r(t1..tK)], r an extra-relation id
    {"rel-code2", 3},
    {"rel-code3", 4},
    {"rel-code4", 5},
    {"diag", 1},       // code of f with (num <code f>) for its least free variable
    {"tr-code", 1},    // tr-code(n) = code of the partial truth predicate Tr_n
    {"wct-code", 1},   // wct-code(d) = code of the weakly compositional sentence for decode(d)
    {"exp", 2},        // exponentiation on N
    {"bmeet", 2},      // Boolean-algebra meet on canonical propositional codes
    {"bjoin", 2},
    {"bneg", 1},
};

// Predicate symbols (atom-level).
inline constexpr ReservedSym kReservedPreds[] = {
    {"Var", 1},       // codes a variable term
    {"Tmc", 1},       // codes a closed L_A term
    {"Sent", 1},      // codes an L_A sentence
    {"SentL", 1},     // codes a sentence over the ambient signature
    {"Pi1", 1},       // codes a formula of syntactic class at most Pi_1
    {"BMem", 1},      // canonical member of the propositional Lindenbaum algebra
    {"BLeq", 2},      // algebra order on canonical codes
    {"ProofEA", 2},   // ProofTh(y, x): y codes a proof of x from Th
    {"ProofPA", 2},
    {"ProofCT0", 2},
};

inline constexpr int kFnVal = 0, kFnDpt = 1, kFnNumsub = 2, kFnNegCode = 3,
                     kFnAndCode = 4, kFnExCode = 5, kFnEqCode = 6,
                     kFnRelCode1 = 7, kFnRelCode2 = 8, kFnRelCode3 = 9,
                     kFnRelCode4 = 10, kFnDiag = 11, kFnTrCode = 12,
                     kFnWctCode = 13, kFnExp = 14, kFnBMeet = 15,
                     kFnBJoin = 16, kFnBNeg = 17;

inline constexpr int kPredVar = 0, kPredTmc = 1, kPredSent = 2, kPredSentL = 3,
                     kPredPi1 = 4, kPredBMem = 5, kPredBLeq = 6,
                     kPredProofEA = 7, kPredProofPA = 8, kPredProofCT0 = 9;

inline constexpr std::size_t kNumReservedFns = std::size(kReservedFns);
inline constexpr std::size_t kNumReservedPreds = std::size(kReservedPreds);

inline std::optional<int> reserved_fn_id(std::string_view name) {
  for (std::size_t i = 0; i < kNumReservedFns; ++i)
    if (kReservedFns[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

inline std::optional<int> reserved_pred_id(std::string_view name) {
  for (std::size_t i = 0; i < kNumReservedPreds; ++i)
    if (kReservedPreds[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace truthlat
