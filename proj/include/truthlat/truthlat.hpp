#pragma once

#include "truthlat/bignat.hpp"
#include "truthlat/ea.hpp"
#include "truthlat/eval.hpp"
#include "truthlat/formula.hpp"
#include "truthlat/godel.hpp"
#include "truthlat/lindenbaum.hpp"
#include "truthlat/metalogic.hpp"
#include "truthlat/sexpr.hpp"
#include "truthlat/translation.hpp"
#include "truthlat/truth_theories.hpp"

namespace truthlat {

// Installs every module's oracles on an evaluator: the core syntax functions
// come with the evaluator itself; here the truth-theory map z |-> [Tr_z], the
// fixed-point sentence builder, the proof predicates and the Boolean-algebra
// operations are added.
inline void install_standard_oracles(Oracles& o, std::shared_ptr<BAContext> ba = {}) {
  install_truth_oracles(o);
  install_proof_oracles(o, build_CT0().sentence);
  if (!ba) ba = std::make_shared<BAContext>();
  install_ba_oracles(o, std::move(ba));
}

inline Evaluator make_evaluator(Signature sig = {}, EvalOptions opt = {},
                                std::shared_ptr<BAContext> ba = {}) {
  Evaluator ev(std::move(sig), opt);
  install_standard_oracles(ev.oracles(), std::move(ba));
  return ev;
}

}  // namespace truthlat
