#pragma once

// The two constructive halves of the capture theorem for relation-quantified
// weighted formulas, plus a cross-check harness.
//
// formula_to_wtm builds, from a prefix-form formula, a single weighted
// machine that works for every universe size: it discovers n from the
// input length, lays out unary rulers and per-variable register strips to
// the right of the encoding, and wires one tape-restoring gadget per
// subformula. Boolean gadgets are deterministic with yes/no exits; weighted
// gadgets branch nondeterministically exactly where the semantics sums.
//
// wtm_to_weso builds, from a machine padded to run for exactly n^k - 1
// steps, a formula whose relation variables describe the run: T_a(t,p) =
// cell p holds symbol a at time t, H_q(t,p) = state q with the head at p.

#include <functional>

#include "wdc/eval.hpp"
#include "wdc/formula.hpp"
#include "wdc/machine.hpp"
#include "wdc/structure.hpp"

namespace wdc {

// Direction 1. Requires check_fragment(phi, wESO); relation symbols and
// relation-variable arities are capped at 3 (ruler construction). Free
// variables are read from extra input blocks in encode order: first-order
// frees in name order, then relation frees in name order.
WeightedTM formula_to_wtm(const Formula& phi, const Signature& sig,
                          const std::string& semiring_spec);

// The free-value blocks formula_to_wtm expects appended to encode(A),
// built from rho in the same order.
std::vector<FreeValue> free_blocks(const Formula& phi, const Assignment& rho, int n);

// Direction 2. Requires k >= every signature arity, at most one relation
// symbol, and a machine whose work alphabet the T_a predicates cover. The
// result evaluates to behavior_exact(m, encode(A), n^k - 1) whenever
// n^k >= the encoding length.
FormulaPtr wtm_to_weso(const WeightedTM& m, const Signature& sig, int k);

// Unordered variant: < is replaced by a guessed relation L constrained to
// be a strict total order. Only sound for idempotent commutative semirings;
// others are rejected.
FormulaPtr wtm_to_weso_unordered(const WeightedTM& m, const Signature& sig, int k);

struct CrosscheckReport {
    bool ok = true;
    size_t checked = 0;
    std::string counterexample;  // first disagreement, as structure JSON + values
};

// Evaluates both sides on every listed structure (in parallel) and reports
// the first disagreement.
CrosscheckReport crosscheck(const std::vector<Structure>& structures,
                            const std::function<Value(const Structure&)>& lhs,
                            const std::function<Value(const Structure&)>& rhs);

// Convenience wrapper for direction 1: all structures with n <= max_n,
// formula value vs. machine behavior on the encoding. Runs strict, so an
// undersized step bound surfaces as live_branches instead of a silent miss.
CrosscheckReport crosscheck_formula_machine(const Formula& phi, const WeightedTM& m,
                                            const Signature& sig,
                                            const std::string& semiring_spec, int max_n,
                                            long max_steps = 20000000);

}  // namespace wdc
