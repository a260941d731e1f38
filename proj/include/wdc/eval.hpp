#pragma once

// Evaluation of Boolean and weighted formulas over a finite ordered
// structure. Two implementations ship: eval_weighted/eval_bool compile the
// formula to a slot-resolved tree and run OpenMP kernels for large
// relation-quantifier sums, while eval_weighted_reference is a deliberately
// naive transcription of the semantics tables kept as a serial reference.

#include <map>
#include <string>

#include "wdc/formula.hpp"
#include "wdc/semiring.hpp"
#include "wdc/structure.hpp"

namespace wdc {

struct EvalCaps {
    // Relation quantifiers enumerate 2^(n^l) subsets; n^l must stay within
    // this base. Masks additionally require n^l <= 62 for fixpoints.
    int max_subset_base = 20;
    // Fixpoint stage bound; <= 0 means the default 2^(n^k) + 1.
    long max_stages = 0;
};

struct Assignment {
    std::map<std::string, int> fo;
    std::map<std::string, Relation> so;
};

struct EvalContext {
    const Structure* structure = nullptr;
    SemiringPtr semiring;
    Assignment rho;
    EvalCaps caps;
    bool parallel = true;  // use OpenMP kernels where sound
};

bool eval_bool(const Formula& f, const EvalContext& ctx);
Value eval_weighted(const Formula& f, const EvalContext& ctx);
Value eval_weighted_reference(const Formula& f, const EvalContext& ctx);

// Fixpoint of the update operator F_body(R) = { a-tuple : body(R, a) } per
// the requested kind, exposed for direct inspection. vars names the tuple
// of first-order variables the body abstracts.
std::set<Tuple> eval_fixpoint(FKind kind, const std::string& r, const std::vector<std::string>& vars,
                              const Formula& body, const EvalContext& ctx);

// Step-relation closure used by tc/dtc: the set of 2k-tuples (u,v) with v
// reachable from u in >= 1 body-steps (deterministic steps only for dtc).
std::set<Tuple> eval_closure(FKind kind, const std::vector<std::string>& xs,
                             const std::vector<std::string>& ys, const Formula& body,
                             const EvalContext& ctx);

}  // namespace wdc
