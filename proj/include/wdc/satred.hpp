#pragma once

// Weighted propositional formulas (negation on variables only), the SAT
// series summed over all truth assignments, and the grounding reduction
// from prefix-form relation-quantified formulas on a fixed structure to
// propositional formulas with the same series value.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "wdc/eval.hpp"
#include "wdc/formula.hpp"
#include "wdc/semiring.hpp"
#include "wdc/structure.hpp"

namespace wdc {

enum class PKind { Var, NegVar, Const, And, Or };

struct PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

struct PropFormula {
    PKind kind;
    std::string var;  // Var/NegVar
    Value cval;       // Const
    PropPtr a, b;
};

PropPtr p_var(std::string name);
PropPtr p_negvar(std::string name);
PropPtr p_const(Value v);
PropPtr p_and(PropPtr a, PropPtr b);
PropPtr p_or(PropPtr a, PropPtr b);

using TruthAssignment = std::map<std::string, bool>;

std::set<std::string> prop_vars(const PropFormula& f);

// V-bar extension: literals map to 0/1 of the semiring, constants to
// themselves, | to + and & to *. Throws on a variable missing from V.
Value eval_prop(const PropFormula& f, const TruthAssignment& v, const Semiring& s);

// SAT[S]: sum of eval_prop over all 2^|vars| assignments.
Value sat_series(const PropFormula& f, const Semiring& s, int max_vars = 20,
                 bool parallel = true);

// Grounds phi = sum over relation variables P1..Pm of psi on the structure:
// first-order quantifiers expand over the universe, order/equality and
// signature atoms fold to constants, P_i(a-tuple) becomes the propositional
// variable "P_i[a1,...,al]". Negation is pushed down to atoms while
// grounding; the relation prefix itself stays un-enumerated, which is what
// makes SAT[S] of the result equal the formula's value. Free first-order
// variables are read from rho.
PropPtr cook_levin_reduce(const Formula& phi, const Structure& a, const Semiring& s,
                          const Assignment& rho = {});

// Text format: the weighted grammar cut down to NAME, NAME[a1,...],
// !NAME, c(<literal>), & and |.
PropPtr parse_prop(const std::string& text, const Semiring& s);
std::string print_prop(const PropFormula& f, const Semiring& s);

// Many-one reduction harness: checks target_value(transform(w)) ==
// source_value(w) on every listed input, reporting the first witness of
// disagreement.
struct ManyOneReport {
    bool ok = true;
    size_t checked = 0;
    std::string witness;  // description of the first mismatch
};

template <class In, class Mid>
ManyOneReport check_many_one(const std::vector<In>& inputs,
                             const std::function<Value(const In&)>& source_value,
                             const std::function<Mid(const In&)>& transform,
                             const std::function<Value(const Mid&)>& target_value,
                             const std::function<std::string(const In&)>& describe) {
    ManyOneReport rep;
    for (const In& w : inputs) {
        if (!(target_value(transform(w)) == source_value(w))) {
            rep.ok = false;
            rep.witness = describe(w);
            return rep;
        }
        ++rep.checked;
    }
    return rep;
}

}  // namespace wdc
