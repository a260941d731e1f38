#pragma once

// Weighted-logic formulas: one AST covers the Boolean layer, the weighted
// layer, the closure operators and the fixed-point operators. Which nodes
// are allowed where is enforced by validate()/check_fragment, not by types.

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace wdc {

enum class FKind {
    // Boolean layer
    False, True,
    Eq, Less, Neq,          // x = y, x < y, x != y (sugar)
    RelAtom,                // r(x1..xl): signature relation or fixpoint-bound symbol
    SOAtom,                 // X(x1..xl): second-order variable
    Not, Or, And, Implies, Iff,
    ExistsFO, ForallFO,     // exists x. / forall x.
    ExistsSO,               // existsSO X:k.
    Tc, Dtc,                // [tc (xs)->(ys). body](us, vs)
    Lfp, Gfp, Ifp, Pfp,     // [lfp r(xs). body](ts)
    // weighted layer
    Const,                  // c(<literal>), parsed under the evaluation semiring
    OPlus, OTimes,          // (+) (*)
    SumFO, ProdFO,          // sum x. / prod x.
    SumSO, ProdSO,          // sumSO X:k. / prodSO X:k.
    Guard,                  // beta ? phi  : phi if beta holds, else 1
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FKind kind;
    std::string name;               // variable/relation name; literal text for Const
    int so_arity = 0;               // ExistsSO/SumSO/ProdSO binders
    std::vector<std::string> args;  // atom arguments / closure applied terms
    std::vector<std::string> bound1, bound2;  // closure/fixpoint binder tuples
    FormulaPtr a, b;                // children (body; or lhs/rhs)
};

// --- constructors -----------------------------------------------------------

FormulaPtr f_false();
FormulaPtr f_true();
FormulaPtr f_eq(std::string x, std::string y);
FormulaPtr f_less(std::string x, std::string y);
FormulaPtr f_neq(std::string x, std::string y);
FormulaPtr f_rel(std::string r, std::vector<std::string> args);
FormulaPtr f_so(std::string X, std::vector<std::string> args);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(std::string x, FormulaPtr a);
FormulaPtr f_forall(std::string x, FormulaPtr a);
FormulaPtr f_exists_so(std::string X, int arity, FormulaPtr a);
FormulaPtr f_closure(FKind tc_or_dtc, std::vector<std::string> xs, std::vector<std::string> ys,
                     FormulaPtr body, std::vector<std::string> terms);
FormulaPtr f_fixpoint(FKind kind, std::string r, std::vector<std::string> xs, FormulaPtr body,
                      std::vector<std::string> terms);
FormulaPtr f_const(std::string literal);
FormulaPtr f_oplus(FormulaPtr a, FormulaPtr b);
FormulaPtr f_otimes(FormulaPtr a, FormulaPtr b);
FormulaPtr f_sum(std::string x, FormulaPtr a);
FormulaPtr f_prod(std::string x, FormulaPtr a);
FormulaPtr f_sum_so(std::string X, int arity, FormulaPtr a);
FormulaPtr f_prod_so(std::string X, int arity, FormulaPtr a);
FormulaPtr f_guard(FormulaPtr beta, FormulaPtr phi);

// --- queries ----------------------------------------------------------------

// Purely Boolean node kinds (may appear under Not/Or/quantifiers/guards).
bool is_boolean(const Formula& f);

struct VarSet {
    std::set<std::string> fo;
    std::set<std::pair<std::string, int>> so;  // name, arity
};
VarSet free_vars(const Formula& f);

// Structural well-formedness: weighted nodes never strictly inside Boolean
// nodes, SO arities used consistently, closure/fixpoint tuple shapes match,
// lfp/gfp bodies positive in the bound relation symbol. Throws on failure.
void validate(const Formula& f);

// True iff every occurrence of relation symbol r in body sits under an even
// number of negations (counting the desugared polarity of -> and <->).
bool check_positive(const Formula& body, const std::string& r);

bool contains_less(const Formula& f);

enum class Fragment { wFO, wSO, wESO, wLFP, wPFP, wDTC, wPFP_SOq };

// Throws invalid_argument_error describing the first violation.
void check_fragment(const Formula& f, Fragment fr);

// Rewrites sugar to the core grammar: True, !=, &, ->, <->, forall, and the
// guard all disappear. Idempotent, preserves free variables.
FormulaPtr desugar(const FormulaPtr& f);

// --- concrete syntax ---------------------------------------------------------

FormulaPtr parse_formula(const std::string& text);
std::string print_formula(const Formula& f);

}  // namespace wdc
