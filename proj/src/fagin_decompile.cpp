#include <string>
#include <vector>

#include "wdc/errors.hpp"
#include "wdc/fagin.hpp"

// Run-table encoding. Time points and tape cells both range over k-tuples
// of universe elements, ordered big-endian (first coordinate most
// significant), so a padded machine that runs for exactly n^k - 1 steps on
// a tape of at most n^k cells is described completely by the guessed
// relations
//
//   T_a(t.., p..)  cell p holds symbol a at time t       (arity 2k)
//   H_q(t.., p..)  head on cell p in state q at time t   (arity 2k)
//
// The Boolean skeleton pins the initial tape to the input encoding, forces
// one symbol per cell and one head entry per time, links consecutive times
// by a transition of the machine plus a frame axiom, and demands an
// accepting state at the last time. The weighted part multiplies, over all
// non-final times in order, the sum of the weights of the transitions
// consistent with that step; distributivity turns the product of sums into
// the sum over transition choices, i.e. over runs.

namespace wdc {
namespace {

std::vector<std::string> tuple_vars(const std::string& base, int k) {
    std::vector<std::string> out;
    for (int i = 1; i <= k; ++i) out.push_back(base + std::to_string(i));
    return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_true();
    FormulaPtr out = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) out = f_and(out, fs[i]);
    return out;
}

FormulaPtr disj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_false();
    FormulaPtr out = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) out = f_or(out, fs[i]);
    return out;
}

FormulaPtr forall_tuple(const std::vector<std::string>& xs, FormulaPtr body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = f_forall(*it, body);
    return body;
}

FormulaPtr exists_tuple(const std::vector<std::string>& xs, FormulaPtr body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = f_exists(*it, body);
    return body;
}

FormulaPtr eq_tuple(const std::vector<std::string>& xs, const std::vector<std::string>& ys) {
    std::vector<FormulaPtr> cs;
    for (size_t i = 0; i < xs.size(); ++i) cs.push_back(f_eq(xs[i], ys[i]));
    return conj(cs);
}

// x is the last element: no y with x < y
FormulaPtr is_last(const std::string& x) { return f_not(f_exists("zl", f_less(x, "zl"))); }

// y = x + 1 in the element order
FormulaPtr succ1(const std::string& x, const std::string& y) {
    return f_and(f_less(x, y), f_not(f_exists("zs", f_and(f_less(x, "zs"), f_less("zs", y)))));
}

// big-endian tuple successor: some coordinate steps, everything before it
// is equal, everything after rolls over from last to 0
FormulaPtr tuple_succ(const std::vector<std::string>& xs, const std::vector<std::string>& ys) {
    int k = (int)xs.size();
    std::vector<FormulaPtr> cases;
    for (int i = 0; i < k; ++i) {
        std::vector<FormulaPtr> cs;
        for (int j = 0; j < i; ++j) cs.push_back(f_eq(xs[j], ys[j]));
        cs.push_back(succ1(xs[i], ys[i]));
        for (int j = i + 1; j < k; ++j) {
            cs.push_back(is_last(xs[j]));
            cs.push_back(f_eq(ys[j], "0"));
        }
        cases.push_back(conj(cs));
    }
    return disj(cases);
}

FormulaPtr tuple_is_last(const std::vector<std::string>& xs) {
    std::vector<FormulaPtr> cs;
    for (const auto& x : xs) cs.push_back(is_last(x));
    return conj(cs);
}

// r = p + move
FormulaPtr moved(const std::vector<std::string>& p, const std::vector<std::string>& r, int move) {
    if (move == 0) return eq_tuple(p, r);
    if (move > 0) return tuple_succ(p, r);
    return tuple_succ(r, p);
}

struct Decompiler {
    const WeightedTM& m;
    const Signature& sig;
    int k;
    SemiringPtr S;

    int sym_idx(const std::string& a) const {
        for (size_t i = 0; i < m.work_alphabet.size(); ++i)
            if (m.work_alphabet[i] == a) return (int)i;
        throw invalid_argument_error("symbol '" + a + "' not in the work alphabet");
    }
    int state_idx(const std::string& q) const {
        for (size_t i = 0; i < m.states.size(); ++i)
            if (m.states[i] == q) return (int)i;
        throw invalid_argument_error("state '" + q + "' not in the state list");
    }

    FormulaPtr T(int a, const std::vector<std::string>& t, const std::vector<std::string>& p) const {
        return f_so("T" + std::to_string(a), concat(t, p));
    }
    FormulaPtr H(int q, const std::vector<std::string>& t, const std::vector<std::string>& p) const {
        return f_so("H" + std::to_string(q), concat(t, p));
    }

    FormulaPtr build() const {
        auto t = tuple_vars("t", k), u = tuple_vars("u", k);
        auto p = tuple_vars("p", k), o = tuple_vars("o", k), r = tuple_vars("r", k);
        std::vector<std::string> zero(k, "0");
        int nsyms = (int)m.work_alphabet.size(), nstates = (int)m.states.size();
        int blank = sym_idx(m.blank);

        // initial tape = the input encoding: the single relation block sits
        // in the cells whose leading k-l coordinates are zero, everything
        // past it is blank
        std::vector<FormulaPtr> parts;
        {
            // an empty signature still contributes a 0^n block (arity 1)
            int zeros = sig.relations.empty() ? k - 1 : k - sig.relations[0].second;
            FormulaPtr present =
                sig.relations.empty()
                    ? f_false()
                    : f_rel(sig.relations[0].first,
                            std::vector<std::string>(p.begin() + zeros, p.end()));
            std::vector<FormulaPtr> zp;
            for (int i = 0; i < zeros; ++i) zp.push_back(f_eq(p[i], "0"));
            FormulaPtr in_block = conj(zp);
            parts.push_back(forall_tuple(
                p, conj({f_implies(f_and(in_block, present), T(sym_idx("1"), zero, p)),
                         f_implies(f_and(in_block, f_not(present)), T(sym_idx("0"), zero, p)),
                         f_implies(f_not(in_block), T(blank, zero, p))})));
        }
        parts.push_back(H(state_idx(m.initial), zero, zero));

        // exactly one symbol per cell per time
        {
            std::vector<FormulaPtr> cases;
            for (int a = 0; a < nsyms; ++a) {
                std::vector<FormulaPtr> cs{T(a, t, p)};
                for (int bsym = 0; bsym < nsyms; ++bsym)
                    if (bsym != a) cs.push_back(f_not(T(bsym, t, p)));
                cases.push_back(conj(cs));
            }
            parts.push_back(forall_tuple(t, forall_tuple(p, disj(cases))));
        }

        // exactly one head entry per time
        {
            std::vector<FormulaPtr> any;
            for (int q = 0; q < nstates; ++q) any.push_back(H(q, t, p));
            parts.push_back(forall_tuple(t, exists_tuple(p, disj(any))));
            std::vector<FormulaPtr> most;
            for (int q = 0; q < nstates; ++q)
                for (int q2 = 0; q2 < nstates; ++q2) {
                    if (q == q2)
                        most.push_back(f_implies(f_and(H(q, t, p), H(q, t, o)), eq_tuple(p, o)));
                    else
                        most.push_back(f_not(f_and(H(q, t, p), H(q2, t, o))));
                }
            parts.push_back(forall_tuple(t, forall_tuple(p, forall_tuple(o, conj(most)))));
        }

        // consecutive times are linked by a transition of the machine
        {
            std::vector<FormulaPtr> clauses;
            for (int q = 0; q < nstates; ++q)
                for (int a = 0; a < nsyms; ++a) {
                    std::vector<FormulaPtr> options;
                    for (const auto& e : m.transitions) {
                        if (state_idx(e.p) != q || sym_idx(e.a) != a) continue;
                        options.push_back(exists_tuple(
                            r, conj({moved(p, r, e.move), T(sym_idx(e.b), u, p),
                                     H(state_idx(e.q), u, r)})));
                    }
                    clauses.push_back(f_implies(f_and(H(q, t, p), T(a, t, p)), disj(options)));
                }
            parts.push_back(forall_tuple(
                t, forall_tuple(
                       u, forall_tuple(p, f_implies(tuple_succ(t, u), conj(clauses))))));
        }

        // frame axiom: cells away from the head keep their symbol
        {
            std::vector<FormulaPtr> head_any;
            for (int q = 0; q < nstates; ++q) head_any.push_back(H(q, t, o));
            std::vector<FormulaPtr> keep;
            for (int a = 0; a < nsyms; ++a) keep.push_back(f_implies(T(a, t, p), T(a, u, p)));
            parts.push_back(forall_tuple(
                t, forall_tuple(
                       u, forall_tuple(
                              p, forall_tuple(
                                     o, f_implies(conj({tuple_succ(t, u), disj(head_any),
                                                        f_not(eq_tuple(p, o))}),
                                                  conj(keep)))))));
        }

        // an accepting state at the last time
        {
            std::vector<FormulaPtr> acc;
            for (const auto& q : m.accepting) acc.push_back(H(state_idx(q), t, p));
            parts.push_back(
                forall_tuple(t, f_implies(tuple_is_last(t), exists_tuple(p, disj(acc)))));
        }

        FormulaPtr psi = conj(parts);

        // weight of the step taken at each non-final time
        std::vector<FormulaPtr> options;
        for (const auto& e : m.transitions) {
            FormulaPtr beta = exists_tuple(
                u, f_and(tuple_succ(t, u),
                         exists_tuple(
                             p, conj({H(state_idx(e.p), t, p), T(sym_idx(e.a), t, p),
                                      T(sym_idx(e.b), u, p),
                                      exists_tuple(r, f_and(moved(p, r, e.move),
                                                            H(state_idx(e.q), u, r)))}))));
            options.push_back(f_otimes(f_const(S->print(e.weight)), beta));
        }
        FormulaPtr step = options.empty() ? FormulaPtr(f_false()) : options[0];
        for (size_t i = 1; i < options.size(); ++i) step = f_oplus(step, options[i]);
        FormulaPtr has_next = exists_tuple(u, tuple_succ(t, u));
        FormulaPtr weights = f_guard(has_next, step);
        for (auto it = t.rbegin(); it != t.rend(); ++it) weights = f_prod(*it, weights);

        FormulaPtr chi = f_otimes(psi, weights);
        for (int q = nstates - 1; q >= 0; --q)
            chi = f_sum_so("H" + std::to_string(q), 2 * k, chi);
        for (int a = nsyms - 1; a >= 0; --a)
            chi = f_sum_so("T" + std::to_string(a), 2 * k, chi);
        return chi;
    }
};

void check_shape(const WeightedTM& m, const Signature& sig, int k) {
    m.validate();
    if (sig.relations.size() > 1)
        throw invalid_argument_error("at most one relation symbol is supported");
    for (const auto& [name, ar] : sig.relations) {
        (void)name;
        if (k < ar)
            throw invalid_argument_error("k must be at least the relation arity");
    }
    if (k < 1) throw invalid_argument_error("k must be positive");
}

// swap every '<' atom for the guessed order relation L
FormulaPtr replace_less(const FormulaPtr& f) {
    if (f->kind == FKind::Less) return f_so("L", f->args);
    Formula g = *f;
    if (g.a) g.a = replace_less(g.a);
    if (g.b) g.b = replace_less(g.b);
    return std::make_shared<const Formula>(std::move(g));
}

// L is a strict total order
FormulaPtr order_axioms() {
    FormulaPtr irr = f_forall("x", f_not(f_so("L", {"x", "x"})));
    FormulaPtr trans = f_forall(
        "x", f_forall("y", f_forall("z", f_implies(f_and(f_so("L", {"x", "y"}),
                                                         f_so("L", {"y", "z"})),
                                                   f_so("L", {"x", "z"})))));
    FormulaPtr total = f_forall(
        "x", f_forall("y", f_implies(f_not(f_eq("x", "y")),
                                     f_or(f_so("L", {"x", "y"}), f_so("L", {"y", "x"})))));
    return f_and(irr, f_and(trans, total));
}

}  // namespace

FormulaPtr wtm_to_weso(const WeightedTM& m, const Signature& sig, int k) {
    check_shape(m, sig, k);
    Decompiler d{m, sig, k, registry_lookup(m.semiring)};
    d.sym_idx("0");
    d.sym_idx("1");  // the machine must be able to read encodings
    FormulaPtr out = d.build();
    validate(*out);
    return out;
}

FormulaPtr wtm_to_weso_unordered(const WeightedTM& m, const Signature& sig, int k) {
    auto S = registry_lookup(m.semiring);
    if (!S->commutative() || !S->idempotent())
        throw invalid_argument_error(
            "the order-free variant needs an idempotent commutative semiring");
    FormulaPtr ordered = wtm_to_weso(m, sig, k);
    // walk past the relation-quantifier prefix, then guess L and guard the
    // body with the order axioms (every total order gives the same value,
    // and idempotent addition collapses the n! copies)
    std::function<FormulaPtr(const FormulaPtr&)> rewrap =
        [&](const FormulaPtr& f) -> FormulaPtr {
        if (f->kind == FKind::SumSO) {
            Formula g = *f;
            g.a = rewrap(f->a);
            return std::make_shared<const Formula>(std::move(g));
        }
        return f_sum_so("L", 2, f_otimes(order_axioms(), replace_less(f)));
    };
    FormulaPtr out = rewrap(ordered);
    validate(*out);
    return out;
}

}  // namespace wdc
