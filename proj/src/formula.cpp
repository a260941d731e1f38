#include "wdc/formula.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "wdc/errors.hpp"

namespace wdc {

namespace {
FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }
bool is_numeral(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return isdigit((unsigned char)c); });
}
}  // namespace

FormulaPtr f_false() { return mk({FKind::False}); }
FormulaPtr f_true() { return mk({FKind::True}); }
FormulaPtr f_eq(std::string x, std::string y) { return mk({FKind::Eq, "", 0, {std::move(x), std::move(y)}}); }
FormulaPtr f_less(std::string x, std::string y) { return mk({FKind::Less, "", 0, {std::move(x), std::move(y)}}); }
FormulaPtr f_neq(std::string x, std::string y) { return mk({FKind::Neq, "", 0, {std::move(x), std::move(y)}}); }
FormulaPtr f_rel(std::string r, std::vector<std::string> args) {
    return mk({FKind::RelAtom, std::move(r), 0, std::move(args)});
}
FormulaPtr f_so(std::string X, std::vector<std::string> args) {
    return mk({FKind::SOAtom, std::move(X), 0, std::move(args)});
}
FormulaPtr f_not(FormulaPtr a) { return mk({FKind::Not, "", 0, {}, {}, {}, std::move(a)}); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return mk({FKind::Or, "", 0, {}, {}, {}, std::move(a), std::move(b)}); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return mk({FKind::And, "", 0, {}, {}, {}, std::move(a), std::move(b)}); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return mk({FKind::Implies, "", 0, {}, {}, {}, std::move(a), std::move(b)}); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return mk({FKind::Iff, "", 0, {}, {}, {}, std::move(a), std::move(b)}); }
FormulaPtr f_exists(std::string x, FormulaPtr a) { return mk({FKind::ExistsFO, std::move(x), 0, {}, {}, {}, std::move(a)}); }
FormulaPtr f_forall(std::string x, FormulaPtr a) { return mk({FKind::ForallFO, std::move(x), 0, {}, {}, {}, std::move(a)}); }
FormulaPtr f_exists_so(std::string X, int arity, FormulaPtr a) {
    return mk({FKind::ExistsSO, std::move(X), arity, {}, {}, {}, std::move(a)});
}
FormulaPtr f_closure(FKind k, std::vector<std::string> xs, std::vector<std::string> ys,
                     FormulaPtr body, std::vector<std::string> terms) {
    return mk({k, "", 0, std::move(terms), std::move(xs), std::move(ys), std::move(body)});
}
FormulaPtr f_fixpoint(FKind k, std::string r, std::vector<std::string> xs, FormulaPtr body,
                      std::vector<std::string> terms) {
    return mk({k, std::move(r), 0, std::move(terms), std::move(xs), {}, std::move(body)});
}
FormulaPtr f_const(std::string literal) { return mk({FKind::Const, std::move(literal)}); }
FormulaPtr f_oplus(FormulaPtr a, FormulaPtr b) { return mk({FKind::OPlus, "", 0, {}, {}, {}, std::move(a), std::move(b)}); }
FormulaPtr f_otimes(FormulaPtr a, FormulaPtr b) { return mk({FKind::OTimes, "", 0, {}, {}, {}, std::move(a), std::move(b)}); }
FormulaPtr f_sum(std::string x, FormulaPtr a) { return mk({FKind::SumFO, std::move(x), 0, {}, {}, {}, std::move(a)}); }
FormulaPtr f_prod(std::string x, FormulaPtr a) { return mk({FKind::ProdFO, std::move(x), 0, {}, {}, {}, std::move(a)}); }
FormulaPtr f_sum_so(std::string X, int arity, FormulaPtr a) {
    return mk({FKind::SumSO, std::move(X), arity, {}, {}, {}, std::move(a)});
}
FormulaPtr f_prod_so(std::string X, int arity, FormulaPtr a) {
    return mk({FKind::ProdSO, std::move(X), arity, {}, {}, {}, std::move(a)});
}
FormulaPtr f_guard(FormulaPtr beta, FormulaPtr phi) {
    return mk({FKind::Guard, "", 0, {}, {}, {}, std::move(beta), std::move(phi)});
}

bool is_boolean(const Formula& f) {
    switch (f.kind) {
        case FKind::False: case FKind::True: case FKind::Eq: case FKind::Less: case FKind::Neq:
        case FKind::RelAtom: case FKind::SOAtom: case FKind::Not: case FKind::Or: case FKind::And:
        case FKind::Implies: case FKind::Iff: case FKind::ExistsFO: case FKind::ForallFO:
        case FKind::ExistsSO: case FKind::Tc: case FKind::Dtc: case FKind::Lfp: case FKind::Gfp:
        case FKind::Ifp: case FKind::Pfp:
            return true;
        default:
            return false;
    }
}

namespace {

void collect_free(const Formula& f, std::set<std::string> bound_fo,
                  std::set<std::string> bound_so, VarSet& out) {
    auto add_fo_args = [&](const std::vector<std::string>& args) {
        for (const auto& a : args)
            if (!is_numeral(a) && !bound_fo.count(a)) out.fo.insert(a);
    };
    switch (f.kind) {
        case FKind::Eq: case FKind::Less: case FKind::Neq:
            add_fo_args(f.args);
            return;
        case FKind::RelAtom:
            add_fo_args(f.args);
            return;
        case FKind::SOAtom:
            if (!bound_so.count(f.name)) out.so.insert({f.name, (int)f.args.size()});
            add_fo_args(f.args);
            return;
        case FKind::ExistsFO: case FKind::ForallFO: case FKind::SumFO: case FKind::ProdFO:
            bound_fo.insert(f.name);
            collect_free(*f.a, bound_fo, bound_so, out);
            return;
        case FKind::ExistsSO: case FKind::SumSO: case FKind::ProdSO:
            bound_so.insert(f.name);
            collect_free(*f.a, bound_fo, bound_so, out);
            return;
        case FKind::Tc: case FKind::Dtc: {
            add_fo_args(f.args);
            auto inner = bound_fo;
            for (const auto& v : f.bound1) inner.insert(v);
            for (const auto& v : f.bound2) inner.insert(v);
            collect_free(*f.a, inner, bound_so, out);
            return;
        }
        case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp: {
            add_fo_args(f.args);
            auto inner = bound_fo;
            for (const auto& v : f.bound1) inner.insert(v);
            collect_free(*f.a, inner, bound_so, out);
            return;
        }
        default:
            if (f.a) collect_free(*f.a, bound_fo, bound_so, out);
            if (f.b) collect_free(*f.b, bound_fo, bound_so, out);
            return;
    }
}

}  // namespace

VarSet free_vars(const Formula& f) {
    VarSet out;
    collect_free(f, {}, {}, out);
    return out;
}

bool check_positive(const Formula& f, const std::string& r) {
    // polarity: +1 positive, -1 negative, 0 both (under <->)
    std::function<bool(const Formula&, int)> walk = [&](const Formula& g, int pol) -> bool {
        switch (g.kind) {
            case FKind::RelAtom:
                if (g.name == r) return pol == 1;
                return true;
            case FKind::Not:
                return walk(*g.a, -pol);
            case FKind::Implies:
                return walk(*g.a, -pol) && walk(*g.b, pol);
            case FKind::Iff:
                return walk(*g.a, 0) && walk(*g.b, 0);
            case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp:
                if (g.name == r) return true;  // shadowed inside
                return walk(*g.a, pol);
            default: {
                bool ok = true;
                if (g.a) ok = ok && walk(*g.a, pol);
                if (g.b) ok = ok && walk(*g.b, pol);
                return ok;
            }
        }
    };
    return walk(f, 1);
}

bool contains_less(const Formula& f) {
    if (f.kind == FKind::Less) return true;
    return (f.a && contains_less(*f.a)) || (f.b && contains_less(*f.b));
}

namespace {

[[noreturn]] void viol(const std::string& msg) { throw invalid_argument_error(msg); }

struct Validator {
    // SO variable name -> arity, for bound and free occurrences alike
    std::map<std::string, int> so_arity;

    void check_so_use(const std::string& name, int arity) {
        auto [it, inserted] = so_arity.emplace(name, arity);
        if (!inserted && it->second != arity)
            viol("second-order variable '" + name + "' used with arities " +
                 std::to_string(it->second) + " and " + std::to_string(arity));
    }

    void need_boolean(const Formula& f, const char* where) {
        if (!is_boolean(f)) viol(std::string("weighted subformula under ") + where);
    }

    void walk(const Formula& f) {
        switch (f.kind) {
            case FKind::False: case FKind::True:
                return;
            case FKind::Eq: case FKind::Less: case FKind::Neq:
                if (f.args.size() != 2) viol("comparison needs two terms");
                return;
            case FKind::RelAtom:
                return;
            case FKind::SOAtom:
                check_so_use(f.name, (int)f.args.size());
                return;
            case FKind::Not:
                need_boolean(*f.a, "negation");
                walk(*f.a);
                return;
            case FKind::Or: case FKind::And: case FKind::Implies: case FKind::Iff:
                need_boolean(*f.a, "a Boolean connective");
                need_boolean(*f.b, "a Boolean connective");
                walk(*f.a);
                walk(*f.b);
                return;
            case FKind::ExistsFO: case FKind::ForallFO:
                need_boolean(*f.a, "a Boolean quantifier");
                walk(*f.a);
                return;
            case FKind::ExistsSO: {
                need_boolean(*f.a, "a Boolean quantifier");
                if (f.so_arity < 1) viol("SO quantifier arity must be >= 1");
                auto saved = so_arity;
                so_arity[f.name] = f.so_arity;
                walk(*f.a);
                so_arity = saved;
                return;
            }
            case FKind::Tc: case FKind::Dtc: {
                size_t k = f.bound1.size();
                if (k == 0 || f.bound2.size() != k) viol("closure binder tuples must have equal positive length");
                if (f.args.size() != 2 * k) viol("closure application needs 2k terms");
                need_boolean(*f.a, "a closure body");
                walk(*f.a);
                return;
            }
            case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp: {
                size_t k = f.bound1.size();
                if (k == 0) viol("fixpoint binder tuple must be non-empty");
                if (f.args.size() != k) viol("fixpoint application needs k terms");
                need_boolean(*f.a, "a fixpoint body");
                if ((f.kind == FKind::Lfp || f.kind == FKind::Gfp) && !check_positive(*f.a, f.name))
                    viol("lfp/gfp body must be positive in '" + f.name + "'");
                walk(*f.a);
                return;
            }
            case FKind::Const:
                if (f.name.empty()) viol("empty weight literal");
                return;
            case FKind::OPlus: case FKind::OTimes:
                walk(*f.a);
                walk(*f.b);
                return;
            case FKind::SumFO: case FKind::ProdFO:
                walk(*f.a);
                return;
            case FKind::SumSO: case FKind::ProdSO: {
                if (f.so_arity < 1) viol("SO quantifier arity must be >= 1");
                auto saved = so_arity;
                so_arity[f.name] = f.so_arity;
                walk(*f.a);
                so_arity = saved;
                return;
            }
            case FKind::Guard:
                need_boolean(*f.a, "the guard condition");
                walk(*f.a);
                walk(*f.b);
                return;
        }
        viol("corrupt formula node");
    }
};

}  // namespace

void validate(const Formula& f) {
    Validator v;
    v.walk(f);
}

namespace {

void forbid(const Formula& f, std::initializer_list<FKind> kinds, const std::string& why) {
    for (FKind k : kinds)
        if (f.kind == k) viol(why);
    if (f.a) forbid(*f.a, kinds, why);
    if (f.b) forbid(*f.b, kinds, why);
}

}  // namespace

void check_fragment(const Formula& f, Fragment fr) {
    validate(f);
    switch (fr) {
        case Fragment::wFO:
            forbid(f, {FKind::SOAtom, FKind::ExistsSO, FKind::SumSO, FKind::ProdSO},
                   "wFO admits no second-order features");
            forbid(f, {FKind::Tc, FKind::Dtc, FKind::Lfp, FKind::Gfp, FKind::Ifp, FKind::Pfp},
                   "wFO admits no closure or fixpoint operators");
            return;
        case Fragment::wSO:
            forbid(f, {FKind::Tc, FKind::Dtc, FKind::Lfp, FKind::Gfp, FKind::Ifp, FKind::Pfp},
                   "wSO admits no closure or fixpoint operators");
            return;
        case Fragment::wESO: {
            const Formula* g = &f;
            while (g->kind == FKind::SumSO) g = g->a.get();
            forbid(*g, {FKind::SumSO}, "wESO allows sumSO only as a leading prefix");
            forbid(*g, {FKind::ProdSO}, "wESO admits no multiplicative SO quantifier");
            forbid(*g, {FKind::ExistsSO},
                   "wESO admits no Boolean SO quantifier (it has no deterministic "
                   "polynomial-time machine counterpart)");
            forbid(*g, {FKind::Tc, FKind::Dtc, FKind::Lfp, FKind::Gfp, FKind::Ifp, FKind::Pfp},
                   "wESO admits no closure or fixpoint operators");
            return;
        }
        case Fragment::wLFP:
            forbid(f, {FKind::SOAtom, FKind::ExistsSO, FKind::SumSO, FKind::ProdSO},
                   "wLFP admits no second-order features");
            forbid(f, {FKind::Tc, FKind::Dtc, FKind::Pfp},
                   "wLFP admits only lfp/gfp/ifp operators");
            return;
        case Fragment::wPFP:
            forbid(f, {FKind::SOAtom, FKind::ExistsSO, FKind::SumSO, FKind::ProdSO},
                   "wPFP admits no second-order features");
            forbid(f, {FKind::Tc, FKind::Dtc}, "wPFP admits no closure operators");
            return;
        case Fragment::wDTC:
            forbid(f, {FKind::SOAtom, FKind::ExistsSO, FKind::SumSO, FKind::ProdSO},
                   "wDTC admits no second-order features");
            forbid(f, {FKind::Tc, FKind::Lfp, FKind::Gfp, FKind::Ifp, FKind::Pfp},
                   "wDTC admits only the dtc operator");
            return;
        case Fragment::wPFP_SOq:
            forbid(f, {FKind::Tc, FKind::Dtc}, "wPFP+SOq admits no closure operators");
            return;
    }
}

FormulaPtr desugar(const FormulaPtr& f) {
    auto rec = [](const FormulaPtr& g) { return desugar(g); };
    switch (f->kind) {
        case FKind::True:
            return f_not(f_false());
        case FKind::Neq:
            return f_not(f_eq(f->args[0], f->args[1]));
        case FKind::And:
            return f_not(f_or(f_not(rec(f->a)), f_not(rec(f->b))));
        case FKind::Implies:
            return f_or(f_not(rec(f->a)), rec(f->b));
        case FKind::Iff: {
            auto l = rec(f->a), r = rec(f->b);
            auto dir1 = f_or(f_not(l), r), dir2 = f_or(f_not(r), l);
            return f_not(f_or(f_not(dir1), f_not(dir2)));
        }
        case FKind::ForallFO:
            return f_not(f_exists(f->name, f_not(rec(f->a))));
        case FKind::Guard: {
            // beta ? phi  ==  (beta (*) phi) (+) (!beta (*) 1), with 1 spelled
            // as the Boolean truth !false so no semiring literal is needed.
            auto beta = rec(f->a), phi = rec(f->b);
            return f_oplus(f_otimes(beta, phi), f_otimes(f_not(beta), f_not(f_false())));
        }
        default: {
            if (!f->a && !f->b) return f;
            Formula g = *f;
            if (f->a) g.a = rec(f->a);
            if (f->b) g.b = rec(f->b);
            return mk(std::move(g));
        }
    }
}

}  // namespace wdc
