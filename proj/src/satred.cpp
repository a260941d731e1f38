#include "wdc/satred.hpp"

#include <omp.h>

#include <cctype>

#include "wdc/errors.hpp"

namespace wdc {
namespace {

PropPtr mk(PKind k, std::string var, Value cval, PropPtr a, PropPtr b) {
    auto f = std::make_shared<PropFormula>();
    f->kind = k;
    f->var = std::move(var);
    f->cval = std::move(cval);
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
}

}  // namespace

PropPtr p_var(std::string n) { return mk(PKind::Var, std::move(n), {}, nullptr, nullptr); }
PropPtr p_negvar(std::string n) { return mk(PKind::NegVar, std::move(n), {}, nullptr, nullptr); }
PropPtr p_const(Value v) { return mk(PKind::Const, {}, std::move(v), nullptr, nullptr); }
PropPtr p_and(PropPtr a, PropPtr b) { return mk(PKind::And, {}, {}, std::move(a), std::move(b)); }
PropPtr p_or(PropPtr a, PropPtr b) { return mk(PKind::Or, {}, {}, std::move(a), std::move(b)); }

std::set<std::string> prop_vars(const PropFormula& f) {
    std::set<std::string> out;
    std::function<void(const PropFormula&)> walk = [&](const PropFormula& g) {
        if (g.kind == PKind::Var || g.kind == PKind::NegVar) out.insert(g.var);
        if (g.a) walk(*g.a);
        if (g.b) walk(*g.b);
    };
    walk(f);
    return out;
}

Value eval_prop(const PropFormula& f, const TruthAssignment& v, const Semiring& s) {
    switch (f.kind) {
        case PKind::Var: case PKind::NegVar: {
            auto it = v.find(f.var);
            if (it == v.end())
                throw invalid_argument_error("assignment misses variable '" + f.var + "'");
            bool val = (f.kind == PKind::Var) ? it->second : !it->second;
            return val ? s.one() : s.zero();
        }
        case PKind::Const:
            return f.cval;
        case PKind::Or:
            return s.add(eval_prop(*f.a, v, s), eval_prop(*f.b, v, s));
        case PKind::And: {
            Value l = eval_prop(*f.a, v, s);
            if (l == s.zero()) return l;
            return s.mul(l, eval_prop(*f.b, v, s));
        }
    }
    throw error("corrupt propositional node");
}

Value sat_series(const PropFormula& f, const Semiring& s, int max_vars, bool parallel) {
    std::set<std::string> var_set = prop_vars(f);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    if ((int)vars.size() > max_vars)
        throw cap_exceeded("formula has " + std::to_string(vars.size()) +
                           " variables, cap is " + std::to_string(max_vars));
    uint64_t count = uint64_t(1) << vars.size();
    auto value_at = [&](uint64_t bits) {
        TruthAssignment v;
        for (size_t i = 0; i < vars.size(); ++i) v[vars[i]] = (bits >> i) & 1;
        return eval_prop(f, v, s);
    };
    if (!parallel || count < 512) {
        Value acc = s.zero();
        for (uint64_t bits = 0; bits < count; ++bits) acc = s.add(acc, value_at(bits));
        return acc;
    }
    Value total = s.zero();
#pragma omp parallel
    {
        Value acc = s.zero();
#pragma omp for schedule(dynamic, 64) nowait
        for (long long bits = 0; bits < (long long)count; ++bits)
            acc = s.add(acc, value_at((uint64_t)bits));
#pragma omp critical
        total = s.add(total, acc);
    }
    return total;
}

// ---- grounding --------------------------------------------------------------

namespace {

struct Grounder {
    const Structure& A;
    const Semiring& S;
    std::set<std::string> prefix;  // relation variables left propositional
    std::map<std::string, int> env;

    int term(const std::string& t) const {
        if (!t.empty() && isdigit((unsigned char)t[0])) {
            int v = std::stoi(t);
            if (v < 0 || v >= A.n)
                throw invalid_argument_error("numeral " + t + " outside the universe");
            return v;
        }
        auto it = env.find(t);
        if (it == env.end())
            throw invalid_argument_error("unassigned first-order variable '" + t + "'");
        return it->second;
    }

    PropPtr truth(bool b) const { return p_const(b ? S.one() : S.zero()); }

    std::string pvar_name(const Formula& f) const {
        std::string out = f.name + "[";
        for (size_t i = 0; i < f.args.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(term(f.args[i]));
        }
        return out + "]";
    }

    // A Boolean subformula grounds to a complementary pair: `yes` evaluates
    // to 1 exactly when the formula holds (0 otherwise) and `no` to its
    // negation. Keeping both lets every disjunction be built disjointly
    // (a | (!a & b)), so the pair stays 0/1-valued over any semiring; a
    // plain De Morgan "or" would double-count, e.g. 1 + 1 = 2 in the
    // naturals wherever both branches hold.
    struct Pair {
        PropPtr yes, no;
    };

    Pair lift(bool b) const { return {truth(b), truth(!b)}; }

    static Pair pair_or(const Pair& a, const Pair& b) {
        return {p_or(a.yes, p_and(a.no, b.yes)), p_and(a.no, b.no)};
    }

    static Pair pair_and(const Pair& a, const Pair& b) {
        return {p_and(a.yes, b.yes), p_or(a.no, p_and(a.yes, b.no))};
    }

    Pair gbool(const Formula& f) {
        switch (f.kind) {
            case FKind::False: return lift(false);
            case FKind::True: return lift(true);
            case FKind::Eq: return lift(term(f.args[0]) == term(f.args[1]));
            case FKind::Neq: return lift(term(f.args[0]) != term(f.args[1]));
            case FKind::Less: return lift(term(f.args[0]) < term(f.args[1]));
            case FKind::RelAtom: {
                if (A.sig.arity_of(f.name) != (int)f.args.size())
                    throw invalid_argument_error("relation '" + f.name + "' arity mismatch");
                Tuple t;
                for (const auto& x : f.args) t.push_back(term(x));
                return lift(A.relation(f.name).count(t) > 0);
            }
            case FKind::SOAtom: {
                if (!prefix.count(f.name))
                    throw invalid_argument_error("relation variable '" + f.name +
                                                 "' is not bound by the leading sum prefix");
                std::string v = pvar_name(f);
                return {p_var(v), p_negvar(v)};
            }
            case FKind::Not: {
                Pair a = gbool(*f.a);
                return {a.no, a.yes};
            }
            case FKind::Or: return pair_or(gbool(*f.a), gbool(*f.b));
            case FKind::And: return pair_and(gbool(*f.a), gbool(*f.b));
            case FKind::Implies: {
                Pair a = gbool(*f.a);
                return pair_or(Pair{a.no, a.yes}, gbool(*f.b));
            }
            case FKind::Iff: {
                Pair a = gbool(*f.a), b = gbool(*f.b);
                return {p_or(p_and(a.yes, b.yes), p_and(a.no, b.no)),
                        p_or(p_and(a.yes, b.no), p_and(a.no, b.yes))};
            }
            case FKind::ExistsFO: case FKind::ForallFO: {
                bool disjunctive = f.kind == FKind::ExistsFO;
                Pair acc;
                int saved = env.count(f.name) ? env[f.name] : -1;
                for (int a = 0; a < A.n; ++a) {
                    env[f.name] = a;
                    Pair g = gbool(*f.a);
                    acc = !acc.yes ? g : (disjunctive ? pair_or(acc, g) : pair_and(acc, g));
                }
                if (saved >= 0) env[f.name] = saved; else env.erase(f.name);
                return acc;
            }
            case FKind::ExistsSO:
                throw invalid_argument_error("inner existsSO cannot be grounded");
            case FKind::Tc: case FKind::Dtc: case FKind::Lfp: case FKind::Gfp:
            case FKind::Ifp: case FKind::Pfp:
                throw invalid_argument_error("fixed-point constructs cannot be grounded");
            default:
                throw invalid_argument_error("negation scopes a weighted subformula");
        }
    }

    PropPtr gw(const Formula& f) {
        switch (f.kind) {
            case FKind::Const: return p_const(S.parse(f.name));
            case FKind::OPlus: return p_or(gw(*f.a), gw(*f.b));
            case FKind::OTimes: return p_and(gw(*f.a), gw(*f.b));
            case FKind::Guard: {
                // beta ? phi == (beta & phi) | !beta; the pair keeps the
                // two branches disjoint
                Pair beta = gbool(*f.a);
                return p_or(p_and(beta.yes, gw(*f.b)), beta.no);
            }
            case FKind::SumFO: case FKind::ProdFO: {
                bool disjunctive = f.kind == FKind::SumFO;
                PropPtr acc;
                int saved = env.count(f.name) ? env[f.name] : -1;
                for (int a = 0; a < A.n; ++a) {
                    env[f.name] = a;
                    PropPtr g = gw(*f.a);
                    acc = !acc ? g : (disjunctive ? p_or(acc, g) : p_and(acc, g));
                }
                if (saved >= 0) env[f.name] = saved; else env.erase(f.name);
                return acc;
            }
            case FKind::SumSO: case FKind::ProdSO:
                throw invalid_argument_error("relation quantifier outside the leading prefix");
            default:
                return gbool(f).yes;
        }
    }
};

}  // namespace

PropPtr cook_levin_reduce(const Formula& phi, const Structure& a, const Semiring& s,
                          const Assignment& rho) {
    a.validate();
    validate(phi);
    check_fragment(phi, Fragment::wESO);
    if (a.n == 0) throw invalid_argument_error("empty universe");
    Grounder g{a, s, {}, {}};
    for (const auto& [x, v] : rho.fo) {
        if (v < 0 || v >= a.n)
            throw invalid_argument_error("assignment of '" + x + "' outside the universe");
        g.env[x] = v;
    }
    const Formula* body = &phi;
    std::vector<std::pair<std::string, int>> bound;
    while (body->kind == FKind::SumSO) {
        g.prefix.insert(body->name);
        bound.push_back({body->name, body->so_arity});
        body = body->a.get();
    }
    PropPtr out = g.gw(*body);
    // SAT sums over the variables the formula mentions, so a ground atom
    // the body never touches must still appear: each one doubles the
    // assignment space without changing any value. Tack on a neutral
    // (v | !v) factor per missing atom.
    std::set<std::string> seen = prop_vars(*out);
    for (const auto& [name, arity] : bound)
        for (const auto& t : tuples_lex(a.n, arity)) {
            std::string v = name + "[";
            for (size_t i = 0; i < t.size(); ++i) {
                if (i) v += ",";
                v += std::to_string(t[i]);
            }
            v += "]";
            if (!seen.count(v)) out = p_and(out, p_or(p_var(v), p_negvar(v)));
        }
    return out;
}

// ---- text format -------------------------------------------------------------

namespace {

struct PropParser {
    const std::string& s;
    const Semiring& S;
    size_t i = 0;

    void skip() {
        while (i < s.size()) {
            if (isspace((unsigned char)s[i])) { ++i; continue; }
            if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '/') {
                while (i < s.size() && s[i] != '\n') ++i;
                continue;
            }
            break;
        }
    }

    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, i); }

    std::string name() {
        skip();
        size_t start = i;
        if (i >= s.size() || !(isalpha((unsigned char)s[i]) || s[i] == '_'))
            fail("expected a variable name");
        while (i < s.size() && (isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
        if (i < s.size() && s[i] == '[') {
            while (i < s.size() && s[i] != ']') ++i;
            if (i >= s.size()) fail("unterminated '['");
            ++i;
        }
        return s.substr(start, i - start);
    }

    PropPtr atom() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        if (s[i] == '(') {
            ++i;
            PropPtr f = orlevel();
            skip();
            if (i >= s.size() || s[i] != ')') fail("expected ')'");
            ++i;
            return f;
        }
        if (s[i] == '!') {
            ++i;
            return p_negvar(name());
        }
        if (s.compare(i, 2, "c(") == 0) {
            i += 2;
            size_t start = i;
            int depth = 1;
            while (i < s.size() && depth > 0) {
                if (s[i] == '(') ++depth;
                if (s[i] == ')') --depth;
                ++i;
            }
            if (depth > 0) fail("unterminated constant");
            return p_const(S.parse(s.substr(start, i - 1 - start)));
        }
        return p_var(name());
    }

    PropPtr andlevel() {
        PropPtr f = atom();
        skip();
        while (i < s.size() && s[i] == '&') {
            ++i;
            f = p_and(f, atom());
            skip();
        }
        return f;
    }

    PropPtr orlevel() {
        PropPtr f = andlevel();
        skip();
        while (i < s.size() && s[i] == '|') {
            ++i;
            f = p_or(f, andlevel());
            skip();
        }
        return f;
    }
};

void pr(const PropFormula& f, const Semiring& s, std::string& out, int parent) {
    int level = f.kind == PKind::Or ? 0 : f.kind == PKind::And ? 1 : 2;
    bool paren = level < parent;
    if (paren) out += "(";
    switch (f.kind) {
        case PKind::Var: out += f.var; break;
        case PKind::NegVar: out += "!" + f.var; break;
        case PKind::Const: out += "c(" + s.print(f.cval) + ")"; break;
        case PKind::Or:
            pr(*f.a, s, out, 0);
            out += " | ";
            pr(*f.b, s, out, 1);
            break;
        case PKind::And:
            pr(*f.a, s, out, 1);
            out += " & ";
            pr(*f.b, s, out, 2);
            break;
    }
    if (paren) out += ")";
}

}  // namespace

PropPtr parse_prop(const std::string& text, const Semiring& s) {
    PropParser p{text, s};
    PropPtr f = p.orlevel();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return f;
}

std::string print_prop(const PropFormula& f, const Semiring& s) {
    std::string out;
    pr(f, s, out, 0);
    return out;
}

}  // namespace wdc
