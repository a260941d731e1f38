#include "wdc/eval.hpp"

#include <omp.h>

#include <cctype>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "wdc/errors.hpp"

// Compiled evaluator. The formula is first lowered to a tree whose variable
// references are dense slot indices and whose structure relations are
// resolved to bitmasks (or tuple sets when they exceed 62 bits), so the hot
// loops below never touch names or std::map.

namespace wdc {
namespace {

struct Arg {
    bool is_var;
    int slot;   // when is_var
    int value;  // when numeral
};

struct SoV {
    bool defined = false;
    int arity = 0;
    uint64_t bits = 0;
};

struct Env {
    std::vector<int> fo;   // -1 = undefined
    std::vector<SoV> so;
};

struct CF;
using CFp = std::unique_ptr<CF>;

struct CF {
    FKind kind = FKind::False;
    // atoms
    std::vector<Arg> args;
    bool atom_is_so = false;
    int so_slot = -1;          // SOAtom / fixpoint-bound relation
    int rel_arity = 0;
    bool rel_use_mask = false;
    uint64_t rel_mask = 0;
    const Relation* rel_set = nullptr;
    // binders
    int fo_slot = -1;
    int so_arity = 0;
    uint64_t so_count = 0;  // 2^(n^arity)
    // weights
    Value cval;
    // closures / fixpoints
    std::vector<int> b1, b2;
    // children
    CFp a, b;
};

struct Compiler {
    const Structure& A;
    const Semiring& S;
    const EvalCaps& caps;
    Env init_env;
    std::vector<std::pair<std::string, int>> fo_scope;   // name -> slot
    std::vector<std::pair<std::string, int>> so_scope;   // SO var or fixpoint symbol -> slot
    std::unordered_map<std::string, int> free_fo, free_so;
    const Assignment& rho;

    Compiler(const Structure& a, const Semiring& s, const EvalCaps& c, const Assignment& r)
        : A(a), S(s), caps(c), rho(r) {}

    int lookup_scope(const std::vector<std::pair<std::string, int>>& scope, const std::string& n) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == n) return it->second;
        return -1;
    }

    int new_fo_slot() {
        init_env.fo.push_back(-1);
        return (int)init_env.fo.size() - 1;
    }
    int new_so_slot() {
        init_env.so.push_back({});
        return (int)init_env.so.size() - 1;
    }

    Arg compile_term(const std::string& t) {
        if (!t.empty() && isdigit((unsigned char)t[0])) {
            int v = std::stoi(t);
            if (v < 0 || v >= A.n)
                throw invalid_argument_error("numeral " + t + " outside the universe");
            return {false, -1, v};
        }
        int slot = lookup_scope(fo_scope, t);
        if (slot < 0) {
            auto it = free_fo.find(t);
            if (it != free_fo.end()) {
                slot = it->second;
            } else {
                slot = new_fo_slot();
                free_fo[t] = slot;
                auto r = rho.fo.find(t);
                if (r != rho.fo.end()) {
                    if (r->second < 0 || r->second >= A.n)
                        throw invalid_argument_error("assignment of '" + t + "' outside the universe");
                    init_env.fo[slot] = r->second;
                }
            }
        }
        return {true, slot, 0};
    }

    int so_slot_for(const std::string& name, int arity) {
        int slot = lookup_scope(so_scope, name);
        if (slot >= 0) return slot;
        auto it = free_so.find(name);
        if (it != free_so.end()) return it->second;
        slot = new_so_slot();
        free_so[name] = slot;
        auto r = rho.so.find(name);
        if (r != rho.so.end()) {
            (void)pow_checked(A.n, arity);
            init_env.so[slot] = {true, arity, mask_from_relation(r->second, A.n)};
        }
        return slot;
    }

    uint64_t so_range(int arity) const {
        SubsetStar range(A.n, arity, caps.max_subset_base);
        return range.count;
    }

    CFp compile(const Formula& f) {
        auto out = std::make_unique<CF>();
        out->kind = f.kind;
        switch (f.kind) {
            case FKind::False: case FKind::True:
                return out;
            case FKind::Eq: case FKind::Less: case FKind::Neq:
                out->args = {compile_term(f.args[0]), compile_term(f.args[1])};
                return out;
            case FKind::RelAtom: {
                for (const auto& t : f.args) out->args.push_back(compile_term(t));
                int slot = lookup_scope(so_scope, f.name);
                if (slot >= 0) {  // fixpoint-bound relation symbol
                    out->atom_is_so = true;
                    out->so_slot = slot;
                    return out;
                }
                int arity = A.sig.arity_of(f.name);
                if (arity < 0) throw invalid_argument_error("unknown relation '" + f.name + "'");
                if ((int)f.args.size() != arity)
                    throw invalid_argument_error("relation '" + f.name + "' expects " +
                                                 std::to_string(arity) + " arguments");
                out->rel_arity = arity;
                out->rel_set = &A.relation(f.name);
                uint64_t total = pow_checked(A.n, arity);
                if (total <= 62) {
                    out->rel_use_mask = true;
                    out->rel_mask = mask_from_relation(*out->rel_set, A.n);
                }
                return out;
            }
            case FKind::SOAtom: {
                for (const auto& t : f.args) out->args.push_back(compile_term(t));
                out->atom_is_so = true;
                out->so_slot = so_slot_for(f.name, (int)f.args.size());
                return out;
            }
            case FKind::Not:
                out->a = compile(*f.a);
                return out;
            case FKind::Or: case FKind::And: case FKind::Implies: case FKind::Iff:
            case FKind::OPlus: case FKind::OTimes: case FKind::Guard:
                out->a = compile(*f.a);
                out->b = compile(*f.b);
                return out;
            case FKind::ExistsFO: case FKind::ForallFO: case FKind::SumFO: case FKind::ProdFO: {
                out->fo_slot = new_fo_slot();
                fo_scope.push_back({f.name, out->fo_slot});
                out->a = compile(*f.a);
                fo_scope.pop_back();
                return out;
            }
            case FKind::ExistsSO: case FKind::SumSO: case FKind::ProdSO: {
                out->so_arity = f.so_arity;
                out->so_count = so_range(f.so_arity);
                out->so_slot = new_so_slot();
                so_scope.push_back({f.name, out->so_slot});
                out->a = compile(*f.a);
                so_scope.pop_back();
                return out;
            }
            case FKind::Tc: case FKind::Dtc: {
                for (const auto& t : f.args) out->args.push_back(compile_term(t));
                size_t base = fo_scope.size();
                for (const auto& v : f.bound1) {
                    out->b1.push_back(new_fo_slot());
                    fo_scope.push_back({v, out->b1.back()});
                }
                for (const auto& v : f.bound2) {
                    out->b2.push_back(new_fo_slot());
                    fo_scope.push_back({v, out->b2.back()});
                }
                out->a = compile(*f.a);
                fo_scope.resize(base);
                return out;
            }
            case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp: {
                for (const auto& t : f.args) out->args.push_back(compile_term(t));
                uint64_t total = pow_checked(A.n, (int)f.bound1.size());
                if (total > 62) throw cap_exceeded("fixpoint relation exceeds 62 tuples");
                out->so_slot = new_so_slot();
                out->rel_arity = (int)f.bound1.size();
                size_t base = fo_scope.size();
                for (const auto& v : f.bound1) {
                    out->b1.push_back(new_fo_slot());
                    fo_scope.push_back({v, out->b1.back()});
                }
                so_scope.push_back({f.name, out->so_slot});
                out->a = compile(*f.a);
                so_scope.pop_back();
                fo_scope.resize(base);
                return out;
            }
            case FKind::Const:
                out->cval = S.parse(f.name);
                return out;
        }
        throw error("corrupt formula node");
    }
};

struct Runner {
    const Structure& A;
    const Semiring& S;
    const EvalCaps& caps;
    bool parallel;
    int n;

    Runner(const Structure& a, const Semiring& s, const EvalCaps& c, bool par)
        : A(a), S(s), caps(c), parallel(par), n(a.n) {}

    // tuple rank of atom arguments; -1 if any variable is undefined
    long long arg_rank(const std::vector<Arg>& args, const Env& env) const {
        long long r = 0;
        for (const auto& a : args) {
            int v = a.is_var ? env.fo[a.slot] : a.value;
            if (v < 0) return -1;
            r = r * n + v;
        }
        return r;
    }

    bool ebool(const CF& f, Env& env) const {
        switch (f.kind) {
            case FKind::False: return false;
            case FKind::True: return true;
            case FKind::Eq: {
                int x = f.args[0].is_var ? env.fo[f.args[0].slot] : f.args[0].value;
                int y = f.args[1].is_var ? env.fo[f.args[1].slot] : f.args[1].value;
                return x >= 0 && y >= 0 && x == y;
            }
            case FKind::Neq: {
                int x = f.args[0].is_var ? env.fo[f.args[0].slot] : f.args[0].value;
                int y = f.args[1].is_var ? env.fo[f.args[1].slot] : f.args[1].value;
                return x >= 0 && y >= 0 && x != y;
            }
            case FKind::Less: {
                int x = f.args[0].is_var ? env.fo[f.args[0].slot] : f.args[0].value;
                int y = f.args[1].is_var ? env.fo[f.args[1].slot] : f.args[1].value;
                return x >= 0 && y >= 0 && x < y;
            }
            case FKind::RelAtom: case FKind::SOAtom: {
                long long r = arg_rank(f.args, env);
                if (r < 0) return false;
                if (f.atom_is_so) {
                    const SoV& v = env.so[f.so_slot];
                    if (!v.defined || v.arity != (int)f.args.size()) return false;
                    return (v.bits >> r) & 1;
                }
                if (f.rel_use_mask) return (f.rel_mask >> r) & 1;
                Tuple t(f.args.size());
                for (size_t i = 0; i < f.args.size(); ++i)
                    t[i] = f.args[i].is_var ? env.fo[f.args[i].slot] : f.args[i].value;
                return f.rel_set->count(t) > 0;
            }
            case FKind::Not: return !ebool(*f.a, env);
            case FKind::Or: return ebool(*f.a, env) || ebool(*f.b, env);
            case FKind::And: return ebool(*f.a, env) && ebool(*f.b, env);
            case FKind::Implies: return !ebool(*f.a, env) || ebool(*f.b, env);
            case FKind::Iff: return ebool(*f.a, env) == ebool(*f.b, env);
            case FKind::ExistsFO: {
                for (int a = 0; a < n; ++a) {
                    env.fo[f.fo_slot] = a;
                    if (ebool(*f.a, env)) { env.fo[f.fo_slot] = -1; return true; }
                }
                env.fo[f.fo_slot] = -1;
                return false;
            }
            case FKind::ForallFO: {
                for (int a = 0; a < n; ++a) {
                    env.fo[f.fo_slot] = a;
                    if (!ebool(*f.a, env)) { env.fo[f.fo_slot] = -1; return false; }
                }
                env.fo[f.fo_slot] = -1;
                return true;
            }
            case FKind::ExistsSO: {
                for (uint64_t m = 0; m < f.so_count; ++m) {
                    env.so[f.so_slot] = {true, f.so_arity, m};
                    if (ebool(*f.a, env)) { env.so[f.so_slot] = {}; return true; }
                }
                env.so[f.so_slot] = {};
                return false;
            }
            case FKind::Tc: case FKind::Dtc: {
                long long u = arg_rank({f.args.begin(), f.args.begin() + f.b1.size()}, env);
                long long v = arg_rank({f.args.begin() + f.b1.size(), f.args.end()}, env);
                if (u < 0 || v < 0) return false;
                return closure_reaches(f, env, (uint64_t)u, (uint64_t)v);
            }
            case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp: {
                long long t = arg_rank(f.args, env);
                if (t < 0) return false;
                uint64_t fp = fixpoint_mask(f, env);
                return (fp >> t) & 1;
            }
            default:
                throw invalid_argument_error("weighted node evaluated in Boolean position");
        }
    }

    void bind_tuple(Env& env, const std::vector<int>& slots, uint64_t rank) const {
        for (int i = (int)slots.size() - 1; i >= 0; --i) {
            env.fo[slots[i]] = (int)(rank % (uint64_t)n);
            rank /= (uint64_t)n;
        }
    }

    bool closure_reaches(const CF& f, Env& env, uint64_t from, uint64_t to) const {
        uint64_t total = pow_checked(n, (int)f.b1.size());
        if (total > (uint64_t(1) << 16)) throw cap_exceeded("closure domain too large");
        auto succs = [&](uint64_t u) {
            std::vector<uint64_t> out;
            bind_tuple(env, f.b1, u);
            for (uint64_t v = 0; v < total; ++v) {
                bind_tuple(env, f.b2, v);
                if (ebool(*f.a, env)) out.push_back(v);
            }
            for (int s : f.b1) env.fo[s] = -1;
            for (int s : f.b2) env.fo[s] = -1;
            return out;
        };
        // dtc: a step exists only where the successor is unique
        std::vector<char> seen(total, 0);
        std::vector<uint64_t> queue;
        auto push_steps = [&](uint64_t u) {
            auto vs = succs(u);
            if (f.kind == FKind::Dtc && vs.size() != 1) return;
            for (uint64_t v : vs)
                if (!seen[v]) { seen[v] = 1; queue.push_back(v); }
        };
        push_steps(from);  // paths of length >= 1 only
        for (size_t qi = 0; qi < queue.size(); ++qi) push_steps(queue[qi]);
        return seen[to];
    }

    uint64_t apply_update(const CF& f, Env& env, uint64_t current) const {
        uint64_t total = pow_checked(n, f.rel_arity);
        uint64_t out = 0;
        env.so[f.so_slot] = {true, f.rel_arity, current};
        for (uint64_t t = 0; t < total; ++t) {
            bind_tuple(env, f.b1, t);
            if (ebool(*f.a, env)) out |= uint64_t(1) << t;
        }
        for (int s : f.b1) env.fo[s] = -1;
        env.so[f.so_slot] = {};
        return out;
    }

    uint64_t fixpoint_mask(const CF& f, Env& env) const {
        uint64_t total = pow_checked(n, f.rel_arity);
        long max_stages = caps.max_stages;
        if (max_stages <= 0) {
            max_stages = (total >= 62) ? std::numeric_limits<long>::max()
                                       : (long)((uint64_t(1) << total) + 1);
        }
        uint64_t full = (total >= 64) ? ~uint64_t(0) : ((uint64_t(1) << total) - 1);
        uint64_t r = (f.kind == FKind::Gfp) ? full : 0;
        std::unordered_set<uint64_t> seen;
        for (long stage = 0; stage < max_stages; ++stage) {
            uint64_t next = apply_update(f, env, r);
            if (f.kind == FKind::Ifp) next |= r;
            if (next == r) return r;
            if (f.kind == FKind::Pfp) {
                seen.insert(r);
                if (seen.count(next)) return 0;  // cycle with period > 1
            }
            r = next;
        }
        throw cap_exceeded("fixpoint stage bound exceeded");
    }

    Value eweighted(const CF& f, Env& env) const {
        switch (f.kind) {
            case FKind::Const:
                return f.cval;
            case FKind::OPlus:
                return S.add(eweighted(*f.a, env), eweighted(*f.b, env));
            case FKind::OTimes: {
                Value l = eweighted(*f.a, env);
                if (l == S.zero()) return l;  // annihilation shortcut
                return S.mul(l, eweighted(*f.b, env));
            }
            case FKind::SumFO: {
                Value acc = S.zero();
                for (int a = 0; a < n; ++a) {
                    env.fo[f.fo_slot] = a;
                    acc = S.add(acc, eweighted(*f.a, env));
                }
                env.fo[f.fo_slot] = -1;
                return acc;
            }
            case FKind::ProdFO: {
                // ordered product over ascending elements
                Value acc = S.one();
                for (int a = 0; a < n; ++a) {
                    env.fo[f.fo_slot] = a;
                    acc = S.mul(acc, eweighted(*f.a, env));
                    if (acc == S.zero()) break;
                }
                env.fo[f.fo_slot] = -1;
                return acc;
            }
            case FKind::SumSO:
                return sum_so(f, env);
            case FKind::ProdSO: {
                // ordered product over subsets in <* order (= ascending masks)
                Value acc = S.one();
                for (uint64_t m = 0; m < f.so_count; ++m) {
                    env.so[f.so_slot] = {true, f.so_arity, m};
                    acc = S.mul(acc, eweighted(*f.a, env));
                    if (acc == S.zero()) break;
                }
                env.so[f.so_slot] = {};
                return acc;
            }
            case FKind::Guard:
                return ebool(*f.a, env) ? eweighted(*f.b, env) : S.one();
            default:
                return ebool(f, env) ? S.one() : S.zero();
        }
    }

    Value sum_so(const CF& f, Env& env) const {
        if (!parallel || f.so_count < 512 || omp_in_parallel()) {
            Value acc = S.zero();
            for (uint64_t m = 0; m < f.so_count; ++m) {
                env.so[f.so_slot] = {true, f.so_arity, m};
                acc = S.add(acc, eweighted(*f.a, env));
            }
            env.so[f.so_slot] = {};
            return acc;
        }
        // addition is commutative and associative in every semiring, so the
        // per-thread partials combine exactly
        Value total = S.zero();
#pragma omp parallel
        {
            Env local = env;
            Value acc = S.zero();
#pragma omp for schedule(dynamic, 64) nowait
            for (long long m = 0; m < (long long)f.so_count; ++m) {
                local.so[f.so_slot] = {true, f.so_arity, (uint64_t)m};
                acc = S.add(acc, eweighted(*f.a, local));
            }
#pragma omp critical
            total = S.add(total, acc);
        }
        env.so[f.so_slot] = {};
        return total;
    }
};

struct Prepared {
    CFp root;
    Env env;
};

Prepared prepare(const Formula& f, const EvalContext& ctx) {
    if (!ctx.structure || !ctx.semiring) throw invalid_argument_error("evaluation context incomplete");
    ctx.structure->validate();
    validate(f);
    Compiler c(*ctx.structure, *ctx.semiring, ctx.caps, ctx.rho);
    CFp root = c.compile(f);
    return {std::move(root), std::move(c.init_env)};
}

}  // namespace

bool eval_bool(const Formula& f, const EvalContext& ctx) {
    if (!is_boolean(f)) throw invalid_argument_error("eval_bool needs a Boolean formula");
    Prepared p = prepare(f, ctx);
    Runner r(*ctx.structure, *ctx.semiring, ctx.caps, ctx.parallel);
    return r.ebool(*p.root, p.env);
}

Value eval_weighted(const Formula& f, const EvalContext& ctx) {
    Prepared p = prepare(f, ctx);
    Runner r(*ctx.structure, *ctx.semiring, ctx.caps, ctx.parallel);
    return r.eweighted(*p.root, p.env);
}

std::set<Tuple> eval_fixpoint(FKind kind, const std::string& rel, const std::vector<std::string>& vars,
                              const Formula& body, const EvalContext& ctx) {
    std::vector<std::string> terms(vars.size(), "0");
    FormulaPtr fp = f_fixpoint(kind, rel, vars, std::make_shared<Formula>(body), terms);
    Prepared p = prepare(*fp, ctx);
    Runner r(*ctx.structure, *ctx.semiring, ctx.caps, ctx.parallel);
    uint64_t mask = r.fixpoint_mask(*p.root, p.env);
    return subset_from_mask(mask, ctx.structure->n, (int)vars.size());
}

std::set<Tuple> eval_closure(FKind kind, const std::vector<std::string>& xs,
                             const std::vector<std::string>& ys, const Formula& body,
                             const EvalContext& ctx) {
    if (kind != FKind::Tc && kind != FKind::Dtc)
        throw invalid_argument_error("eval_closure expects tc or dtc");
    std::vector<std::string> terms;
    for (size_t i = 0; i < xs.size() + ys.size(); ++i) terms.push_back("0");
    FormulaPtr cl = f_closure(kind, xs, ys, std::make_shared<Formula>(body), terms);
    Prepared p = prepare(*cl, ctx);
    Runner r(*ctx.structure, *ctx.semiring, ctx.caps, ctx.parallel);
    int n = ctx.structure->n, k = (int)xs.size();
    uint64_t total = pow_checked(n, k);
    std::set<Tuple> out;
    for (uint64_t u = 0; u < total; ++u)
        for (uint64_t v = 0; v < total; ++v)
            if (r.closure_reaches(*p.root, p.env, u, v)) {
                Tuple t = tuple_unrank(u, n, k);
                Tuple t2 = tuple_unrank(v, n, k);
                t.insert(t.end(), t2.begin(), t2.end());
                out.insert(t);
            }
    return out;
}

}  // namespace wdc
