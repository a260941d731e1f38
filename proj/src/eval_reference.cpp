#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "wdc/errors.hpp"
#include "wdc/eval.hpp"

// Naive serial evaluator. A direct transcription of the semantics tables
// over name-keyed maps and tuple sets; no compilation, no masks, no OpenMP.
// Kept as an independent implementation to test the fast path against.

namespace wdc {
namespace {

struct REnv {
    std::map<std::string, int> fo;
    std::map<std::string, Relation> so;  // SO variables and fixpoint symbols
};

struct Ref {
    const Structure& A;
    const Semiring& S;
    const EvalCaps& caps;

    std::optional<int> term(const std::string& t, const REnv& env) const {
        if (!t.empty() && isdigit((unsigned char)t[0])) {
            int v = std::stoi(t);
            if (v < 0 || v >= A.n)
                throw invalid_argument_error("numeral " + t + " outside the universe");
            return v;
        }
        auto it = env.fo.find(t);
        if (it == env.fo.end()) return std::nullopt;
        return it->second;
    }

    std::optional<Tuple> tuple_of(const std::vector<std::string>& ts, const REnv& env) const {
        Tuple out;
        for (const auto& t : ts) {
            auto v = term(t, env);
            if (!v) return std::nullopt;
            out.push_back(*v);
        }
        return out;
    }

    // every subset of the full tuple space, in <* order
    std::vector<Relation> subsets_star(int arity) const {
        SubsetStar range(A.n, arity, caps.max_subset_base);
        std::vector<Relation> out;
        for (uint64_t m = 0; m < range.count; ++m)
            out.push_back(subset_from_mask(m, A.n, arity));
        return out;
    }

    bool ebool(const Formula& f, REnv& env) const {
        switch (f.kind) {
            case FKind::False: return false;
            case FKind::True: return true;
            case FKind::Eq: {
                auto x = term(f.args[0], env), y = term(f.args[1], env);
                return x && y && *x == *y;
            }
            case FKind::Neq: {
                auto x = term(f.args[0], env), y = term(f.args[1], env);
                return x && y && *x != *y;
            }
            case FKind::Less: {
                auto x = term(f.args[0], env), y = term(f.args[1], env);
                return x && y && *x < *y;
            }
            case FKind::RelAtom: {
                auto t = tuple_of(f.args, env);
                if (!t) return false;
                auto it = env.so.find(f.name);
                if (it != env.so.end()) return it->second.count(*t) > 0;
                if (A.sig.arity_of(f.name) != (int)f.args.size())
                    throw invalid_argument_error("relation '" + f.name + "' arity mismatch");
                return A.relation(f.name).count(*t) > 0;
            }
            case FKind::SOAtom: {
                auto t = tuple_of(f.args, env);
                if (!t) return false;
                auto it = env.so.find(f.name);
                return it != env.so.end() && it->second.count(*t) > 0;
            }
            case FKind::Not: return !ebool(*f.a, env);
            case FKind::Or: return ebool(*f.a, env) || ebool(*f.b, env);
            case FKind::And: return ebool(*f.a, env) && ebool(*f.b, env);
            case FKind::Implies: return !ebool(*f.a, env) || ebool(*f.b, env);
            case FKind::Iff: return ebool(*f.a, env) == ebool(*f.b, env);
            case FKind::ExistsFO: case FKind::ForallFO: {
                auto saved = env.fo;
                bool ex = f.kind == FKind::ExistsFO;
                for (int a = 0; a < A.n; ++a) {
                    env.fo[f.name] = a;
                    bool v = ebool(*f.a, env);
                    if (v == ex) { env.fo = saved; return ex; }
                }
                env.fo = saved;
                return !ex;
            }
            case FKind::ExistsSO: {
                auto saved = env.so;
                for (const auto& R : subsets_star(f.so_arity)) {
                    env.so[f.name] = R;
                    if (ebool(*f.a, env)) { env.so = saved; return true; }
                }
                env.so = saved;
                return false;
            }
            case FKind::Tc: case FKind::Dtc: {
                size_t k = f.bound1.size();
                auto u = tuple_of({f.args.begin(), f.args.begin() + k}, env);
                auto v = tuple_of({f.args.begin() + k, f.args.end()}, env);
                if (!u || !v) return false;
                Tuple uv = *u;
                uv.insert(uv.end(), v->begin(), v->end());
                return closure(f, env).count(uv) > 0;
            }
            case FKind::Lfp: case FKind::Gfp: case FKind::Ifp: case FKind::Pfp: {
                auto t = tuple_of(f.args, env);
                if (!t) return false;
                return fixpoint(f, env).count(*t) > 0;
            }
            default:
                throw invalid_argument_error("weighted node evaluated in Boolean position");
        }
    }

    Relation update(const Formula& f, REnv& env, const Relation& current) const {
        REnv inner = env;
        inner.so[f.name] = current;
        Relation out;
        for (const auto& t : tuples_lex(A.n, (int)f.bound1.size())) {
            for (size_t i = 0; i < f.bound1.size(); ++i) inner.fo[f.bound1[i]] = t[i];
            if (ebool(*f.a, inner)) out.insert(t);
        }
        return out;
    }

    Relation fixpoint(const Formula& f, REnv& env) const {
        uint64_t total = pow_checked(A.n, (int)f.bound1.size());
        long max_stages = caps.max_stages;
        if (max_stages <= 0)
            max_stages = (total >= 62) ? std::numeric_limits<long>::max()
                                       : (long)((uint64_t(1) << total) + 1);
        Relation r;
        if (f.kind == FKind::Gfp)
            for (const auto& t : tuples_lex(A.n, (int)f.bound1.size())) r.insert(t);
        std::set<Relation> seen;
        for (long stage = 0; stage < max_stages; ++stage) {
            Relation next = update(f, env, r);
            if (f.kind == FKind::Ifp) next.insert(r.begin(), r.end());
            if (next == r) return r;
            if (f.kind == FKind::Pfp) {
                seen.insert(r);
                if (seen.count(next)) return {};
            }
            r = next;
        }
        throw cap_exceeded("fixpoint stage bound exceeded");
    }

    Relation closure(const Formula& f, REnv& env) const {
        int k = (int)f.bound1.size();
        if (pow_checked(A.n, k) > (uint64_t(1) << 16)) throw cap_exceeded("closure domain too large");
        auto nodes = tuples_lex(A.n, k);
        // one-step edges; for dtc only from nodes with a unique successor
        std::map<Tuple, std::vector<Tuple>> edges;
        REnv inner = env;
        for (const auto& u : nodes) {
            for (int i = 0; i < k; ++i) inner.fo[f.bound1[i]] = u[i];
            for (const auto& v : nodes) {
                for (int i = 0; i < k; ++i) inner.fo[f.bound2[i]] = v[i];
                if (ebool(*f.a, inner)) edges[u].push_back(v);
            }
        }
        if (f.kind == FKind::Dtc)
            for (auto it = edges.begin(); it != edges.end();)
                it = (it->second.size() == 1) ? std::next(it) : edges.erase(it);
        Relation out;
        for (const auto& u : nodes) {
            std::set<Tuple> seen;
            std::vector<Tuple> queue;
            auto push = [&](const Tuple& w) {
                auto e = edges.find(w);
                if (e == edges.end()) return;
                for (const auto& v : e->second)
                    if (seen.insert(v).second) queue.push_back(v);
            };
            push(u);
            for (size_t qi = 0; qi < queue.size(); ++qi) push(queue[qi]);
            for (const auto& v : seen) {
                Tuple uv = u;
                uv.insert(uv.end(), v.begin(), v.end());
                out.insert(uv);
            }
        }
        return out;
    }

    Value ew(const Formula& f, REnv& env) const {
        switch (f.kind) {
            case FKind::Const:
                return S.parse(f.name);
            case FKind::OPlus:
                return S.add(ew(*f.a, env), ew(*f.b, env));
            case FKind::OTimes:
                return S.mul(ew(*f.a, env), ew(*f.b, env));
            case FKind::SumFO: case FKind::ProdFO: {
                auto saved = env.fo;
                bool sum = f.kind == FKind::SumFO;
                Value acc = sum ? S.zero() : S.one();
                for (int a = 0; a < A.n; ++a) {
                    env.fo[f.name] = a;
                    Value v = ew(*f.a, env);
                    acc = sum ? S.add(acc, v) : S.mul(acc, v);
                }
                env.fo = saved;
                return acc;
            }
            case FKind::SumSO: case FKind::ProdSO: {
                auto saved = env.so;
                bool sum = f.kind == FKind::SumSO;
                Value acc = sum ? S.zero() : S.one();
                for (const auto& R : subsets_star(f.so_arity)) {
                    env.so[f.name] = R;
                    Value v = ew(*f.a, env);
                    acc = sum ? S.add(acc, v) : S.mul(acc, v);
                }
                env.so = saved;
                return acc;
            }
            case FKind::Guard:
                return ebool(*f.a, env) ? ew(*f.b, env) : S.one();
            default:
                return ebool(f, env) ? S.one() : S.zero();
        }
    }
};

}  // namespace

Value eval_weighted_reference(const Formula& f, const EvalContext& ctx) {
    if (!ctx.structure || !ctx.semiring) throw invalid_argument_error("evaluation context incomplete");
    ctx.structure->validate();
    validate(f);
    Ref ref{*ctx.structure, *ctx.semiring, ctx.caps};
    REnv env{ctx.rho.fo, ctx.rho.so};
    return ref.ew(f, env);
}

}  // namespace wdc
