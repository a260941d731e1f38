#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wdc/errors.hpp"
#include "wdc/fagin.hpp"

// Machine layout, left to right:
//
//   enc(A)+frees  $  R1 # R1' # P2 # P3 #  % strip0 % strip1 % ...
//
// R1 = 1^n (n is found by trying candidates against the input length), R1'
// a working copy, P2 = 1^(n^2), P3 = 1^(n^3). Every variable, numeral and
// free value owns a strip: a first-order strip has n cells with a single 1
// at the value's index, a relation strip holds n^arity data bits. The '$'
// written after the input is the home landmark all gadgets start from and
// return to.
//
// Cursor conventions: the input carries one moving mark (0m/1m; cell 0 uses
// the h-variants so the cursor can be rewound without falling off the left
// edge, and a mark parked on '$' itself reads '$m'); rulers and strips mark
// a consumed prefix instead, since their left boundary (# or %) is always
// in view. Gadgets restore every mark they introduce.

namespace wdc {
namespace {

const std::vector<std::string> kSyms = {"0",   "1",  "0m", "1m", "0h", "1h", "0hm",
                                        "1hm", "$",  "$m", "#",  "%",  "_"};

struct StripPlan {
    char kind;  // 'f' FO binder, 's' SO binder, 'n' numeral, 'F'/'S' free copies
    int arity = 1;
    int numeral = 0;
};

struct Builder {
    WeightedTM m;
    SemiringPtr S;
    std::vector<int> block_arity;  // input blocks, in encoding order
    std::map<std::string, std::vector<int>> fo_scope, so_scope;  // name -> strip stack
    std::map<int, int> numeral_strip;
    long next = 0;

    std::string fresh() {
        m.states.push_back("g" + std::to_string(next++));
        return m.states.back();
    }

    void t(const std::string& p, const std::string& a, const std::string& q,
           const std::string& b, int mv) {
        m.transitions.push_back({p, a, q, b, mv, S->one()});
    }

    template <class Pred>
    void loop_if(const std::string& p, int mv, Pred keep) {
        for (const auto& s : kSyms)
            if (keep(s)) t(p, s, p, s, mv);
    }

    // -- elementary moves (entry state given, exit state returned) ----------

    // scan right to the first blank, end on it
    std::string to_end(const std::string& p) {
        loop_if(p, +1, [&](const std::string& s) { return s != "_"; });
        auto q = fresh();
        t(p, "_", q, "_", 0);
        return q;
    }

    // write sym over the first blank, then go home
    std::string append_sym(const std::string& p, const std::string& sym) {
        auto at = to_end(p);
        auto w = fresh();
        t(at, "_", w, sym, 0);
        return home_right(w);
    }

    // somewhere right of home (or on it): scan left to '$'
    std::string home_right(const std::string& p) {
        loop_if(p, -1, [&](const std::string& s) { return s != "$" && s != "$m"; });
        auto q = fresh();
        t(p, "$", q, "$", 0);
        t(p, "$m", q, "$m", 0);
        return q;
    }

    // stop the scan of p on a specific symbol, then go home
    std::string home_right_on(const std::string& p, const std::string& stop) {
        auto q = fresh();
        t(p, stop, q, stop, 0);
        return home_right(q);
    }

    // somewhere in the input region: scan right to '$'
    std::string home_left(const std::string& p) {
        loop_if(p, +1, [&](const std::string& s) { return s != "$" && s != "$m"; });
        auto q = fresh();
        t(p, "$", q, "$", 0);
        t(p, "$m", q, "$m", 0);
        return q;
    }

    // from home, land on the k-th '#' to the right (k >= 1)
    std::string goto_hash(const std::string& p, int k) {
        std::string cur = p;
        for (int i = 0; i < k; ++i) {
            loop_if(cur, +1, [&](const std::string& s) { return s != "#"; });
            auto q = fresh();
            t(cur, "#", q, "#", i + 1 < k ? +1 : 0);
            cur = q;
        }
        return cur;
    }

    // from home, land on the (j+1)-th '%' (the separator before strip j)
    std::string goto_strip(const std::string& p, int j) {
        std::string cur = p;
        for (int i = 0; i <= j; ++i) {
            loop_if(cur, +1, [&](const std::string& s) { return s != "%"; });
            auto q = fresh();
            t(cur, "%", q, "%", i < j ? +1 : 0);
            cur = q;
        }
        return cur;
    }

    // -- ruler ops; ruler 0 = R1, 1 = R1', 2 = P2, 3 = P3 --------------------

    int ruler_for(int arity) const {
        if (arity < 1 || arity > 3)
            throw invalid_argument_error("arities above 3 are not compilable to a machine");
        return arity;  // 1 -> R1', 2 -> P2, 3 -> P3
    }

    // head to the first cell of ruler r
    std::string ruler_start(const std::string& p, int r) {
        auto land = fresh();
        if (r == 0) {
            t(p, "$", land, "$", +1);
        } else {
            auto at = goto_hash(p, r);
            t(at, "#", land, "#", +1);
        }
        return land;
    }

    // mark the next unconsumed ruler cell; the found exit is at home, the
    // exhausted exit is at home with the ruler already swept clean
    std::pair<std::string, std::string> ruler_next(const std::string& p, int r) {
        auto scan = ruler_start(p, r);
        loop_if(scan, +1, [&](const std::string& s) { return s == "1m"; });
        auto got = fresh();
        t(scan, "1", got, "1m", 0);
        auto exh = fresh();
        t(scan, "#", exh, "#", 0);
        t(scan, "_", exh, "_", 0);  // R1 before its '#' is written
        return {home_right(got), ruler_sweep(home_right(exh), r)};
    }

    std::string ruler_sweep(const std::string& p, int r) {
        auto sweep = ruler_start(p, r);
        t(sweep, "1m", sweep, "1", +1);
        t(sweep, "1", sweep, "1", +1);
        auto done = fresh();
        t(sweep, "#", done, "#", 0);
        t(sweep, "_", done, "_", 0);
        return home_right(done);
    }

    // -- strip ops -----------------------------------------------------------

    struct Read {
        std::string is0, is1, end;
    };

    // advance the consumed prefix of strip j by one cell and branch on its
    // bit; with mark=false the cell is read but not consumed. Exits at home.
    Read strip_next(const std::string& p, int j, bool mark) {
        auto at = goto_strip(p, j);
        auto scan = fresh();
        t(at, "%", scan, "%", +1);
        loop_if(scan, +1, [&](const std::string& s) { return s == "0m" || s == "1m"; });
        auto got0 = fresh(), got1 = fresh(), end = fresh();
        t(scan, "0", got0, mark ? "0m" : "0", 0);
        t(scan, "1", got1, mark ? "1m" : "1", 0);
        t(scan, "%", end, "%", 0);
        t(scan, "_", end, "_", 0);
        return {home_right(got0), home_right(got1), home_right(end)};
    }

    std::string strip_sweep(const std::string& p, int j) {
        auto at = goto_strip(p, j);
        auto scan = fresh();
        t(at, "%", scan, "%", +1);
        t(scan, "0m", scan, "0", +1);
        t(scan, "1m", scan, "1", +1);
        t(scan, "0", scan, "0", +1);
        t(scan, "1", scan, "1", +1);
        auto done = fresh();
        t(scan, "%", done, "%", 0);
        t(scan, "_", done, "_", 0);
        return home_right(done);
    }

    // overwrite every cell of strip j with '0'
    std::string strip_zero(const std::string& p, int j) {
        auto at = goto_strip(p, j);
        auto scan = fresh();
        t(at, "%", scan, "%", +1);
        for (const char* s : {"0", "1", "0m", "1m"}) t(scan, s, scan, "0", +1);
        auto done = fresh();
        t(scan, "%", done, "%", 0);
        t(scan, "_", done, "_", 0);
        return home_right(done);
    }

    // set cell 0 of a zeroed strip to '1'
    std::string strip_set_first(const std::string& p, int j) {
        auto at = goto_strip(p, j);
        auto c0 = fresh();
        t(at, "%", c0, "%", +1);
        auto done = fresh();
        t(c0, "0", done, "1", 0);
        return home_right(done);
    }

    // -- input cursor ops ----------------------------------------------------

    // park the cursor on cell 0 (works whether or not a mark exists)
    std::string input_reset(const std::string& p) {
        auto a = fresh();
        t(p, "$", a, "$", -1);
        t(p, "$m", a, "$", -1);
        auto b = fresh(), d = fresh();
        for (const char* s : {"0", "1"}) {
            t(a, s, a, s, -1);
            t(b, s, b, s, -1);
        }
        t(a, "0m", b, "0", -1);
        t(a, "1m", b, "1", -1);
        for (auto* st : {&a, &b}) {
            t(*st, "0h", d, "0hm", 0);
            t(*st, "1h", d, "1hm", 0);
        }
        t(a, "0hm", d, "0hm", 0);
        t(a, "1hm", d, "1hm", 0);
        return home_left(d);
    }

    // move the mark one cell right; the at_end exit fires with the mark
    // parked on '$' (written '$m'), head on it
    std::pair<std::string, std::string> input_advance(const std::string& p) {
        auto a = fresh();
        t(p, "$", a, "$", -1);
        for (const char* s : {"0", "1"}) t(a, s, a, s, -1);
        auto c = fresh();
        t(a, "0m", c, "0", +1);
        t(a, "1m", c, "1", +1);
        t(a, "0hm", c, "0h", +1);
        t(a, "1hm", c, "1h", +1);
        auto e0 = fresh(), e1 = fresh(), at_end = fresh();
        t(c, "0", e0, "0m", 0);
        t(c, "1", e1, "1m", 0);
        t(c, "$", at_end, "$m", 0);
        auto ok = fresh();
        t(home_left(e0), "$", ok, "$", 0);
        t(home_left(e1), "$", ok, "$", 0);
        return {ok, at_end};
    }

    // branch on the bit under the mark
    Read input_read(const std::string& p) {
        auto a = fresh();
        t(p, "$", a, "$", -1);
        for (const char* s : {"0", "1"}) t(a, s, a, s, -1);
        auto r0 = fresh(), r1 = fresh();
        t(a, "0m", r0, "0m", 0);
        t(a, "0hm", r0, "0hm", 0);
        t(a, "1m", r1, "1m", 0);
        t(a, "1hm", r1, "1hm", 0);
        return {home_left(r0), home_left(r1), ""};
    }

    // -- composite ops -------------------------------------------------------

    // advance the input cursor len(ruler r) times; landing on '$' exactly
    // when the ruler runs out is fine, overrunning kills the branch
    std::string input_skip(const std::string& p, int r) {
        auto head = fresh();
        t(p, "$", head, "$", 0);
        t(p, "$m", head, "$m", 0);
        auto [found, exh] = ruler_next(head, r);
        auto [ok, at_end] = input_advance(found);
        t(ok, "$", head, "$", 0);
        t(at_end, "$m", head, "$m", 0);
        return exh;
    }

    // repeat step a_x times, where a_x is the index of the 1 in register
    // strip jreg; the register is swept clean afterwards
    std::string register_loop(const std::string& p, int jreg,
                              const std::function<std::string(const std::string&)>& step) {
        auto head = fresh();
        t(p, "$", head, "$", 0);
        Read r = strip_next(head, jreg, true);
        t(step(r.is0), "$", head, "$", 0);
        auto done = fresh();
        t(strip_sweep(r.is1, jreg), "$", done, "$", 0);
        // r.end: a register without a 1 (malformed input); the branch dies
        return done;
    }

    // advance the consumed prefix of strip j len(ruler r) times
    std::string strip_skip(const std::string& p, int j, int r) {
        auto head = fresh();
        t(p, "$", head, "$", 0);
        auto [found, exh] = ruler_next(head, r);
        Read adv = strip_next(found, j, true);
        t(adv.is0, "$", head, "$", 0);
        t(adv.is1, "$", head, "$", 0);
        return exh;
    }
};

// ---- formula gadgets --------------------------------------------------------

struct Compiler {
    Builder& b;
    const Signature& sig;
    int next_bound = 0;  // seeded past the free/numeral strips

    int strip_of_term(const std::string& t) {
        if (!t.empty() && isdigit((unsigned char)t[0])) {
            auto it = b.numeral_strip.find(std::stoi(t));
            if (it == b.numeral_strip.end()) throw error("numeral strip missing");
            return it->second;
        }
        auto it = b.fo_scope.find(t);
        if (it == b.fo_scope.end() || it->second.empty())
            throw invalid_argument_error("unknown first-order variable '" + t + "'");
        return it->second.back();
    }

    int push_fo(const std::string& name) {
        int j = next_bound++;
        b.fo_scope[name].push_back(j);
        return j;
    }
    void pop_fo(const std::string& name) { b.fo_scope[name].pop_back(); }
    int push_so(const std::string& name) {
        int j = next_bound++;
        b.so_scope[name].push_back(j);
        return j;
    }
    void pop_so(const std::string& name) { b.so_scope[name].pop_back(); }

    // move the 1 of register strip j one cell right; exits to again (still
    // in range) or done (the value was n-1)
    void wire_increment(const std::string& entry, int j, const std::string& again,
                        const std::string& done) {
        auto at = b.goto_strip(entry, j);
        auto scan = b.fresh();
        b.t(at, "%", scan, "%", +1);
        b.t(scan, "0", scan, "0", +1);
        auto w = b.fresh();
        b.t(scan, "1", w, "0", +1);
        auto okcell = b.fresh(), past0 = b.fresh(), past1 = b.fresh();
        b.t(w, "0", okcell, "1", 0);
        b.t(w, "%", past0, "%", 0);
        b.t(w, "_", past1, "_", 0);
        b.t(b.home_right(okcell), "$", again, "$", 0);
        b.t(b.home_right(past0), "$", done, "$", 0);
        b.t(b.home_right(past1), "$", done, "$", 0);
    }

    // yes/no wiring for the Boolean layer
    void cbool(const Formula& f, const std::string& entry, const std::string& yes,
               const std::string& no) {
        switch (f.kind) {
            case FKind::False:
                b.t(entry, "$", no, "$", 0);
                return;
            case FKind::Eq:
            case FKind::Less: {
                int jx = strip_of_term(f.args[0]), jy = strip_of_term(f.args[1]);
                if (jx == jy) {  // same strip: resolved statically
                    b.t(entry, "$", f.kind == FKind::Eq ? yes : no, "$", 0);
                    return;
                }
                auto head = b.fresh();
                b.t(entry, "$", head, "$", 0);
                Builder::Read rx = b.strip_next(head, jx, true);
                Builder::Read ry0 = b.strip_next(rx.is0, jy, true);
                Builder::Read ry1 = b.strip_next(rx.is1, jy, true);
                auto wire = [&](const std::string& from, const std::string& to) {
                    b.t(b.strip_sweep(b.strip_sweep(from, jx), jy), "$", to, "$", 0);
                };
                b.t(ry0.is0, "$", head, "$", 0);  // both 0: next index
                if (f.kind == FKind::Eq) {
                    wire(ry1.is1, yes);
                    wire(ry1.is0, no);
                    wire(ry0.is1, no);
                } else {  // x < y iff x's 1 comes strictly first
                    wire(ry1.is0, yes);
                    wire(ry1.is1, no);
                    wire(ry0.is1, no);
                }
                return;
            }
            case FKind::RelAtom:
            case FKind::SOAtom:
                compile_atom(f, entry, yes, no);
                return;
            case FKind::Not:
                cbool(*f.a, entry, no, yes);
                return;
            case FKind::Or: {
                auto mid = b.fresh();
                cbool(*f.a, entry, yes, mid);
                cbool(*f.b, mid, yes, no);
                return;
            }
            case FKind::ExistsFO: {
                int j = push_fo(f.name);
                auto init = b.strip_set_first(b.strip_zero(entry, j), j);
                auto attempt = b.fresh();
                b.t(init, "$", attempt, "$", 0);
                auto inc = b.fresh();
                cbool(*f.a, attempt, yes, inc);
                wire_increment(inc, j, attempt, no);
                pop_fo(f.name);
                return;
            }
            default:
                throw invalid_argument_error("construct not compilable to a machine gadget");
        }
    }

    // bit lookup: walk the rank a_1*n^(l-1) + ... + a_l into the relation's
    // bit block (an input block or a guessed strip), then read
    void compile_atom(const Formula& f, const std::string& entry, const std::string& yes,
                      const std::string& no) {
        int l = (int)f.args.size();
        bool in_input = false;
        int strip_target = -1, block_index = -1;
        auto it = b.so_scope.find(f.name);
        if (it != b.so_scope.end() && !it->second.empty()) {
            strip_target = it->second.back();
        } else {
            for (size_t i = 0; i < sig.relations.size(); ++i)
                if (sig.relations[i].first == f.name) block_index = (int)i;
            if (block_index < 0)
                throw invalid_argument_error("unknown relation '" + f.name + "'");
            in_input = true;
        }
        std::string cur = entry;
        if (in_input) {
            cur = b.input_reset(cur);
            for (int i = 0; i < block_index; ++i)
                cur = b.input_skip(cur, b.ruler_for(b.block_arity[i]));
        }
        for (int j = 0; j < l; ++j) {
            int jreg = strip_of_term(f.args[j]);
            bool last = j + 1 == l;
            int r = last ? -1 : b.ruler_for(l - 1 - j);
            cur = b.register_loop(cur, jreg, [&](const std::string& e) -> std::string {
                if (in_input) {
                    if (last) return b.input_advance(e).first;
                    return b.input_skip(e, r);
                }
                if (last) {
                    Builder::Read adv = b.strip_next(e, strip_target, true);
                    auto join = b.fresh();
                    b.t(adv.is0, "$", join, "$", 0);
                    b.t(adv.is1, "$", join, "$", 0);
                    return join;
                }
                return b.strip_skip(e, strip_target, r);
            });
        }
        if (in_input) {
            Builder::Read r = b.input_read(cur);
            b.t(r.is0, "$", no, "$", 0);
            b.t(r.is1, "$", yes, "$", 0);
        } else {
            Builder::Read r = b.strip_next(cur, strip_target, false);
            b.t(b.strip_sweep(r.is0, strip_target), "$", no, "$", 0);
            b.t(b.strip_sweep(r.is1, strip_target), "$", yes, "$", 0);
        }
    }

    // weighted layer; wires entry -> ... -> done
    void cw(const Formula& f, const std::string& entry, const std::string& done) {
        switch (f.kind) {
            case FKind::Const: {
                Value w = b.S->parse(f.name);
                b.m.transitions.push_back({entry, "$", done, "$", 0, w});
                return;
            }
            case FKind::OPlus: {
                auto l = b.fresh(), r = b.fresh();
                b.t(entry, "$", l, "$", 0);
                b.t(entry, "$", r, "$", 0);  // nondeterministic split
                cw(*f.a, l, done);
                cw(*f.b, r, done);
                return;
            }
            case FKind::OTimes: {
                auto mid = b.fresh();
                cw(*f.a, entry, mid);
                cw(*f.b, mid, done);
                return;
            }
            case FKind::SumFO: {
                int j = push_fo(f.name);
                // guess the value: at each cell either plant the 1 or move on
                auto at = b.goto_strip(entry, j);
                auto ch = b.fresh();
                b.t(at, "%", ch, "%", +1);
                auto fill = b.fresh();
                for (const char* s : {"0", "1", "0m", "1m"}) {
                    b.t(ch, s, fill, "1", +1);
                    b.t(ch, s, ch, "0", +1);
                }
                for (const char* s : {"0", "1", "0m", "1m"}) b.t(fill, s, fill, "0", +1);
                auto body = b.fresh();
                b.t(b.home_right_on(fill, "%"), "$", body, "$", 0);
                b.t(b.home_right_on(fill, "_"), "$", body, "$", 0);
                cw(*f.a, body, done);
                pop_fo(f.name);
                return;
            }
            case FKind::ProdFO: {
                int j = push_fo(f.name);
                auto init = b.strip_set_first(b.strip_zero(entry, j), j);
                auto body = b.fresh();
                b.t(init, "$", body, "$", 0);
                auto inc = b.fresh();
                cw(*f.a, body, inc);
                wire_increment(inc, j, body, done);
                pop_fo(f.name);
                return;
            }
            case FKind::SumSO: {
                int j = push_so(f.name);
                auto at = b.goto_strip(entry, j);
                auto g = b.fresh();
                b.t(at, "%", g, "%", +1);
                for (const char* s : {"0", "1", "0m", "1m"}) {
                    b.t(g, s, g, "0", +1);
                    b.t(g, s, g, "1", +1);  // guess each bit
                }
                auto body = b.fresh();
                b.t(b.home_right_on(g, "%"), "$", body, "$", 0);
                b.t(b.home_right_on(g, "_"), "$", body, "$", 0);
                cw(*f.a, body, done);
                pop_so(f.name);
                return;
            }
            default: {
                // Boolean subformula: a unit-weight pass-through when it
                // holds, a dead branch otherwise
                auto dead = b.fresh();
                cbool(f, entry, done, dead);
                return;
            }
        }
    }
};

}  // namespace

std::vector<FreeValue> free_blocks(const Formula& phi, const Assignment& rho, int n) {
    (void)n;
    VarSet fv = free_vars(phi);
    std::vector<FreeValue> out;
    for (const auto& x : fv.fo) {
        auto it = rho.fo.find(x);
        if (it == rho.fo.end())
            throw invalid_argument_error("free variable '" + x + "' has no assigned value");
        FreeValue v;
        v.element = it->second;
        out.push_back(v);
    }
    for (const auto& [X, arity] : fv.so) {
        auto it = rho.so.find(X);
        if (it == rho.so.end())
            throw invalid_argument_error("free relation variable '" + X + "' has no value");
        FreeValue v;
        v.is_relation = true;
        v.arity = arity;
        v.rel = it->second;
        out.push_back(v);
    }
    return out;
}

WeightedTM formula_to_wtm(const Formula& phi, const Signature& sig,
                          const std::string& semiring_spec) {
    validate(phi);
    check_fragment(phi, Fragment::wESO);
    FormulaPtr core = desugar(std::make_shared<Formula>(phi));

    Builder b;
    b.S = registry_lookup(semiring_spec);
    b.m.semiring = semiring_spec;
    b.m.input_alphabet = {"0", "1"};
    b.m.work_alphabet = kSyms;
    b.m.blank = "_";

    // input blocks: one per signature relation (0^n when the signature is
    // empty), then the free-variable blocks in encode order
    if (sig.relations.empty()) {
        b.block_arity.push_back(1);
    } else {
        for (const auto& [name, ar] : sig.relations) {
            (void)name;
            b.block_arity.push_back(ar);
        }
    }

    VarSet fv = free_vars(*core);
    struct FreeStrip {
        std::string name;
        bool so;
        int arity;
    };
    std::vector<FreeStrip> frees;
    for (const auto& x : fv.fo) frees.push_back({x, false, 1});
    for (const auto& [X, ar] : fv.so) frees.push_back({X, true, ar});
    for (const auto& fr : frees) b.block_arity.push_back(fr.arity);

    // strip plan: frees first (copied out of their input blocks), then
    // numeral strips, then one strip per binder in compile order
    std::vector<StripPlan> plan;
    for (const auto& fr : frees) {
        auto& scope = fr.so ? b.so_scope[fr.name] : b.fo_scope[fr.name];
        scope.push_back((int)plan.size());
        plan.push_back({fr.so ? 'S' : 'F', fr.arity, 0});
    }
    std::set<int> numerals;
    std::function<void(const Formula&)> collect = [&](const Formula& f) {
        for (const auto& a : f.args)
            if (!a.empty() && isdigit((unsigned char)a[0])) numerals.insert(std::stoi(a));
        if (f.a) collect(*f.a);
        if (f.b) collect(*f.b);
    };
    collect(*core);
    for (int v : numerals) {
        b.numeral_strip[v] = (int)plan.size();
        plan.push_back({'n', 1, v});
    }
    // binder strips, in the same pre-order the gadget compiler allocates
    std::function<void(const Formula&)> binders = [&](const Formula& f) {
        if (f.kind == FKind::ExistsFO || f.kind == FKind::SumFO || f.kind == FKind::ProdFO)
            plan.push_back({'f', 1, 0});
        if (f.kind == FKind::SumSO) plan.push_back({'s', f.so_arity, 0});
        if (f.a) binders(*f.a);
        if (f.b) binders(*f.b);
    };
    binders(*core);

    for (int a : b.block_arity) b.ruler_for(a);
    for (const auto& s : plan) b.ruler_for(s.arity);

    // ---- phase 0: find n, build rulers, verify the input length ------------
    b.m.initial = b.fresh();
    auto st = b.fresh();
    b.t(b.m.initial, "0", st, "0hm", +1);  // landmark cell 0, park the cursor
    b.t(b.m.initial, "1", st, "1hm", +1);
    auto at_blank = b.to_end(st);
    auto wrote = b.fresh();
    b.t(at_blank, "_", wrote, "$", +1);  // home landmark
    auto seeded = b.fresh();
    b.t(wrote, "_", seeded, "1", 0);  // R1 = "1": candidate n = 1
    auto cand = b.fresh();            // candidate loop head, at home
    b.t(b.home_right(seeded), "$", cand, "$", 0);

    // close R1 with '#'
    auto scan1 = b.fresh();
    b.t(cand, "$", scan1, "$", +1);
    b.t(scan1, "1", scan1, "1", +1);
    auto c2 = b.fresh();
    b.t(scan1, "_", c2, "#", 0);
    std::string cur = b.home_right(c2);

    // R1' = copy of R1, then P2 = R1 x R1', P3 = R1 x P2
    auto product = [&](int outer, int inner, const std::string& from) {
        auto head = b.fresh();
        b.t(from, "$", head, "$", 0);
        auto [found, exh] = b.ruler_next(head, outer);
        if (inner < 0) {
            b.t(b.append_sym(found, "1"), "$", head, "$", 0);
        } else {
            auto ih = b.fresh();
            b.t(found, "$", ih, "$", 0);
            auto [ifound, iexh] = b.ruler_next(ih, inner);
            b.t(b.append_sym(ifound, "1"), "$", ih, "$", 0);
            b.t(iexh, "$", head, "$", 0);
        }
        return b.append_sym(exh, "#");
    };
    cur = product(0, -1, cur);  // R1'
    cur = product(0, 1, cur);   // P2
    cur = product(0, 2, cur);   // P3

    // consume the input block by block; an exact fit parks the cursor on '$'
    cur = b.input_reset(cur);
    for (int a : b.block_arity) cur = b.input_skip(cur, b.ruler_for(a));
    auto succ = b.fresh(), retry = b.fresh();
    b.t(cur, "$m", succ, "$", 0);  // consumed exactly: candidate accepted
    b.t(cur, "$", retry, "$", 0);  // input left over: n too small
    // retry: rewind the cursor, grow R1 by one, erase everything to its right
    auto r2 = b.input_reset(retry);
    auto grow = b.fresh();
    b.t(r2, "$", grow, "$", +1);
    b.t(grow, "1", grow, "1", +1);
    auto erase = b.fresh();
    b.t(grow, "#", erase, "1", +1);
    for (const auto& s : kSyms)
        if (s != "_") b.t(erase, s, erase, "_", +1);
    b.t(b.home_right_on(erase, "_"), "$", cand, "$", 0);

    // ---- phase 1: lay out the strips ----------------------------------------
    cur = succ;
    int sig_blocks = (int)(sig.relations.empty() ? 1 : sig.relations.size());
    for (size_t j = 0; j < plan.size(); ++j) {
        const StripPlan& s = plan[j];
        cur = b.append_sym(cur, "%");
        if (s.kind == 'F' || s.kind == 'S') {
            // copy the matching input block, bit by bit
            cur = b.input_reset(cur);
            int skip = sig_blocks + (int)j;  // frees head the plan, in block order
            for (int i = 0; i < skip; ++i) cur = b.input_skip(cur, b.ruler_for(b.block_arity[i]));
            auto head = b.fresh();
            b.t(cur, "$", head, "$", 0);
            b.t(cur, "$m", head, "$m", 0);
            auto [found, exh] = b.ruler_next(head, b.ruler_for(s.arity));
            Builder::Read r = b.input_read(found);
            auto a0 = b.append_sym(r.is0, "0");
            auto a1 = b.append_sym(r.is1, "1");
            auto adv = b.fresh();
            b.t(a0, "$", adv, "$", 0);
            b.t(a1, "$", adv, "$", 0);
            auto [ok, at_end] = b.input_advance(adv);
            b.t(ok, "$", head, "$", 0);
            b.t(at_end, "$m", head, "$m", 0);
            cur = exh;
        } else {
            // blank slate: one '0' per cell of the sizing ruler
            auto head = b.fresh();
            b.t(cur, "$", head, "$", 0);
            b.t(cur, "$m", head, "$m", 0);
            auto [found, exh] = b.ruler_next(head, b.ruler_for(s.arity));
            b.t(b.append_sym(found, "0"), "$", head, "$", 0);
            cur = exh;
            if (s.kind == 'n') {
                // place the 1 at the numeral's index; numerals >= n fall off
                // the strip and the branch dies (the machine rejects)
                auto at = b.goto_strip(cur, (int)j);
                std::string c = b.fresh();
                b.t(at, "%", c, "%", +1);
                for (int stepi = 0; stepi < s.numeral; ++stepi) {
                    auto nx = b.fresh();
                    b.t(c, "0", nx, "0", +1);
                    c = nx;
                }
                auto done = b.fresh();
                b.t(c, "0", done, "1", 0);
                cur = b.home_right(done);
            }
        }
    }

    // the last free copy can leave the cursor parked on '$m'; clear it
    auto norm = b.fresh();
    b.t(cur, "$", norm, "$", 0);
    b.t(cur, "$m", norm, "$", 0);

    // ---- phase 2: the formula ------------------------------------------------
    auto acc = b.fresh();
    b.m.accepting = {acc};
    Compiler comp{b, sig};
    comp.next_bound = (int)frees.size() + (int)numerals.size();
    comp.cw(*core, norm, acc);
    b.m.validate();
    return b.m;
}

}  // namespace wdc
