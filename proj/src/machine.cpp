#include "wdc/machine.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "wdc/errors.hpp"

namespace wdc {
namespace {

template <class C, class T>
bool contains(const C& c, const T& x) {
    return std::find(c.begin(), c.end(), x) != c.end();
}

// interned machine for the simulator: states and symbols as dense ints,
// transitions bucketed by (state, scanned symbol)
struct Interned {
    std::unordered_map<std::string, int> sym_id, state_id;
    std::vector<std::vector<std::vector<int>>> by_state_sym;  // -> transition indices
    std::vector<std::array<int, 4>> trans;                    // q, b, move packed; [p,a] implicit
    std::vector<const Value*> weight;
    std::vector<char> is_accepting;
    int blank = 0, q0 = 0;

    explicit Interned(const WeightedTM& m) {
        for (const auto& s : m.work_alphabet)
            sym_id.emplace(s, (int)sym_id.size());
        for (const auto& s : m.states)
            state_id.emplace(s, (int)state_id.size());
        blank = sym_id.at(m.blank);
        q0 = state_id.at(m.initial);
        is_accepting.assign(m.states.size(), 0);
        for (const auto& s : m.accepting) is_accepting[state_id.at(s)] = 1;
        by_state_sym.assign(m.states.size(),
                            std::vector<std::vector<int>>(m.work_alphabet.size()));
        for (size_t i = 0; i < m.transitions.size(); ++i) {
            const Transition& e = m.transitions[i];
            by_state_sym[state_id.at(e.p)][sym_id.at(e.a)].push_back((int)i);
            trans.push_back({state_id.at(e.q), sym_id.at(e.b), e.move, 0});
            weight.push_back(&e.weight);
        }
    }
};

// depth-first enumeration of the run tree with an in-place tape and undo
struct Sim {
    const Interned& im;
    const Semiring& S;
    long max_steps;
    bool strict;
    bool exact;    // only report runs of length exactly max_steps
    bool weights = true;  // time_meter ignores weights entirely

    std::vector<int> tape;
    std::vector<int> path;
    long longest = 0;

    // visit(path, weight-so-far) is called for every accepting prefix.
    // Iterative with an explicit frame stack: compiled machines run for
    // millions of steps, far past any recursion limit. Weights are stacked
    // only when a transition actually changes them, so boolean-heavy
    // machines never touch the semiring.
    template <class Visit>
    void dfs(int q0, Visit&& visit) {
        struct Frame {
            int state, head, a;  // configuration; a = scanned symbol
            size_t next;         // next candidate in by_state_sym[state][a]
            int undo_sym;        // parent's scanned symbol, to restore on exit
            bool wpushed;
        };
        std::vector<Value> wstack;
        wstack.push_back(S.one());
        std::vector<Frame> st;

        auto enter = [&](int state, int head, int undo_sym, bool wpushed) {
            long depth = (long)st.size();
            longest = std::max(longest, depth);
            if (im.is_accepting[state] && (!exact || depth == max_steps))
                visit(path, wstack.back());
            while (head >= (int)tape.size()) tape.push_back(im.blank);
            int a = tape[head];
            Frame f{state, head, a, 0, undo_sym, wpushed};
            if (depth == max_steps) {
                if (strict)
                    for (int ti : im.by_state_sym[state][a])
                        if (!(im.trans[ti][2] < 0 && head == 0))
                            throw live_branches("branch still live after " +
                                                std::to_string(max_steps) + " steps");
                f.next = im.by_state_sym[state][a].size();  // stop exploring
            }
            st.push_back(f);
        };

        enter(q0, 0, 0, false);
        while (!st.empty()) {
            Frame& f = st.back();
            const auto& bucket = im.by_state_sym[f.state][f.a];
            if (f.next < bucket.size()) {
                int ti = bucket[f.next++];
                const auto& t = im.trans[ti];
                if (t[2] < 0 && f.head == 0) continue;  // left move off the tape: dies
                tape[f.head] = t[1];
                path.push_back(ti);
                const Value& tw = *im.weight[ti];
                bool push = weights && !(tw == S.one());
                if (push) wstack.push_back(S.mul(wstack.back(), tw));
                enter(t[0], f.head + t[2], f.a, push);
            } else {
                Frame g = st.back();
                st.pop_back();
                if (!st.empty()) {  // undo the transition that entered g
                    if (g.wpushed) wstack.pop_back();
                    path.pop_back();
                    tape[st.back().head] = g.undo_sym;
                }
            }
        }
    }
};

Sim make_sim(const Interned& im, const Semiring& s, const WeightedTM& m,
             const std::string& input, long max_steps, bool strict, bool exact) {
    Sim sim{im, s, max_steps, strict, exact, true, {}, {}, 0};
    // the input is a word over the input alphabet, one symbol per character
    for (char c : input) {
        std::string sy(1, c);
        if (!contains(m.input_alphabet, sy))
            throw invalid_argument_error("input symbol '" + sy + "' not in the input alphabet");
        sim.tape.push_back(im.sym_id.at(sy));
    }
    return sim;
}

}  // namespace

void WeightedTM::validate() const {
    if (states.empty()) throw invalid_argument_error("machine has no states");
    if (!contains(states, initial)) throw invalid_argument_error("unknown initial state");
    for (const auto& q : accepting)
        if (!contains(states, q)) throw invalid_argument_error("unknown accepting state " + q);
    if (contains(input_alphabet, blank))
        throw invalid_argument_error("blank belongs to the input alphabet");
    if (!contains(work_alphabet, blank))
        throw invalid_argument_error("blank missing from the work alphabet");
    for (const auto& a : input_alphabet)
        if (!contains(work_alphabet, a))
            throw invalid_argument_error("input symbol " + a + " missing from the work alphabet");
    for (const auto& e : transitions) {
        if (!contains(states, e.p) || !contains(states, e.q))
            throw invalid_argument_error("transition uses an unknown state");
        if (!contains(work_alphabet, e.a) || !contains(work_alphabet, e.b))
            throw invalid_argument_error("transition uses an unknown symbol");
        if (e.move < -1 || e.move > 1)
            throw invalid_argument_error("transition move must be -1, 0 or 1");
    }
}

Configuration initial_configuration(const WeightedTM& m, const std::string& input) {
    Configuration c;
    c.state = m.initial;
    for (char ch : input) c.tape.push_back(std::string(1, ch));
    c.head = 0;
    return c;
}

Configuration step(const WeightedTM& m, const Configuration& c, const Transition& e) {
    std::string scanned = c.head < (int)c.tape.size() ? c.tape[c.head] : m.blank;
    if (e.p != c.state || e.a != scanned)
        throw invalid_argument_error("transition inapplicable in this configuration");
    if (e.move < 0 && c.head == 0)
        throw invalid_argument_error("left move at cell 0");
    Configuration out = c;
    while (out.head >= (int)out.tape.size()) out.tape.push_back(m.blank);
    out.tape[out.head] = e.b;
    out.state = e.q;
    out.head += e.move;
    return out;
}

std::vector<Computation> computations(const WeightedTM& m, const Semiring& s,
                                      const std::string& input, long max_steps, bool strict) {
    m.validate();
    Interned im(m);
    Sim sim = make_sim(im, s, m, input, max_steps, strict, false);
    std::vector<Computation> out;
    sim.dfs(im.q0,
            [&](const std::vector<int>& path, const Value& w) { out.push_back({path, w}); });
    return out;
}

Value behavior(const WeightedTM& m, const Semiring& s, const std::string& input,
               long max_steps, bool strict) {
    m.validate();
    Interned im(m);
    Sim sim = make_sim(im, s, m, input, max_steps, strict, false);
    Value acc = s.zero();
    sim.dfs(im.q0,
            [&](const std::vector<int>&, const Value& w) { acc = s.add(acc, w); });
    return acc;
}

Value behavior_exact(const WeightedTM& m, const Semiring& s, const std::string& input,
                     long exact_steps) {
    m.validate();
    Interned im(m);
    Sim sim = make_sim(im, s, m, input, exact_steps, false, true);
    Value acc = s.zero();
    sim.dfs(im.q0,
            [&](const std::vector<int>&, const Value& w) { acc = s.add(acc, w); });
    return acc;
}

long time_meter(const WeightedTM& m, const std::string& input, long max_steps, bool strict) {
    m.validate();
    Interned im(m);
    // weights are irrelevant here; run over the Boolean semiring
    auto s = registry_lookup("bool");
    Sim sim{im, *s, max_steps, strict, false, false, {}, {}, 0};
    for (char c : input) {
        std::string sy(1, c);
        if (!contains(m.input_alphabet, sy))
            throw invalid_argument_error("input symbol '" + sy + "' not in the input alphabet");
        sim.tape.push_back(im.sym_id.at(sy));
    }
    sim.dfs(im.q0, [](const std::vector<int>&, const Value&) {});
    return sim.longest;
}

WeightedTM pad_machine(const WeightedTM& m, const Semiring& s) {
    WeightedTM out = m;
    for (const auto& q : m.accepting) {
        for (const auto& a : m.work_alphabet) {
            bool present = false;
            for (const auto& e : m.transitions)
                if (e.p == q && e.a == a) present = true;
            if (!present) out.transitions.push_back({q, a, q, a, 0, s.one()});
        }
    }
    return out;
}

WeightedTM srtm_to_wtm(const SRTM& srtm, const Semiring& s) {
    WeightedTM out = srtm.m;
    out.transitions.clear();
    std::map<std::tuple<std::string, std::string, std::string, std::string, int>, Value> merged;
    std::vector<std::tuple<std::string, std::string, std::string, std::string, int>> order;
    for (const auto& e : srtm.m.transitions) {
        auto key = std::make_tuple(e.p, e.a, e.q, e.b, e.move);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, e.weight);
            order.push_back(key);
        } else {
            it->second = s.add(it->second, e.weight);
        }
    }
    for (const auto& key : order) {
        const auto& [p, a, q, b, d] = key;
        out.transitions.push_back({p, a, q, b, d, merged.at(key)});
    }
    return out;
}

bool is_deterministic(const WeightedTM& m) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : m.transitions)
        if (!seen.insert({e.p, e.a}).second) return false;
    return true;
}

namespace {

WeightedTM machine_from_json(const nlohmann::json& j) {
    WeightedTM m;
    m.semiring = j.at("semiring").get<std::string>();
    auto s = registry_lookup(m.semiring);
    m.states = j.at("states").get<std::vector<std::string>>();
    m.input_alphabet = j.at("input_alphabet").get<std::vector<std::string>>();
    m.work_alphabet = j.at("work_alphabet").get<std::vector<std::string>>();
    m.blank = j.at("blank").get<std::string>();
    m.initial = j.at("initial").get<std::string>();
    for (const auto& q : j.at("accepting")) m.accepting.insert(q.get<std::string>());
    for (const auto& t : j.at("transitions")) {
        if (!t.is_array() || t.size() != 6)
            throw invalid_argument_error("transition entries are [p,a,q,b,move,weight]");
        m.transitions.push_back({t[0].get<std::string>(), t[1].get<std::string>(),
                                 t[2].get<std::string>(), t[3].get<std::string>(),
                                 t[4].get<int>(), s->parse(t[5].get<std::string>())});
    }
    m.validate();
    return m;
}

}  // namespace

WeightedTM load_machine_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("kind", "wtm") != "wtm")
        throw invalid_argument_error("expected a wtm machine file (kind)");
    return machine_from_json(j);
}

SRTM load_srtm_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("kind", "srtm") != "srtm")
        throw invalid_argument_error("expected an srtm machine file (kind)");
    return {machine_from_json(j)};
}

std::string save_machine_json(const WeightedTM& m) {
    auto s = registry_lookup(m.semiring);
    nlohmann::json j;
    j["semiring"] = m.semiring;
    j["states"] = m.states;
    j["input_alphabet"] = m.input_alphabet;
    j["work_alphabet"] = m.work_alphabet;
    j["blank"] = m.blank;
    j["initial"] = m.initial;
    j["accepting"] = std::vector<std::string>(m.accepting.begin(), m.accepting.end());
    auto& ts = j["transitions"] = nlohmann::json::array();
    for (const auto& e : m.transitions)
        ts.push_back({e.p, e.a, e.q, e.b, e.move, s->print(e.weight)});
    return j.dump(2);
}

}  // namespace wdc
