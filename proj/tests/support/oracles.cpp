#include "support/oracles.hpp"

#include <algorithm>

namespace wdc::testing {

namespace {

std::string lawfail(const Semiring& s, const std::string& law, const Value& a, const Value& b,
                    const Value& c) {
    return s.name() + ": " + law + " fails on a=" + s.print(a) + " b=" + s.print(b) +
           " c=" + s.print(c);
}

}  // namespace

std::optional<std::string> check_semiring_laws(const Semiring& s, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    const Value zero = s.zero(), one = s.one();
    if (zero == one) return s.name() + ": 0 == 1";
    for (int i = 0; i < samples; ++i) {
        Value a = s.sample(rng), b = s.sample(rng), c = s.sample(rng);
        // (a + b) + c = a + (b + c)
        if (s.add(s.add(a, b), c) != s.add(a, s.add(b, c)))
            return lawfail(s, "+ associativity", a, b, c);
        // a + b = b + a (addition is always commutative)
        if (s.add(a, b) != s.add(b, a)) return lawfail(s, "+ commutativity", a, b, c);
        // a + 0 = a
        if (s.add(a, zero) != a || s.add(zero, a) != a) return lawfail(s, "+ identity", a, b, c);
        // (a * b) * c = a * (b * c)
        if (s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c)))
            return lawfail(s, "* associativity", a, b, c);
        // a * 1 = 1 * a = a
        if (s.mul(a, one) != a || s.mul(one, a) != a) return lawfail(s, "* identity", a, b, c);
        // a * 0 = 0 * a = 0
        if (s.mul(a, zero) != zero || s.mul(zero, a) != zero)
            return lawfail(s, "* annihilation", a, b, c);
        // a * (b + c) = a*b + a*c ; (a + b) * c = a*c + b*c
        if (s.mul(a, s.add(b, c)) != s.add(s.mul(a, b), s.mul(a, c)))
            return lawfail(s, "left distributivity", a, b, c);
        if (s.mul(s.add(a, b), c) != s.add(s.mul(a, c), s.mul(b, c)))
            return lawfail(s, "right distributivity", a, b, c);
        // advertised flags never claim laws that fail
        if (s.commutative() && s.mul(a, b) != s.mul(b, a))
            return lawfail(s, "claimed * commutativity", a, b, c);
        if (s.idempotent() && s.add(a, a) != a) return lawfail(s, "claimed + idempotency", a, b, c);
        // literal round trip
        if (s.parse(s.print(a)) != a) return s.name() + ": literal round trip fails on " + s.print(a);
    }
    return std::nullopt;
}

std::optional<std::string> check_flag_honesty(const Semiring& s, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    bool comm_witness = false, idem_witness = false;
    for (int i = 0; i < samples; ++i) {
        Value a = s.sample(rng), b = s.sample(rng);
        if (s.mul(a, b) != s.mul(b, a)) comm_witness = true;
        if (s.add(a, a) != a) idem_witness = true;
    }
    if (!s.commutative() && !comm_witness)
        return s.name() + ": flagged noncommutative but no witness found";
    if (!s.idempotent() && !idem_witness)
        return s.name() + ": flagged non-idempotent but no witness found";
    return std::nullopt;
}

bool oracle_is_clique(const Structure& g, uint64_t subset_mask) {
    const Relation& e = g.relation("edge");
    for (int x = 0; x < g.n; ++x)
        for (int y = 0; y < g.n; ++y) {
            if (x == y) continue;
            bool in_x = subset_mask & (uint64_t(1) << x), in_y = subset_mask & (uint64_t(1) << y);
            if (in_x && in_y && !e.count({x, y})) return false;
        }
    return true;
}

int oracle_largest_clique(const Structure& g) {
    int best = 0;
    for (uint64_t m = 0; m < (uint64_t(1) << g.n); ++m)
        if (oracle_is_clique(g, m)) best = std::max(best, __builtin_popcountll(m));
    return best;
}

long oracle_clique_tuples(const Structure& g, int m) {
    const Relation& e = g.relation("edge");
    long count = 0;
    std::vector<int> t(m, 0);
    while (true) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i)
            for (int j = 0; j < m && ok; ++j)
                if (i != j && (t[i] == t[j] || !e.count({t[i], t[j]}))) ok = false;
        if (ok) ++count;
        int j = m - 1;
        for (; j >= 0; --j) {
            if (++t[j] < g.n) break;
            t[j] = 0;
        }
        if (j < 0) break;
    }
    return count;
}

std::optional<int> oracle_min_cut(const Structure& g) {
    const Relation& e = g.relation("edge");
    std::optional<int> best;
    for (uint64_t s = 0; s < (uint64_t(1) << g.n); ++s) {
        uint64_t d = ~s & ((uint64_t(1) << g.n) - 1);
        bool valid = true;
        for (int x = 0; x < g.n && valid; ++x) {
            bool in_s = s & (uint64_t(1) << x), in_d = d & (uint64_t(1) << x);
            bool has_in = false, has_out = false;
            for (int y = 0; y < g.n; ++y) {
                if (e.count({y, x})) has_in = true;
                if (e.count({x, y})) has_out = true;
            }
            if (!(has_in || in_s)) valid = false;
            if (!(has_out || in_d)) valid = false;
        }
        if (!valid) continue;
        int cut = 0;
        for (int x = 0; x < g.n; ++x)
            for (int y = 0; y < g.n; ++y)
                if ((s & (uint64_t(1) << x)) && (d & (uint64_t(1) << y)) && e.count({x, y})) ++cut;
        if (!best || cut < *best) best = cut;
    }
    return best;
}

Relation oracle_transitive_closure(const Structure& g) {
    std::vector<std::vector<bool>> r(g.n, std::vector<bool>(g.n, false));
    for (const auto& t : g.relation("edge")) r[t[0]][t[1]] = true;
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = true;
    Relation out;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (r[i][j]) out.insert({i, j});
    return out;
}

Structure random_structure(const Signature& sig, int n, std::mt19937& rng) {
    Structure a;
    a.n = n;
    a.sig = sig;
    for (const auto& [name, l] : sig.relations) {
        Relation rel;
        for (const auto& t : tuples_lex(n, l))
            if (rng() % 2) rel.insert(t);
        a.relations.push_back(std::move(rel));
    }
    return a;
}

Structure random_dag(int n, double density, std::mt19937& rng) {
    Structure a;
    a.n = n;
    a.sig.relations = {{"edge", 2}};
    Relation rel;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < density) rel.insert({i, j});
    a.relations.push_back(std::move(rel));
    return a;
}

}  // namespace wdc::testing
