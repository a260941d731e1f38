#include "wdc/semiring.hpp"

#include <algorithm>
#include <functional>

#include "wdc/errors.hpp"

namespace wdc {
namespace {

[[noreturn]] void bad_value(const std::string& ring) {
    throw invalid_argument_error("value does not belong to the '" + ring + "' carrier");
}

mpz_class parse_mpz(const std::string& s, const std::string& ring) {
    if (s.empty()) throw parse_error("empty integer literal for " + ring);
    size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw parse_error("bad integer literal '" + s + "' for " + ring);
    for (; i < s.size(); ++i)
        if (!isdigit((unsigned char)s[i]))
            throw parse_error("bad integer literal '" + s + "' for " + ring);
    return mpz_class(s);
}

mpq_class parse_mpq(const std::string& s, const std::string& ring) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        mpq_class q(parse_mpz(s, ring));
        return q;
    }
    mpz_class num = parse_mpz(s.substr(0, slash), ring);
    mpz_class den = parse_mpz(s.substr(slash + 1), ring);
    if (den == 0) throw parse_error("zero denominator in '" + s + "'");
    mpq_class q;
    q = mpq_class(num) / mpq_class(den);
    q.canonicalize();
    return q;
}

std::string print_mpq(const mpq_class& q) { return q.get_str(); }

const mpz_class& as_z(const Value& v, const std::string& ring) {
    if (auto p = std::get_if<mpz_class>(&v.v)) return *p;
    bad_value(ring);
}
const mpq_class& as_q(const Value& v, const std::string& ring) {
    if (auto p = std::get_if<mpq_class>(&v.v)) return *p;
    bad_value(ring);
}
const ExtInt& as_zi(const Value& v, const std::string& ring) {
    if (auto p = std::get_if<ExtInt>(&v.v)) return *p;
    bad_value(ring);
}
const ExtRat& as_qi(const Value& v, const std::string& ring) {
    if (auto p = std::get_if<ExtRat>(&v.v)) return *p;
    bad_value(ring);
}
const ExtWord& as_wi(const Value& v, const std::string& ring) {
    if (auto p = std::get_if<ExtWord>(&v.v)) return *p;
    bad_value(ring);
}

// ---------------------------------------------------------------- boolean

struct BoolSemiring final : Semiring {
    BoolSemiring() : Semiring("bool", true, true) {}
    Value zero() const override { return Value(false); }
    Value one() const override { return Value(true); }
    Value add(const Value& a, const Value& b) const override { return Value(get(a) || get(b)); }
    Value mul(const Value& a, const Value& b) const override { return Value(get(a) && get(b)); }
    Value parse(const std::string& s) const override {
        if (s == "0") return Value(false);
        if (s == "1") return Value(true);
        throw parse_error("bool literal must be 0 or 1, got '" + s + "'");
    }
    std::string print(const Value& v) const override { return get(v) ? "1" : "0"; }
    Value sample(std::mt19937& rng) const override { return Value(bool(rng() & 1)); }

    static bool get(const Value& v) {
        if (auto p = std::get_if<bool>(&v.v)) return *p;
        bad_value("bool");
    }
};

// ------------------------------------------------------- plain numeric rings

struct NatSemiring final : Semiring {
    NatSemiring() : Semiring("nat", true, false) {}
    Value zero() const override { return Value(mpz_class(0)); }
    Value one() const override { return Value(mpz_class(1)); }
    Value add(const Value& a, const Value& b) const override {
        return Value(mpz_class(as_z(a, "nat") + as_z(b, "nat")));
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpz_class(as_z(a, "nat") * as_z(b, "nat")));
    }
    Value parse(const std::string& s) const override {
        mpz_class z = parse_mpz(s, "nat");
        if (z < 0) throw parse_error("nat literal must be non-negative");
        return Value(z);
    }
    std::string print(const Value& v) const override { return as_z(v, "nat").get_str(); }
    Value sample(std::mt19937& rng) const override { return Value(mpz_class(rng() % 50)); }
};

struct IntSemiring final : Semiring {
    IntSemiring() : Semiring("int", true, false) {}
    Value zero() const override { return Value(mpz_class(0)); }
    Value one() const override { return Value(mpz_class(1)); }
    Value add(const Value& a, const Value& b) const override {
        return Value(mpz_class(as_z(a, "int") + as_z(b, "int")));
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpz_class(as_z(a, "int") * as_z(b, "int")));
    }
    Value parse(const std::string& s) const override { return Value(parse_mpz(s, "int")); }
    std::string print(const Value& v) const override { return as_z(v, "int").get_str(); }
    Value sample(std::mt19937& rng) const override {
        return Value(mpz_class(long(rng() % 101) - 50));
    }
};

struct IntModSemiring final : Semiring {
    explicit IntModSemiring(mpz_class q)
        : Semiring("int_mod:" + q.get_str(), true, false), q_(std::move(q)) {}
    Value zero() const override { return Value(mpz_class(0)); }
    Value one() const override { return Value(mpz_class(mpz_class(1) % q_)); }
    Value add(const Value& a, const Value& b) const override {
        return Value(mpz_class((as_z(a, name()) + as_z(b, name())) % q_));
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpz_class((as_z(a, name()) * as_z(b, name())) % q_));
    }
    Value parse(const std::string& s) const override {
        mpz_class z = parse_mpz(s, name());
        z %= q_;
        if (z < 0) z += q_;
        return Value(z);
    }
    std::string print(const Value& v) const override { return as_z(v, name()).get_str(); }
    Value sample(std::mt19937& rng) const override {
        return Value(mpz_class(mpz_class(rng()) % q_));
    }
    mpz_class q_;
};

struct RatSemiring final : Semiring {
    RatSemiring() : Semiring("rat", true, false) {}
    Value zero() const override { return Value(mpq_class(0)); }
    Value one() const override { return Value(mpq_class(1)); }
    Value add(const Value& a, const Value& b) const override {
        return Value(mpq_class(as_q(a, "rat") + as_q(b, "rat")));
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpq_class(as_q(a, "rat") * as_q(b, "rat")));
    }
    Value parse(const std::string& s) const override { return Value(parse_mpq(s, "rat")); }
    std::string print(const Value& v) const override { return print_mpq(as_q(v, "rat")); }
    Value sample(std::mt19937& rng) const override {
        mpq_class q(long(rng() % 21) - 10, long(rng() % 7) + 1);
        q.canonicalize();
        return Value(q);
    }
};

// ------------------------------------------------ extended numeric semirings

// nat with +inf adjoined; ordinary + and *, with 0 * inf = 0.
struct NatInfSemiring final : Semiring {
    NatInfSemiring() : Semiring("nat_inf", true, false) {}
    Value zero() const override { return Value(ExtInt{Inf::finite, 0}); }
    Value one() const override { return Value(ExtInt{Inf::finite, 1}); }
    Value add(const Value& a, const Value& b) const override {
        const ExtInt &x = as_zi(a, "nat_inf"), &y = as_zi(b, "nat_inf");
        if (x.inf == Inf::pos || y.inf == Inf::pos) return Value(ExtInt{Inf::pos, 0});
        return Value(ExtInt{Inf::finite, x.z + y.z});
    }
    Value mul(const Value& a, const Value& b) const override {
        const ExtInt &x = as_zi(a, "nat_inf"), &y = as_zi(b, "nat_inf");
        bool xz = x.inf == Inf::finite && x.z == 0, yz = y.inf == Inf::finite && y.z == 0;
        if (xz || yz) return Value(ExtInt{Inf::finite, 0});  // 0 * inf = 0
        if (x.inf == Inf::pos || y.inf == Inf::pos) return Value(ExtInt{Inf::pos, 0});
        return Value(ExtInt{Inf::finite, x.z * y.z});
    }
    Value parse(const std::string& s) const override {
        if (s == "+inf") return Value(ExtInt{Inf::pos, 0});
        mpz_class z = parse_mpz(s, "nat_inf");
        if (z < 0) throw parse_error("nat_inf literal must be non-negative or +inf");
        return Value(ExtInt{Inf::finite, z});
    }
    std::string print(const Value& v) const override {
        const ExtInt& x = as_zi(v, "nat_inf");
        return x.inf == Inf::pos ? "+inf" : x.z.get_str();
    }
    Value sample(std::mt19937& rng) const override {
        if (rng() % 8 == 0) return Value(ExtInt{Inf::pos, 0});
        return Value(ExtInt{Inf::finite, mpz_class(rng() % 30)});
    }
};

// Shared shape for (max,+,-inf,0) and (min,+,+inf,0) over integers or rationals.
struct MaxMinPlus final : Semiring {
    MaxMinPlus(std::string name, bool is_max, bool rational)
        : Semiring(std::move(name), true, true), is_max_(is_max), rational_(rational) {}
    Inf absorbing() const { return is_max_ ? Inf::neg : Inf::pos; }

    Value zero() const override {
        if (rational_) return Value(ExtRat{absorbing(), 0});
        return Value(ExtInt{absorbing(), 0});
    }
    Value one() const override {
        if (rational_) return Value(ExtRat{Inf::finite, 0});
        return Value(ExtInt{Inf::finite, 0});
    }
    Value add(const Value& a, const Value& b) const override {
        if (rational_) {
            const ExtRat &x = as_qi(a, name()), &y = as_qi(b, name());
            if (x.inf == absorbing()) return b;
            if (y.inf == absorbing()) return a;
            bool pick_x = is_max_ ? (x.q >= y.q) : (x.q <= y.q);
            return pick_x ? a : b;
        }
        const ExtInt &x = as_zi(a, name()), &y = as_zi(b, name());
        if (x.inf == absorbing()) return b;
        if (y.inf == absorbing()) return a;
        bool pick_x = is_max_ ? (x.z >= y.z) : (x.z <= y.z);
        return pick_x ? a : b;
    }
    Value mul(const Value& a, const Value& b) const override {
        if (rational_) {
            const ExtRat &x = as_qi(a, name()), &y = as_qi(b, name());
            if (x.inf != Inf::finite || y.inf != Inf::finite) return Value(ExtRat{absorbing(), 0});
            return Value(ExtRat{Inf::finite, x.q + y.q});
        }
        const ExtInt &x = as_zi(a, name()), &y = as_zi(b, name());
        if (x.inf != Inf::finite || y.inf != Inf::finite) return Value(ExtInt{absorbing(), 0});
        return Value(ExtInt{Inf::finite, x.z + y.z});
    }
    Value parse(const std::string& s) const override {
        std::string inf_lit = is_max_ ? "-inf" : "+inf";
        if (s == inf_lit) {
            if (rational_) return Value(ExtRat{absorbing(), 0});
            return Value(ExtInt{absorbing(), 0});
        }
        if (rational_) {
            mpq_class q = parse_mpq(s, name());
            if (q < 0) throw parse_error(name() + " literal must be non-negative or " + inf_lit);
            return Value(ExtRat{Inf::finite, q});
        }
        mpz_class z = parse_mpz(s, name());
        if (z < 0) throw parse_error(name() + " literal must be non-negative or " + inf_lit);
        return Value(ExtInt{Inf::finite, z});
    }
    std::string print(const Value& v) const override {
        std::string inf_lit = is_max_ ? "-inf" : "+inf";
        if (rational_) {
            const ExtRat& x = as_qi(v, name());
            return x.inf == Inf::finite ? print_mpq(x.q) : inf_lit;
        }
        const ExtInt& x = as_zi(v, name());
        return x.inf == Inf::finite ? x.z.get_str() : inf_lit;
    }
    Value sample(std::mt19937& rng) const override {
        if (rng() % 8 == 0) return zero();
        if (rational_) {
            mpq_class q(rng() % 30, rng() % 5 + 1);
            q.canonicalize();
            return Value(ExtRat{Inf::finite, q});
        }
        return Value(ExtInt{Inf::finite, mpz_class(rng() % 30)});
    }

    bool is_max_, rational_;
};

// Product t-norm on [0,1] with max as the sum.
struct TnormProductSemiring final : Semiring {
    TnormProductSemiring() : Semiring("tnorm_product", true, true) {}
    Value zero() const override { return Value(mpq_class(0)); }
    Value one() const override { return Value(mpq_class(1)); }
    Value add(const Value& a, const Value& b) const override {
        const mpq_class &x = as_q(a, name()), &y = as_q(b, name());
        return Value(mpq_class(std::max(x, y)));
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpq_class(as_q(a, name()) * as_q(b, name())));
    }
    Value parse(const std::string& s) const override {
        mpq_class q = parse_mpq(s, name());
        if (q < 0 || q > 1) throw parse_error("tnorm_product literal must lie in [0,1]");
        return Value(q);
    }
    std::string print(const Value& v) const override { return print_mpq(as_q(v, name())); }
    Value sample(std::mt19937& rng) const override {
        unsigned den = rng() % 9 + 1;
        mpq_class q(rng() % (den + 1), den);
        q.canonicalize();
        return Value(q);
    }
};

// ------------------------------------------------------------ word semirings

void check_word(const std::string& w, const std::string& alphabet, const std::string& ring) {
    for (char c : w)
        if (alphabet.find(c) == std::string::npos)
            throw parse_error(std::string("word symbol '") + c + "' not in alphabet of " + ring);
}

// "{a,ab,eps}" -> set of words; "eps" is the empty word.
std::vector<std::string> split_braced(const std::string& s, const std::string& ring) {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        throw parse_error("expected {...} literal for " + ring + ", got '" + s + "'");
    std::vector<std::string> out;
    std::string body = s.substr(1, s.size() - 2);
    if (body.empty()) return out;
    size_t start = 0;
    while (true) {
        size_t comma = body.find(',', start);
        out.push_back(body.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string word_of(const std::string& tok) { return tok == "eps" ? std::string() : tok; }
std::string word_lit(const std::string& w) { return w.empty() ? "eps" : w; }

// Finite languages: union / elementwise concatenation.
struct LangsSemiring final : Semiring {
    explicit LangsSemiring(std::string alphabet)
        : Semiring("langs:" + alphabet, false, true), alphabet_(std::move(alphabet)) {}
    Value zero() const override { return Value(LangSet{}); }
    Value one() const override { return Value(LangSet{std::string()}); }
    Value add(const Value& a, const Value& b) const override {
        LangSet out = get(a);
        const LangSet& y = get(b);
        out.insert(y.begin(), y.end());
        return Value(out);
    }
    Value mul(const Value& a, const Value& b) const override {
        const LangSet &x = get(a), &y = get(b);
        LangSet out;
        for (const auto& u : x)
            for (const auto& v : y) out.insert(u + v);
        return Value(out);
    }
    Value parse(const std::string& s) const override {
        LangSet out;
        for (const auto& tok : split_braced(s, name())) {
            std::string w = word_of(tok);
            check_word(w, alphabet_, name());
            out.insert(w);
        }
        return Value(out);
    }
    std::string print(const Value& v) const override {
        std::string out = "{";
        bool first = true;
        for (const auto& w : get(v)) {
            if (!first) out += ",";
            out += word_lit(w);
            first = false;
        }
        return out + "}";
    }
    Value sample(std::mt19937& rng) const override {
        LangSet out;
        size_t k = rng() % 4;
        for (size_t i = 0; i < k; ++i) out.insert(random_word(rng));
        return Value(out);
    }
    std::string random_word(std::mt19937& rng) const {
        std::string w;
        size_t len = rng() % 4;
        for (size_t i = 0; i < len; ++i) w += alphabet_[rng() % alphabet_.size()];
        return w;
    }
    static const LangSet& get(const Value& v) {
        if (auto p = std::get_if<LangSet>(&v.v)) return *p;
        bad_value("langs");
    }
    std::string alphabet_;
};

// Word multisets with natural coefficients: pointwise + / concatenation convolution.
struct MultisetSemiring final : Semiring {
    explicit MultisetSemiring(std::string alphabet)
        : Semiring("multiset:" + alphabet, false, false), alphabet_(std::move(alphabet)) {}
    Value zero() const override { return Value(WordMultiset{}); }
    Value one() const override { return Value(WordMultiset{{std::string(), 1}}); }
    Value add(const Value& a, const Value& b) const override {
        WordMultiset out = get(a);
        for (const auto& [w, c] : get(b)) out[w] += c;
        return Value(out);
    }
    Value mul(const Value& a, const Value& b) const override {
        WordMultiset out;
        for (const auto& [u, cu] : get(a))
            for (const auto& [v, cv] : get(b)) out[u + v] += cu * cv;
        return Value(out);
    }
    Value parse(const std::string& s) const override {
        WordMultiset out;
        for (const auto& tok : split_braced(s, name())) {
            size_t colon = tok.find(':');
            if (colon == std::string::npos)
                throw parse_error("multiset entries are word:count, got '" + tok + "'");
            std::string w = word_of(tok.substr(0, colon));
            check_word(w, alphabet_, name());
            mpz_class c = parse_mpz(tok.substr(colon + 1), name());
            if (c <= 0) throw parse_error("multiset counts must be positive");
            out[w] += c;
        }
        return Value(out);
    }
    std::string print(const Value& v) const override {
        std::string out = "{";
        bool first = true;
        for (const auto& [w, c] : get(v)) {
            if (!first) out += ",";
            out += word_lit(w) + ":" + c.get_str();
            first = false;
        }
        return out + "}";
    }
    Value sample(std::mt19937& rng) const override {
        WordMultiset out;
        size_t k = rng() % 3;
        for (size_t i = 0; i < k; ++i) {
            std::string w;
            size_t len = rng() % 3;
            for (size_t j = 0; j < len; ++j) w += alphabet_[rng() % alphabet_.size()];
            out[w] += mpz_class(rng() % 3 + 1);
        }
        return Value(out);
    }
    static const WordMultiset& get(const Value& v) {
        if (auto p = std::get_if<WordMultiset>(&v.v)) return *p;
        bad_value("multiset");
    }
    std::string alphabet_;
};

// Binary words under the radix (length, then lex) order, with concatenation.
struct RadixSemiring final : Semiring {
    explicit RadixSemiring(bool is_max)
        : Semiring(is_max ? "radix_max" : "radix_min", false, true), is_max_(is_max) {}
    Inf absorbing() const { return is_max_ ? Inf::neg : Inf::pos; }
    Value zero() const override { return Value(ExtWord{absorbing(), ""}); }
    Value one() const override { return Value(ExtWord{Inf::finite, ""}); }

    // radix order: shorter first, same length by lexicographic comparison
    static bool radix_le(const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a <= b;
    }
    Value add(const Value& a, const Value& b) const override {
        const ExtWord &x = as_wi(a, name()), &y = as_wi(b, name());
        if (x.inf == absorbing()) return b;
        if (y.inf == absorbing()) return a;
        bool pick_x = is_max_ ? radix_le(y.w, x.w) : radix_le(x.w, y.w);
        return pick_x ? a : b;
    }
    Value mul(const Value& a, const Value& b) const override {
        const ExtWord &x = as_wi(a, name()), &y = as_wi(b, name());
        if (x.inf != Inf::finite || y.inf != Inf::finite) return Value(ExtWord{absorbing(), ""});
        return Value(ExtWord{Inf::finite, x.w + y.w});
    }
    Value parse(const std::string& s) const override {
        if (s == (is_max_ ? "-inf" : "+inf")) return zero();
        std::string w = word_of(s);
        for (char c : w)
            if (c != '0' && c != '1')
                throw parse_error(name() + " literal must be a bitstring, eps or infinity");
        return Value(ExtWord{Inf::finite, w});
    }
    std::string print(const Value& v) const override {
        const ExtWord& x = as_wi(v, name());
        if (x.inf != Inf::finite) return is_max_ ? "-inf" : "+inf";
        return word_lit(x.w);
    }
    Value sample(std::mt19937& rng) const override {
        if (rng() % 8 == 0) return zero();
        std::string w;
        size_t len = rng() % 4;
        for (size_t i = 0; i < len; ++i) w += char('0' + (rng() & 1));
        return Value(ExtWord{Inf::finite, w});
    }
    bool is_max_;
};

}  // namespace

SemiringPtr registry_lookup(const std::string& spec) {
    std::string name = spec, param;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        param = spec.substr(colon + 1);
    }
    auto no_param = [&] {
        if (!param.empty())
            throw invalid_argument_error("semiring '" + name + "' takes no parameter");
    };
    if (name == "bool") { no_param(); return std::make_shared<BoolSemiring>(); }
    if (name == "nat") { no_param(); return std::make_shared<NatSemiring>(); }
    if (name == "nat_inf") { no_param(); return std::make_shared<NatInfSemiring>(); }
    if (name == "int") { no_param(); return std::make_shared<IntSemiring>(); }
    if (name == "int_mod") {
        if (param.empty()) throw invalid_argument_error("int_mod needs a modulus, e.g. int_mod:5");
        mpz_class q = parse_mpz(param, "int_mod");
        if (q < 2) throw invalid_argument_error("int_mod modulus must be >= 2");
        return std::make_shared<IntModSemiring>(q);
    }
    if (name == "rat") { no_param(); return std::make_shared<RatSemiring>(); }
    if (name == "arctic") { no_param(); return std::make_shared<MaxMinPlus>("arctic", true, true); }
    if (name == "nat_max") { no_param(); return std::make_shared<MaxMinPlus>("nat_max", true, false); }
    if (name == "trop") { no_param(); return std::make_shared<MaxMinPlus>("trop", false, true); }
    if (name == "nat_min") { no_param(); return std::make_shared<MaxMinPlus>("nat_min", false, false); }
    if (name == "tnorm_product") {
        if (!param.empty() && param != "product")
            throw invalid_argument_error("only the product t-norm is registered");
        return std::make_shared<TnormProductSemiring>();
    }
    auto alphabet_of = [&]() -> std::string {
        std::string a = param.empty() ? "ab" : param;
        for (char c : a)
            if (!isalnum((unsigned char)c))
                throw invalid_argument_error("alphabet must be alphanumeric");
        return a;
    };
    if (name == "langs") return std::make_shared<LangsSemiring>(alphabet_of());
    if (name == "multiset") return std::make_shared<MultisetSemiring>(alphabet_of());
    if (name == "radix_max") { no_param(); return std::make_shared<RadixSemiring>(true); }
    if (name == "radix_min") { no_param(); return std::make_shared<RadixSemiring>(false); }
    throw invalid_argument_error("unknown semiring '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> registry_list() {
    return {
        {"bool", "two-element Boolean semiring (or, and)"},
        {"nat", "natural numbers (+, *)"},
        {"nat_inf", "naturals with +inf adjoined, 0*inf = 0"},
        {"int", "integers (+, *)"},
        {"int_mod:<q>", "integers modulo q >= 2"},
        {"rat", "rationals (+, *)"},
        {"arctic", "max-plus over non-negative rationals with -inf"},
        {"nat_max", "max-plus over naturals with -inf"},
        {"trop", "min-plus over non-negative rationals with +inf"},
        {"nat_min", "min-plus over naturals with +inf"},
        {"tnorm_product", "product t-norm on [0,1] with max as sum"},
        {"langs[:<alphabet>]", "finite languages (union, concatenation); noncommutative"},
        {"multiset[:<alphabet>]", "word multisets (pointwise +, convolution); noncommutative"},
        {"radix_max", "binary words, max in radix order, concatenation"},
        {"radix_min", "binary words, min in radix order, concatenation"},
    };
}

}  // namespace wdc
