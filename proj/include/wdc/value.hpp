#pragma once

// Semiring element carrier. One sum type covers every registered instance so
// machines, formulas and the CLI can pass weights around without templates.
// All arithmetic is exact: integers/rationals are GMP-backed, the remaining
// carriers are words, finite word sets and word multisets.

#include <gmpxx.h>

#include <map>
#include <set>
#include <string>
#include <variant>

namespace wdc {

enum class Inf { finite, neg, pos };

// Integer extended with one signed infinity (nat_inf, nat_max, nat_min).
struct ExtInt {
    Inf inf = Inf::finite;
    mpz_class z;
    friend bool operator==(const ExtInt& a, const ExtInt& b) {
        return a.inf == b.inf && (a.inf != Inf::finite || a.z == b.z);
    }
};

// Rational extended with one signed infinity (arctic, tropical).
struct ExtRat {
    Inf inf = Inf::finite;
    mpq_class q;
    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        return a.inf == b.inf && (a.inf != Inf::finite || a.q == b.q);
    }
};

// Binary word extended with two infinities (radix_max, radix_min).
struct ExtWord {
    Inf inf = Inf::finite;
    std::string w;
    friend bool operator==(const ExtWord& a, const ExtWord& b) {
        return a.inf == b.inf && (a.inf != Inf::finite || a.w == b.w);
    }
};

using LangSet = std::set<std::string>;               // finite language
using WordMultiset = std::map<std::string, mpz_class>;  // word -> positive count

struct Value {
    std::variant<bool, mpz_class, mpq_class, ExtInt, ExtRat, ExtWord, LangSet, WordMultiset> v;

    Value() : v(false) {}
    template <typename T>
    Value(T x) : v(std::move(x)) {}

    friend bool operator==(const Value& a, const Value& b) { return a.v == b.v; }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
};

}  // namespace wdc
