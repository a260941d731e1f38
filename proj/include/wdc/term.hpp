#pragma once

// Terms over a semiring with a set of generator symbols, plus the
// sum-of-products normal form builder used by the fixed-point logics
// (alternating Sigma Pi ... Sigma Pi rows of depth 2k).

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wdc/semiring.hpp"

namespace wdc {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Zero, One, Gen, Plus, Times };
    Kind kind;
    std::string gen;  // Kind::Gen
    TermPtr a, b;     // Kind::Plus / Kind::Times

    static TermPtr zero();
    static TermPtr one();
    static TermPtr generator(std::string name);
    static TermPtr plus(TermPtr x, TermPtr y);
    static TermPtr times(TermPtr x, TermPtr y);
};

// Bottom-up fold; every generator must be assigned, otherwise throws.
Value eval_term(const Term& t, const Semiring& s, const std::map<std::string, Value>& assignment);

// Nested rows for the alternating normal form: a leaf is a generator symbol,
// an inner node is a list. Level 1 (outermost) is a sum, level 2 a product,
// and so on; leaves sit at depth exactly 2k. Empty sums give 0, empty
// products 1. Ragged nesting that misses the declared depth throws.
struct SigmaPiRows {
    std::variant<std::string, std::vector<SigmaPiRows>> node;
};

TermPtr build_sigma_pi(const SigmaPiRows& rows, int k);

std::string print_term(const Term& t);

}  // namespace wdc
