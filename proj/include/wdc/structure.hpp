#pragma once

// Finite ordered structures over universe {0..n-1}, their bitstring
// encodings, lexicographic tuple enumeration, and the canonical subset
// order <* used by product quantifiers over relations.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace wdc {

using Tuple = std::vector<int>;
using Relation = std::set<Tuple>;

struct Signature {
    // relation name -> arity, in declaration order (the order encode() uses)
    std::vector<std::pair<std::string, int>> relations;

    int arity_of(const std::string& name) const;  // -1 if absent
};

struct Structure {
    int n = 0;
    Signature sig;
    std::vector<Relation> relations;  // parallel to sig.relations

    const Relation& relation(const std::string& name) const;
    void validate() const;  // arities and element ranges
};

// n^l as a checked 64-bit value; throws cap_exceeded beyond 2^62.
uint64_t pow_checked(int n, int l);

// All l-tuples over {0..n-1} in lexicographic order (first coordinate most
// significant). l = 0 yields the single empty tuple.
std::vector<Tuple> tuples_lex(int n, int l);

// Rank of a tuple in tuples_lex order: sum of n^(l-1-i) * t[i].
uint64_t tuple_rank(const Tuple& t, int n);
Tuple tuple_unrank(uint64_t r, int n, int l);

// A value assigned to a free variable for encoding purposes: either an
// element or a relation with explicit arity.
struct FreeValue {
    bool is_relation = false;
    int element = 0;
    int arity = 0;
    Relation rel;
};

// enc(A ; v1..vm): one n^l block of 0/1 per signature relation in order,
// then one block per free value. Empty signature contributes 0^n. Bit m of
// a block is 1 iff the m-th lexicographic tuple is present.
std::string encode(const Structure& a, const std::vector<FreeValue>& frees = {});

// Inverse of encode for the signature part; validates length, alphabet.
Structure decode(const std::string& bits, const Signature& sig, int n);

// Subsets of the l-tuples over {0..n-1} in the canonical order <*:
// X <* Y iff some u in Y\X has every later tuple shared. Equivalently the
// subsets read as binary numbers whose bit r is the tuple of rank r, so the
// sequence is mask 0, 1, ..., 2^(n^l)-1. The cap bounds the base tuple
// count (mask representation needs n^l <= 62).
struct SubsetStar {
    int n, l;
    uint64_t base;   // n^l
    uint64_t count;  // 2^base
    SubsetStar(int n, int l, int max_base = 20);
};

uint64_t subset_position(const Relation& rel, int n, int l);  // the order index
Relation subset_from_mask(uint64_t mask, int n, int l);
uint64_t mask_from_relation(const Relation& rel, int n);

// JSON round trip for the CLI file format.
Structure load_structure_json(const std::string& text);
std::string save_structure_json(const Structure& a);

// All structures over sig with universe size n (every combination of
// relation contents). Ordered by relation masks.
std::vector<Structure> all_structures(const Signature& sig, int n, int max_base = 20);

}  // namespace wdc
