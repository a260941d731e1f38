#include "doctest.h"
#include "wdc/errors.hpp"
#include "wdc/structure.hpp"

using namespace wdc;

namespace {

Signature graph_sig() {
    Signature s;
    s.relations = {{"edge", 2}};
    return s;
}

}  // namespace

TEST_CASE("tuple enumeration is lexicographic and rank/unrank invert") {
    auto ts = tuples_lex(3, 2);
    REQUIRE(ts.size() == 9);
    CHECK(ts.front() == Tuple{0, 0});
    CHECK(ts[1] == Tuple{0, 1});  // last coordinate varies fastest
    CHECK(ts.back() == Tuple{2, 2});
    for (uint64_t r = 0; r < ts.size(); ++r) {
        CHECK(tuple_rank(ts[r], 3) == r);
        CHECK(tuple_unrank(r, 3, 2) == ts[r]);
    }
    CHECK(tuples_lex(4, 0) == std::vector<Tuple>{Tuple{}});
}

TEST_CASE("pow_checked throws past its cap") {
    CHECK(pow_checked(3, 4) == 81);
    CHECK(pow_checked(1, 60) == 1);
    CHECK_THROWS_AS(pow_checked(2, 63), cap_exceeded);
}

TEST_CASE("encoding lays out one bit block per relation, then the frees") {
    Structure a;
    a.n = 2;
    a.sig = graph_sig();
    a.relations = {{{0, 1}, {1, 1}}};
    CHECK(encode(a) == "0101");  // tuple ranks 1 and 3

    Structure empty;
    empty.n = 3;
    CHECK(encode(empty) == "000");  // empty signature still marks n

    FreeValue x;
    x.element = 1;
    FreeValue X;
    X.is_relation = true;
    X.arity = 1;
    X.rel = {{0}};
    CHECK(encode(a, {x, X}) == "0101" "01" "10");
}

TEST_CASE("decode inverts encode and validates its input") {
    Structure a;
    a.n = 2;
    a.sig = graph_sig();
    a.relations = {{{0, 0}, {1, 0}}};
    Structure back = decode(encode(a), graph_sig(), 2);
    CHECK(back.relations[0] == a.relations[0]);
    CHECK_THROWS_AS(decode("010", graph_sig(), 2), parse_error);
    CHECK_THROWS_AS(decode("01x1", graph_sig(), 2), parse_error);
}

TEST_CASE("the subset order reads masks as binary numbers") {
    SubsetStar ss(2, 1);
    CHECK(ss.base == 2);
    CHECK(ss.count == 4);
    CHECK(subset_from_mask(0, 2, 1).empty());
    CHECK(subset_from_mask(3, 2, 1) == Relation{{0}, {1}});
    for (uint64_t m = 0; m < ss.count; ++m)
        CHECK(subset_position(subset_from_mask(m, 2, 1), 2, 1) == m);
    CHECK_THROWS_AS(SubsetStar(2, 6, 20), cap_exceeded);
}

TEST_CASE("all_structures enumerates every relation combination once") {
    auto all = all_structures(graph_sig(), 2);
    CHECK(all.size() == 16);
    std::set<std::string> seen;
    for (const auto& a : all) seen.insert(encode(a));
    CHECK(seen.size() == 16);

    CHECK(all_structures(Signature{}, 3).size() == 1);
}

TEST_CASE("structure json round trip") {
    Structure a;
    a.n = 3;
    a.sig = graph_sig();
    a.relations = {{{0, 1}, {2, 2}}};
    Structure back = load_structure_json(save_structure_json(a));
    CHECK(back.n == 3);
    CHECK(back.sig.relations == a.sig.relations);
    CHECK(back.relations == a.relations);
}

TEST_CASE("validate rejects out-of-range elements and arity mismatches") {
    Structure a;
    a.n = 2;
    a.sig = graph_sig();
    a.relations = {{{0, 2}}};
    CHECK_THROWS_AS(a.validate(), invalid_argument_error);
    a.relations = {{{0}}};
    CHECK_THROWS_AS(a.validate(), invalid_argument_error);
}
