#include <doctest.h>

#include "support/oracles.hpp"
#include "wdc/errors.hpp"
#include "wdc/semiring.hpp"
#include "wdc/term.hpp"

using namespace wdc;

static const char* kAll[] = {"bool", "nat", "nat_inf", "int", "int_mod:5", "int_mod:2",
                             "rat", "arctic", "nat_max", "trop", "nat_min", "tnorm_product",
                             "langs", "multiset", "radix_max", "radix_min"};

TEST_CASE("semiring laws hold on random samples") {
    for (const char* name : kAll) {
        auto s = registry_lookup(name);
        auto fail = testing::check_semiring_laws(*s, 300, 12345);
        CHECK_MESSAGE(!fail, fail.value_or(""));
    }
}

TEST_CASE("flags are honest (witnesses exist where laws fail)") {
    for (const char* name : kAll) {
        auto s = registry_lookup(name);
        auto fail = testing::check_flag_honesty(*s, 300, 777);
        CHECK_MESSAGE(!fail, fail.value_or(""));
    }
}

TEST_CASE("registry errors") {
    CHECK_THROWS_AS(registry_lookup("int_mod"), invalid_argument_error);
    CHECK_THROWS_AS(registry_lookup("int_mod:1"), invalid_argument_error);
    CHECK_THROWS_AS(registry_lookup("no_such_ring"), invalid_argument_error);
    CHECK_THROWS_AS(registry_lookup("tnorm_product:lukasiewicz"), invalid_argument_error);
    CHECK_THROWS_AS(registry_lookup("bool:2"), invalid_argument_error);
    CHECK(registry_list().size() == 15);
}

TEST_CASE("pinned arithmetic facts") {
    auto arctic = registry_lookup("arctic");
    // arctic: add is max, mul is +, 0 is -inf, 1 is 0
    CHECK(arctic->print(arctic->add(arctic->parse("3/2"), arctic->parse("2"))) == "2");
    CHECK(arctic->print(arctic->mul(arctic->parse("3/2"), arctic->parse("2"))) == "7/2");
    CHECK(arctic->print(arctic->zero()) == "-inf");
    CHECK(arctic->print(arctic->one()) == "0");
    CHECK(arctic->mul(arctic->zero(), arctic->parse("5")) == arctic->zero());

    auto trop = registry_lookup("trop");
    CHECK(trop->print(trop->add(trop->parse("3"), trop->parse("1/2"))) == "1/2");
    CHECK(trop->print(trop->zero()) == "+inf");

    auto ni = registry_lookup("nat_inf");
    // 0 * inf = 0 keeps annihilation exact
    CHECK(ni->mul(ni->zero(), ni->parse("+inf")) == ni->zero());
    CHECK(ni->print(ni->add(ni->parse("+inf"), ni->parse("3"))) == "+inf");

    auto langs = registry_lookup("langs");
    Value ab = langs->parse("{a,b}");
    Value c = langs->parse("{eps,ab}");
    CHECK(langs->print(langs->mul(ab, c)) == "{a,aab,b,bab}");
    CHECK(langs->print(langs->mul(c, ab)) == "{a,aba,abb,b}");  // noncommutative
    CHECK(langs->mul(ab, langs->zero()) == langs->zero());
    CHECK(langs->mul(ab, langs->one()) == ab);

    auto ms = registry_lookup("multiset");
    Value m = ms->parse("{a:2,b:1}");
    CHECK(ms->print(ms->add(m, m)) == "{a:4,b:2}");
    CHECK(ms->print(ms->mul(m, ms->parse("{a:3}"))) == "{aa:6,ba:3}");

    auto rx = registry_lookup("radix_max");
    // radix order: shorter < longer, ties lexicographic
    CHECK(rx->print(rx->add(rx->parse("11"), rx->parse("000"))) == "000");
    CHECK(rx->print(rx->add(rx->parse("01"), rx->parse("10"))) == "10");
    CHECK(rx->print(rx->mul(rx->parse("01"), rx->parse("1")))  == "011");
    auto rn = registry_lookup("radix_min");
    CHECK(rn->print(rn->add(rn->parse("11"), rn->parse("000"))) == "11");
    CHECK(rn->print(rn->zero()) == "+inf");

    auto m2 = registry_lookup("int_mod:2");
    CHECK(m2->add(m2->one(), m2->one()) == m2->zero());

    auto tp = registry_lookup("tnorm_product");
    CHECK(tp->print(tp->add(tp->parse("1/3"), tp->parse("1/2"))) == "1/2");
    CHECK(tp->print(tp->mul(tp->parse("1/3"), tp->parse("1/2"))) == "1/6");
    CHECK_THROWS_AS(tp->parse("3/2"), parse_error);
}

TEST_CASE("literal parse errors") {
    CHECK_THROWS_AS(registry_lookup("nat")->parse("-3"), parse_error);
    CHECK_THROWS_AS(registry_lookup("bool")->parse("2"), parse_error);
    CHECK_THROWS_AS(registry_lookup("rat")->parse("1/0"), parse_error);
    CHECK_THROWS_AS(registry_lookup("arctic")->parse("+inf"), parse_error);
    CHECK_THROWS_AS(registry_lookup("langs")->parse("{xyz}"), parse_error);
    CHECK_THROWS_AS(registry_lookup("multiset")->parse("{a:0}"), parse_error);
    CHECK_THROWS_AS(registry_lookup("radix_max")->parse("012"), parse_error);
}

TEST_CASE("term evaluation and sigma-pi normal form") {
    auto nat = registry_lookup("nat");
    // (x + 1) * y with x=2, y=3 -> 9
    auto t = Term::times(Term::plus(Term::generator("x"), Term::one()), Term::generator("y"));
    std::map<std::string, Value> env{{"x", nat->parse("2")}, {"y", nat->parse("3")}};
    CHECK(eval_term(*t, *nat, env) == nat->parse("9"));
    CHECK_THROWS_AS(eval_term(*Term::generator("z"), *nat, env), invalid_argument_error);

    // k=1: sum of products [[x,y],[y]] -> x*y + y = 2*3 + 3 = 9
    SigmaPiRows leaf_x{std::string("x")}, leaf_y{std::string("y")};
    SigmaPiRows row1{std::vector<SigmaPiRows>{leaf_x, leaf_y}};
    SigmaPiRows row2{std::vector<SigmaPiRows>{leaf_y}};
    SigmaPiRows top{std::vector<SigmaPiRows>{row1, row2}};
    auto sp = build_sigma_pi(top, 1);
    CHECK(eval_term(*sp, *nat, env) == nat->parse("9"));

    // empty sum is 0, empty product is 1
    SigmaPiRows empty_sum{std::vector<SigmaPiRows>{}};
    CHECK(eval_term(*build_sigma_pi(empty_sum, 1), *nat, env) == nat->zero());
    SigmaPiRows empty_prod{std::vector<SigmaPiRows>{SigmaPiRows{std::vector<SigmaPiRows>{}}}};
    CHECK(eval_term(*build_sigma_pi(empty_prod, 1), *nat, env) == nat->one());

    // ragged nesting is rejected: a leaf at depth 1 when k=1 expects depth 2
    SigmaPiRows ragged{std::vector<SigmaPiRows>{leaf_x}};
    CHECK_THROWS_AS(build_sigma_pi(ragged, 1), invalid_argument_error);
    // ordered products respect noncommutativity
    auto langs = registry_lookup("langs");
    std::map<std::string, Value> wenv{{"x", langs->parse("{a}")}, {"y", langs->parse("{b}")}};
    SigmaPiRows xy{std::vector<SigmaPiRows>{SigmaPiRows{std::vector<SigmaPiRows>{leaf_x, leaf_y}}}};
    CHECK(eval_term(*build_sigma_pi(xy, 1), *langs, wenv) == langs->parse("{ab}"));
}
