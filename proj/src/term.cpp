#include "wdc/term.hpp"

#include "wdc/errors.hpp"

namespace wdc {

TermPtr Term::zero() { return std::make_shared<Term>(Term{Kind::Zero, "", nullptr, nullptr}); }
TermPtr Term::one() { return std::make_shared<Term>(Term{Kind::One, "", nullptr, nullptr}); }
TermPtr Term::generator(std::string name) {
    return std::make_shared<Term>(Term{Kind::Gen, std::move(name), nullptr, nullptr});
}
TermPtr Term::plus(TermPtr x, TermPtr y) {
    return std::make_shared<Term>(Term{Kind::Plus, "", std::move(x), std::move(y)});
}
TermPtr Term::times(TermPtr x, TermPtr y) {
    return std::make_shared<Term>(Term{Kind::Times, "", std::move(x), std::move(y)});
}

Value eval_term(const Term& t, const Semiring& s, const std::map<std::string, Value>& assignment) {
    switch (t.kind) {
        case Term::Kind::Zero: return s.zero();
        case Term::Kind::One: return s.one();
        case Term::Kind::Gen: {
            auto it = assignment.find(t.gen);
            if (it == assignment.end())
                throw invalid_argument_error("unassigned generator '" + t.gen + "'");
            return it->second;
        }
        case Term::Kind::Plus: return s.add(eval_term(*t.a, s, assignment), eval_term(*t.b, s, assignment));
        case Term::Kind::Times: return s.mul(eval_term(*t.a, s, assignment), eval_term(*t.b, s, assignment));
    }
    throw error("corrupt term node");
}

namespace {

TermPtr build_level(const SigmaPiRows& rows, int level, int max_depth) {
    if (auto* leaf = std::get_if<std::string>(&rows.node)) {
        if (level != max_depth + 1)
            throw invalid_argument_error("generator '" + *leaf + "' at depth " +
                                         std::to_string(level - 1) + ", expected depth " +
                                         std::to_string(max_depth));
        return Term::generator(*leaf);
    }
    const auto& kids = std::get<std::vector<SigmaPiRows>>(rows.node);
    if (level > max_depth)
        throw invalid_argument_error("row nesting deeper than the declared alternation depth");
    bool sum_level = (level % 2) == 1;  // odd levels are sums
    TermPtr acc;
    for (const auto& kid : kids) {
        TermPtr t = build_level(kid, level + 1, max_depth);
        acc = acc ? (sum_level ? Term::plus(acc, t) : Term::times(acc, t)) : t;
    }
    if (!acc) return sum_level ? Term::zero() : Term::one();
    return acc;
}

}  // namespace

TermPtr build_sigma_pi(const SigmaPiRows& rows, int k) {
    if (k < 1) throw invalid_argument_error("alternation depth k must be >= 1");
    return build_level(rows, 1, 2 * k);
}

std::string print_term(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Zero: return "0";
        case Term::Kind::One: return "1";
        case Term::Kind::Gen: return t.gen;
        case Term::Kind::Plus: return "(" + print_term(*t.a) + " + " + print_term(*t.b) + ")";
        case Term::Kind::Times: return "(" + print_term(*t.a) + " * " + print_term(*t.b) + ")";
    }
    return "?";
}

}  // namespace wdc
