#include "support/gen.hpp"

#include <string>
#include <vector>

namespace wdc::testing {
namespace {

struct Gen {
    const Signature& sig;
    const Semiring& s;
    std::mt19937& rng;
    std::vector<std::string> fo;                        // in-scope element vars
    std::vector<std::pair<std::string, int>> so;        // in-scope relation vars
    int next_fo = 0;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    std::string term() {
        // numeral 0 is the only constant safe at every universe size
        if (fo.empty() || pick(6) == 0) return "0";
        return fo[pick((int)fo.size())];
    }

    FormulaPtr atom() {
        std::vector<int> options = {0, 1, 2};  // =, <, !=
        if (!sig.relations.empty()) options.push_back(3);
        if (!so.empty()) options.push_back(4);
        switch (options[pick((int)options.size())]) {
            case 0: return f_eq(term(), term());
            case 1: return f_less(term(), term());
            case 2: return f_neq(term(), term());
            case 3: {
                const auto& [r, ar] = sig.relations[pick((int)sig.relations.size())];
                std::vector<std::string> args;
                for (int i = 0; i < ar; ++i) args.push_back(term());
                return f_rel(r, args);
            }
            default: {
                const auto& [X, ar] = so[pick((int)so.size())];
                std::vector<std::string> args;
                for (int i = 0; i < ar; ++i) args.push_back(term());
                return f_so(X, args);
            }
        }
    }

    FormulaPtr boolean(int depth) {
        if (depth == 0) return atom();
        switch (pick(7)) {
            case 0: return f_not(boolean(depth - 1));
            case 1: return f_or(boolean(depth - 1), boolean(depth - 1));
            case 2: return f_and(boolean(depth - 1), boolean(depth - 1));
            case 3: return f_implies(boolean(depth - 1), boolean(depth - 1));
            case 4: {
                std::string x = "x" + std::to_string(next_fo++);
                fo.push_back(x);
                FormulaPtr b = boolean(depth - 1);
                fo.pop_back();
                return f_exists(x, b);
            }
            case 5: {
                std::string x = "x" + std::to_string(next_fo++);
                fo.push_back(x);
                FormulaPtr b = boolean(depth - 1);
                fo.pop_back();
                return f_forall(x, b);
            }
            default: return atom();
        }
    }

    FormulaPtr weighted(int depth) {
        if (depth == 0) return pick(2) ? f_const(s.print(s.sample(rng))) : atom();
        switch (pick(7)) {
            case 0: return f_const(s.print(s.sample(rng)));
            case 1: return f_oplus(weighted(depth - 1), weighted(depth - 1));
            case 2: return f_otimes(weighted(depth - 1), weighted(depth - 1));
            case 3: {
                std::string x = "x" + std::to_string(next_fo++);
                fo.push_back(x);
                FormulaPtr b = weighted(depth - 1);
                fo.pop_back();
                return f_sum(x, b);
            }
            case 4: {
                std::string x = "x" + std::to_string(next_fo++);
                fo.push_back(x);
                FormulaPtr b = weighted(depth - 1);
                fo.pop_back();
                return f_prod(x, b);
            }
            default: return boolean(depth - 1);
        }
    }
};

}  // namespace

FormulaPtr random_weso(const Signature& sig, const Semiring& s, std::mt19937& rng) {
    Gen g{sig, s, rng, {}, {}, 0};
    int n_so = g.pick(3);  // 0, 1 or 2 relation sums
    std::vector<std::pair<std::string, int>> prefix;
    bool used2 = false;
    for (int i = 0; i < n_so; ++i) {
        int ar = (!used2 && g.pick(2)) ? 2 : 1;
        used2 |= ar == 2;
        prefix.push_back({"X" + std::to_string(i), ar});
        g.so.push_back(prefix.back());
    }
    FormulaPtr body = g.weighted(3);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
        body = f_sum_so(it->first, it->second, body);
    return body;
}

}  // namespace wdc::testing
