#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "wdc/errors.hpp"
#include "wdc/eval.hpp"
#include "wdc/fagin.hpp"

namespace wdc {
namespace {

nlohmann::json structure_json(const Structure& a) {
    nlohmann::json j;
    j["n"] = a.n;
    auto& rels = j["relations"] = nlohmann::json::object();
    for (size_t i = 0; i < a.sig.relations.size(); ++i) {
        auto& arr = rels[a.sig.relations[i].first] = nlohmann::json::array();
        for (const auto& t : a.relations[i]) arr.push_back(t);
    }
    return j;
}

}  // namespace

CrosscheckReport crosscheck(const std::vector<Structure>& structures,
                            const std::function<Value(const Structure&)>& lhs,
                            const std::function<Value(const Structure&)>& rhs) {
    CrosscheckReport rep;
    rep.checked = structures.size();
#pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < structures.size(); ++i) {
        bool skip;
#pragma omp critical(crosscheck_report)
        skip = !rep.ok;
        if (skip) continue;
        std::string failure;
        try {
            Value l = lhs(structures[i]);
            Value r = rhs(structures[i]);
            if (!(l == r)) failure = "values differ on " + structure_json(structures[i]).dump();
        } catch (const std::exception& e) {
            failure = std::string(e.what()) + " on " + structure_json(structures[i]).dump();
        }
        if (!failure.empty()) {
#pragma omp critical(crosscheck_report)
            if (rep.ok) {
                rep.ok = false;
                rep.counterexample = failure;
            }
        }
    }
    return rep;
}

CrosscheckReport crosscheck_formula_machine(const Formula& phi, const WeightedTM& m,
                                            const Signature& sig,
                                            const std::string& semiring_spec, int max_n,
                                            long max_steps) {
    auto S = registry_lookup(semiring_spec);
    std::vector<Structure> structures;
    for (int n = 1; n <= max_n; ++n)
        for (auto& a : all_structures(sig, n)) structures.push_back(std::move(a));
    Assignment rho;  // closed formulas only: free values would need enumerating too
    return crosscheck(
        structures,
        [&](const Structure& a) {
            EvalContext ctx;
            ctx.structure = &a;
            ctx.semiring = S;
            ctx.parallel = false;  // the crosscheck already parallelizes
            return eval_weighted(phi, ctx);
        },
        [&](const Structure& a) {
            std::string input = encode(a, free_blocks(phi, rho, a.n));
            return behavior(m, *S, input, max_steps, /*strict=*/true);
        });
}

}  // namespace wdc
