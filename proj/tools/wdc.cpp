// Command-line front end. One verb per task; all resource caps are explicit
// flags. Exit codes: 0 success, 2 parse/usage error, 3 cap exceeded,
// 4 live branches at the step bound, 1 anything else.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wdc/errors.hpp"
#include "wdc/eval.hpp"
#include "wdc/fagin.hpp"
#include "wdc/machine.hpp"
#include "wdc/satred.hpp"

using namespace wdc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_argument_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw invalid_argument_error("cannot open " + path);
    out << text;
}

// "edge:2,r:1" or "" for the empty signature
Signature parse_signature(const std::string& text) {
    Signature sig;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw parse_error("signature entries look like name:arity");
        sig.relations.push_back({item.substr(0, colon), std::stoi(item.substr(colon + 1))});
    }
    return sig;
}

// "x=0, X={(0,1),(1,0)}, Y={0,2}"
Assignment parse_assignment(const std::string& text) {
    Assignment rho;
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && isspace((unsigned char)text[i])) ++i; };
    auto expect = [&](char c) {
        skip_ws();
        if (i >= text.size() || text[i] != c)
            throw parse_error("assignment: expected '" + std::string(1, c) + "'", i);
        ++i;
    };
    auto number = [&] {
        skip_ws();
        size_t j = i;
        while (i < text.size() && isdigit((unsigned char)text[i])) ++i;
        if (i == j) throw parse_error("assignment: expected a number", i);
        return std::stoi(text.substr(j, i - j));
    };
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        size_t j = i;
        while (i < text.size() && (isalnum((unsigned char)text[i]) || text[i] == '_')) ++i;
        std::string name = text.substr(j, i - j);
        if (name.empty()) throw parse_error("assignment: expected a variable name", i);
        expect('=');
        skip_ws();
        if (i < text.size() && text[i] == '{') {
            ++i;
            Relation rel;
            skip_ws();
            while (i < text.size() && text[i] != '}') {
                Tuple t;
                skip_ws();
                if (text[i] == '(') {
                    ++i;
                    t.push_back(number());
                    while (true) {
                        skip_ws();
                        if (i < text.size() && text[i] == ',') {
                            ++i;
                            t.push_back(number());
                        } else
                            break;
                    }
                    expect(')');
                } else {
                    t.push_back(number());
                }
                rel.insert(t);
                skip_ws();
                if (i < text.size() && text[i] == ',') ++i;
            }
            expect('}');
            rho.so[name] = rel;
        } else {
            rho.fo[name] = number();
        }
        skip_ws();
        if (i < text.size() && text[i] == ',') ++i;
    }
    return rho;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"exact semiring-weighted logic and machine workbench"};
    app.require_subcommand(1);

    std::string semiring = "nat", structure_file, formula_file, assign, out_file;
    std::string machine_file, input, prop_file, signature;
    long max_steps = 1000000;
    int max_subsets = 20, max_n = 2, k = 1;
    long max_stages = 0;
    bool strict = false, exact = false, unordered = false, serial = false;

    auto* eval = app.add_subcommand("eval", "evaluate a formula on a structure");
    eval->add_option("--semiring", semiring)->required();
    eval->add_option("--structure", structure_file)->required();
    eval->add_option("--formula", formula_file)->required();
    eval->add_option("--assign", assign, "free-variable values, e.g. \"x=0, X={(0,1)}\"");
    eval->add_option("--max-subsets", max_subsets, "cap on n^l for relation quantifiers");
    eval->add_option("--max-stages", max_stages, "fixpoint stage cap (0 = 2^(n^k)+1)");
    eval->add_flag("--serial", serial, "disable the OpenMP kernels");

    auto* run = app.add_subcommand("run", "sum the accepting runs of a machine");
    run->add_option("--machine", machine_file)->required();
    run->add_option("--input", input)->required();
    run->add_option("--max-steps", max_steps);
    run->add_flag("--strict", strict, "fail if a branch is still live at the bound");
    run->add_flag("--exact", exact, "count only runs of length exactly --max-steps");

    auto* compile = app.add_subcommand("compile", "formula -> weighted machine (JSON)");
    compile->add_option("--formula", formula_file)->required();
    compile->add_option("--semiring", semiring)->required();
    compile->add_option("--signature", signature, "e.g. \"edge:2\"; empty for none");
    compile->add_option("-o,--out", out_file, "output file (default stdout)");

    auto* decompile = app.add_subcommand("decompile", "machine -> relation-quantified formula");
    decompile->add_option("--machine", machine_file)->required();
    decompile->add_option("--signature", signature);
    decompile->add_option("-k", k, "time/cell index width (n^k - 1 steps)");
    decompile->add_flag("--unordered", unordered, "guess the order instead of using <");
    decompile->add_option("-o,--out", out_file);

    auto* reduce = app.add_subcommand("reduce", "ground a formula on a structure to SAT form");
    reduce->add_option("--formula", formula_file)->required();
    reduce->add_option("--structure", structure_file)->required();
    reduce->add_option("--semiring", semiring)->required();
    reduce->add_option("--assign", assign);
    reduce->add_option("-o,--out", out_file);

    auto* sat = app.add_subcommand("sat", "sum a propositional formula over all assignments");
    sat->add_option("--prop", prop_file)->required();
    sat->add_option("--semiring", semiring)->required();
    sat->add_option("--max-vars", max_subsets, "variable cap (2^v assignments)");

    auto* check = app.add_subcommand("check", "crosscheck a formula against a machine");
    check->add_option("--formula", formula_file)->required();
    check->add_option("--machine", machine_file)->required();
    check->add_option("--semiring", semiring)->required();
    check->add_option("--signature", signature);
    check->add_option("--max-n", max_n, "check all structures up to this size");
    check->add_option("--max-steps", max_steps);

    auto* list = app.add_subcommand("semirings", "list registered semirings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (const char* th = std::getenv("WDC_THREADS"))
        if (int v = std::atoi(th); v > 0) omp_set_num_threads(v);

    if (list->parsed()) {
        for (const auto& [name, desc] : registry_list()) std::cout << name << "\t" << desc << "\n";
        return 0;
    }
    if (eval->parsed()) {
        EvalContext ctx;
        ctx.semiring = registry_lookup(semiring);
        Structure a = load_structure_json(slurp(structure_file));
        ctx.structure = &a;
        ctx.rho = parse_assignment(assign);
        ctx.caps.max_subset_base = max_subsets;
        ctx.caps.max_stages = max_stages;
        ctx.parallel = !serial;
        FormulaPtr phi = parse_formula(slurp(formula_file));
        std::cout << ctx.semiring->print(eval_weighted(*phi, ctx)) << "\n";
        return 0;
    }
    if (run->parsed()) {
        WeightedTM m = load_machine_json(slurp(machine_file));
        auto S = registry_lookup(m.semiring);
        Value v = exact ? behavior_exact(m, *S, input, max_steps)
                        : behavior(m, *S, input, max_steps, strict);
        std::cout << S->print(v) << "\n";
        return 0;
    }
    if (compile->parsed()) {
        FormulaPtr phi = parse_formula(slurp(formula_file));
        WeightedTM m = formula_to_wtm(*phi, parse_signature(signature), semiring);
        spit(out_file, save_machine_json(m));
        return 0;
    }
    if (decompile->parsed()) {
        WeightedTM m = load_machine_json(slurp(machine_file));
        Signature sig = parse_signature(signature);
        FormulaPtr phi = unordered ? wtm_to_weso_unordered(m, sig, k) : wtm_to_weso(m, sig, k);
        spit(out_file, print_formula(*phi));
        return 0;
    }
    if (reduce->parsed()) {
        auto S = registry_lookup(semiring);
        Structure a = load_structure_json(slurp(structure_file));
        FormulaPtr phi = parse_formula(slurp(formula_file));
        PropPtr p = cook_levin_reduce(*phi, a, *S, parse_assignment(assign));
        spit(out_file, print_prop(*p, *S));
        return 0;
    }
    if (sat->parsed()) {
        auto S = registry_lookup(semiring);
        PropPtr p = parse_prop(slurp(prop_file), *S);
        std::cout << S->print(sat_series(*p, *S, max_subsets)) << "\n";
        return 0;
    }
    if (check->parsed()) {
        FormulaPtr phi = parse_formula(slurp(formula_file));
        WeightedTM m = load_machine_json(slurp(machine_file));
        auto rep = crosscheck_formula_machine(*phi, m, parse_signature(signature), semiring,
                                              max_n, max_steps);
        std::cout << (rep.ok ? "pass" : "FAIL") << "\t" << rep.checked << " structures\n";
        if (!rep.ok) {
            std::cout << rep.counterexample << "\n";
            return 1;
        }
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const live_branches& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const cap_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_argument_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
