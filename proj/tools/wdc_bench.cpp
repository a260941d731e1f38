// Timing comparison: OpenMP kernels vs. the serial reference paths, on the
// two hot loops (relation-quantifier evaluation and the SAT series).

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "wdc/eval.hpp"
#include "wdc/satred.hpp"

using namespace wdc;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

Structure random_graph(int n, std::mt19937& rng) {
    Structure a;
    a.n = n;
    a.sig.relations = {{"edge", 2}};
    a.relations.resize(1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng() % 2) a.relations[0].insert({i, j});
    return a;
}

void row(const char* what, double serial, double parallel) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", what, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
    std::mt19937 rng(7);
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        // sum over arity-2 relation variables: 2^(n*n) subsets each
        auto phi = parse_formula("sumSO X:2. prod x. prod y. ((X(x,y) -> edge(x,y)) ? c(2))");
        Structure a = random_graph(4, rng);
        EvalContext ctx;
        ctx.semiring = registry_lookup("nat");
        ctx.structure = &a;
        ctx.parallel = false;
        auto t0 = clk::now();
        Value v1 = eval_weighted_reference(*phi, ctx);
        double ts = seconds(t0);
        ctx.parallel = true;
        t0 = clk::now();
        Value v2 = eval_weighted(*phi, ctx);
        double tp = seconds(t0);
        if (!(v1 == v2)) { std::fprintf(stderr, "MISMATCH in eval kernel\n"); return 1; }
        row("relation-sum eval (n=4)", ts, tp);
    }
    {
        // 2^20 assignments
        std::string text = "x1";
        for (int i = 2; i <= 20; ++i) {
            std::string v = "x" + std::to_string(i);
            text = i % 3 ? "(" + text + " & " + v + ")" : "(" + text + " | !" + v + ")";
        }
        auto S = registry_lookup("nat");
        PropPtr f = parse_prop(text, *S);
        auto t0 = clk::now();
        Value v1 = sat_series(*f, *S, 20, false);
        double ts = seconds(t0);
        t0 = clk::now();
        Value v2 = sat_series(*f, *S, 20, true);
        double tp = seconds(t0);
        if (!(v1 == v2)) { std::fprintf(stderr, "MISMATCH in sat series\n"); return 1; }
        row("sat series (20 vars)", ts, tp);
    }
    return 0;
}
