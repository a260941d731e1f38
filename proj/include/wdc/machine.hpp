#pragma once

// Weighted Turing machines over a one-way infinite tape. A computation is
// any finite run from the initial configuration; it is accepting when its
// last state is accepting, and its weight is the left-to-right product of
// its transition weights (empty product = multiplicative unit). The
// behavior on an input sums the weights of all accepting computations.

#include <set>
#include <string>
#include <vector>

#include "wdc/semiring.hpp"

namespace wdc {

struct Transition {
    std::string p, a;  // source state, scanned symbol
    std::string q, b;  // target state, written symbol
    int move = 0;      // -1, 0, +1
    Value weight;
};

struct WeightedTM {
    std::vector<std::string> states;
    std::vector<std::string> input_alphabet;
    std::vector<std::string> work_alphabet;  // superset of input, plus blank
    std::string blank;
    std::string initial;
    std::set<std::string> accepting;
    std::vector<Transition> transitions;
    std::string semiring;  // registry spec the weights were parsed under

    // Alphabets/states consistent, blank outside the input alphabet,
    // transitions over known states and symbols. Transitions out of
    // accepting states are permitted: pad_machine uses them (the paper's
    // "do nothing" padding); acceptance only inspects the final state.
    void validate() const;
};

// Sum-of-weights machine representation: the same shape, but the
// transition list is a multiset and may repeat a (p,a,q,b,d) core with
// different weights. srtm_to_wtm merges duplicates by summing.
struct SRTM {
    WeightedTM m;
};

struct Configuration {
    std::string state;
    std::vector<std::string> tape;  // cells 0..; blank beyond the end
    int head = 0;
};

struct Computation {
    std::vector<int> steps;  // indices into transitions
    Value weight;
};

// Single transition application. Throws invalid_argument_error when e does
// not match the configuration or moves left off cell 0.
Configuration step(const WeightedTM& m, const Configuration& c, const Transition& e);

Configuration initial_configuration(const WeightedTM& m, const std::string& input);

// All accepting computations of length <= max_steps. With strict set, a
// branch still live at the bound throws live_branches (the machine may
// violate the finite-termination convention). The length-0 computation is
// accepting iff the initial state is.
std::vector<Computation> computations(const WeightedTM& m, const Semiring& s,
                                      const std::string& input, long max_steps,
                                      bool strict = false);

// Sum of accepting computation weights up to the bound.
Value behavior(const WeightedTM& m, const Semiring& s, const std::string& input,
               long max_steps, bool strict = false);

// Sum over accepting computations of length exactly T.
Value behavior_exact(const WeightedTM& m, const Semiring& s, const std::string& input,
                     long exact_steps);

// Length of the longest computation, halted or cut off at max_steps (with
// strict set, a still-live branch at the bound throws instead).
long time_meter(const WeightedTM& m, const std::string& input, long max_steps,
                bool strict = false);

// Weight-1 "do nothing" self-loops (q,a,q,a,0) on every accepting state, so
// an accepting run of length l extends to exactly one accepting run of
// every length >= l. Preserves determinism and behavior under exact-length
// filtering.
WeightedTM pad_machine(const WeightedTM& m, const Semiring& s);

// Merge duplicate transition cores, summing their weights.
WeightedTM srtm_to_wtm(const SRTM& m, const Semiring& s);

// At most one transition per (state, scanned symbol).
bool is_deterministic(const WeightedTM& m);

WeightedTM load_machine_json(const std::string& text);        // uses the "semiring" field
std::string save_machine_json(const WeightedTM& m);
SRTM load_srtm_json(const std::string& text);

}  // namespace wdc
