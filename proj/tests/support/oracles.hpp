#pragma once

// Independent reference computations the tests compare the library against.
// These are deliberately written in the most naive style available.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wdc/semiring.hpp"
#include "wdc/structure.hpp"

namespace wdc::testing {

// Checks all semiring axioms (associativity, commutativity of +, identities,
// distributivity both sides, annihilation) plus the advertised flags on
// random triples. Returns an error description on the first failure.
std::optional<std::string> check_semiring_laws(const Semiring& s, int samples, unsigned seed);

// When a flag is false, a witness violating the corresponding law must
// exist among the samples (flags must not be pessimistic).
std::optional<std::string> check_flag_honesty(const Semiring& s, int samples, unsigned seed);

// ---- graph oracles (binary relation named "edge") -------------------------

bool oracle_is_clique(const Structure& g, uint64_t subset_mask);
int oracle_largest_clique(const Structure& g);

// number of ordered m-tuples of pairwise distinct, pairwise adjacent vertices
long oracle_clique_tuples(const Structure& g, int m);

// minimum number of edges from S to its complement over all "cuts" in the
// Example-15 sense: S,D partition the vertices, every vertex with an
// incoming edge or in S is allowed... concretely: D = complement of S and
// every vertex either has an incoming edge or lies in S, and every vertex
// either has an outgoing edge or lies in D. Returns nullopt if no cut exists.
std::optional<int> oracle_min_cut(const Structure& g);

// Reflexive-free transitive closure of "edge" (pairs reachable in >= 1 step).
Relation oracle_transitive_closure(const Structure& g);

// Random structure over sig with the given universe size.
Structure random_structure(const Signature& sig, int n, std::mt19937& rng);
// Random DAG (edges i -> j only for i < j), universe size n.
Structure random_dag(int n, double density, std::mt19937& rng);

}  // namespace wdc::testing
