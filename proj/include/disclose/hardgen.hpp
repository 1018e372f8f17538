#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disclose/instance.hpp"
#include "disclose/problem.hpp"

namespace disclose::hardgen {

// ---------------------------------------------------------------------------
// Graph 3-colorability
// ---------------------------------------------------------------------------

struct Graph {
  int n = 0;  // vertices 1..n
  std::vector<std::pair<int, int>> edges;
};

/// Parses "1-2,2-3,3-1"; n defaults to the largest endpoint.
Graph parse_graph(const std::string& spec, int n = 0);
Graph random_graph(std::uint64_t seed, int max_n);

/// Setting whose policy is disclosed iff g IS 3-colorable: OK/3 holds one
/// allowed edge coloring, two permutation constraints close it under color
/// swaps (yielding all six ordered distinct pairs), and the single nullary
/// mapping hides everything but OK-nonemptiness.
ProblemFile gen_3coloring(const Graph& g);

/// Brute-force reference (n <= 16).
bool color3(const Graph& g);

// ---------------------------------------------------------------------------
// Circuit satisfiability
// ---------------------------------------------------------------------------

struct Circuit {
  int wires = 1;  // wires 1..wires; wire 1 is the output
  struct NotGate {
    int in, out;
  };
  struct OrGate {
    int a, b, out;
  };
  std::vector<NotGate> nots;
  std::vector<OrGate> ors;

  std::vector<int> inputs() const;  // wires without a producing gate
  void validate() const;            // single producer per wire, acyclic
};

/// Grammar: "out = OR(NOT 2, 3)" over wire numbers; "out"/"o" aliases wire 1
/// and nested gates allocate wires.  Examples: "1 = NOT 2", "o = OR(2, NOT 3)".
Circuit parse_circuit(const std::string& spec);
Circuit random_circuit(std::uint64_t seed, int max_gates);

/// Brute-force reference (inputs <= 20).
bool sat(const Circuit& c);

/// The 8-ary relation whose rows drive the wire/gate gadgets; the shared
/// value is the critical constant, n1..n6 and the blanks are nulls.
Instance circuit_instance();

/// The policy gadget: one repeated-variable block per wire, an output block
/// pinning wire 1 to true, and three-atom blocks per gate.
ConjunctiveQuery circuit_query(const Circuit& c);

enum class CircuitVariant {
  AtomMapNoConstraints,  // six atomic mappings over R, no constraints
  Fr1LtgdProjMap,        // one projection mapping plus six frontier-1 rules
};

/// Setting whose policy is disclosed iff c is satisfiable.
ProblemFile gen_circuit_sat(const Circuit& c, CircuitVariant v);

// ---------------------------------------------------------------------------
// Inclusion-dependency implication
// ---------------------------------------------------------------------------

struct IdImplication {
  std::vector<Dependency> ids;  // inclusion dependencies over P1..Pk
  std::string lhs, rhs;         // does ids imply lhs(x^) -> rhs(x^)?
  int arity = 1;
};

IdImplication random_id_implication(std::uint64_t seed);

/// Setting whose policy is disclosed iff the implication HOLDS: the hidden
/// Shadow tuple is copied into lhs, chased under the ids, and the policy
/// joins Shadow with rhs on the same tuple.
ProblemFile gen_id_implication(const IdImplication& p);

/// Chase of a frozen canonical tuple; nullopt when the bounded chase neither
/// derives the goal nor saturates.
std::optional<bool> implies(const IdImplication& p, std::size_t max_rounds = 64);

}  // namespace disclose::hardgen
