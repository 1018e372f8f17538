#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/hardgen.hpp"
#include "disclose/instance.hpp"
#include "disclose/model.hpp"
#include "disclose/oracle.hpp"
#include "disclose/problem.hpp"
#include "disclose/vischase.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace disclose;
using hardgen::Circuit;
using hardgen::CircuitVariant;
using hardgen::Graph;
using testutil::at;
using testutil::cq;

namespace {

Outcome verdict_of(const ProblemFile& pf) {
  REQUIRE(pf.policy.has_value());
  engine::ChaseBudget budget;
  budget.max_rounds = 16;
  const Verdict v =
      vischase::disclose_via_vischase(pf.constraints, pf.mappings, *pf.policy, budget);
  REQUIRE(v.outcome != Outcome::Unknown);
  return v.outcome;
}

/// Can `pattern` (a mapping body atom over variables) match `row`?  Returns
/// the consistent binding if so.
std::optional<std::map<std::string, Term>> match_row(const Atom& pattern, const Fact& row) {
  if (pattern.pred != row.pred || pattern.arity() != row.arity()) return std::nullopt;
  std::map<std::string, Term> bind;
  for (int i = 0; i < pattern.arity(); ++i) {
    const auto& v = pattern.args[static_cast<std::size_t>(i)].name();
    const auto [it, fresh] = bind.emplace(v, row.args[static_cast<std::size_t>(i)]);
    if (!fresh && !(it->second == row.args[static_cast<std::size_t>(i)])) return std::nullopt;
  }
  return bind;
}

}  // namespace

TEST_CASE("graph specs parse with validation") {
  const Graph g = hardgen::parse_graph("1-2,2-3,1-3");
  CHECK(g.n == 3);
  CHECK(g.edges.size() == 3);
  CHECK(hardgen::parse_graph("1-2", 5).n == 5);
  CHECK_THROWS_AS(hardgen::parse_graph("1-1"), std::invalid_argument);
  CHECK_THROWS_AS(hardgen::parse_graph("1-x"), std::invalid_argument);
  CHECK_THROWS_AS(hardgen::parse_graph("3-4", 3), std::invalid_argument);
}

TEST_CASE("the brute-force colorability reference is sane") {
  CHECK(hardgen::color3(hardgen::parse_graph("1-2,2-3,1-3")));            // K3
  CHECK_FALSE(hardgen::color3(hardgen::parse_graph("1-2,1-3,1-4,2-3,2-4,3-4")));  // K4
  CHECK(hardgen::color3(hardgen::parse_graph("1-2,2-3,3-4,4-5,5-1")));    // C5
  Graph empty;
  empty.n = 4;
  CHECK(hardgen::color3(empty));
}

TEST_CASE("the coloring setting swaps colors with two transpositions") {
  const ProblemFile pf = hardgen::gen_3coloring(hardgen::parse_graph("1-2"));
  CHECK(pf.schema.source.count("OK") == 1);
  CHECK(pf.schema.source.at("OK") == 3);
  CHECK(pf.constraints.size() == 2);
  for (const auto& c : pf.constraints) {
    CHECK(classify_dependencies({c}).count(DepClass::IncDep) == 1);
    CHECK(c.existentials().empty());
  }
  CHECK(classify_mapping(pf.mappings).count(MapClass::ProjMap) == 1);
}

TEST_CASE("coloring disclosure equals brute-force colorability") {
  CHECK(verdict_of(hardgen::gen_3coloring(hardgen::parse_graph("1-2,2-3,1-3"))) ==
        Outcome::Disclosed);
  CHECK(verdict_of(hardgen::gen_3coloring(hardgen::parse_graph("1-2,1-3,1-4,2-3,2-4,3-4"))) ==
        Outcome::NotDisclosed);

  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Graph g = hardgen::random_graph(seed, 7);
    INFO("seed ", seed);
    CHECK((verdict_of(hardgen::gen_3coloring(g)) == Outcome::Disclosed) == hardgen::color3(g));
  }
}

TEST_CASE("circuit specs parse into gates with wire allocation") {
  const Circuit c = hardgen::parse_circuit("o = OR(NOT 2, 2)");
  CHECK(c.nots.size() == 1);
  CHECK(c.ors.size() == 1);
  CHECK(c.ors.front().out == 1);
  CHECK(c.inputs() == std::vector<int>{2});
  CHECK_NOTHROW(c.validate());
  CHECK(hardgen::sat(c));  // x or not x

  const Circuit u = hardgen::parse_circuit("o = NOT 2; 2 = OR(3, NOT 3)");
  CHECK(u.inputs() == std::vector<int>{3});
  CHECK_FALSE(hardgen::sat(u));  // not (x or not x)

  CHECK(hardgen::sat(hardgen::parse_circuit("out = NOT 2")));
}

TEST_CASE("ill-formed circuits are rejected") {
  CHECK_THROWS(hardgen::parse_circuit("o = 2"));             // no producing gate
  CHECK_THROWS(hardgen::parse_circuit("o = AND(2, 3)"));     // unknown gate
  CHECK_THROWS(hardgen::parse_circuit("o = NOT 2; o = NOT 3"));  // two producers
  CHECK_THROWS(hardgen::parse_circuit("o = NOT 2; 2 = NOT 1"));  // cycle
  CHECK_THROWS(hardgen::parse_circuit(""));
}

TEST_CASE("random circuits respect the gate budget and are reproducible") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Circuit c = hardgen::random_circuit(seed, 5);
    CHECK(c.nots.size() + c.ors.size() <= 5);
    CHECK_NOTHROW(c.validate());
    const Circuit again = hardgen::random_circuit(seed, 5);
    CHECK(c.nots.size() == again.nots.size());
    CHECK(c.ors.size() == again.ors.size());
    CHECK(c.wires == again.wires);
  }
}

TEST_CASE("the driving instance admits no merge against any mapping pattern") {
  // Soundness of the whole encoding rests on this: a mapping body may match
  // an instance row only with the critical value at the frontier, or the
  // equality rules would collapse the truth encoding.
  const Circuit c = hardgen::parse_circuit("o = OR(NOT 2, 2)");
  const ProblemFile pf = hardgen::gen_circuit_sat(c, CircuitVariant::AtomMapNoConstraints);
  const Instance rows = hardgen::circuit_instance();
  CHECK(rows.rows("R").size() == 6);

  for (const auto& [global, rule] : pf.mappings.rules()) {
    REQUIRE(rule.body.atoms.size() == 1);
    const Atom& pattern = rule.body.atoms.front();
    const std::string frontier = rule.frontier().front();
    for (const Fact& row : rows.rows("R")) {
      const auto bind = match_row(pattern, row);
      if (!bind) continue;
      INFO(global, " matches ", row.str());
      CHECK(bind->at(frontier).is_crit());
    }
  }

  // Equivalently: the visible chase of the generated setting merges nothing.
  vischase::VisibleChase vc(pf.constraints, pf.mappings);
  while (vc.step()) {
  }
  CHECK(vc.merged_values().empty());
}

TEST_CASE("each instance row carries the critical value at its own pattern") {
  const Circuit c = hardgen::parse_circuit("o = NOT 2");
  const ProblemFile pf = hardgen::gen_circuit_sat(c, CircuitVariant::AtomMapNoConstraints);
  const Instance rows = hardgen::circuit_instance();
  int self_matches = 0;
  for (const auto& [global, rule] : pf.mappings.rules())
    for (const Fact& row : rows.rows("R"))
      if (match_row(rule.body.atoms.front(), row)) ++self_matches;
  CHECK(self_matches == 6);  // exactly one row per pattern
}

TEST_CASE("both circuit variants decide satisfiability") {
  const std::vector<std::string> specs = {
      "o = OR(NOT 2, 2)",            // tautology
      "o = NOT 2; 2 = OR(3, NOT 3)", // unsatisfiable
      "o = OR(2, 3); 2 = NOT 3",     // satisfiable
      "o = NOT 2",                   // satisfiable
      "o = OR(NOT 2, NOT 3)",        // satisfiable
  };
  for (const auto& spec : specs) {
    const Circuit c = hardgen::parse_circuit(spec);
    const bool expect = hardgen::sat(c);
    for (const auto variant :
         {CircuitVariant::AtomMapNoConstraints, CircuitVariant::Fr1LtgdProjMap}) {
      const ProblemFile pf = hardgen::gen_circuit_sat(c, variant);
      INFO(spec);
      CHECK((verdict_of(pf) == Outcome::Disclosed) == expect);
    }
  }
}

TEST_CASE("random circuits agree with the brute-force reference") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Circuit c = hardgen::random_circuit(seed, 5);
    const bool expect = hardgen::sat(c);
    const ProblemFile pf =
        hardgen::gen_circuit_sat(c, CircuitVariant::AtomMapNoConstraints);
    INFO("seed ", seed);
    CHECK((verdict_of(pf) == Outcome::Disclosed) == expect);
  }
}

TEST_CASE("the variants classify as promised") {
  const Circuit c = hardgen::parse_circuit("o = NOT 2");
  const ProblemFile a = hardgen::gen_circuit_sat(c, CircuitVariant::AtomMapNoConstraints);
  CHECK(a.constraints.empty());
  CHECK(classify_mapping(a.mappings).count(MapClass::AtomMap) == 1);

  const ProblemFile b = hardgen::gen_circuit_sat(c, CircuitVariant::Fr1LtgdProjMap);
  CHECK(b.constraints.size() == 6);
  CHECK(classify_dependencies(b.constraints).count(DepClass::LTGD) == 1);
  CHECK(classify_mapping(b.mappings).count(MapClass::ProjMap) == 1);
  for (const auto& d : b.constraints) CHECK(d.frontier().size() <= 1);
}

TEST_CASE("the implication reference decides simple chains") {
  hardgen::IdImplication chain;
  chain.arity = 2;
  chain.lhs = "P1";
  chain.rhs = "P3";
  chain.ids = {testutil::dep({at("P1", {"x", "y"})}, {at("P2", {"x", "y"})}),
               testutil::dep({at("P2", {"x", "y"})}, {at("P3", {"x", "y"})})};
  CHECK(hardgen::implies(chain) == std::optional<bool>{true});

  hardgen::IdImplication broken = chain;
  broken.ids.pop_back();
  CHECK(hardgen::implies(broken) == std::optional<bool>{false});

  // Projection through a permuted copy.
  hardgen::IdImplication permuted;
  permuted.arity = 2;
  permuted.lhs = "P1";
  permuted.rhs = "P2";
  permuted.ids = {testutil::dep({at("P1", {"x", "y"})}, {at("P2", {"y", "x"})})};
  CHECK(hardgen::implies(permuted) == std::optional<bool>{false});
}

TEST_CASE("implication disclosure equals the chase reference") {
  int holds = 0, fails = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const hardgen::IdImplication p = hardgen::random_id_implication(seed);
    const auto expect = hardgen::implies(p);
    if (!expect.has_value()) continue;
    const ProblemFile pf = hardgen::gen_id_implication(p);
    (*expect ? holds : fails)++;
    INFO("seed ", seed, " lhs ", p.lhs, " rhs ", p.rhs);
    CHECK((verdict_of(pf) == Outcome::Disclosed) == *expect);
  }
  CHECK(holds >= 3);
  CHECK(fails >= 3);
}
