#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "disclose/diff.hpp"
#include "disclose/hardgen.hpp"
#include "disclose/problem.hpp"
#include "disclose/runner.hpp"

namespace py = pybind11;
using namespace disclose;

namespace {

engine::ChaseBudget budget_of(std::size_t rounds, std::size_t max_facts) {
  engine::ChaseBudget b;
  b.max_rounds = rounds;
  b.max_facts = max_facts;
  return b;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Disclosure analysis for rule-constrained data integration";

  m.def(
      "check_text",
      [](const std::string& text, const std::string& algo, std::size_t rounds,
         std::size_t max_facts) {
        const auto a = runner::algo_from_string(algo);
        if (!a) throw py::value_error("unknown algorithm '" + algo + "'");
        const ProblemFile pf = parse_problem(text);
        return runner::run_check(pf, *a, budget_of(rounds, max_facts)).to_json();
      },
      py::arg("text"), py::arg("algo") = "auto", py::arg("rounds") = 8,
      py::arg("max_facts") = 100000,
      "Run a disclosure check on problem-file text; returns the JSON report.");

  m.def(
      "classify_text",
      [](const std::string& text) {
        const runner::Classification c = runner::classify(parse_problem(text));
        return std::make_pair(c.constraints, c.mappings);
      },
      py::arg("text"),
      "Detected (constraint, mapping) class names, most specific first.");

  m.def(
      "canonical_text",
      [](const std::string& text) { return print_problem(parse_problem(text)); },
      py::arg("text"), "Parse and reprint in canonical form.");

  m.def(
      "gen_3col",
      [](const std::string& edges, int n) {
        return print_problem(hardgen::gen_3coloring(hardgen::parse_graph(edges, n)));
      },
      py::arg("edges"), py::arg("n") = 0,
      "3-coloring setting for the given edge list (\"1-2,2-3,...\").");

  m.def(
      "gen_circuit",
      [](const std::string& spec, const std::string& variant) {
        hardgen::CircuitVariant v;
        if (variant == "atommap") {
          v = hardgen::CircuitVariant::AtomMapNoConstraints;
        } else if (variant == "fr1") {
          v = hardgen::CircuitVariant::Fr1LtgdProjMap;
        } else {
          throw py::value_error("unknown variant '" + variant + "'");
        }
        return print_problem(hardgen::gen_circuit_sat(hardgen::parse_circuit(spec), v));
      },
      py::arg("spec"), py::arg("variant") = "atommap",
      "Circuit-satisfiability setting for a gate spec like \"o = OR(NOT 2, 2)\".");

  m.def(
      "gen_idimp",
      [](std::uint64_t seed) {
        return print_problem(
            hardgen::gen_id_implication(hardgen::random_id_implication(seed)));
      },
      py::arg("seed"),
      "Inclusion-dependency implication setting from a deterministic seed.");

  m.def(
      "diff_seeds",
      [](std::uint64_t seed0, std::size_t count, const std::string& family,
         std::size_t rounds, std::size_t max_facts) {
        const auto f = randgen::family_from_string(family);
        if (!f) throw py::value_error("unknown family '" + family + "'");
        return diff::diff_seeds(seed0, count, *f, budget_of(rounds, max_facts)).to_json();
      },
      py::arg("seed0") = 1, py::arg("count") = 25, py::arg("family") = "mixed",
      py::arg("rounds") = 8, py::arg("max_facts") = 100000,
      "Cross-check all legal algorithms over random settings; JSON summary.");
}
