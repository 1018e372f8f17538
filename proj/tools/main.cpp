#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "disclose/diff.hpp"
#include "disclose/hardgen.hpp"
#include "disclose/problem.hpp"
#include "disclose/runner.hpp"
#include "json.hpp"

namespace {

using namespace disclose;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

int do_check(const std::string& file, const std::string& algo_name,
             const engine::ChaseBudget& budget, bool json) {
  const auto algo = runner::algo_from_string(algo_name);
  if (!algo) throw std::invalid_argument("unknown algorithm '" + algo_name + "'");
  const ProblemFile pf = load_problem(file);
  const runner::Report rep = runner::run_check(pf, *algo, budget);
  std::cout << (json ? rep.to_json() + "\n" : rep.to_text());
  return rep.exit_code();
}

int do_classify(const std::string& file, bool json) {
  const ProblemFile pf = load_problem(file);
  const runner::Classification cls = runner::classify(pf);
  if (json) {
    nlohmann::json j;
    j["classes"]["constraints"] = cls.constraints;
    j["classes"]["mappings"] = cls.mappings;
    std::cout << j.dump() << "\n";
  } else {
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) {
        if (!s.empty()) s += ", ";
        s += x;
      }
      return s.empty() ? std::string("-") : s;
    };
    std::cout << "constraints: " << join(cls.constraints) << "\n"
              << "mappings: " << join(cls.mappings) << "\n";
  }
  return 0;
}

int do_gen_3col(const std::string& edges, int n, std::uint64_t seed, int max_n,
                const std::string& out) {
  const hardgen::Graph g =
      edges.empty() ? hardgen::random_graph(seed, max_n) : hardgen::parse_graph(edges, n);
  emit(print_problem(hardgen::gen_3coloring(g)), out);
  return 0;
}

int do_gen_circuit(const std::string& spec, std::uint64_t seed, int max_gates,
                   const std::string& variant, const std::string& out) {
  hardgen::CircuitVariant v;
  if (variant == "atommap") {
    v = hardgen::CircuitVariant::AtomMapNoConstraints;
  } else if (variant == "fr1") {
    v = hardgen::CircuitVariant::Fr1LtgdProjMap;
  } else {
    throw std::invalid_argument("unknown variant '" + variant + "'");
  }
  const hardgen::Circuit c =
      spec.empty() ? hardgen::random_circuit(seed, max_gates) : hardgen::parse_circuit(spec);
  std::string text = print_problem(hardgen::gen_circuit_sat(c, v));
  text += "# companion single-shared-value instance:\n";
  for (const Fact& f : hardgen::circuit_instance().sorted_facts())
    text += "#   " + f.str() + "\n";
  emit(text, out);
  return 0;
}

int do_gen_idimp(std::uint64_t seed, int chain, int arity, const std::string& out) {
  hardgen::IdImplication p;
  if (chain > 0) {
    p.arity = arity;
    std::vector<std::string> vars;
    for (int i = 0; i < arity; ++i) vars.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < chain; ++i) {
      Dependency d;
      d.body.atoms.push_back(var_atom("P" + std::to_string(i + 1), vars));
      d.head.atoms.push_back(var_atom("P" + std::to_string(i + 2), vars));
      d.label = "id" + std::to_string(i + 1);
      p.ids.push_back(std::move(d));
    }
    p.lhs = "P1";
    p.rhs = "P" + std::to_string(chain + 1);
  } else {
    p = hardgen::random_id_implication(seed);
  }
  emit(print_problem(hardgen::gen_id_implication(p)), out);
  return 0;
}

int do_diff(const std::string& dir, std::size_t seeds, std::uint64_t seed0,
            const std::string& family_name, const engine::ChaseBudget& budget, bool json) {
  diff::DiffResult res;
  if (!dir.empty()) {
    res = diff::diff_dir(dir, budget);
  } else {
    const auto family = randgen::family_from_string(family_name);
    if (!family) throw std::invalid_argument("unknown family '" + family_name + "'");
    res = diff::diff_seeds(seed0, seeds, *family, budget);
  }
  std::cout << (json ? res.to_json() + "\n" : res.to_text());
  return res.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disclosure analysis for rule-constrained data integration"};
  app.require_subcommand(1);

  engine::ChaseBudget budget;
  bool json = false;
  std::string file, algo_name = "auto", out_path;

  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--rounds", budget.max_rounds, "chase round budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-facts", budget.max_facts, "fact budget")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand("check", "decide disclosure for a problem file");
  check->add_option("file", file, "problem file")->required();
  check->add_option("--algo", algo_name,
                    "auto|vischase|critrewrite|critrewrite-ptime|uid-ptime|oracle");
  add_budget(check);
  check->add_flag("--json", json, "JSON report");

  CLI::App* classify = app.add_subcommand("classify", "report constraint/mapping classes");
  classify->add_option("file", file, "problem file")->required();
  classify->add_flag("--json", json, "JSON report");

  CLI::App* gen = app.add_subcommand("gen", "generate benchmark problem files");
  gen->require_subcommand(1);

  std::string edges, spec, variant = "atommap";
  int n = 0, max_n = 8, max_gates = 4, chain = 0, arity = 2;
  std::uint64_t seed = 1, seed0 = 1;

  CLI::App* g3 = gen->add_subcommand("3col", "graph 3-coloring setting");
  g3->add_option("--edges", edges, "edge list, e.g. \"1-2,2-3,1-3\"");
  g3->add_option("--n", n, "vertex count (defaults to largest endpoint)");
  g3->add_option("--seed", seed, "random graph seed (when --edges absent)");
  g3->add_option("--max-n", max_n, "random graph size cap")->check(CLI::Range(3, 16));
  g3->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* gc = gen->add_subcommand("circuit", "circuit satisfiability setting");
  gc->add_option("--spec", spec, "circuit, e.g. \"o = OR(NOT 2, 2)\"");
  gc->add_option("--seed", seed, "random circuit seed (when --spec absent)");
  gc->add_option("--gates", max_gates, "random circuit gate cap")->check(CLI::Range(1, 8));
  gc->add_option("--variant", variant, "atommap|fr1");
  gc->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* gi = gen->add_subcommand("idimp", "inclusion-dependency implication setting");
  gi->add_option("--seed", seed, "random implication seed");
  gi->add_option("--chain", chain, "emit a deterministic identity chain of this length")
      ->check(CLI::Range(0, 8));
  gi->add_option("--arity", arity, "predicate arity for --chain")->check(CLI::Range(1, 4));
  gi->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* dif = app.add_subcommand("diff", "cross-check all legal algorithms");
  std::string dir, family_name = "mixed";
  std::size_t seeds = 50;
  dif->add_option("--dir", dir, "directory of problem files");
  dif->add_option("--seeds", seeds, "number of random settings");
  dif->add_option("--seed0", seed0, "first seed");
  dif->add_option("--family", family_name, "mixed|ltgd-atommap|uid-projmap|fr1map");
  add_budget(dif);
  dif->add_flag("--json", json, "JSON summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) return do_check(file, algo_name, budget, json);
    if (classify->parsed()) return do_classify(file, json);
    if (g3->parsed()) return do_gen_3col(edges, n, seed, max_n, out_path);
    if (gc->parsed()) return do_gen_circuit(spec, seed, max_gates, variant, out_path);
    if (gi->parsed()) return do_gen_idimp(seed, chain, arity, out_path);
    if (dif->parsed()) return do_diff(dir, seeds, seed0, family_name, budget, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
