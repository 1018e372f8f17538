#include "disclose/diff.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "disclose/rewrite.hpp"
#include "json.hpp"

namespace disclose::diff {

void DiffResult::absorb(const DiffResult& o) {
  problems += o.problems;
  runs += o.runs;
  unknowns += o.unknowns;
  comparisons += o.comparisons;
  disagreements += o.disagreements;
  failures.insert(failures.end(), o.failures.begin(), o.failures.end());
}

std::string DiffResult::to_text() const {
  std::ostringstream out;
  out << "problems: " << problems << "\n"
      << "runs: " << runs << "\n"
      << "unknowns: " << unknowns << "\n"
      << "comparisons: " << comparisons << "\n"
      << "disagreements: " << disagreements << "\n";
  for (const auto& f : failures) out << "disagreement: " << f << "\n";
  return out.str();
}

std::string DiffResult::to_json() const {
  nlohmann::json j;
  j["problems"] = problems;
  j["runs"] = runs;
  j["unknowns"] = unknowns;
  j["comparisons"] = comparisons;
  j["disagreements"] = disagreements;
  j["failures"] = failures;
  return j.dump();
}

std::vector<runner::Algo> legal_algos(const ProblemFile& pf) {
  std::vector<runner::Algo> out{runner::Algo::VisChase, runner::Algo::Oracle};
  if (!pf.policy) return out;
  const auto dep = classify_dependencies(pf.constraints);
  const auto map = classify_mapping(pf.mappings);
  ConjunctiveQuery p = *pf.policy;
  if (!p.boolean()) p = rewrite::boolify_policy(p);
  const bool small = p.variables().size() <= 12;
  if (small) out.push_back(runner::Algo::CritRewrite);
  if (small && dep.count(DepClass::LTGD) && map.count(MapClass::AtomMap))
    out.push_back(runner::Algo::CritRewritePtime);
  if (dep.count(DepClass::UID) && map.count(MapClass::ProjMap))
    out.push_back(runner::Algo::UidPtime);
  return out;
}

DiffResult diff_problem(const ProblemFile& pf, const engine::ChaseBudget& budget,
                        const std::string& tag) {
  DiffResult res;
  res.problems = 1;
  struct Run {
    runner::Algo algo;
    Outcome outcome;
  };
  std::vector<Run> runs;
  for (runner::Algo a : legal_algos(pf)) {
    runner::Report rep = runner::run_check(pf, a, budget);
    ++res.runs;
    if (rep.outcome == Outcome::Unknown) ++res.unknowns;
    runs.push_back({a, rep.outcome});
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].outcome == Outcome::Unknown) continue;
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      if (runs[j].outcome == Outcome::Unknown) continue;
      ++res.comparisons;
      if (runs[i].outcome != runs[j].outcome) {
        ++res.disagreements;
        res.failures.push_back(tag + ": " + runner::to_string(runs[i].algo) + "=" +
                               to_string(runs[i].outcome) + " vs " +
                               runner::to_string(runs[j].algo) + "=" +
                               to_string(runs[j].outcome));
      }
    }
  }
  return res;
}

DiffResult diff_seeds(std::uint64_t seed0, std::size_t count, randgen::Family family,
                      const engine::ChaseBudget& budget) {
  DiffResult res;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = seed0 + i;
    ProblemFile pf = randgen::random_setting(seed, family);
    res.absorb(diff_problem(
        pf, budget, randgen::to_string(family) + " seed " + std::to_string(seed)));
  }
  return res;
}

DiffResult diff_dir(const std::string& dir, const engine::ChaseBudget& budget) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  DiffResult res;
  for (const auto& f : files) {
    ProblemFile pf;
    try {
      pf = load_problem(f.string());
    } catch (const ParseError& e) {
      throw std::runtime_error(f.string() + ": " + e.what());
    }
    res.absorb(diff_problem(pf, budget, f.filename().string()));
  }
  return res;
}

}  // namespace disclose::diff
