#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disclose/randgen.hpp"
#include "disclose/runner.hpp"

namespace disclose::diff {

/// Tally of a differential run.  A comparison is a pair of decisive verdicts
/// for the same problem; UNKNOWN runs are counted but never compared.
struct DiffResult {
  std::size_t problems = 0;
  std::size_t runs = 0;
  std::size_t unknowns = 0;
  std::size_t comparisons = 0;
  std::size_t disagreements = 0;
  std::vector<std::string> failures;

  void absorb(const DiffResult& o);
  std::string to_text() const;
  std::string to_json() const;
  /// 3 on any disagreement, else 0.
  int exit_code() const { return disagreements ? 3 : 0; }
};

/// Algorithms whose preconditions the setting meets, vischase and oracle
/// always included; same variable cap as auto-selection for the rewritings.
std::vector<runner::Algo> legal_algos(const ProblemFile& pf);

/// Runs every legal algorithm on one problem and compares all decisive pairs.
/// `tag` names the problem in failure messages.
DiffResult diff_problem(const ProblemFile& pf, const engine::ChaseBudget& budget,
                        const std::string& tag);

/// Seeds seed0..seed0+count-1 through the family generator.
DiffResult diff_seeds(std::uint64_t seed0, std::size_t count, randgen::Family family,
                      const engine::ChaseBudget& budget);

/// Every regular file in `dir` (sorted by name) parsed as a problem file.
DiffResult diff_dir(const std::string& dir, const engine::ChaseBudget& budget);

}  // namespace disclose::diff
