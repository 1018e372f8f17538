#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/problem.hpp"

namespace disclose::runner {

enum class Algo { Auto, VisChase, CritRewrite, CritRewritePtime, UidPtime, Oracle };

/// "auto", "vischase", "critrewrite", "critrewrite-ptime", "uid-ptime", "oracle".
std::optional<Algo> algo_from_string(const std::string& s);
std::string to_string(Algo a);

/// Detected syntactic classes, most specific first.
struct Classification {
  std::vector<std::string> constraints;
  std::vector<std::string> mappings;
};

Classification classify(const ProblemFile& pf);

/// One check outcome, serializable as human text or JSON.
struct Report {
  Outcome outcome = Outcome::Unknown;
  Algo algorithm = Algo::VisChase;  // resolved, never Auto
  Classification classes;
  std::optional<Homomorphism> witness;
  std::optional<SaturationInfo> certificate;
  std::size_t rounds = 0;
  std::size_t facts = 0;
  std::string unknown_reason;  // set iff outcome == Unknown
  std::vector<std::string> notes;
  double millis = 0.0;

  std::string to_json() const;
  std::string to_text() const;
  /// 0 = definite verdict, 2 = UNKNOWN.
  int exit_code() const;
};

/// Most specialized algorithm whose preconditions the classified setting
/// meets: uid-ptime > critrewrite-ptime > critrewrite > vischase.  The
/// rewriting algorithms are skipped beyond 12 policy variables (annotation
/// family growth); vischase is always legal.
Algo auto_select(const ProblemFile& pf);

/// Classifies, boolifies a non-Boolean policy (noted in the report), resolves
/// `auto`, dispatches, and times the run.  Throws std::invalid_argument on a
/// missing policy or a forced algorithm whose preconditions the input
/// violates.
Report run_check(const ProblemFile& pf, Algo algo, const engine::ChaseBudget& budget);

}  // namespace disclose::runner
