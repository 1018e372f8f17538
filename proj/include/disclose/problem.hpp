#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "disclose/model.hpp"

namespace disclose {

/// Thrown on malformed input; `line` is 1-based.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int l, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

/// A full problem statement.  Text format, one statement per line:
///
///   # comment
///   source Pred/arity
///   global Pred/arity
///   constraint: A(x, y), B(y) -> exists z. C(x, z)
///   mapping: T(x) := A(x, y)
///   policy: (x) A(x, y), B(y)
///
/// Identifiers are [A-Za-z][A-Za-z0-9_]*; "IsCrit" is reserved.  Atom
/// arguments are variables (never constants).  Constraints range over source
/// predicates; each global predicate has exactly one mapping rule; the
/// policy's free-variable tuple is optional (omitted = Boolean).
struct ProblemFile {
  Schema schema;
  std::vector<Dependency> constraints;
  MappingSet mappings;
  std::optional<ConjunctiveQuery> policy;

  bool operator==(const ProblemFile& o) const;  // ignores rule labels
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

/// Canonical rendering: sorted declarations, constraints in order, mappings
/// sorted by global predicate, policy last.  parse_problem(print_problem(x))
/// == x.
std::string print_problem(const ProblemFile& pf);

}  // namespace disclose
