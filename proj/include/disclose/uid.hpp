#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/instance.hpp"
#include "disclose/model.hpp"

namespace disclose::uid {

/// Result of the visibility/reachability reduction for a unary-inclusion
/// setting with a projection mapping.  Positions that can flow into the
/// mapping image always carry the critical constant in the merged chase, so
/// every predicate is truncated to its invisible positions ("P~", possibly
/// propositional) and the chase is re-expressed over {IsCrit(c_crit)}.
struct UidReduction {
  /// (source predicate, 1-based position) that reaches a mapping export.
  std::set<std::pair<std::string, int>> visible;
  /// Source predicates whose emptiness the image cannot guarantee.
  std::set<std::string> reachable;
  /// Predicate -> kept (invisible) positions, 1-based ascending.
  std::map<std::string, std::vector<int>> kept;
  std::vector<Dependency> sigma;  // truncated rules, all UIDs
  ConjunctiveQuery query;         // truncated policy
  Instance base;                  // { IsCrit(c_crit) }
};

UidReduction reduce_uid(const std::vector<Dependency>& sigma, const MappingSet& m,
                        const ConjunctiveQuery& p);

/// A certain-answer instance: does every model of db under deps satisfy query?
struct UidProblem {
  Instance db;
  std::vector<Dependency> deps;
  ConjunctiveQuery query;
};

/// Rewrites a UID problem over arbitrary arities into one over unary and
/// binary predicates: "P@<i>"(tuple, value) per position plus "P@E"(tuple).
UidProblem binarize(const UidProblem& in);

/// Unifies forking pairs (same predicate, shared variable at the same
/// position) until none remain, deduplicating atoms.  Entailment-preserving
/// over chase forests.  Requires a Boolean query over unary/binary atoms.
ConjunctiveQuery eliminate_forking(const ConjunctiveQuery& q);

/// Splits a Boolean query into variable-connected components, in order of
/// first atom occurrence.
std::vector<ConjunctiveQuery> connected_components(const ConjunctiveQuery& q);

/// Complete entailment check for one connected, fork-free component over a
/// binarized problem with a single-fact-style base: matches the component
/// tree against the chase forest using derivability closures of fact shapes.
bool decide_uid_entailment(const UidProblem& bin, const ConjunctiveQuery& component);

/// Does the chase of `base` (or of the single `premise` atom with its
/// variables frozen) under binary UIDs entail the existential closure of
/// `goal`?  Goal restricted to at most two variables sharing at most one
/// with the premise.
bool uid_atomic_entails(const std::vector<Dependency>& uids, const std::optional<Atom>& premise,
                        const Instance& base, const ConjunctiveQuery& goal);

/// Polynomial-time disclosure decision for UID constraints and a projection
/// mapping.  Complete: NOT_DISCLOSED verdicts carry a complete-procedure
/// certificate.  DISCLOSED verdicts try to extract a concrete witness with a
/// bounded visible chase and note when the budget falls short.
Verdict disclose_uid_ptime(const std::vector<Dependency>& sigma, const MappingSet& m,
                           const ConjunctiveQuery& p, const engine::ChaseBudget& witness_budget);

}  // namespace disclose::uid
