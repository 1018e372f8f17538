#pragma once

#include <map>
#include <string>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/instance.hpp"
#include "disclose/model.hpp"

namespace disclose::vischase {

/// One fact per global predicate, every position the critical constant.
Instance critical_instance(const std::map<std::string, int>& global_arities);

/// Witness instance for the critical image: per mapping rule, the body with
/// frontier variables sent to the critical constant and each existential sent
/// to a per-rule fresh constant.
Instance hide(const MappingSet& m);

/// A source-equality rule derived from one mapping rule: whenever the body
/// matches, each target variable's value is forced to the critical constant.
struct SceqRule {
  ConjunctiveQuery body;
  std::vector<std::string> targets;  // the rule's frontier variables
  std::string label;
};

std::vector<SceqRule> sceq_rules(const MappingSet& m);

/// Applies the merge step to fixpoint in place: collects every value bound to
/// a target variable by some rule match, replaces the whole batch by the
/// critical constant, and repeats.  Returns the merged values in merge order.
/// The result is independent of rule order (batched substitution).
std::vector<Term> merge_fixpoint(Instance& inst, const std::vector<SceqRule>& rules);

/// Round-by-round visible chase: starts from hide(m) plus the IsCrit
/// bookkeeping fact; each round runs one restricted-chase round over the
/// source constraints (heads normalized internally) followed by the merge
/// fixpoint.  Saturated when a full round changes nothing.
class VisibleChase {
 public:
  VisibleChase(const std::vector<Dependency>& sigma, const MappingSet& m,
               std::size_t max_facts = 100000);

  /// Runs one round; returns true if the state changed.
  bool step();

  const Instance& state() const { return state_; }
  /// Merged value -> round at which it was merged (round 0 = initial state).
  const std::map<Term, std::size_t>& merged_values() const { return merged_; }
  std::size_t round() const { return round_; }
  bool fact_budget_exceeded() const { return exceeded_; }

 private:
  std::vector<Dependency> sigma_;
  std::vector<SceqRule> sceqs_;
  Instance state_;
  std::map<Term, std::size_t> merged_;
  std::size_t round_ = 0;
  std::size_t max_facts_;
  bool exceeded_ = false;
};

/// Disclosure by visible chase: DISCLOSED iff the policy matches the state at
/// some round.  Requires a Boolean policy over non-global predicates (IsCrit
/// atoms are allowed and match the critical constant).
Verdict disclose_via_vischase(const std::vector<Dependency>& sigma, const MappingSet& m,
                              const ConjunctiveQuery& p,
                              const engine::ChaseBudget& budget);

/// Shared precondition checks for the disclosure operations.
void validate_policy(const MappingSet& m, const ConjunctiveQuery& p);

}  // namespace disclose::vischase
