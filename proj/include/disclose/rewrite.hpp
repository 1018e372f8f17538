#pragma once

#include <string>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/instance.hpp"
#include "disclose/model.hpp"

namespace disclose::rewrite {

/// All subsets of `vars`, ordered by size then lexicographically by index
/// positions (the empty annotation first).
std::vector<std::vector<std::string>> annotations_of(const std::vector<std::string>& vars);

/// Splits each annotated variable: occurrences after the first become fresh
/// copies "<v>@2", "<v>@3", ..., and IsCrit atoms are appended for the
/// variable and every copy.  Free variables are left untouched.
ConjunctiveQuery apply_annotation(const ConjunctiveQuery& q,
                                  const std::vector<std::string>& annot);

/// The annotation family of a query: one rewriting per subset of its
/// variables, in annotations_of order (index 0 is the original query).
std::vector<ConjunctiveQuery> crit_rewrite_query(const ConjunctiveQuery& q);

/// Body-side rewriting of one dependency.  When no body variable occurs
/// twice across the body the result is just {d}; otherwise one rule per
/// annotation of the body variables.
std::vector<Dependency> crit_rewrite_dep(const Dependency& d);
std::vector<Dependency> crit_rewrite_deps(const std::vector<Dependency>& deps);

/// T(x1..xn) -> IsCrit(xi) for every global predicate and position.
std::vector<Dependency> iscrit_rules(const MappingSet& m);

/// Polynomial rewriting of a single-atom-body dependency.  With P the list of
/// repeated-position pairs (e, f), e < f, of the body atom (lexicographic),
/// produces exactly 2|P|+1 rules chaining auxiliary predicates
/// "__B_<e>_<f>_<label>"; when P is empty returns {d}.
std::vector<Dependency> crit_rewrite_ptime(const Dependency& d);
std::vector<Dependency> crit_rewrite_ptime(const std::vector<Dependency>& deps);

/// The repeated-position pairs used by crit_rewrite_ptime (1-based, for
/// inspection and size accounting).
std::vector<std::pair<int, int>> repeated_pairs(const Atom& body);

/// Existentially closes a query's free variables, appending an IsCrit atom
/// for each (a disclosed tuple is one merged onto the critical constant).
ConjunctiveQuery boolify_policy(const ConjunctiveQuery& p);

enum class RewriteMode { Full, Ptime };

/// Everything disclose_via_entailment assembles, exposed for inspection.
struct RewriteBundle {
  std::vector<Dependency> constraints;  // rewritten sigma + mapping rules + IsCrit rules
  std::vector<ConjunctiveQuery> queries;
  Instance base;  // hide(m)
};

RewriteBundle build_bundle(const std::vector<Dependency>& sigma, const MappingSet& m,
                           const ConjunctiveQuery& p, RewriteMode mode);

/// Disclosure via critical-instance rewriting: DISCLOSED iff some annotated
/// query is entailed from hide(m) under the rewritten rules.  Ptime mode
/// requires single-atom constraint bodies and an atomic mapping.
Verdict disclose_via_entailment(const std::vector<Dependency>& sigma, const MappingSet& m,
                                const ConjunctiveQuery& p, const engine::ChaseBudget& budget,
                                RewriteMode mode);

/// Rewrites a setting so that every mapping rule is a projection: each rule
/// body is reified into a fresh source predicate "__r_<T>" with forward and
/// backward constraints added to sigma.
struct ProjReduction {
  std::vector<Dependency> sigma;
  MappingSet m;
};
ProjReduction reduce_to_projmap(const std::vector<Dependency>& sigma, const MappingSet& m);

/// Rewrites a setting with frontier-<=1 mapping rules into one whose merges
/// are expressed by ordinary frontier-guarded rules over IsCrit: each mapping
/// rule contributes body -> IsCrit(frontier) plus a nullary trigger that can
/// instantiate the body.  IsCrit becomes a visible predicate via "__CritView".
struct SceqReduction {
  std::vector<Dependency> sigma;
  MappingSet m;
};
SceqReduction sceq_to_fgtgd(const std::vector<Dependency>& sigma, const MappingSet& m);

}  // namespace disclose::rewrite
