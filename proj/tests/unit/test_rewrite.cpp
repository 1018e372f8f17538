#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/model.hpp"
#include "disclose/oracle.hpp"
#include "disclose/problem.hpp"
#include "disclose/randgen.hpp"
#include "disclose/rewrite.hpp"
#include "disclose/vischase.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace disclose;
using testutil::at;
using testutil::cq;
using testutil::dep;

namespace {

ProblemFile hospital() { return load_problem(DISCLOSE_SOURCE_DIR "/problems/hospital.dat"); }

ConjunctiveQuery boolean_policy(const ProblemFile& pf) {
  REQUIRE(pf.policy.has_value());
  ConjunctiveQuery p = *pf.policy;
  p.free_vars.clear();
  return p;
}

}  // namespace

TEST_CASE("annotations enumerate all variable subsets, empty first") {
  const auto subsets = rewrite::annotations_of({"x", "y"});
  REQUIRE(subsets.size() == 4);
  CHECK(subsets[0].empty());
  CHECK(subsets[1] == std::vector<std::string>{"x"});
  CHECK(subsets[2] == std::vector<std::string>{"y"});
  CHECK(subsets[3] == std::vector<std::string>{"x", "y"});
  CHECK(rewrite::annotations_of({}).size() == 1);
}

TEST_CASE("annotating a variable splits its occurrences and marks them critical") {
  const ConjunctiveQuery q = cq({at("R", {"x", "y"}), at("S", {"y"})});
  const ConjunctiveQuery same = rewrite::apply_annotation(q, {});
  CHECK(same == q);

  const ConjunctiveQuery split = rewrite::apply_annotation(q, {"y"});
  REQUIRE(split.atoms.size() == 4);
  CHECK(split.atoms[0] == at("R", {"x", "y"}));
  CHECK(split.atoms[1] == at("S", {"y@2"}));
  CHECK(split.atoms[2] == at(std::string(kIsCrit), {"y"}));
  CHECK(split.atoms[3] == at(std::string(kIsCrit), {"y@2"}));
}

TEST_CASE("the rewriting family has one query per variable subset") {
  const ConjunctiveQuery q = cq({at("R", {"x", "y"}), at("S", {"y", "z"})});
  const auto family = rewrite::crit_rewrite_query(q);
  CHECK(family.size() == 8);  // 2^3
  CHECK(family[0] == q);
  for (const auto& f : family) CHECK(f.boolean());
}

TEST_CASE("rules without repeated body variables pass through unchanged") {
  const Dependency d = dep({at("R", {"x", "y"})}, {at("S", {"y", "z"})});
  for (const auto& out : {rewrite::crit_rewrite_dep(d), rewrite::crit_rewrite_ptime(d)}) {
    REQUIRE(out.size() == 1);
    CHECK(out[0].body == d.body);
    CHECK(out[0].head == d.head);
  }
}

TEST_CASE("repeated body variables produce one rule per annotation") {
  const Dependency d = dep({at("R", {"x", "x"})}, {at("S", {"x"})});
  const auto out = rewrite::crit_rewrite_dep(d);
  REQUIRE(out.size() == 2);
  CHECK(out[0].body == d.body);
  // Annotated copy: occurrences split, both marked critical, head keeps the
  // original variable.
  CHECK(out[1].body.atoms[0] == at("R", {"x", "x@2"}));
  CHECK(out[1].body.atoms[1] == at(std::string(kIsCrit), {"x"}));
  CHECK(out[1].body.atoms[2] == at(std::string(kIsCrit), {"x@2"}));
  CHECK(out[1].head.atoms == std::vector<Atom>{at("S", {"x"})});
}

TEST_CASE("criticality flows from every global position") {
  const auto rules = rewrite::iscrit_rules(hospital().mappings);
  CHECK(rules.size() == 7);  // arities 2 + 3 + 2
  for (const auto& r : rules) {
    CHECK(r.body.atoms.size() == 1);
    REQUIRE(r.head.atoms.size() == 1);
    CHECK(r.head.atoms.front().pred == kIsCrit);
  }
}

TEST_CASE("repeated positions are enumerated lexicographically") {
  CHECK(rewrite::repeated_pairs(at("R", {"x", "y"})).empty());
  CHECK(rewrite::repeated_pairs(at("R", {"x", "x"})) ==
        std::vector<std::pair<int, int>>{{1, 2}});
  CHECK(rewrite::repeated_pairs(at("R", {"x", "y", "x", "y", "x"})) ==
        std::vector<std::pair<int, int>>{{1, 3}, {1, 5}, {2, 4}, {3, 5}});
}

TEST_CASE("the polynomial rewriting emits exactly 2|P|+1 rules") {
  const Dependency triple = dep({at("R", {"x", "x", "x"})}, {at("S", {"x"})});
  const auto out = rewrite::crit_rewrite_ptime(triple);
  CHECK(out.size() == 7);  // |P| = 3 pairs
  // Every emitted rule stays single-atom-bodied modulo IsCrit side atoms.
  for (const auto& r : out) {
    std::size_t main_atoms = 0;
    for (const auto& a : r.body.atoms)
      if (a.pred != kIsCrit) ++main_atoms;
    CHECK(main_atoms == 1);
    CHECK(r.single_head());
  }

  const Dependency pair = dep({at("R", {"x", "y", "x"})}, {at("S", {"y"})});
  CHECK(rewrite::crit_rewrite_ptime(pair).size() == 3);
}

TEST_CASE("free policy variables are closed off with criticality atoms") {
  const ConjunctiveQuery p = cq({at("R", {"x", "y"})}, {"x"});
  const ConjunctiveQuery b = rewrite::boolify_policy(p);
  CHECK(b.boolean());
  REQUIRE(b.atoms.size() == 2);
  CHECK(b.atoms[0] == at("R", {"x", "y"}));
  CHECK(b.atoms[1] == at(std::string(kIsCrit), {"x"}));
  CHECK(rewrite::boolify_policy(cq({at("R", {"x", "y"})})) == cq({at("R", {"x", "y"})}));
}

TEST_CASE("the entailment bundle starts from the hidden image") {
  const ProblemFile pf = hospital();
  const auto bundle = rewrite::build_bundle(pf.constraints, pf.mappings, boolean_policy(pf),
                                            rewrite::RewriteMode::Full);
  CHECK(bundle.base == vischase::hide(pf.mappings));
  CHECK(bundle.queries.size() == 4);  // policy PatSpec(p,s): 2^2 annotations
  bool has_iscrit_rule = false;
  for (const auto& d : bundle.constraints)
    has_iscrit_rule = has_iscrit_rule || d.head.atoms.front().pred == kIsCrit;
  CHECK(has_iscrit_rule);
}

TEST_CASE("entailment-based disclosure matches the hospital attack") {
  const ProblemFile pf = hospital();
  const ConjunctiveQuery p = boolean_policy(pf);
  const Verdict full = rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, {},
                                                        rewrite::RewriteMode::Full);
  CHECK(full.outcome == Outcome::Disclosed);
  REQUIRE(full.witness.has_value());

  // The polynomial mode insists on an atomic mapping; VisitingHours is not.
  CHECK_THROWS_AS(rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, {},
                                                   rewrite::RewriteMode::Ptime),
                  std::invalid_argument);
}

TEST_CASE("full and polynomial rewritings agree on eligible settings") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const ProblemFile pf = randgen::random_setting(seed, randgen::Family::LtgdAtomMap);
    const ConjunctiveQuery p = boolean_policy(pf);
    const Verdict full = rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, {},
                                                          rewrite::RewriteMode::Full);
    const Verdict fast = rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, {},
                                                          rewrite::RewriteMode::Ptime);
    if (full.outcome == Outcome::Unknown || fast.outcome == Outcome::Unknown) continue;
    INFO("seed ", seed);
    CHECK(full.outcome == fast.outcome);
  }
}

TEST_CASE("reifying mapping bodies yields a pure projection mapping") {
  const ProblemFile pf = hospital();
  const auto red = rewrite::reduce_to_projmap(pf.constraints, pf.mappings);
  CHECK(classify_mapping(red.m).count(MapClass::ProjMap) == 1);
  CHECK(red.m.size() == pf.mappings.size());
  CHECK(red.sigma.size() > pf.constraints.size());

  const ConjunctiveQuery p = boolean_policy(pf);
  const Verdict before = oracle::oracle_disclose(pf.constraints, pf.mappings, p, {});
  const Verdict after = oracle::oracle_disclose(red.sigma, red.m, p, {});
  REQUIRE(before.outcome == Outcome::Disclosed);
  CHECK(after.outcome == before.outcome);
}

TEST_CASE("projection reification preserves verdicts on random settings") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ProblemFile pf = randgen::random_setting(seed, randgen::Family::Mixed);
    const ConjunctiveQuery p = boolean_policy(pf);
    const auto red = rewrite::reduce_to_projmap(pf.constraints, pf.mappings);
    const Verdict before = vischase::disclose_via_vischase(pf.constraints, pf.mappings, p, {});
    const Verdict after = vischase::disclose_via_vischase(red.sigma, red.m, p, {});
    if (before.outcome == Outcome::Unknown || after.outcome == Outcome::Unknown) continue;
    INFO("seed ", seed);
    CHECK(before.outcome == after.outcome);
  }
}

TEST_CASE("merges of frontier-1 mappings can be recast as ordinary rules") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ProblemFile pf = randgen::random_setting(seed, randgen::Family::Fr1Map);
    const ConjunctiveQuery p = boolean_policy(pf);
    const auto red = rewrite::sceq_to_fgtgd(pf.constraints, pf.mappings);
    const Verdict before = oracle::oracle_disclose(pf.constraints, pf.mappings, p, {});
    const Verdict after = oracle::oracle_disclose(red.sigma, red.m, p, {});
    if (before.outcome == Outcome::Unknown || after.outcome == Outcome::Unknown) continue;
    INFO("seed ", seed);
    CHECK(before.outcome == after.outcome);
  }
}

TEST_CASE("rewriting-based and chase-based disclosure agree on random settings") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const ProblemFile pf = randgen::random_setting(seed, randgen::Family::Mixed);
    const ConjunctiveQuery p = boolean_policy(pf);
    const Verdict a = rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, {},
                                                       rewrite::RewriteMode::Full);
    const Verdict b = vischase::disclose_via_vischase(pf.constraints, pf.mappings, p, {});
    if (a.outcome == Outcome::Unknown || b.outcome == Outcome::Unknown) continue;
    INFO("seed ", seed);
    CHECK(a.outcome == b.outcome);
  }
}
