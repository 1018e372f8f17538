#pragma once

#include <optional>
#include <set>
#include <vector>

#include "disclose/engine.hpp"
#include "disclose/model.hpp"

namespace disclose::oracle {

/// Reference implementation of the disclosure decision, kept deliberately
/// separate from the main engine: its own naive matcher over a sorted fact
/// set and an oblivious (fire-every-trigger-once) chase with multi-atom head
/// support.  Trigger memory survives merges, so a rule never refires just
/// because its match got renamed onto the critical constant.
Verdict oracle_disclose(const std::vector<Dependency>& sigma, const MappingSet& m,
                        const ConjunctiveQuery& p, const engine::ChaseBudget& budget);

/// The oracle's matcher, exposed for differential tests against the indexed
/// engine matcher.
std::vector<Homomorphism> naive_eval(const std::set<Fact>& facts, const ConjunctiveQuery& q);

}  // namespace disclose::oracle
