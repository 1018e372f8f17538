#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "disclose/problem.hpp"
#include "disclose/uid.hpp"

namespace disclose::randgen {

/// Corpus families for differential testing.
enum class Family {
  Mixed,        // arbitrary TGDs/mappings, occasional multi-atom heads
  LtgdAtomMap,  // linear constraints + atomic mapping (both rewriting modes legal)
  UidProjMap,   // unary inclusions + projection mapping (PTime pipeline legal)
  Fr1Map,       // mapping frontier <= 1 (source-equality reduction legal)
};

/// "mixed", "ltgd-atommap", "uid-projmap", "fr1map".
std::optional<Family> family_from_string(const std::string& s);
std::string to_string(Family f);

/// Deterministic random setting with a Boolean constant-free policy.  Rule
/// graphs are biased acyclic so budgeted chases usually saturate.
ProblemFile random_setting(std::uint64_t seed, Family f);

/// Deterministic certain-answer instance over unary inclusions: a couple of
/// ground base facts, UID constraints (frontier 0 or 1), and a connected
/// Boolean query.  For differentials between the tree decision procedure and
/// the chase engine.
uid::UidProblem random_uid_problem(std::uint64_t seed);

}  // namespace disclose::randgen
