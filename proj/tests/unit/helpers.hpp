#pragma once

#include <string>
#include <utility>
#include <vector>

#include "disclose/model.hpp"

namespace testutil {

using disclose::Atom;
using disclose::ConjunctiveQuery;
using disclose::Dependency;
using disclose::Fact;
using disclose::Term;

/// Atom over named variables.
inline Atom at(std::string pred, const std::vector<std::string>& vars) {
  return disclose::var_atom(std::move(pred), vars);
}

/// Ground fact over named constants.
inline Fact fact(std::string pred, const std::vector<std::string>& consts) {
  Fact f;
  f.pred = std::move(pred);
  for (const auto& c : consts) f.args.push_back(Term::constant(c));
  return f;
}

inline ConjunctiveQuery cq(std::vector<Atom> atoms, std::vector<std::string> free = {}) {
  ConjunctiveQuery q;
  q.atoms = std::move(atoms);
  q.free_vars = std::move(free);
  return q;
}

inline Dependency dep(std::vector<Atom> body, std::vector<Atom> head, std::string label = "") {
  return Dependency(cq(std::move(body)), cq(std::move(head)), std::move(label));
}

}  // namespace testutil
