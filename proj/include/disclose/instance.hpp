#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "disclose/model.hpp"

namespace disclose {

/// A finite set of facts, grouped by predicate, with a per-position value
/// index.  Rows are kept in insertion order; all iteration helpers are
/// deterministic.  Representation is private to keep behaviour the contract.
class Instance {
 public:
  /// Inserts a ground atom; returns true if it was new.
  /// Throws std::invalid_argument for non-ground atoms and for arity
  /// conflicts with facts already stored under the same predicate.
  bool insert(const Fact& f);

  bool contains(const Fact& f) const;
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Rows of one predicate in insertion order (empty vector if absent).
  const std::vector<Fact>& rows(const std::string& pred) const;
  /// Row indices (into rows(pred)) whose argument at `pos` equals `v`;
  /// nullptr when none.
  const std::vector<std::uint32_t>* index(const std::string& pred, int pos,
                                          const Term& v) const;

  /// Predicates present, sorted by name.
  std::vector<std::string> predicates() const;
  /// All facts, sorted; canonical for equality checks and printing.
  std::vector<Fact> sorted_facts() const;

  /// Image of this instance under a term substitution (deduplicated).
  Instance mapped(const std::function<Term(const Term&)>& f) const;

  /// As sets of facts.
  bool operator==(const Instance& o) const;

 private:
  struct Relation {
    std::vector<Fact> rows;
    std::map<std::vector<Term>, std::uint32_t> by_args;
    // pos_index[i][v] = row ids with args[i] == v
    std::vector<std::map<Term, std::vector<std::uint32_t>>> pos_index;
  };
  std::map<std::string, Relation> rels_;
  std::size_t size_ = 0;
};

}  // namespace disclose
