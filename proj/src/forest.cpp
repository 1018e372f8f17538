#include <algorithm>

#include "disclose/engine.hpp"

namespace disclose::engine {

namespace {

void validate_binary_uid(const Dependency& d) {
  auto cls = classify_dependency(d);
  if (!cls.count(DepClass::UID))
    throw std::invalid_argument("chase forest requires UIDs: " + d.str());
  for (const auto* q : {&d.body, &d.head})
    for (const auto& a : q->atoms)
      if (a.arity() > 2)
        throw std::invalid_argument("chase forest requires arity <= 2: " + a.str());
}

}  // namespace

bool ChaseForest::unique_adjoining_labels(std::string* err) const {
  // (node, edge predicate, node position) -> neighbor; a second distinct
  // neighbor under the same key is a violation.
  std::map<std::tuple<Term, std::string, int>, Term> seen;
  for (const auto& e : edges) {
    for (int side = 0; side < 2; ++side) {
      const Term& v = side == 0 ? e.parent : e.child;
      const Term& other = side == 0 ? e.child : e.parent;
      int pos = -1;
      for (std::size_t i = 0; i < e.label.args.size(); ++i)
        if (e.label.args[i] == v) pos = static_cast<int>(i);
      auto key = std::make_tuple(v, e.label.pred, pos);
      auto [it, fresh] = seen.emplace(key, other);
      if (!fresh && !(it->second == other)) {
        if (err)
          *err = v.str() + " adjoins " + it->second.str() + " and " + other.str() +
                 " via " + e.label.pred + " at position " + std::to_string(pos + 1);
        return false;
      }
    }
  }
  return true;
}

ChaseForest build_chase_forest(const Fact& start, const std::vector<Dependency>& uids,
                               const ChaseBudget& budget) {
  if (start.arity() != 1 || !start.ground())
    throw std::invalid_argument("chase forest starts from a single unary fact");
  for (const auto& d : uids) validate_binary_uid(d);

  ChaseForest forest;
  forest.labels[start.args[0]].insert(start.pred);
  forest.roots.insert(start.args[0]);

  ChaseObserver obs = [&forest](const Dependency&, const Homomorphism&, const Fact& f,
                                const std::vector<Term>& fresh) {
    auto is_fresh = [&fresh](const Term& t) {
      return std::find(fresh.begin(), fresh.end(), t) != fresh.end();
    };
    if (f.arity() == 1) {
      forest.labels[f.args[0]].insert(f.pred);
      if (is_fresh(f.args[0])) forest.roots.insert(f.args[0]);
      return;
    }
    // Binary: at least one argument is fresh (UID heads have an existential).
    const Term& a = f.args[0];
    const Term& b = f.args[1];
    Term parent = a, child = b;
    if (is_fresh(a) && !is_fresh(b)) {
      parent = b;
      child = a;
    } else if (is_fresh(a) && is_fresh(b)) {
      forest.roots.insert(a);
      forest.labels.try_emplace(a);
    }
    forest.labels.try_emplace(parent);
    forest.labels.try_emplace(child);
    forest.edges.push_back(ChaseForest::Edge{parent, child, f});
    forest.parent.emplace(child, parent);
  };

  Instance db;
  db.insert(start);
  std::size_t rounds = 0;
  for (;;) {
    if (rounds == budget.max_rounds || db.size() >= budget.max_facts) {
      forest.status = has_live_trigger(db, uids) ? ChaseStatus::BudgetExhausted
                                                 : ChaseStatus::Saturated;
      break;
    }
    bool exhausted = false;
    std::size_t added = chase_round(db, uids, budget.max_facts, exhausted, nullptr, &obs);
    if (added > 0) ++rounds;
    if (exhausted) {
      forest.status = ChaseStatus::BudgetExhausted;
      break;
    }
    if (added == 0) {
      forest.status = ChaseStatus::Saturated;
      break;
    }
  }
  forest.rounds = rounds;
  forest.instance = std::move(db);
  return forest;
}

}  // namespace disclose::engine
