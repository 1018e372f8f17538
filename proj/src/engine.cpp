#include "disclose/engine.hpp"

#include <algorithm>
#include <cassert>

namespace disclose::engine {

namespace {

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

/// Unifies `atom` against `row` under `bind`; on success pushes the names of
/// newly bound variables onto `undo` and returns true.
bool unify_row(const Atom& atom, const Fact& row, Homomorphism& bind,
               std::vector<std::string>& undo) {
  std::size_t undo_mark = undo.size();
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const Term& t = atom.args[i];
    const Term& v = row.args[i];
    if (t.is_variable()) {
      auto it = bind.find(t.name());
      if (it == bind.end()) {
        bind.emplace(t.name(), v);
        undo.push_back(t.name());
      } else if (!(it->second == v)) {
        goto fail;
      }
    } else if (!(t == v)) {
      goto fail;
    }
  }
  return true;
fail:
  while (undo.size() > undo_mark) {
    bind.erase(undo.back());
    undo.pop_back();
  }
  return false;
}

/// Candidate row ids for `atom` under `bind`, using the most selective
/// position index available.  Returns false when provably empty.
bool candidate_rows(const Instance& db, const Atom& atom, const Homomorphism& bind,
                    std::vector<std::uint32_t>& out) {
  const auto& rows = db.rows(atom.pred);
  if (rows.empty()) return false;
  const std::vector<std::uint32_t>* best = nullptr;
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const Term& t = atom.args[i];
    const Term* val = nullptr;
    if (t.is_variable()) {
      auto it = bind.find(t.name());
      if (it != bind.end()) val = &it->second;
    } else {
      val = &t;
    }
    if (val) {
      const auto* lst = db.index(atom.pred, static_cast<int>(i), *val);
      if (!lst) return false;
      if (!best || lst->size() < best->size()) best = lst;
    }
  }
  if (best) {
    out = *best;
  } else {
    out.resize(rows.size());
    for (std::uint32_t i = 0; i < rows.size(); ++i) out[i] = i;
  }
  return true;
}

/// Depth-first match of atoms[i..) extending bind.  Returns false when the
/// callback requested a stop.
bool match_from(const Instance& db, const std::vector<Atom>& atoms, std::size_t i,
                Homomorphism& bind, bool value_order,
                const std::function<bool(const Homomorphism&)>& cb) {
  if (i == atoms.size()) return cb(bind);
  const Atom& atom = atoms[i];
  const auto& rows = db.rows(atom.pred);
  if (rows.empty()) return true;
  std::vector<std::uint32_t> cand;
  if (!candidate_rows(db, atom, bind, cand)) return true;
  if (value_order)
    std::sort(cand.begin(), cand.end(), [&](std::uint32_t a, std::uint32_t b) {
      return rows[a].args < rows[b].args;
    });
  std::vector<std::string> undo;
  for (auto id : cand) {
    undo.clear();
    if (!unify_row(atom, rows[id], bind, undo)) continue;
    bool go_on = match_from(db, atoms, i + 1, bind, value_order, cb);
    for (const auto& v : undo) bind.erase(v);
    if (!go_on) return false;
  }
  return true;
}

bool exists_match(const Instance& db, const Atom& atom, const Homomorphism& base) {
  Homomorphism bind = base;
  bool found = false;
  std::vector<Atom> one{atom};
  match_from(db, one, 0, bind, false, [&](const Homomorphism&) {
    found = true;
    return false;
  });
  return found;
}

}  // namespace

std::vector<Homomorphism> eval_cq(const Instance& db, const ConjunctiveQuery& q) {
  std::vector<Homomorphism> out;
  Homomorphism bind;
  match_from(db, q.atoms, 0, bind, true, [&](const Homomorphism& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

std::optional<Homomorphism> find_hom(const Instance& db, const ConjunctiveQuery& q) {
  std::optional<Homomorphism> out;
  Homomorphism bind;
  match_from(db, q.atoms, 0, bind, true, [&](const Homomorphism& h) {
    out = h;
    return false;
  });
  return out;
}

bool satisfies(const Instance& db, const ConjunctiveQuery& q) {
  Homomorphism bind;
  bool found = false;
  match_from(db, q.atoms, 0, bind, false, [&](const Homomorphism&) {
    found = true;
    return false;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Restricted chase
// ---------------------------------------------------------------------------

namespace {

struct Trigger {
  std::size_t dep;
  Homomorphism bind;
  std::vector<Term> key;  // binding tuple in body-variable order
};

void check_single_heads(const std::vector<Dependency>& deps) {
  for (const auto& d : deps)
    if (d.head.atoms.size() != 1)
      throw std::invalid_argument(
          "chase requires single-atom heads (normalize_heads first): " + d.str());
}

/// Restricted liveness: the head has no witness extending the frontier part
/// of the binding.
bool head_witnessed(const Instance& db, const Dependency& d, const Homomorphism& bind) {
  const Atom& head = d.head.atoms[0];
  Homomorphism frontier_bind;
  for (const auto& t : head.args)
    if (t.is_variable()) {
      auto it = bind.find(t.name());
      if (it != bind.end()) frontier_bind.emplace(t.name(), it->second);
    }
  return exists_match(db, head, frontier_bind);
}

std::vector<Trigger> collect_triggers(const Instance& db,
                                      const std::vector<Dependency>& deps) {
  std::vector<Trigger> out;
  for (std::size_t di = 0; di < deps.size(); ++di) {
    const Dependency& d = deps[di];
    auto body_vars = d.body.variables();
    std::vector<Trigger> mine;
    Homomorphism bind;
    match_from(db, d.body.atoms, 0, bind, false, [&](const Homomorphism& h) {
      if (!head_witnessed(db, d, h)) {
        Trigger t{di, h, {}};
        t.key.reserve(body_vars.size());
        for (const auto& v : body_vars) t.key.push_back(h.at(v));
        mine.push_back(std::move(t));
      }
      return true;
    });
    std::sort(mine.begin(), mine.end(),
              [](const Trigger& a, const Trigger& b) { return a.key < b.key; });
    for (auto& t : mine) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::size_t chase_round(Instance& db, const std::vector<Dependency>& deps,
                        std::size_t max_facts, bool& exhausted,
                        std::vector<TraceStep>* trace, const ChaseObserver* obs) {
  check_single_heads(deps);
  exhausted = false;
  auto triggers = collect_triggers(db, deps);
  std::size_t added = 0;
  for (const auto& t : triggers) {
    const Dependency& d = deps[t.dep];
    if (head_witnessed(db, d, t.bind)) continue;  // witnessed by this round's adds
    Homomorphism full = t.bind;
    std::vector<Term> fresh;
    const Atom& head = d.head.atoms[0];
    Fact f(head.pred, {});
    f.args.reserve(head.args.size());
    for (const auto& arg : head.args) {
      auto it = full.find(arg.name());
      if (it == full.end()) {
        Term n = Term::fresh_null();
        fresh.push_back(n);
        it = full.emplace(arg.name(), n).first;
      }
      f.args.push_back(it->second);
    }
    if (db.insert(f)) {
      ++added;
      if (trace) trace->push_back(TraceStep{d.label, full, f});
      if (obs) (*obs)(d, full, f, fresh);
      if (db.size() > max_facts) {
        exhausted = true;
        return added;
      }
    }
  }
  return added;
}

bool has_live_trigger(const Instance& db, const std::vector<Dependency>& deps) {
  for (const auto& d : deps) {
    bool live = false;
    Homomorphism bind;
    match_from(db, d.body.atoms, 0, bind, false, [&](const Homomorphism& h) {
      if (!head_witnessed(db, d, h)) {
        live = true;
        return false;
      }
      return true;
    });
    if (live) return true;
  }
  return false;
}

ChaseResult chase(const Instance& db, const std::vector<Dependency>& deps,
                  const ChaseBudget& budget) {
  check_single_heads(deps);
  ChaseResult res;
  res.instance = db;
  for (;;) {
    if (res.rounds == budget.max_rounds || res.instance.size() >= budget.max_facts) {
      res.status = has_live_trigger(res.instance, deps) ? ChaseStatus::BudgetExhausted
                                                        : ChaseStatus::Saturated;
      break;
    }
    bool exhausted = false;
    std::size_t added =
        chase_round(res.instance, deps, budget.max_facts, exhausted, &res.trace, nullptr);
    if (added > 0) ++res.rounds;
    if (exhausted) {
      res.status = ChaseStatus::BudgetExhausted;
      break;
    }
    if (added == 0) {
      res.status = ChaseStatus::Saturated;
      break;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Entailment
// ---------------------------------------------------------------------------

EntailResult entails_any(const Instance& db, const std::vector<Dependency>& deps,
                         const std::vector<ConjunctiveQuery>& queries,
                         const ChaseBudget& budget) {
  check_single_heads(deps);
  for (const auto& q : queries)
    if (!q.boolean())
      throw std::invalid_argument("entailment requires Boolean queries");

  EntailResult res;
  Instance work = db;

  auto check = [&](std::size_t rounds) -> bool {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (auto h = find_hom(work, queries[i])) {
        res.status = EntailStatus::Entailed;
        res.witness = std::move(h);
        res.which_query = static_cast<int>(i);
        res.rounds = rounds;
        res.facts = work.size();
        return true;
      }
    }
    return false;
  };

  if (check(0)) return res;
  std::size_t rounds = 0;
  for (;;) {
    if (rounds == budget.max_rounds || work.size() >= budget.max_facts) {
      bool live = has_live_trigger(work, deps);
      res.status = live ? EntailStatus::Unknown : EntailStatus::NotEntailed;
      res.saturated = !live;
      break;
    }
    bool exhausted = false;
    std::size_t added = chase_round(work, deps, budget.max_facts, exhausted, nullptr, nullptr);
    if (added > 0) ++rounds;
    if (check(rounds)) return res;
    if (exhausted) {
      res.status = EntailStatus::Unknown;
      break;
    }
    if (added == 0) {
      res.status = EntailStatus::NotEntailed;
      res.saturated = true;
      break;
    }
  }
  res.rounds = rounds;
  res.facts = work.size();
  return res;
}

EntailResult entails(const Instance& db, const std::vector<Dependency>& deps,
                     const ConjunctiveQuery& q, const ChaseBudget& budget) {
  return entails_any(db, deps, {q}, budget);
}

}  // namespace disclose::engine
