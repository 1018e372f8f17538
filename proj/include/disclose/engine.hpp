#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "disclose/instance.hpp"
#include "disclose/model.hpp"

namespace disclose::engine {

struct ChaseBudget {
  std::size_t max_rounds = 8;
  std::size_t max_facts = 100000;
};

enum class ChaseStatus { Saturated, BudgetExhausted };

struct TraceStep {
  std::string rule;
  Homomorphism trigger;  // body variables plus existential witnesses
  Fact added;
};

struct ChaseResult {
  Instance instance;
  ChaseStatus status = ChaseStatus::Saturated;
  std::size_t rounds = 0;  // productive rounds executed
  std::vector<TraceStep> trace;
};

/// Complete homomorphism enumeration of q into db, depth-first with atoms in
/// query order and candidate facts in value order.  Bindings cover every
/// variable of q.
std::vector<Homomorphism> eval_cq(const Instance& db, const ConjunctiveQuery& q);
std::optional<Homomorphism> find_hom(const Instance& db, const ConjunctiveQuery& q);
bool satisfies(const Instance& db, const ConjunctiveQuery& q);

/// Notification for every fact a chase round adds: the rule, the full binding
/// (body variables and existential witnesses), the fact, and the fresh nulls
/// created for this trigger in head-argument order.
using ChaseObserver =
    std::function<void(const Dependency&, const Homomorphism&, const Fact&,
                       const std::vector<Term>&)>;

/// One strict breadth-first restricted-chase round: triggers are collected
/// against the entry state, fired in (rule declaration order, lexicographic
/// binding order), and a trigger is skipped when its head is already
/// witnessed at fire time.  Requires single-atom heads.  Returns the number
/// of facts added; sets `exhausted` and stops once db grows past max_facts.
std::size_t chase_round(Instance& db, const std::vector<Dependency>& deps,
                        std::size_t max_facts, bool& exhausted,
                        std::vector<TraceStep>* trace = nullptr,
                        const ChaseObserver* obs = nullptr);

/// True if some restricted trigger could still fire.
bool has_live_trigger(const Instance& db, const std::vector<Dependency>& deps);

/// Budgeted restricted chase (strict breadth-first rounds).
ChaseResult chase(const Instance& db, const std::vector<Dependency>& deps,
                  const ChaseBudget& budget);

enum class EntailStatus { Entailed, NotEntailed, Unknown };

struct EntailResult {
  EntailStatus status = EntailStatus::Unknown;
  std::optional<Homomorphism> witness;
  int which_query = -1;  // index of the entailed query (entails_any)
  std::size_t rounds = 0;
  std::size_t facts = 0;
  bool saturated = false;
};

/// Certain answer to Boolean q over (db, deps): chases db and checks q after
/// every round.  NotEntailed only under a saturation certificate; Unknown on
/// budget exhaustion.
EntailResult entails(const Instance& db, const std::vector<Dependency>& deps,
                     const ConjunctiveQuery& q, const ChaseBudget& budget);

/// Shared-chase variant: queries are checked in list order after every round;
/// the first entailed one wins.
EntailResult entails_any(const Instance& db, const std::vector<Dependency>& deps,
                         const std::vector<ConjunctiveQuery>& queries,
                         const ChaseBudget& budget);

// ---------------------------------------------------------------------------
// Annotated chase forest (binary schemas)
// ---------------------------------------------------------------------------

/// Forest structure of a restricted chase over a schema of arity <= 2,
/// started from a single unary fact.  Nodes are values; node labels collect
/// the unary predicates holding at a value; every added binary fact links a
/// known value to the freshly created one.
struct ChaseForest {
  struct Edge {
    Term parent, child;
    Fact label;
  };
  Instance instance;
  std::map<Term, std::set<std::string>> labels;
  std::vector<Edge> edges;
  std::map<Term, Term> parent;  // child -> parent
  std::set<Term> roots;
  ChaseStatus status = ChaseStatus::Saturated;
  std::size_t rounds = 0;

  /// No value has two distinct neighbors over same-predicate edges with the
  /// value at the same position.
  bool unique_adjoining_labels(std::string* err = nullptr) const;
};

/// Runs the restricted chase of {start} under unary/binary UIDs and records
/// the forest.  Throws std::invalid_argument if start is not unary-ground or
/// a dependency is not a UID over arity <= 2.
ChaseForest build_chase_forest(const Fact& start, const std::vector<Dependency>& uids,
                               const ChaseBudget& budget);

}  // namespace disclose::engine
