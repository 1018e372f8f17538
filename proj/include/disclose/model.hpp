#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace disclose {

/// A term is a constant, a variable, or a labelled null.
///
/// Exactly one constant name ("__crit") is reserved as the critical
/// constant; the parser rejects any input that could mention it.  Null ids
/// come from a process-wide monotone counter, so nulls are totally ordered
/// by creation.
class Term {
 public:
  enum class Kind : std::uint8_t { Constant = 0, Variable = 1, Null = 2 };

  Term() : kind_(Kind::Constant) {}

  static Term constant(std::string name);
  static Term variable(std::string name);
  static Term null(std::uint64_t id);
  static Term fresh_null();

  /// The critical constant c_crit.
  static const Term& crit();

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_null() const { return kind_ == Kind::Null; }
  bool is_ground() const { return kind_ != Kind::Variable; }
  bool is_crit() const;

  const std::string& name() const { return name_; }
  std::uint64_t null_id() const { return id_; }

  std::string str() const;

  bool operator==(const Term& o) const {
    return kind_ == o.kind_ && id_ == o.id_ && name_ == o.name_;
  }
  auto operator<=>(const Term& o) const {
    if (auto c = kind_ <=> o.kind_; c != 0) return c;
    if (kind_ == Kind::Null) return id_ <=> o.id_;
    return name_ <=> o.name_;
  }

 private:
  Kind kind_;
  std::uint64_t id_ = 0;
  std::string name_;
};

/// Reserved names.
inline constexpr std::string_view kCritName = "__crit";
inline constexpr std::string_view kIsCrit = "IsCrit";

/// A predicate applied to terms.  A fact is an atom whose arguments are all
/// ground (constants or nulls).
struct Atom {
  std::string pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {}

  int arity() const { return static_cast<int>(args.size()); }
  bool ground() const;
  std::string str() const;

  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

using Fact = Atom;

/// Convenience: build an atom over variables named `vars`.
Atom var_atom(std::string pred, const std::vector<std::string>& vars);

/// An existentially closed conjunction of atoms with an ordered list of free
/// variables.  Policies, rule bodies and rule heads are all this type.
/// User-level queries are constant-free; internally the engine tolerates
/// ground arguments (frozen constants) in atoms.
struct ConjunctiveQuery {
  std::vector<Atom> atoms;
  std::vector<std::string> free_vars;

  bool boolean() const { return free_vars.empty(); }
  /// All variables in first-occurrence order (atom order, then arg order).
  std::vector<std::string> variables() const;
  bool mentions_var(const std::string& v) const;
  /// Throws std::invalid_argument on constants/nulls or stray free vars.
  void validate_user_level() const;
  std::string str() const;

  bool operator==(const ConjunctiveQuery&) const = default;
};

/// body -> exists (head vars \ body vars) . head
struct Dependency {
  ConjunctiveQuery body;
  ConjunctiveQuery head;
  std::string label;

  Dependency() = default;
  Dependency(ConjunctiveQuery b, ConjunctiveQuery h, std::string l = "")
      : body(std::move(b)), head(std::move(h)), label(std::move(l)) {}

  /// Variables shared between body and head, in body first-occurrence order.
  std::vector<std::string> frontier() const;
  /// Head variables not in the body, in head first-occurrence order.
  std::vector<std::string> existentials() const;
  bool single_head() const { return head.atoms.size() == 1; }
  std::string str() const;
};

/// A GAV mapping set: one rule per global predicate, body over the source
/// schema, head a single global atom with distinct variables.
class MappingSet {
 public:
  MappingSet() = default;

  /// Validates the rule shape; throws std::invalid_argument on violation
  /// (multiple rules for one global predicate, repeated head variables,
  /// unsafe head).
  void add(Dependency rule);

  const std::map<std::string, Dependency>& rules() const { return rules_; }
  std::map<std::string, int> global_arities() const;
  bool empty() const { return rules_.empty(); }
  std::size_t size() const { return rules_.size(); }

 private:
  std::map<std::string, Dependency> rules_;  // keyed by global predicate
};

/// Declared predicates, split into disjoint source and global parts.
struct Schema {
  std::map<std::string, int> source;
  std::map<std::string, int> global;

  static bool reserved_name(std::string_view name);
  bool declared(const std::string& name) const;
  std::optional<int> arity_of(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Syntactic classification
// ---------------------------------------------------------------------------

enum class DepClass { UID, IncDep, LTGD, GTGD, FGTGD, TGD };
enum class MapClass { ProjMap, AtomMap, GuardedMap, CQMap };

/// Full upward-closed class set: UID => IncDep => LTGD => GTGD => FGTGD => TGD.
std::set<DepClass> classify_dependency(const Dependency& d);
/// Class set of a list = intersection of per-rule classes (all classes when empty).
std::set<DepClass> classify_dependencies(const std::vector<Dependency>& deps);

std::set<MapClass> classify_mapping_rule(const Dependency& rule);
/// ProjMap => AtomMap => GuardedMap => CQMap; intersection over rules.
std::set<MapClass> classify_mapping(const MappingSet& m);

std::string to_string(DepClass c);
std::string to_string(MapClass c);
/// Most-specific-first rendering of a class set.
std::vector<std::string> class_names(const std::set<DepClass>& s);
std::vector<std::string> class_names(const std::set<MapClass>& s);

// ---------------------------------------------------------------------------
// Head normalization
// ---------------------------------------------------------------------------

/// Rewrites every multi-atom head through a fresh auxiliary predicate
/// ("__aux<N>", arity = |frontier| + |head existentials|): one rule
/// body -> exists ys. aux(frontier, ys), then aux -> head_atom for each head
/// atom.  Single-atom heads pass through unchanged.  Aux numbering skips ids
/// already present in the input.
std::vector<Dependency> normalize_heads(const std::vector<Dependency>& deps);

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

using Homomorphism = std::map<std::string, Term>;

enum class Outcome { Disclosed, NotDisclosed, Unknown };

std::string to_string(Outcome o);

struct SaturationInfo {
  std::size_t rounds = 0;
  std::size_t facts = 0;
  std::string kind;  // e.g. "visible-chase saturation" or "complete-procedure"
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<Homomorphism> witness;       // present when Disclosed (see note)
  std::optional<SaturationInfo> certificate; // present when NotDisclosed
  std::size_t rounds = 0;
  std::size_t facts = 0;
  std::string note;
};

}  // namespace disclose
