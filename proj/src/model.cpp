#include "disclose/model.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>

namespace disclose {

namespace {
std::atomic<std::uint64_t> g_null_counter{0};
}

Term Term::constant(std::string name) {
  Term t;
  t.kind_ = Kind::Constant;
  t.name_ = std::move(name);
  return t;
}

Term Term::variable(std::string name) {
  Term t;
  t.kind_ = Kind::Variable;
  t.name_ = std::move(name);
  return t;
}

Term Term::null(std::uint64_t id) {
  Term t;
  t.kind_ = Kind::Null;
  t.id_ = id;
  return t;
}

Term Term::fresh_null() { return null(++g_null_counter); }

const Term& Term::crit() {
  static const Term c = Term::constant(std::string(kCritName));
  return c;
}

bool Term::is_crit() const {
  return kind_ == Kind::Constant && name_ == kCritName;
}

std::string Term::str() const {
  if (kind_ == Kind::Null) return "_:n" + std::to_string(id_);
  return name_;
}

bool Atom::ground() const {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return t.is_ground(); });
}

std::string Atom::str() const {
  std::string s = pred + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].str();
  }
  return s + ")";
}

Atom var_atom(std::string pred, const std::vector<std::string>& vars) {
  std::vector<Term> args;
  args.reserve(vars.size());
  for (const auto& v : vars) args.push_back(Term::variable(v));
  return Atom(std::move(pred), std::move(args));
}

std::vector<std::string> ConjunctiveQuery::variables() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && seen.insert(t.name()).second) out.push_back(t.name());
  return out;
}

bool ConjunctiveQuery::mentions_var(const std::string& v) const {
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && t.name() == v) return true;
  return false;
}

void ConjunctiveQuery::validate_user_level() const {
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (!t.is_variable())
        throw std::invalid_argument("query atoms must be over variables only: " + a.str());
  for (const auto& v : free_vars)
    if (!mentions_var(v))
      throw std::invalid_argument("free variable does not occur in query: " + v);
}

std::string ConjunctiveQuery::str() const {
  std::string s;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    s += atoms[i].str();
  }
  return s;
}

namespace {
std::vector<std::string> vars_of(const ConjunctiveQuery& q) { return q.variables(); }
}  // namespace

std::vector<std::string> Dependency::frontier() const {
  std::vector<std::string> out;
  std::set<std::string> head_vars;
  for (const auto& v : vars_of(head)) head_vars.insert(v);
  for (const auto& v : vars_of(body))
    if (head_vars.count(v)) out.push_back(v);
  return out;
}

std::vector<std::string> Dependency::existentials() const {
  std::vector<std::string> out;
  std::set<std::string> body_vars;
  for (const auto& v : vars_of(body)) body_vars.insert(v);
  for (const auto& v : vars_of(head))
    if (!body_vars.count(v)) out.push_back(v);
  return out;
}

std::string Dependency::str() const {
  std::string s = body.str() + " -> ";
  auto ex = existentials();
  if (!ex.empty()) {
    s += "exists ";
    for (std::size_t i = 0; i < ex.size(); ++i) {
      if (i) s += ",";
      s += ex[i];
    }
    s += ". ";
  }
  return s + head.str();
}

void MappingSet::add(Dependency rule) {
  if (rule.head.atoms.size() != 1)
    throw std::invalid_argument("mapping rule must have a single head atom");
  const Atom& h = rule.head.atoms[0];
  std::set<std::string> seen;
  for (const auto& t : h.args) {
    if (!t.is_variable())
      throw std::invalid_argument("mapping head must be over variables: " + h.str());
    if (!seen.insert(t.name()).second)
      throw std::invalid_argument("mapping head repeats variable " + t.name());
    if (!rule.body.mentions_var(t.name()))
      throw std::invalid_argument("mapping head variable " + t.name() +
                                  " does not occur in the body");
  }
  if (rules_.count(h.pred))
    throw std::invalid_argument("global predicate " + h.pred +
                                " already has a mapping rule");
  if (rule.label.empty()) rule.label = "m_" + h.pred;
  rules_.emplace(h.pred, std::move(rule));
}

std::map<std::string, int> MappingSet::global_arities() const {
  std::map<std::string, int> out;
  for (const auto& [name, rule] : rules_) out[name] = rule.head.atoms[0].arity();
  return out;
}

bool Schema::reserved_name(std::string_view name) {
  return name == kIsCrit || name.rfind("__", 0) == 0;
}

bool Schema::declared(const std::string& name) const {
  return source.count(name) || global.count(name);
}

std::optional<int> Schema::arity_of(const std::string& name) const {
  if (auto it = source.find(name); it != source.end()) return it->second;
  if (auto it = global.find(name); it != global.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace {

/// Does any atom of `q` contain every variable in `vars`?
bool some_atom_contains(const ConjunctiveQuery& q, const std::vector<std::string>& vars) {
  for (const auto& a : q.atoms) {
    std::set<std::string> in_atom;
    for (const auto& t : a.args)
      if (t.is_variable()) in_atom.insert(t.name());
    bool all = true;
    for (const auto& v : vars)
      if (!in_atom.count(v)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

/// A variable occurs more than once across the atoms of `q`.
bool has_repeated_var(const ConjunctiveQuery& q) {
  std::map<std::string, int> count;
  for (const auto& a : q.atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && ++count[t.name()] > 1) return true;
  return false;
}

}  // namespace

std::set<DepClass> classify_dependency(const Dependency& d) {
  std::set<DepClass> out{DepClass::TGD};
  if (some_atom_contains(d.body, d.frontier())) out.insert(DepClass::FGTGD);
  if (some_atom_contains(d.body, d.body.variables())) out.insert(DepClass::GTGD);
  bool linear = d.body.atoms.size() == 1;
  if (linear) out.insert(DepClass::LTGD);
  bool incdep = linear && d.head.atoms.size() == 1 && !has_repeated_var(d.body) &&
                !has_repeated_var(d.head);
  if (incdep) out.insert(DepClass::IncDep);
  if (incdep && d.frontier().size() <= 1) out.insert(DepClass::UID);
  return out;
}

std::set<DepClass> classify_dependencies(const std::vector<Dependency>& deps) {
  std::set<DepClass> out{DepClass::UID,  DepClass::IncDep, DepClass::LTGD,
                         DepClass::GTGD, DepClass::FGTGD,  DepClass::TGD};
  for (const auto& d : deps) {
    auto cls = classify_dependency(d);
    std::set<DepClass> keep;
    for (auto c : out)
      if (cls.count(c)) keep.insert(c);
    out = std::move(keep);
  }
  return out;
}

std::set<MapClass> classify_mapping_rule(const Dependency& rule) {
  std::set<MapClass> out{MapClass::CQMap};
  if (some_atom_contains(rule.body, rule.body.variables()))
    out.insert(MapClass::GuardedMap);
  bool atom = rule.body.atoms.size() == 1;
  if (atom) out.insert(MapClass::AtomMap);
  if (atom && !has_repeated_var(rule.body)) out.insert(MapClass::ProjMap);
  return out;
}

std::set<MapClass> classify_mapping(const MappingSet& m) {
  std::set<MapClass> out{MapClass::ProjMap, MapClass::AtomMap, MapClass::GuardedMap,
                         MapClass::CQMap};
  for (const auto& [name, rule] : m.rules()) {
    auto cls = classify_mapping_rule(rule);
    std::set<MapClass> keep;
    for (auto c : out)
      if (cls.count(c)) keep.insert(c);
    out = std::move(keep);
  }
  return out;
}

std::string to_string(DepClass c) {
  switch (c) {
    case DepClass::UID: return "UID";
    case DepClass::IncDep: return "IncDep";
    case DepClass::LTGD: return "LTGD";
    case DepClass::GTGD: return "GTGD";
    case DepClass::FGTGD: return "FGTGD";
    case DepClass::TGD: return "TGD";
  }
  return "?";
}

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::ProjMap: return "ProjMap";
    case MapClass::AtomMap: return "AtomMap";
    case MapClass::GuardedMap: return "GuardedMap";
    case MapClass::CQMap: return "CQMap";
  }
  return "?";
}

std::vector<std::string> class_names(const std::set<DepClass>& s) {
  std::vector<std::string> out;
  for (auto c : {DepClass::UID, DepClass::IncDep, DepClass::LTGD, DepClass::GTGD,
                 DepClass::FGTGD, DepClass::TGD})
    if (s.count(c)) out.push_back(to_string(c));
  return out;
}

std::vector<std::string> class_names(const std::set<MapClass>& s) {
  std::vector<std::string> out;
  for (auto c : {MapClass::ProjMap, MapClass::AtomMap, MapClass::GuardedMap,
                 MapClass::CQMap})
    if (s.count(c)) out.push_back(to_string(c));
  return out;
}

// ---------------------------------------------------------------------------
// Head normalization
// ---------------------------------------------------------------------------

std::vector<Dependency> normalize_heads(const std::vector<Dependency>& deps) {
  // Avoid clashing with aux predicates already introduced by earlier passes.
  std::uint64_t next_aux = 1;
  for (const auto& d : deps) {
    for (const auto* q : {&d.body, &d.head})
      for (const auto& a : q->atoms)
        if (a.pred.rfind("__aux", 0) == 0) {
          std::uint64_t n = std::strtoull(a.pred.c_str() + 5, nullptr, 10);
          if (n >= next_aux) next_aux = n + 1;
        }
  }

  std::vector<Dependency> out;
  for (const auto& d : deps) {
    if (d.single_head() || d.head.atoms.empty()) {
      out.push_back(d);
      continue;
    }
    std::string aux = "__aux" + std::to_string(next_aux++);
    std::vector<std::string> aux_vars = d.frontier();
    for (const auto& v : d.existentials()) aux_vars.push_back(v);

    Dependency intro;
    intro.body = d.body;
    intro.head.atoms = {var_atom(aux, aux_vars)};
    intro.label = d.label.empty() ? aux : d.label;
    out.push_back(std::move(intro));

    int i = 0;
    for (const auto& h : d.head.atoms) {
      Dependency proj;
      proj.body.atoms = {var_atom(aux, aux_vars)};
      proj.head.atoms = {h};
      proj.label = (d.label.empty() ? aux : d.label) + "." + std::to_string(++i);
      out.push_back(std::move(proj));
    }
  }
  return out;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Disclosed: return "DISCLOSED";
    case Outcome::NotDisclosed: return "NOT_DISCLOSED";
    case Outcome::Unknown: return "UNKNOWN";
  }
  return "?";
}

}  // namespace disclose
