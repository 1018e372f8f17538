#include "disclose/randgen.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace disclose::randgen {

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  /// 0..n-1 (0 when n <= 1).
  int upto(int n) { return n <= 1 ? 0 : static_cast<int>(g() % static_cast<std::uint64_t>(n)); }
  bool pct(int p) { return static_cast<int>(g() % 100) < p; }
};

struct SourceSchema {
  std::vector<std::string> pred;
  std::vector<int> arity;
};

SourceSchema sources(Rng& r, int lo, int hi) {
  SourceSchema s;
  const int n = lo + r.upto(hi - lo + 1);
  for (int i = 0; i < n; ++i) {
    s.pred.push_back("S" + std::to_string(i + 1));
    s.arity.push_back(1 + r.upto(3));
  }
  return s;
}

/// Atom over pred i with args drawn from an "x" pool; a small pool forces
/// repeated variables.
Atom pool_atom(Rng& r, const SourceSchema& s, int i, int pool) {
  std::vector<std::string> args;
  for (int k = 0; k < s.arity[static_cast<std::size_t>(i)]; ++k)
    args.push_back("x" + std::to_string(1 + r.upto(pool)));
  return var_atom(s.pred[static_cast<std::size_t>(i)], args);
}

/// Atom over pred i with distinct variables x1..xa.
Atom distinct_atom(const SourceSchema& s, int i) {
  std::vector<std::string> args;
  for (int k = 0; k < s.arity[static_cast<std::size_t>(i)]; ++k)
    args.push_back("x" + std::to_string(k + 1));
  return var_atom(s.pred[static_cast<std::size_t>(i)], args);
}

/// Body-pred index pair biased toward from < to, which keeps the rule graph
/// acyclic and the chase terminating.
std::pair<int, int> oriented(Rng& r, int n, int fwd_pct) {
  if (n >= 2 && r.pct(fwd_pct)) {
    int from = r.upto(n - 1);
    int to = from + 1 + r.upto(n - 1 - from);
    return {from, to};
  }
  return {r.upto(n), r.upto(n)};
}

std::vector<std::string> distinct_vars(const ConjunctiveQuery& q) { return q.variables(); }

/// Head atom over pred `to`: each position reuses a body variable or
/// introduces an existential.
Atom head_atom(Rng& r, const SourceSchema& s, int to, const std::vector<std::string>& body_vars,
               int reuse_pct, int& existentials) {
  std::vector<std::string> args;
  for (int k = 0; k < s.arity[static_cast<std::size_t>(to)]; ++k) {
    if (!body_vars.empty() && r.pct(reuse_pct))
      args.push_back(body_vars[static_cast<std::size_t>(r.upto(static_cast<int>(body_vars.size())))]);
    else
      args.push_back("e" + std::to_string(++existentials));
  }
  return var_atom(s.pred[static_cast<std::size_t>(to)], args);
}

ConjunctiveQuery random_policy(Rng& r, const SourceSchema& s, int max_atoms, int pool) {
  ConjunctiveQuery p;
  const int na = 1 + r.upto(max_atoms);
  for (int a = 0; a < na; ++a) {
    const int i = r.upto(static_cast<int>(s.pred.size()));
    std::vector<std::string> args;
    for (int k = 0; k < s.arity[static_cast<std::size_t>(i)]; ++k)
      args.push_back("p" + std::to_string(1 + r.upto(pool)));
    p.atoms.push_back(var_atom(s.pred[static_cast<std::size_t>(i)], args));
  }
  return p;
}

/// Mapping rule for global `name`: head = random distinct subset of the body
/// variables.
Dependency mapping_rule(Rng& r, const std::string& name, ConjunctiveQuery body, int max_head,
                        int* arity_out) {
  std::vector<std::string> vars = distinct_vars(body);
  std::shuffle(vars.begin(), vars.end(), r.g);
  const int take = r.upto(std::min(max_head, static_cast<int>(vars.size())) + 1);
  vars.resize(static_cast<std::size_t>(take));
  *arity_out = take;
  Dependency rule;
  rule.body = std::move(body);
  rule.head.atoms.push_back(var_atom(name, vars));
  return rule;
}

ProblemFile gen_mixed(Rng& r) {
  ProblemFile pf;
  const SourceSchema s = sources(r, 2, 4);
  for (std::size_t i = 0; i < s.pred.size(); ++i)
    pf.schema.source[s.pred[i]] = s.arity[i];

  int existentials = 0;
  const int nc = r.upto(4);
  for (int c = 0; c < nc; ++c) {
    auto [from, to] = oriented(r, static_cast<int>(s.pred.size()), 85);
    Dependency d;
    d.body.atoms.push_back(pool_atom(r, s, from, 3));
    if (r.pct(25)) {
      // Second body atom over the first atom's variables (keeps it guarded).
      std::vector<std::string> guard_vars = distinct_vars(d.body);
      const int j = r.upto(static_cast<int>(s.pred.size()));
      std::vector<std::string> args;
      for (int k = 0; k < s.arity[static_cast<std::size_t>(j)]; ++k)
        args.push_back(
            guard_vars[static_cast<std::size_t>(r.upto(static_cast<int>(guard_vars.size())))]);
      d.body.atoms.push_back(var_atom(s.pred[static_cast<std::size_t>(j)], args));
    }
    std::vector<std::string> body_vars = distinct_vars(d.body);
    d.head.atoms.push_back(head_atom(r, s, to, body_vars, 65, existentials));
    if (r.pct(15)) {
      std::vector<std::string> head_pool = body_vars;
      for (const Term& t : d.head.atoms.front().args) head_pool.push_back(t.name());
      const int j = r.upto(static_cast<int>(s.pred.size()));
      std::vector<std::string> args;
      for (int k = 0; k < s.arity[static_cast<std::size_t>(j)]; ++k)
        args.push_back(
            head_pool[static_cast<std::size_t>(r.upto(static_cast<int>(head_pool.size())))]);
      d.head.atoms.push_back(var_atom(s.pred[static_cast<std::size_t>(j)], args));
    }
    d.label = "c" + std::to_string(c + 1);
    pf.constraints.push_back(std::move(d));
  }

  const int ng = 1 + r.upto(2);
  for (int g = 0; g < ng; ++g) {
    const std::string name = "G" + std::to_string(g + 1);
    ConjunctiveQuery body;
    const int nb = 1 + (r.pct(30) ? 1 : 0);
    for (int b = 0; b < nb; ++b)
      body.atoms.push_back(pool_atom(r, s, r.upto(static_cast<int>(s.pred.size())), 4));
    int arity = 0;
    Dependency rule = mapping_rule(r, name, std::move(body), 2, &arity);
    pf.schema.global[name] = arity;
    pf.mappings.add(std::move(rule));
  }

  pf.policy = random_policy(r, s, 3, 4);
  return pf;
}

ProblemFile gen_ltgd_atommap(Rng& r) {
  ProblemFile pf;
  const SourceSchema s = sources(r, 2, 4);
  for (std::size_t i = 0; i < s.pred.size(); ++i)
    pf.schema.source[s.pred[i]] = s.arity[i];

  int existentials = 0;
  const int nc = 1 + r.upto(3);
  for (int c = 0; c < nc; ++c) {
    auto [from, to] = oriented(r, static_cast<int>(s.pred.size()), 85);
    Dependency d;
    // A small pool makes repeated body variables (annotation targets) common.
    d.body.atoms.push_back(pool_atom(r, s, from, r.pct(40) ? 2 : 3));
    d.head.atoms.push_back(head_atom(r, s, to, distinct_vars(d.body), 65, existentials));
    d.label = "c" + std::to_string(c + 1);
    pf.constraints.push_back(std::move(d));
  }

  const int ng = 1 + r.upto(2);
  for (int g = 0; g < ng; ++g) {
    const std::string name = "G" + std::to_string(g + 1);
    ConjunctiveQuery body;
    body.atoms.push_back(
        pool_atom(r, s, r.upto(static_cast<int>(s.pred.size())), r.pct(25) ? 2 : 4));
    int arity = 0;
    Dependency rule = mapping_rule(r, name, std::move(body), 2, &arity);
    pf.schema.global[name] = arity;
    pf.mappings.add(std::move(rule));
  }

  pf.policy = random_policy(r, s, 3, 4);
  return pf;
}

ProblemFile gen_uid_projmap(Rng& r) {
  ProblemFile pf;
  const SourceSchema s = sources(r, 3, 5);
  for (std::size_t i = 0; i < s.pred.size(); ++i)
    pf.schema.source[s.pred[i]] = s.arity[i];

  const int nc = 2 + r.upto(4);
  for (int c = 0; c < nc; ++c) {
    auto [from, to] = oriented(r, static_cast<int>(s.pred.size()), 85);
    Dependency d;
    d.body.atoms.push_back(distinct_atom(s, from));
    const int ta = s.arity[static_cast<std::size_t>(to)];
    std::vector<std::string> hargs;
    for (int k = 0; k < ta; ++k) hargs.push_back("e" + std::to_string(k + 1));
    if (r.pct(88)) {
      const int bpos = r.upto(s.arity[static_cast<std::size_t>(from)]);
      hargs[static_cast<std::size_t>(r.upto(ta))] = "x" + std::to_string(bpos + 1);
    }
    d.head.atoms.push_back(var_atom(s.pred[static_cast<std::size_t>(to)], hargs));
    d.label = "c" + std::to_string(c + 1);
    pf.constraints.push_back(std::move(d));
  }

  const int ng = 1 + r.upto(2);
  for (int g = 0; g < ng; ++g) {
    const std::string name = "G" + std::to_string(g + 1);
    ConjunctiveQuery body;
    body.atoms.push_back(distinct_atom(s, r.upto(static_cast<int>(s.pred.size()))));
    int arity = 0;
    Dependency rule = mapping_rule(r, name, std::move(body), 2, &arity);
    pf.schema.global[name] = arity;
    pf.mappings.add(std::move(rule));
  }

  pf.policy = random_policy(r, s, 4, r.pct(15) ? 2 : 4);
  return pf;
}

ProblemFile gen_fr1map(Rng& r) {
  ProblemFile pf;
  const SourceSchema s = sources(r, 2, 4);
  for (std::size_t i = 0; i < s.pred.size(); ++i)
    pf.schema.source[s.pred[i]] = s.arity[i];

  int existentials = 0;
  const int nc = 1 + r.upto(3);
  for (int c = 0; c < nc; ++c) {
    auto [from, to] = oriented(r, static_cast<int>(s.pred.size()), 85);
    Dependency d;
    d.body.atoms.push_back(pool_atom(r, s, from, 3));
    d.head.atoms.push_back(head_atom(r, s, to, distinct_vars(d.body), 65, existentials));
    d.label = "c" + std::to_string(c + 1);
    pf.constraints.push_back(std::move(d));
  }

  const int ng = 1 + r.upto(2);
  for (int g = 0; g < ng; ++g) {
    const std::string name = "G" + std::to_string(g + 1);
    ConjunctiveQuery body;
    const int nb = 1 + (r.pct(30) ? 1 : 0);
    for (int b = 0; b < nb; ++b)
      body.atoms.push_back(pool_atom(r, s, r.upto(static_cast<int>(s.pred.size())), 3));
    int arity = 0;
    Dependency rule = mapping_rule(r, name, std::move(body), 1, &arity);  // frontier <= 1
    pf.schema.global[name] = arity;
    pf.mappings.add(std::move(rule));
  }

  pf.policy = random_policy(r, s, 3, 4);
  return pf;
}

}  // namespace

std::optional<Family> family_from_string(const std::string& s) {
  if (s == "mixed") return Family::Mixed;
  if (s == "ltgd-atommap") return Family::LtgdAtomMap;
  if (s == "uid-projmap") return Family::UidProjMap;
  if (s == "fr1map") return Family::Fr1Map;
  return std::nullopt;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Mixed: return "mixed";
    case Family::LtgdAtomMap: return "ltgd-atommap";
    case Family::UidProjMap: return "uid-projmap";
    case Family::Fr1Map: return "fr1map";
  }
  return "?";
}

ProblemFile random_setting(std::uint64_t seed, Family f) {
  Rng r(seed);
  switch (f) {
    case Family::Mixed: return gen_mixed(r);
    case Family::LtgdAtomMap: return gen_ltgd_atommap(r);
    case Family::UidProjMap: return gen_uid_projmap(r);
    case Family::Fr1Map: return gen_fr1map(r);
  }
  throw std::invalid_argument("unknown family");
}

uid::UidProblem random_uid_problem(std::uint64_t seed) {
  Rng r(seed);
  uid::UidProblem prob;
  SourceSchema s;
  const int n = 2 + r.upto(3);
  for (int i = 0; i < n; ++i) {
    s.pred.push_back("U" + std::to_string(i + 1));
    s.arity.push_back(1 + r.upto(3));
  }

  const int nu = 1 + r.upto(4);
  for (int c = 0; c < nu; ++c) {
    auto [from, to] = oriented(r, n, 70);
    Dependency d;
    d.body.atoms.push_back(distinct_atom(s, from));
    const int ta = s.arity[static_cast<std::size_t>(to)];
    std::vector<std::string> hargs;
    for (int k = 0; k < ta; ++k) hargs.push_back("e" + std::to_string(k + 1));
    if (r.pct(85)) {
      const int bpos = r.upto(s.arity[static_cast<std::size_t>(from)]);
      hargs[static_cast<std::size_t>(r.upto(ta))] = "x" + std::to_string(bpos + 1);
    }
    d.head.atoms.push_back(var_atom(s.pred[static_cast<std::size_t>(to)], hargs));
    d.label = "u" + std::to_string(c + 1);
    prob.deps.push_back(std::move(d));
  }

  const int nf = 1 + (r.pct(35) ? 1 : 0);
  for (int b = 0; b < nf; ++b) {
    const int i = r.upto(n);
    Fact f;
    f.pred = s.pred[static_cast<std::size_t>(i)];
    for (int k = 0; k < s.arity[static_cast<std::size_t>(i)]; ++k)
      f.args.push_back(Term::constant(r.pct(50) ? "a" : "b"));
    prob.db.insert(f);
  }

  // Connected Boolean query: each atom after the first reuses a used variable.
  const int na = 1 + r.upto(3);
  std::vector<std::string> used;
  for (int a = 0; a < na; ++a) {
    const int i = r.upto(n);
    std::vector<std::string> args;
    for (int k = 0; k < s.arity[static_cast<std::size_t>(i)]; ++k)
      args.push_back("v" + std::to_string(1 + r.upto(3)));
    if (a > 0 && !used.empty())
      args[static_cast<std::size_t>(r.upto(static_cast<int>(args.size())))] =
          used[static_cast<std::size_t>(r.upto(static_cast<int>(used.size())))];
    for (const std::string& v : args)
      if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
    prob.query.atoms.push_back(var_atom(s.pred[static_cast<std::size_t>(i)], args));
  }
  return prob;
}

}  // namespace disclose::randgen
