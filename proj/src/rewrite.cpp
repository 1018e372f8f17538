#include "disclose/rewrite.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "disclose/vischase.hpp"

namespace disclose::rewrite {
namespace {

std::string copy_name(const std::string& v, int occurrence) {
  return v + "@" + std::to_string(occurrence);
}

bool has_repeated_var_across(const std::vector<Atom>& atoms) {
  std::map<std::string, int> count;
  for (const Atom& a : atoms)
    for (const Term& t : a.args)
      if (t.is_variable() && ++count[t.name()] > 1) return true;
  return false;
}

}  // namespace

std::vector<std::vector<std::string>> annotations_of(const std::vector<std::string>& vars) {
  std::vector<std::vector<std::string>> out;
  const int n = static_cast<int>(vars.size());
  for (int k = 0; k <= n; ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
      std::vector<std::string> a;
      for (int i : idx) a.push_back(vars[static_cast<std::size_t>(i)]);
      out.push_back(std::move(a));
      int j = k - 1;
      while (j >= 0 && idx[static_cast<std::size_t>(j)] == n - k + j) --j;
      if (j < 0) break;
      ++idx[static_cast<std::size_t>(j)];
      for (int i = j + 1; i < k; ++i)
        idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return out;
}

ConjunctiveQuery apply_annotation(const ConjunctiveQuery& q,
                                  const std::vector<std::string>& annot) {
  std::set<std::string> marked(annot.begin(), annot.end());
  std::map<std::string, int> seen;
  std::map<std::string, std::vector<std::string>> copies;
  ConjunctiveQuery out;
  out.free_vars = q.free_vars;
  for (const Atom& a : q.atoms) {
    Atom b = a;
    for (Term& t : b.args) {
      if (!t.is_variable() || !marked.count(t.name())) continue;
      int occ = ++seen[t.name()];
      if (occ > 1) {
        std::string c = copy_name(t.name(), occ);
        copies[t.name()].push_back(c);
        t = Term::variable(c);
      }
    }
    out.atoms.push_back(std::move(b));
  }
  for (const std::string& v : annot) {
    out.atoms.push_back(var_atom(std::string(kIsCrit), {v}));
    for (const std::string& c : copies[v])
      out.atoms.push_back(var_atom(std::string(kIsCrit), {c}));
  }
  return out;
}

std::vector<ConjunctiveQuery> crit_rewrite_query(const ConjunctiveQuery& q) {
  std::vector<ConjunctiveQuery> out;
  for (const auto& a : annotations_of(q.variables())) out.push_back(apply_annotation(q, a));
  return out;
}

std::vector<Dependency> crit_rewrite_dep(const Dependency& d) {
  if (!has_repeated_var_across(d.body.atoms)) return {d};
  std::vector<Dependency> out;
  const auto annots = annotations_of(d.body.variables());
  for (std::size_t i = 0; i < annots.size(); ++i) {
    Dependency r;
    r.body = apply_annotation(d.body, annots[i]);
    r.head = d.head;
    r.label = d.label + "#" + std::to_string(i);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Dependency> crit_rewrite_deps(const std::vector<Dependency>& deps) {
  std::vector<Dependency> out;
  for (const Dependency& d : deps)
    for (Dependency& r : crit_rewrite_dep(d)) out.push_back(std::move(r));
  return out;
}

std::vector<Dependency> iscrit_rules(const MappingSet& m) {
  std::vector<Dependency> out;
  for (const auto& [global, arity] : m.global_arities()) {
    std::vector<std::string> vars;
    for (int i = 0; i < arity; ++i) vars.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < arity; ++i) {
      Dependency d;
      d.body.atoms.push_back(var_atom(global, vars));
      d.head.atoms.push_back(var_atom(std::string(kIsCrit), {vars[static_cast<std::size_t>(i)]}));
      d.label = "iscrit_" + global + "_" + std::to_string(i + 1);
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<std::pair<int, int>> repeated_pairs(const Atom& body) {
  std::vector<std::pair<int, int>> out;
  const int k = body.arity();
  for (int e = 0; e < k; ++e) {
    if (!body.args[static_cast<std::size_t>(e)].is_variable()) continue;
    for (int f = e + 1; f < k; ++f) {
      if (body.args[static_cast<std::size_t>(e)] == body.args[static_cast<std::size_t>(f)])
        out.emplace_back(e + 1, f + 1);
    }
  }
  return out;
}

std::vector<Dependency> crit_rewrite_ptime(const Dependency& d) {
  if (d.body.atoms.size() != 1)
    throw std::invalid_argument("polynomial rewriting needs a single-atom body: " + d.str());
  const Atom& body = d.body.atoms.front();
  const auto pairs = repeated_pairs(body);
  if (pairs.empty()) return {d};

  const int k = body.arity();
  auto wvar = [](int i) { return Term::variable("w@" + std::to_string(i + 1)); };
  const std::string tag = d.label.empty() ? "r" : d.label;
  auto aux = [&](const std::pair<int, int>& p) {
    return "__B_" + std::to_string(p.first) + "_" + std::to_string(p.second) + "_" + tag;
  };

  std::vector<Dependency> out;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto [e1, f1] = pairs[j];
    const int e = e1 - 1, f = f1 - 1;
    const std::string prev = j == 0 ? body.pred : aux(pairs[j - 1]);
    const std::string cur = aux(pairs[j]);

    std::vector<Term> merged, plain;
    for (int i = 0; i < k; ++i) {
      plain.push_back(wvar(i));
      merged.push_back(wvar(i == f ? e : i));
    }
    Dependency collapse;
    collapse.body.atoms.emplace_back(prev, merged);
    collapse.head.atoms.emplace_back(cur, merged);
    collapse.label = d.label + "#s" + std::to_string(j) + "a";
    out.push_back(std::move(collapse));

    Dependency viacrit;
    viacrit.body.atoms.emplace_back(prev, plain);
    viacrit.body.atoms.push_back(var_atom(std::string(kIsCrit), {wvar(e).name()}));
    viacrit.body.atoms.push_back(var_atom(std::string(kIsCrit), {wvar(f).name()}));
    viacrit.head.atoms.emplace_back(cur, plain);
    viacrit.label = d.label + "#s" + std::to_string(j) + "b";
    out.push_back(std::move(viacrit));
  }

  Dependency fin;
  std::map<std::string, int> seen;
  std::vector<Term> args;
  for (const Term& t : body.args) {
    if (t.is_variable() && ++seen[t.name()] > 1)
      args.push_back(Term::variable(copy_name(t.name(), seen[t.name()])));
    else
      args.push_back(t);
  }
  fin.body.atoms.emplace_back(aux(pairs.back()), args);
  fin.head = d.head;
  fin.label = d.label + "#f";
  out.push_back(std::move(fin));
  return out;
}

std::vector<Dependency> crit_rewrite_ptime(const std::vector<Dependency>& deps) {
  std::vector<Dependency> out;
  for (const Dependency& d : deps)
    for (Dependency& r : crit_rewrite_ptime(d)) out.push_back(std::move(r));
  return out;
}

ConjunctiveQuery boolify_policy(const ConjunctiveQuery& p) {
  ConjunctiveQuery out;
  out.atoms = p.atoms;
  for (const std::string& v : p.free_vars)
    out.atoms.push_back(var_atom(std::string(kIsCrit), {v}));
  return out;
}

RewriteBundle build_bundle(const std::vector<Dependency>& sigma, const MappingSet& m,
                           const ConjunctiveQuery& p, RewriteMode mode) {
  RewriteBundle b;
  std::vector<Dependency> rules = normalize_heads(sigma);
  for (const auto& [global, rule] : m.rules()) rules.push_back(rule);
  if (mode == RewriteMode::Full) {
    b.constraints = crit_rewrite_deps(rules);
  } else {
    b.constraints = crit_rewrite_ptime(rules);
  }
  for (Dependency& d : iscrit_rules(m)) b.constraints.push_back(std::move(d));
  b.queries = crit_rewrite_query(p);
  b.base = vischase::hide(m);
  return b;
}

Verdict disclose_via_entailment(const std::vector<Dependency>& sigma, const MappingSet& m,
                                const ConjunctiveQuery& p, const engine::ChaseBudget& budget,
                                RewriteMode mode) {
  vischase::validate_policy(m, p);
  Verdict v;
  if (p.variables().size() > 16) {
    v.outcome = Outcome::Unknown;
    v.note = "annotation family too large (2^" + std::to_string(p.variables().size()) +
             " rewritings)";
    return v;
  }
  RewriteBundle b = build_bundle(sigma, m, p, mode);
  engine::EntailResult r = engine::entails_any(b.base, b.constraints, b.queries, budget);
  v.rounds = r.rounds;
  v.facts = r.facts;
  switch (r.status) {
    case engine::EntailStatus::Entailed:
      v.outcome = Outcome::Disclosed;
      v.witness = r.witness;
      v.note = "annotation " + std::to_string(r.which_query);
      break;
    case engine::EntailStatus::NotEntailed:
      v.outcome = Outcome::NotDisclosed;
      v.certificate = SaturationInfo{r.rounds, r.facts, "critical-instance entailment saturation"};
      break;
    case engine::EntailStatus::Unknown:
      v.outcome = Outcome::Unknown;
      v.note = "entailment budget exhausted";
      break;
  }
  return v;
}

ProjReduction reduce_to_projmap(const std::vector<Dependency>& sigma, const MappingSet& m) {
  ProjReduction out;
  std::vector<Dependency> extra;
  for (const auto& [global, rule] : m.rules()) {
    const std::string reified = "__r_" + global;
    const std::vector<std::string> vars = rule.body.variables();
    Atom r_atom = var_atom(reified, vars);

    Dependency fwd;
    fwd.body = rule.body;
    fwd.head.atoms.push_back(r_atom);
    fwd.label = "fwd_" + global;
    extra.push_back(std::move(fwd));

    Dependency bwd;
    bwd.body.atoms.push_back(r_atom);
    bwd.head = rule.body;
    bwd.label = "bwd_" + global;
    extra.push_back(std::move(bwd));

    Dependency proj;
    proj.body.atoms.push_back(r_atom);
    proj.head = rule.head;
    proj.label = rule.label;
    out.m.add(std::move(proj));
  }
  std::vector<Dependency> all = sigma;
  for (Dependency& d : extra) all.push_back(std::move(d));
  out.sigma = normalize_heads(all);
  return out;
}

SceqReduction sceq_to_fgtgd(const std::vector<Dependency>& sigma, const MappingSet& m) {
  SceqReduction out;
  std::vector<Dependency> all = sigma;
  for (const auto& [global, rule] : m.rules()) {
    const auto frontier = rule.frontier();
    if (frontier.size() > 1)
      throw std::invalid_argument("sceq_to_fgtgd needs frontier size <= 1, rule for '" +
                                  global + "' has " + std::to_string(frontier.size()));
    const std::string trigger = "__a_" + global;

    Dependency init;
    init.body.atoms.emplace_back(trigger, std::vector<Term>{});
    init.head = rule.body;
    init.label = "init_" + global;
    all.push_back(std::move(init));

    if (frontier.size() == 1) {
      Dependency mark;
      mark.body = rule.body;
      mark.head.atoms.push_back(var_atom(std::string(kIsCrit), {frontier.front()}));
      mark.label = "crit_" + global;
      all.push_back(std::move(mark));
    }

    Dependency view;
    view.body.atoms.emplace_back(trigger, std::vector<Term>{});
    view.head.atoms.emplace_back("__V_" + global, std::vector<Term>{});
    view.label = "view_" + global;
    out.m.add(std::move(view));
  }
  Dependency critview;
  critview.body.atoms.push_back(var_atom(std::string(kIsCrit), {"x"}));
  critview.head.atoms.push_back(var_atom("__CritView", {"x"}));
  critview.label = "critview";
  out.m.add(std::move(critview));
  out.sigma = normalize_heads(all);
  return out;
}

}  // namespace disclose::rewrite
