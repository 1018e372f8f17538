#include "disclose/oracle.hpp"

#include <algorithm>
#include <map>

#include "disclose/vischase.hpp"

namespace disclose::oracle {
namespace {

using FactSet = std::set<Fact>;

bool unify(const Atom& pattern, const Fact& f, Homomorphism& bind,
           std::vector<std::string>& undo) {
  if (pattern.pred != f.pred || pattern.args.size() != f.args.size()) return false;
  std::size_t bound = undo.size();
  bool ok = true;
  for (std::size_t i = 0; i < pattern.args.size() && ok; ++i) {
    const Term& t = pattern.args[i];
    if (!t.is_variable()) {
      ok = t == f.args[i];
      continue;
    }
    auto it = bind.find(t.name());
    if (it == bind.end()) {
      bind.emplace(t.name(), f.args[i]);
      undo.push_back(t.name());
    } else {
      ok = it->second == f.args[i];
    }
  }
  if (ok) return true;
  while (undo.size() > bound) {
    bind.erase(undo.back());
    undo.pop_back();
  }
  return false;
}

void match(const FactSet& facts, const std::vector<Atom>& atoms, std::size_t i,
           Homomorphism& bind, std::vector<Homomorphism>& out) {
  if (i == atoms.size()) {
    out.push_back(bind);
    return;
  }
  for (const Fact& f : facts) {
    std::vector<std::string> undo;
    if (unify(atoms[i], f, bind, undo)) {
      match(facts, atoms, i + 1, bind, out);
      for (const std::string& v : undo) bind.erase(v);
    }
  }
}

std::vector<std::string> body_vars(const Dependency& d) { return d.body.variables(); }

struct Chaser {
  FactSet facts;
  std::vector<Dependency> sigma;
  std::vector<vischase::SceqRule> sceqs;
  // (rule index, body binding in body-variable order); rewritten on merge.
  std::set<std::pair<std::size_t, std::vector<Term>>> fired;

  bool insert(const Fact& f) { return facts.insert(f).second; }

  std::size_t merge_pass() {
    std::size_t merges = 0;
    for (;;) {
      std::set<Term> batch;
      for (const auto& r : sceqs) {
        std::vector<Homomorphism> homs;
        Homomorphism bind;
        match(facts, r.body.atoms, 0, bind, homs);
        for (const auto& h : homs)
          for (const auto& v : r.targets)
            if (!h.at(v).is_crit()) batch.insert(h.at(v));
      }
      if (batch.empty()) return merges;
      auto sub = [&](const Term& t) { return batch.count(t) ? Term::crit() : t; };
      FactSet next;
      for (const Fact& f : facts) {
        Fact g = f;
        for (Term& t : g.args) t = sub(t);
        next.insert(std::move(g));
      }
      facts.swap(next);
      std::set<std::pair<std::size_t, std::vector<Term>>> nf;
      for (const auto& [idx, vals] : fired) {
        std::vector<Term> w = vals;
        for (Term& t : w) t = sub(t);
        nf.emplace(idx, std::move(w));
      }
      fired.swap(nf);
      merges += batch.size();
    }
  }

  // One oblivious round: fire every not-yet-fired trigger found against the
  // round-start state.  Returns number of newly added facts.
  std::size_t round(std::size_t max_facts, bool& exhausted) {
    struct Firing {
      std::size_t idx;
      std::vector<Term> key;
      Homomorphism bind;
    };
    std::vector<Firing> todo;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      std::vector<Homomorphism> homs;
      Homomorphism bind;
      match(facts, sigma[i].body.atoms, 0, bind, homs);
      for (const auto& h : homs) {
        std::vector<Term> key;
        for (const auto& v : body_vars(sigma[i])) key.push_back(h.at(v));
        if (!fired.count({i, key})) todo.push_back({i, key, h});
      }
    }
    std::size_t added = 0;
    for (auto& t : todo) {
      if (!fired.insert({t.idx, t.key}).second) continue;
      const Dependency& d = sigma[t.idx];
      Homomorphism h = t.bind;
      for (const std::string& e : d.existentials()) h[e] = Term::fresh_null();
      for (const Atom& a : d.head.atoms) {
        Fact f;
        f.pred = a.pred;
        for (const Term& arg : a.args)
          f.args.push_back(arg.is_variable() ? h.at(arg.name()) : arg);
        if (insert(f)) ++added;
      }
      if (facts.size() > max_facts) {
        exhausted = true;
        return added;
      }
    }
    return added;
  }
};

}  // namespace

std::vector<Homomorphism> naive_eval(const std::set<Fact>& facts, const ConjunctiveQuery& q) {
  std::vector<Homomorphism> out;
  Homomorphism bind;
  match(facts, q.atoms, 0, bind, out);
  return out;
}

Verdict oracle_disclose(const std::vector<Dependency>& sigma, const MappingSet& m,
                        const ConjunctiveQuery& p, const engine::ChaseBudget& budget) {
  vischase::validate_policy(m, p);
  Chaser c;
  c.sigma = sigma;
  c.sceqs = vischase::sceq_rules(m);
  for (const Fact& f : vischase::hide(m).sorted_facts()) c.facts.insert(f);
  c.facts.insert(Fact{std::string(kIsCrit), {Term::crit()}});
  c.merge_pass();

  Verdict v;
  auto hit = [&]() -> bool {
    std::vector<Homomorphism> homs;
    Homomorphism bind;
    match(c.facts, p.atoms, 0, bind, homs);
    if (homs.empty()) return false;
    v.outcome = Outcome::Disclosed;
    v.witness = homs.front();
    return true;
  };

  std::size_t r = 0;
  for (;; ++r) {
    if (hit()) break;
    if (r == budget.max_rounds || c.facts.size() >= budget.max_facts) {
      v.outcome = Outcome::Unknown;
      v.note = "oracle budget exhausted";
      break;
    }
    bool exhausted = false;
    std::size_t added = c.round(budget.max_facts, exhausted);
    std::size_t merges = c.merge_pass();
    if (exhausted) {
      if (hit()) break;
      v.outcome = Outcome::Unknown;
      v.note = "oracle budget exhausted";
      break;
    }
    if (added == 0 && merges == 0) {
      v.outcome = Outcome::NotDisclosed;
      v.certificate = SaturationInfo{r, c.facts.size(), "oblivious-chase saturation"};
      break;
    }
  }
  v.rounds = r;
  v.facts = c.facts.size();
  return v;
}

}  // namespace disclose::oracle
