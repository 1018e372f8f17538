#include "disclose/vischase.hpp"

#include <set>
#include <stdexcept>

namespace disclose::vischase {

Instance critical_instance(const std::map<std::string, int>& global_arities) {
  Instance db;
  for (const auto& [pred, arity] : global_arities) {
    Fact f;
    f.pred = pred;
    f.args.assign(static_cast<std::size_t>(arity), Term::crit());
    db.insert(f);
  }
  return db;
}

Instance hide(const MappingSet& m) {
  Instance db;
  for (const auto& [global, rule] : m.rules()) {
    std::map<std::string, Term> bind;
    for (const Term& t : rule.head.atoms.front().args) bind[t.name()] = Term::crit();
    for (const std::string& v : rule.body.variables()) {
      if (!bind.count(v)) bind[v] = Term::constant("__c_" + global + "_" + v);
    }
    for (const Atom& a : rule.body.atoms) {
      Fact f;
      f.pred = a.pred;
      for (const Term& t : a.args)
        f.args.push_back(t.is_variable() ? bind.at(t.name()) : t);
      db.insert(f);
    }
  }
  return db;
}

std::vector<SceqRule> sceq_rules(const MappingSet& m) {
  std::vector<SceqRule> out;
  for (const auto& [global, rule] : m.rules()) {
    SceqRule r;
    r.body = rule.body;
    for (const Term& t : rule.head.atoms.front().args) r.targets.push_back(t.name());
    r.label = "sceq_" + global;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Term> merge_fixpoint(Instance& inst, const std::vector<SceqRule>& rules) {
  std::vector<Term> merged;
  for (;;) {
    std::set<Term> batch;
    for (const SceqRule& r : rules) {
      for (const Homomorphism& h : engine::eval_cq(inst, r.body)) {
        for (const std::string& v : r.targets) {
          const Term& val = h.at(v);
          if (!val.is_crit()) batch.insert(val);
        }
      }
    }
    if (batch.empty()) break;
    inst = inst.mapped([&](const Term& t) { return batch.count(t) ? Term::crit() : t; });
    for (const Term& t : batch) merged.push_back(t);
  }
  return merged;
}

VisibleChase::VisibleChase(const std::vector<Dependency>& sigma, const MappingSet& m,
                           std::size_t max_facts)
    : sigma_(normalize_heads(sigma)), sceqs_(sceq_rules(m)), max_facts_(max_facts) {
  state_ = hide(m);
  state_.insert(Fact{std::string(kIsCrit), {Term::crit()}});
  for (const Term& v : merge_fixpoint(state_, sceqs_)) merged_.emplace(v, 0);
}

bool VisibleChase::step() {
  if (exceeded_) return false;
  Instance before = state_;
  bool exhausted = false;
  engine::chase_round(state_, sigma_, max_facts_, exhausted);
  if (exhausted) exceeded_ = true;
  for (const Term& v : merge_fixpoint(state_, sceqs_)) merged_.emplace(v, round_ + 1);
  if (state_ == before) return false;
  ++round_;
  return true;
}

void validate_policy(const MappingSet& m, const ConjunctiveQuery& p) {
  if (!p.free_vars.empty())
    throw std::invalid_argument("policy must be Boolean; close free variables first");
  if (p.atoms.empty()) throw std::invalid_argument("policy has no atoms");
  for (const Atom& a : p.atoms) {
    if (m.rules().count(a.pred))
      throw std::invalid_argument("policy mentions global predicate '" + a.pred + "'");
  }
}

Verdict disclose_via_vischase(const std::vector<Dependency>& sigma, const MappingSet& m,
                              const ConjunctiveQuery& p,
                              const engine::ChaseBudget& budget) {
  validate_policy(m, p);
  VisibleChase vc(sigma, m, budget.max_facts);
  Verdict v;
  auto check = [&]() -> bool {
    auto h = engine::find_hom(vc.state(), p);
    if (!h) return false;
    v.outcome = Outcome::Disclosed;
    v.witness = *h;
    v.rounds = vc.round();
    v.facts = vc.state().size();
    return true;
  };
  if (check()) return v;
  for (std::size_t r = 0; r < budget.max_rounds; ++r) {
    bool changed = vc.step();
    if (check()) return v;
    if (vc.fact_budget_exceeded()) {
      v.outcome = Outcome::Unknown;
      v.note = "fact budget exhausted";
      v.rounds = vc.round();
      v.facts = vc.state().size();
      return v;
    }
    if (!changed) {
      v.outcome = Outcome::NotDisclosed;
      v.certificate = SaturationInfo{vc.round(), vc.state().size(), "visible-chase saturation"};
      v.rounds = vc.round();
      v.facts = vc.state().size();
      return v;
    }
  }
  // Round budget spent with the state still changing each round: probe
  // whether the next round would in fact be a no-op before giving up.
  Instance probe = vc.state();
  bool live = engine::has_live_trigger(probe, normalize_heads(sigma));
  if (!live) {
    for (const SceqRule& r : sceq_rules(m)) {
      for (const Homomorphism& h : engine::eval_cq(probe, r.body)) {
        for (const std::string& t : r.targets)
          if (!h.at(t).is_crit()) live = true;
      }
    }
  }
  if (!live) {
    v.outcome = Outcome::NotDisclosed;
    v.certificate = SaturationInfo{vc.round(), vc.state().size(), "visible-chase saturation"};
  } else {
    v.outcome = Outcome::Unknown;
    v.note = "round budget exhausted";
  }
  v.rounds = vc.round();
  v.facts = vc.state().size();
  return v;
}

}  // namespace disclose::vischase
