#include "disclose/runner.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "disclose/oracle.hpp"
#include "disclose/rewrite.hpp"
#include "disclose/uid.hpp"
#include "disclose/vischase.hpp"
#include "json.hpp"

namespace disclose::runner {

namespace {

/// Beyond this many policy variables the annotation family (2^n queries) is
/// not worth building; auto falls back to the visible chase.
constexpr std::size_t kAnnotationCap = 12;

Algo select(const std::set<DepClass>& dep, const std::set<MapClass>& map,
            const ConjunctiveQuery& p) {
  if (dep.count(DepClass::UID) && map.count(MapClass::ProjMap)) return Algo::UidPtime;
  const std::size_t vars = p.variables().size();
  if (dep.count(DepClass::LTGD) && map.count(MapClass::AtomMap) && vars <= kAnnotationCap)
    return Algo::CritRewritePtime;
  if (vars <= kAnnotationCap) return Algo::CritRewrite;
  return Algo::VisChase;
}

}  // namespace

std::optional<Algo> algo_from_string(const std::string& s) {
  if (s == "auto") return Algo::Auto;
  if (s == "vischase") return Algo::VisChase;
  if (s == "critrewrite") return Algo::CritRewrite;
  if (s == "critrewrite-ptime") return Algo::CritRewritePtime;
  if (s == "uid-ptime") return Algo::UidPtime;
  if (s == "oracle") return Algo::Oracle;
  return std::nullopt;
}

std::string to_string(Algo a) {
  switch (a) {
    case Algo::Auto: return "auto";
    case Algo::VisChase: return "vischase";
    case Algo::CritRewrite: return "critrewrite";
    case Algo::CritRewritePtime: return "critrewrite-ptime";
    case Algo::UidPtime: return "uid-ptime";
    case Algo::Oracle: return "oracle";
  }
  return "?";
}

Classification classify(const ProblemFile& pf) {
  Classification c;
  c.constraints = class_names(classify_dependencies(pf.constraints));
  c.mappings = class_names(classify_mapping(pf.mappings));
  return c;
}

Algo auto_select(const ProblemFile& pf) {
  if (!pf.policy) throw std::invalid_argument("problem file has no policy");
  ConjunctiveQuery p = *pf.policy;
  if (!p.boolean()) p = rewrite::boolify_policy(p);
  return select(classify_dependencies(pf.constraints), classify_mapping(pf.mappings), p);
}

Report run_check(const ProblemFile& pf, Algo algo, const engine::ChaseBudget& budget) {
  if (!pf.policy) throw std::invalid_argument("problem file has no policy");
  const auto dep = classify_dependencies(pf.constraints);
  const auto map = classify_mapping(pf.mappings);

  Report rep;
  rep.classes.constraints = class_names(dep);
  rep.classes.mappings = class_names(map);

  ConjunctiveQuery p = *pf.policy;
  if (!p.boolean()) {
    p = rewrite::boolify_policy(p);
    rep.notes.push_back("non-Boolean policy closed existentially with IsCrit conjuncts");
  }

  Algo chosen = algo;
  if (algo == Algo::Auto) {
    chosen = select(dep, map, p);
    rep.notes.push_back("auto-selected " + to_string(chosen));
  } else if (algo == Algo::CritRewritePtime) {
    if (!dep.count(DepClass::LTGD) || !map.count(MapClass::AtomMap))
      throw std::invalid_argument(
          "critrewrite-ptime requires linear constraints and an atomic mapping");
  } else if (algo == Algo::UidPtime) {
    if (!dep.count(DepClass::UID) || !map.count(MapClass::ProjMap))
      throw std::invalid_argument(
          "uid-ptime requires unary inclusion constraints and a projection mapping");
  }
  rep.algorithm = chosen;

  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  switch (chosen) {
    case Algo::VisChase:
      v = vischase::disclose_via_vischase(pf.constraints, pf.mappings, p, budget);
      break;
    case Algo::CritRewrite:
      v = rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, budget,
                                           rewrite::RewriteMode::Full);
      break;
    case Algo::CritRewritePtime:
      v = rewrite::disclose_via_entailment(pf.constraints, pf.mappings, p, budget,
                                           rewrite::RewriteMode::Ptime);
      break;
    case Algo::UidPtime:
      v = uid::disclose_uid_ptime(pf.constraints, pf.mappings, p, budget);
      break;
    case Algo::Oracle:
      v = oracle::oracle_disclose(pf.constraints, pf.mappings, p, budget);
      break;
    case Algo::Auto:
      throw std::logic_error("unresolved auto");
  }
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();

  rep.outcome = v.outcome;
  rep.witness = v.witness;
  rep.certificate = v.certificate;
  rep.rounds = v.rounds;
  rep.facts = v.facts;
  if (v.outcome == Outcome::Unknown) {
    rep.unknown_reason = v.note.empty() ? "budget exhausted" : v.note;
  } else if (!v.note.empty()) {
    rep.notes.push_back(v.note);
  }
  return rep;
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["verdict"] = disclose::to_string(outcome);
  j["algorithm"] = runner::to_string(algorithm);
  j["classes"]["constraints"] = classes.constraints;
  j["classes"]["mappings"] = classes.mappings;
  if (witness) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [var, val] : *witness) w[var] = val.str();
    j["witness"] = w;
  }
  j["rounds"] = rounds;
  j["facts"] = facts;
  if (outcome == Outcome::Unknown) j["unknown_reason"] = unknown_reason;
  if (certificate)
    j["certificate"] = {{"kind", certificate->kind},
                        {"rounds", certificate->rounds},
                        {"facts", certificate->facts}};
  if (!notes.empty()) j["notes"] = notes;
  j["millis"] = millis;
  return j.dump();
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "verdict: " << disclose::to_string(outcome) << "\n";
  out << "algorithm: " << runner::to_string(algorithm) << "\n";
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) {
      if (!s.empty()) s += ", ";
      s += x;
    }
    return s.empty() ? std::string("-") : s;
  };
  out << "constraints: " << join(classes.constraints) << "\n";
  out << "mappings: " << join(classes.mappings) << "\n";
  if (witness) {
    out << "witness:";
    bool first = true;
    for (const auto& [var, val] : *witness) {
      out << (first ? " " : ", ") << var << " -> " << val.str();
      first = false;
    }
    out << "\n";
  }
  if (certificate)
    out << "certificate: " << certificate->kind << " after " << certificate->rounds
        << " round(s), " << certificate->facts << " fact(s)\n";
  out << "rounds: " << rounds << "\n";
  out << "facts: " << facts << "\n";
  if (outcome == Outcome::Unknown) out << "unknown reason: " << unknown_reason << "\n";
  for (const auto& n : notes) out << "note: " << n << "\n";
  return out.str();
}

int Report::exit_code() const { return outcome == Outcome::Unknown ? 2 : 0; }

}  // namespace disclose::runner
