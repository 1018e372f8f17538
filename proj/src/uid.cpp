#include "disclose/uid.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "disclose/vischase.hpp"

namespace disclose::uid {
namespace {

using Pos = std::pair<std::string, int>;  // (predicate, 0-based position)

void note_arity(std::map<std::string, int>& ar, const Atom& a) {
  auto [it, fresh] = ar.emplace(a.pred, a.arity());
  if (!fresh && it->second != a.arity())
    throw std::invalid_argument("arity conflict for predicate '" + a.pred + "'");
}

std::string trunc_name(const std::string& pred) { return pred + "~"; }

// ---------------------------------------------------------------------------
// Shape reasoning over binary UIDs.
//
// A shape is an incidence of a value in a fact: (P, 0) for a unary fact P(v),
// (P, 1) / (P, 2) for a binary fact with v first / second.  Single-atom
// bodies mean derivability at a fixed value is plain reachability over
// shapes; reach(s) is the set of shapes guaranteed to occur at any value
// carrying shape s.
// ---------------------------------------------------------------------------

class ShapeReasoner {
 public:
  explicit ShapeReasoner(const std::vector<Dependency>& deps) : deps_(deps) {
    for (const Dependency& d : deps) {
      if (!classify_dependency(d).count(DepClass::UID))
        throw std::invalid_argument("shape reasoner needs UIDs: " + d.str());
      const Atom& b = d.body.atoms.front();
      const Atom& h = d.head.atoms.front();
      if (b.arity() > 2 || h.arity() > 2)
        throw std::invalid_argument("shape reasoner needs arity <= 2: " + d.str());
      register_pred(b);
      register_pred(h);
      const auto frontier = d.frontier();
      if (frontier.empty()) {
        Frontier0 f0;
        f0.body_pred = b.pred;
        for (int s : shapes_of(h)) f0.heads.push_back(s);
        f0s_.push_back(std::move(f0));
        continue;
      }
      const std::string& x = frontier.front();
      succ_[sid_at(b, x)].push_back(sid_at(h, x));
    }
  }

  int sid(const std::string& pred, int pos) {
    auto [it, fresh] = ids_.emplace(Pos{pred, pos}, static_cast<int>(names_.size()));
    if (fresh) names_.push_back({pred, pos});
    return it->second;
  }

  const Pos& name(int s) const { return names_[static_cast<std::size_t>(s)]; }
  bool is_binary(int s) const { return name(s).second != 0; }
  int partner(int s) {
    const Pos& p = name(s);
    return sid(p.first, p.second == 1 ? 2 : 1);
  }

  const std::set<int>& reach(int s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    std::set<int> r{s};
    std::deque<int> q{s};
    while (!q.empty()) {
      int cur = q.front();
      q.pop_front();
      auto sit = succ_.find(cur);
      if (sit == succ_.end()) continue;
      for (int nxt : sit->second)
        if (r.insert(nxt).second) q.push_back(nxt);
    }
    return memo_.emplace(s, std::move(r)).first->second;
  }

  /// Shapes derivable at the value by at least one rule application.
  bool proper(int seed, int target) {
    auto it = succ_.find(seed);
    if (it == succ_.end()) return false;
    for (int nxt : it->second)
      if (reach(nxt).count(target)) return true;
    return false;
  }

  bool proper_from_set(const std::set<int>& seeds, int target) {
    for (int s : seeds)
      if (proper(s, target)) return true;
    return false;
  }

  std::set<int> reach_of_set(const std::set<int>& seeds) {
    std::set<int> out;
    for (int s : seeds) {
      const auto& r = reach(s);
      out.insert(r.begin(), r.end());
    }
    return out;
  }

  std::set<std::string> labels_in(const std::set<int>& shapes) {
    std::set<std::string> out;
    for (int s : shapes)
      if (!is_binary(s)) out.insert(name(s).first);
    return out;
  }

  std::vector<int> shapes_of(const Atom& a) {
    if (a.arity() == 0)
      throw std::invalid_argument("nullary atom in binary schema: " + a.str());
    if (a.arity() == 1) return {sid(a.pred, 0)};
    return {sid(a.pred, 1), sid(a.pred, 2)};
  }

  /// Shapes realizable at some value of the chase of db.
  std::set<int> global_shapes(const Instance& db) {
    std::set<int> g;
    for (const Fact& f : db.sorted_facts())
      for (int s : shapes_of(f)) g.insert(s);
    for (;;) {
      const std::size_t before = g.size();
      std::set<int> grown = g;
      for (int s : g) {
        for (int r : reach(s)) {
          grown.insert(r);
          if (is_binary(r)) grown.insert(partner(r));
        }
      }
      std::set<std::string> preds;
      for (int s : grown) preds.insert(name(s).first);
      for (const Frontier0& f : f0s_) {
        if (!preds.count(f.body_pred)) continue;
        for (int h : f.heads) grown.insert(h);
      }
      g.swap(grown);
      if (g.size() == before) return g;
    }
  }

 private:
  struct Frontier0 {
    std::string body_pred;
    std::vector<int> heads;
  };

  void register_pred(const Atom& a) { (void)shapes_of(a); }

  int sid_at(const Atom& a, const std::string& var) {
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (a.args[i].is_variable() && a.args[i].name() == var)
        return a.arity() == 1 ? sid(a.pred, 0) : sid(a.pred, static_cast<int>(i) + 1);
    }
    throw std::logic_error("frontier variable not in atom");
  }

  std::vector<Dependency> deps_;
  std::map<Pos, int> ids_;
  std::vector<Pos> names_;
  std::map<int, std::vector<int>> succ_;
  std::map<int, std::set<int>> memo_;
  std::vector<Frontier0> f0s_;
};

// ---------------------------------------------------------------------------
// Tree matching of one component against the chase forest.
// ---------------------------------------------------------------------------

struct Decider {
  ShapeReasoner reasoner;
  std::set<int> global;
  std::vector<Term> values;
  std::map<Term, std::set<int>> base_shapes;
  std::vector<Fact> base_binary;

  // component structure
  std::vector<std::string> nodes;
  std::map<std::string, std::set<std::string>> unary;
  std::map<std::string, std::map<std::string, std::vector<Atom>>> adj;
  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, std::string> parent;
  bool shape_ok = true;  // tree-shaped and variable-only

  Decider(const Instance& db, const std::vector<Dependency>& deps,
          const ConjunctiveQuery& comp)
      : reasoner(deps) {
    global = reasoner.global_shapes(db);
    std::set<Term> vs;
    for (const Fact& f : db.sorted_facts()) {
      if (f.arity() == 1) {
        base_shapes[f.args[0]].insert(reasoner.sid(f.pred, 0));
        vs.insert(f.args[0]);
      } else if (f.arity() == 2) {
        base_shapes[f.args[0]].insert(reasoner.sid(f.pred, 1));
        base_shapes[f.args[1]].insert(reasoner.sid(f.pred, 2));
        vs.insert(f.args[0]);
        vs.insert(f.args[1]);
        base_binary.push_back(f);
      } else {
        throw std::invalid_argument("decide needs a binarized base, got " + f.str());
      }
    }
    values.assign(vs.begin(), vs.end());
    build_component(comp);
  }

  void build_component(const ConjunctiveQuery& comp) {
    std::set<std::string> seen;
    auto touch = [&](const Term& t) {
      if (!t.is_variable())
        throw std::invalid_argument("decide needs a constant-free component");
      if (seen.insert(t.name()).second) nodes.push_back(t.name());
    };
    std::set<std::pair<std::string, std::string>> pairs;
    for (const Atom& a : comp.atoms) {
      if (a.arity() == 1) {
        touch(a.args[0]);
        unary[a.args[0].name()].insert(a.pred);
      } else if (a.arity() == 2) {
        touch(a.args[0]);
        touch(a.args[1]);
        const std::string u = a.args[0].name(), v = a.args[1].name();
        if (u == v) {
          shape_ok = false;  // no chase fact repeats a value
          continue;
        }
        adj[u][v].push_back(a);
        adj[v][u].push_back(a);
        pairs.insert({std::min(u, v), std::max(u, v)});
      } else {
        throw std::invalid_argument("decide needs unary/binary atoms, got " + a.str());
      }
    }
    if (nodes.empty()) return;
    if (pairs.size() != nodes.size() - 1) {
      shape_ok = false;  // cycle (or disconnected input)
      return;
    }
    std::set<std::string> reached{nodes.front()};
    std::deque<std::string> q{nodes.front()};
    while (!q.empty()) {
      std::string cur = q.front();
      q.pop_front();
      for (const auto& [nxt, atoms] : adj[cur])
        if (reached.insert(nxt).second) q.push_back(nxt);
    }
    if (reached.size() != nodes.size()) shape_ok = false;
  }

  void arrange(const std::string& root) {
    children.clear();
    parent.clear();
    std::set<std::string> done{root};
    std::deque<std::string> q{root};
    while (!q.empty()) {
      std::string cur = q.front();
      q.pop_front();
      children[cur];
      for (const auto& [nxt, atoms] : adj[cur]) {
        if (!done.insert(nxt).second) continue;
        parent[nxt] = cur;
        children[cur].push_back(nxt);
        q.push_back(nxt);
      }
    }
  }

  // Side of `var` in binary atom `a`: 1 or 2.
  static int side(const Atom& a, const std::string& var) {
    return a.args[0].is_variable() && a.args[0].name() == var ? 1 : 2;
  }

  bool labels_ok(const std::string& node, const std::set<int>& closure) {
    auto it = unary.find(node);
    if (it == unary.end()) return true;
    const auto have = reasoner.labels_in(closure);
    for (const std::string& p : it->second)
      if (!have.count(p)) return false;
    return true;
  }

  /// node mapped to a fresh chase value whose creating fact has shape `seed`
  /// at it.  `coslot`: the creating fact's other side is still unclaimed, so
  /// one child edge matching the seed shape exactly may map there.
  bool check_fresh(const std::string& node, int seed, bool coslot) {
    const auto& closure = reasoner.reach(seed);
    if (!labels_ok(node, closure)) return false;
    for (const std::string& child : children[node]) {
      const auto& atoms = adj[node][child];
      if (atoms.size() > 1) return false;  // one fact per fresh pair
      const Atom& a = atoms.front();
      const int here = reasoner.sid(a.pred, side(a, node));
      const int there = reasoner.sid(a.pred, side(a, child));
      if (here == seed) {
        if (!coslot) return false;  // forking elimination rules this out
        if (!check_fresh(child, there, false)) return false;
        continue;
      }
      if (!closure.count(here)) return false;
      if (!check_fresh(child, there, false)) return false;
    }
    return true;
  }

  /// node mapped to the given base value.
  bool check_base(const std::string& node, const Term& v) {
    auto bs = base_shapes.find(v);
    const std::set<int> seeds = bs == base_shapes.end() ? std::set<int>{} : bs->second;
    if (!labels_ok(node, reasoner.reach_of_set(seeds))) return false;
    for (const std::string& child : children[node]) {
      const auto& atoms = adj[node][child];
      bool ok = false;
      for (const Term& u : values) {  // neighbor inside the base
        bool all = true;
        for (const Atom& a : atoms) {
          Fact want;
          want.pred = a.pred;
          want.args = side(a, node) == 1 ? std::vector<Term>{v, u} : std::vector<Term>{u, v};
          if (!std::binary_search(base_binary.begin(), base_binary.end(), want)) {
            all = false;
            break;
          }
        }
        if (all && check_base(child, u)) {
          ok = true;
          break;
        }
      }
      if (!ok && atoms.size() == 1) {  // freshly derived child
        const Atom& a = atoms.front();
        const int here = reasoner.sid(a.pred, side(a, node));
        const int there = reasoner.sid(a.pred, side(a, child));
        if (reasoner.proper_from_set(seeds, here) && check_fresh(child, there, false)) ok = true;
      }
      if (!ok) return false;
    }
    return true;
  }

  bool run() {
    if (nodes.empty()) return true;
    if (!shape_ok) return false;
    for (const std::string& root : nodes) {
      arrange(root);
      for (const Term& v : values)
        if (check_base(root, v)) return true;
      for (int s : global)
        if (check_fresh(root, s, reasoner.is_binary(s))) return true;
    }
    return false;
  }

  bool run_pinned(const std::string& var, const Term& v) {
    if (nodes.empty()) return true;
    if (!shape_ok) return false;
    if (std::find(nodes.begin(), nodes.end(), var) == nodes.end())
      throw std::invalid_argument("pinned variable not in component");
    arrange(var);
    return check_base(var, v);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// reduce_uid
// ---------------------------------------------------------------------------

UidReduction reduce_uid(const std::vector<Dependency>& sigma, const MappingSet& m,
                        const ConjunctiveQuery& p) {
  if (!classify_dependencies(sigma).count(DepClass::UID))
    throw std::invalid_argument("reduce_uid needs unary inclusion dependencies");
  if (!classify_mapping(m).count(MapClass::ProjMap))
    throw std::invalid_argument("reduce_uid needs a projection mapping");
  vischase::validate_policy(m, p);

  // Predicate arities over the source schema.
  std::map<std::string, int> source;
  for (const Dependency& d : sigma) {
    for (const Atom& a : d.body.atoms) note_arity(source, a);
    for (const Atom& a : d.head.atoms) note_arity(source, a);
  }
  for (const auto& [global, rule] : m.rules())
    for (const Atom& a : rule.body.atoms) note_arity(source, a);
  for (const Atom& a : p.atoms) {
    if (a.pred == kIsCrit) {
      if (a.arity() != 1) throw std::invalid_argument("IsCrit takes one argument");
      continue;
    }
    note_arity(source, a);
  }

  // Position flow graph over sigma plus the forward mapping rules; a source
  // position is visible when it forward-reaches any global position.
  std::map<Pos, std::set<Pos>> flow;
  auto link = [&](const ConjunctiveQuery& body, const ConjunctiveQuery& head) {
    std::map<std::string, std::vector<Pos>> at_body, at_head;
    auto scan = [](const ConjunctiveQuery& q, std::map<std::string, std::vector<Pos>>& out) {
      for (const Atom& a : q.atoms)
        for (std::size_t i = 0; i < a.args.size(); ++i)
          if (a.args[i].is_variable())
            out[a.args[i].name()].push_back({a.pred, static_cast<int>(i)});
    };
    scan(body, at_body);
    scan(head, at_head);
    for (const auto& [v, bps] : at_body) {
      auto it = at_head.find(v);
      if (it == at_head.end()) continue;
      for (const Pos& b : bps)
        for (const Pos& h : it->second) flow[b].insert(h);
    }
  };
  for (const Dependency& d : sigma) link(d.body, d.head);
  for (const auto& [global, rule] : m.rules()) link(rule.body, rule.head);

  std::map<Pos, std::set<Pos>> rev;
  for (const auto& [from, tos] : flow)
    for (const Pos& to : tos) rev[to].insert(from);

  UidReduction out;
  {
    std::deque<Pos> q;
    std::set<Pos> seen;
    for (const auto& [global, arity] : m.global_arities())
      for (int i = 0; i < arity; ++i) {
        Pos g{global, i};
        if (seen.insert(g).second) q.push_back(g);
      }
    while (!q.empty()) {
      Pos cur = q.front();
      q.pop_front();
      auto it = rev.find(cur);
      if (it == rev.end()) continue;
      for (const Pos& prev : it->second)
        if (seen.insert(prev).second) q.push_back(prev);
    }
    for (const Pos& s : seen)
      if (source.count(s.first)) out.visible.insert({s.first, s.second + 1});
  }

  // Predicate-level reachability from the mapping bodies: those predicates
  // are nonempty in every instance consistent with the critical image.
  {
    std::map<std::string, std::set<std::string>> edges;
    for (const Dependency& d : sigma)
      edges[d.body.atoms.front().pred].insert(d.head.atoms.front().pred);
    for (const auto& [global, rule] : m.rules()) {
      edges[rule.body.atoms.front().pred].insert(global);
      edges[global].insert(rule.body.atoms.front().pred);
    }
    std::deque<std::string> q;
    std::set<std::string> seen;
    for (const auto& [global, rule] : m.rules()) {
      const std::string& P = rule.body.atoms.front().pred;
      if (seen.insert(P).second) q.push_back(P);
    }
    while (!q.empty()) {
      std::string cur = q.front();
      q.pop_front();
      for (const std::string& nxt : edges[cur])
        if (seen.insert(nxt).second) q.push_back(nxt);
    }
    for (const std::string& P : seen)
      if (source.count(P)) out.reachable.insert(P);
  }

  auto is_visible = [&](const std::string& pred, int pos0) {
    return out.visible.count({pred, pos0 + 1}) != 0;
  };
  for (const auto& [pred, arity] : source) {
    auto& ks = out.kept[pred];
    for (int i = 0; i < arity; ++i)
      if (!is_visible(pred, i)) ks.push_back(i + 1);
  }

  auto trunc_atom = [&](const Atom& a) {
    Atom t;
    t.pred = trunc_name(a.pred);
    for (int pos1 : out.kept.at(a.pred)) t.args.push_back(a.args[static_cast<std::size_t>(pos1 - 1)]);
    return t;
  };

  // Existence rules: any critical value spawns one tuple per reachable
  // predicate (the hidden witnesses and everything they imply).
  for (const std::string& P : out.reachable) {
    Dependency d;
    d.body.atoms.push_back(var_atom(std::string(kIsCrit), {"w"}));
    Atom head;
    head.pred = trunc_name(P);
    for (std::size_t i = 0; i < out.kept.at(P).size(); ++i)
      head.args.push_back(Term::variable("u" + std::to_string(i + 1)));
    d.head.atoms.push_back(std::move(head));
    d.label = "reach_" + P;
    out.sigma.push_back(std::move(d));
  }

  // Truncated constraints.
  for (const Dependency& d : sigma) {
    const Atom& b = d.body.atoms.front();
    const Atom& h = d.head.atoms.front();
    const auto frontier = d.frontier();
    if (frontier.empty()) {
      Dependency t;
      t.body.atoms.push_back(trunc_atom(b));
      t.head.atoms.push_back(trunc_atom(h));
      t.label = "inv_" + d.label;
      out.sigma.push_back(std::move(t));
      continue;
    }
    const std::string& x = frontier.front();
    int bi = -1, hj = -1;
    for (std::size_t i = 0; i < b.args.size(); ++i)
      if (b.args[i].is_variable() && b.args[i].name() == x) bi = static_cast<int>(i);
    for (std::size_t j = 0; j < h.args.size(); ++j)
      if (h.args[j].is_variable() && h.args[j].name() == x) hj = static_cast<int>(j);
    const bool bvis = is_visible(b.pred, bi);
    const bool hvis = is_visible(h.pred, hj);
    if (!bvis && hvis)
      throw std::logic_error("visibility must propagate backward along exports");
    if (bvis && !hvis) {
      if (!out.reachable.count(b.pred)) continue;  // never fires
      Dependency t;
      t.body.atoms.push_back(var_atom(std::string(kIsCrit), {x}));
      t.head.atoms.push_back(trunc_atom(h));
      t.label = "crit_" + d.label;
      out.sigma.push_back(std::move(t));
    } else {
      // Shared variable survives iff both sides keep it (bvis == hvis == false);
      // otherwise this degenerates to pure existence propagation.
      Dependency t;
      t.body.atoms.push_back(trunc_atom(b));
      t.head.atoms.push_back(trunc_atom(h));
      t.label = "inv_" + d.label;
      out.sigma.push_back(std::move(t));
    }
  }

  // Truncated policy.
  std::map<std::string, bool> at_vis, at_inv, at_crit;
  for (const Atom& a : p.atoms) {
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!a.args[i].is_variable()) continue;
      const std::string& v = a.args[i].name();
      if (a.pred == kIsCrit)
        at_crit[v] = true;
      else if (is_visible(a.pred, static_cast<int>(i)))
        at_vis[v] = true;
      else
        at_inv[v] = true;
    }
  }
  for (const Atom& a : p.atoms) {
    if (a.pred == kIsCrit) continue;
    out.query.atoms.push_back(trunc_atom(a));
  }
  for (const std::string& v : p.variables())
    if (at_inv[v] && (at_vis[v] || at_crit[v]))
      out.query.atoms.push_back(var_atom(std::string(kIsCrit), {v}));

  out.base.insert(Fact{std::string(kIsCrit), {Term::crit()}});
  return out;
}

// ---------------------------------------------------------------------------
// binarize
// ---------------------------------------------------------------------------

UidProblem binarize(const UidProblem& in) {
  std::map<std::string, int> arity;
  for (const Fact& f : in.db.sorted_facts()) note_arity(arity, f);
  for (const Dependency& d : in.deps) {
    if (!classify_dependency(d).count(DepClass::UID))
      throw std::invalid_argument("binarize needs UIDs: " + d.str());
    note_arity(arity, d.body.atoms.front());
    note_arity(arity, d.head.atoms.front());
  }
  for (const Atom& a : in.query.atoms) note_arity(arity, a);

  auto pos_pred = [](const std::string& p, int i0) { return p + "@" + std::to_string(i0 + 1); };
  auto e_pred = [](const std::string& p) { return p + "@E"; };

  UidProblem out;
  for (const Fact& f : in.db.sorted_facts()) {
    Term t = Term::fresh_null();
    out.db.insert(Fact{e_pred(f.pred), {t}});
    for (std::size_t i = 0; i < f.args.size(); ++i)
      out.db.insert(Fact{pos_pred(f.pred, static_cast<int>(i)), {t, f.args[i]}});
  }

  const Term tv = Term::variable("t"), sv = Term::variable("s"), xv = Term::variable("x");
  for (const auto& [P, n] : arity) {
    for (int i = 0; i < n; ++i) {
      Dependency toe;
      toe.body.atoms.emplace_back(pos_pred(P, i), std::vector<Term>{tv, xv});
      toe.head.atoms.emplace_back(e_pred(P), std::vector<Term>{tv});
      toe.label = "bin_e_" + P + "_" + std::to_string(i + 1);
      out.deps.push_back(std::move(toe));

      Dependency mk;
      mk.body.atoms.emplace_back(e_pred(P), std::vector<Term>{tv});
      mk.head.atoms.emplace_back(pos_pred(P, i), std::vector<Term>{tv, xv});
      mk.label = "bin_mk_" + P + "_" + std::to_string(i + 1);
      out.deps.push_back(std::move(mk));
    }
  }

  for (const Dependency& d : in.deps) {
    const Atom& b = d.body.atoms.front();
    const Atom& h = d.head.atoms.front();
    const auto frontier = d.frontier();
    Dependency t;
    if (frontier.empty()) {
      t.body.atoms.emplace_back(e_pred(b.pred), std::vector<Term>{tv});
      t.head.atoms.emplace_back(e_pred(h.pred), std::vector<Term>{sv});
    } else {
      const std::string& x = frontier.front();
      int bi = -1, hj = -1;
      for (std::size_t i = 0; i < b.args.size(); ++i)
        if (b.args[i].is_variable() && b.args[i].name() == x) bi = static_cast<int>(i);
      for (std::size_t j = 0; j < h.args.size(); ++j)
        if (h.args[j].is_variable() && h.args[j].name() == x) hj = static_cast<int>(j);
      t.body.atoms.emplace_back(pos_pred(b.pred, bi), std::vector<Term>{tv, xv});
      t.head.atoms.emplace_back(pos_pred(h.pred, hj), std::vector<Term>{sv, xv});
    }
    t.label = "bin_" + d.label;
    out.deps.push_back(std::move(t));
  }

  int tick = 0;
  for (const Atom& a : in.query.atoms) {
    const Term t = Term::variable("@t" + std::to_string(++tick));
    if (a.arity() == 0) {
      out.query.atoms.emplace_back(e_pred(a.pred), std::vector<Term>{t});
      continue;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
      out.query.atoms.emplace_back(pos_pred(a.pred, static_cast<int>(i)),
                                   std::vector<Term>{t, a.args[i]});
  }
  out.query.free_vars = in.query.free_vars;
  return out;
}

// ---------------------------------------------------------------------------
// eliminate_forking / connected_components
// ---------------------------------------------------------------------------

namespace {

std::vector<Atom> dedup(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  std::set<Atom> seen;
  for (const Atom& a : atoms)
    if (seen.insert(a).second) out.push_back(a);
  return out;
}

void rename_var(std::vector<Atom>& atoms, const std::string& from, const std::string& to) {
  for (Atom& a : atoms)
    for (Term& t : a.args)
      if (t.is_variable() && t.name() == from) t = Term::variable(to);
}

}  // namespace

ConjunctiveQuery eliminate_forking(const ConjunctiveQuery& q) {
  if (!q.free_vars.empty())
    throw std::invalid_argument("eliminate_forking needs a Boolean query");
  for (const Atom& a : q.atoms) {
    if (a.arity() > 2) throw std::invalid_argument("eliminate_forking needs arity <= 2");
    for (const Term& t : a.args)
      if (!t.is_variable())
        throw std::invalid_argument("eliminate_forking needs a constant-free query");
  }
  std::vector<Atom> atoms = dedup(q.atoms);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < atoms.size() && !changed; ++i) {
      if (atoms[i].arity() != 2) continue;
      for (std::size_t j = i + 1; j < atoms.size() && !changed; ++j) {
        if (atoms[j].pred != atoms[i].pred || atoms[j].arity() != 2) continue;
        for (int pos = 0; pos < 2 && !changed; ++pos) {
          const std::size_t other = static_cast<std::size_t>(1 - pos);
          if (atoms[i].args[static_cast<std::size_t>(pos)] !=
              atoms[j].args[static_cast<std::size_t>(pos)])
            continue;
          const std::string from = atoms[j].args[other].name();
          const std::string to = atoms[i].args[other].name();
          if (from == to) continue;
          rename_var(atoms, from, to);
          atoms = dedup(atoms);
          changed = true;
        }
      }
    }
  }
  ConjunctiveQuery out;
  out.atoms = std::move(atoms);
  return out;
}

std::vector<ConjunctiveQuery> connected_components(const ConjunctiveQuery& q) {
  if (!q.free_vars.empty())
    throw std::invalid_argument("connected_components needs a Boolean query");
  std::map<std::string, std::string> up;
  std::function<std::string(std::string)> find = [&](std::string v) {
    while (up.count(v) && up[v] != v) v = up[v];
    return v;
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    up.emplace(ra, ra);
    up.emplace(rb, rb);
    if (ra != rb) up[rb] = ra;
  };
  for (const Atom& a : q.atoms) {
    std::string first;
    for (const Term& t : a.args) {
      if (!t.is_variable()) continue;
      if (first.empty()) {
        first = t.name();
        unite(first, first);
      } else {
        unite(first, t.name());
      }
    }
  }
  std::vector<ConjunctiveQuery> out;
  std::map<std::string, std::size_t> comp_of;
  int ground = 0;
  for (const Atom& a : q.atoms) {
    std::string key;
    for (const Term& t : a.args)
      if (t.is_variable()) {
        key = find(t.name());
        break;
      }
    if (key.empty()) key = "__ground" + std::to_string(ground++);
    auto [it, fresh] = comp_of.emplace(key, out.size());
    if (fresh) out.emplace_back();
    out[it->second].atoms.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// decision procedures
// ---------------------------------------------------------------------------

bool decide_uid_entailment(const UidProblem& bin, const ConjunctiveQuery& component) {
  Decider d(bin.db, bin.deps, component);
  return d.run();
}

bool uid_atomic_entails(const std::vector<Dependency>& uids, const std::optional<Atom>& premise,
                        const Instance& base, const ConjunctiveQuery& goal) {
  Instance db = base;
  std::map<std::string, Term> frozen;
  if (premise) {
    db = Instance{};
    Fact f;
    f.pred = premise->pred;
    for (const Term& t : premise->args) {
      if (t.is_variable()) {
        frozen.emplace(t.name(), Term::constant("__frz_" + t.name()));
        f.args.push_back(frozen.at(t.name()));
      } else {
        f.args.push_back(t);
      }
    }
    db.insert(f);
  }
  std::vector<std::string> shared;
  for (const std::string& v : goal.variables())
    if (frozen.count(v)) shared.push_back(v);
  if (shared.size() > 1)
    throw std::invalid_argument("goal may share at most one variable with the premise");
  Decider d(db, uids, goal);
  if (shared.empty()) return d.run();
  return d.run_pinned(shared.front(), frozen.at(shared.front()));
}

Verdict disclose_uid_ptime(const std::vector<Dependency>& sigma, const MappingSet& m,
                           const ConjunctiveQuery& p, const engine::ChaseBudget& witness_budget) {
  UidReduction red = reduce_uid(sigma, m, p);
  UidProblem plain{red.base, red.sigma, red.query};
  UidProblem bin = binarize(plain);
  ConjunctiveQuery flat = eliminate_forking(bin.query);
  bool all = true;
  for (const ConjunctiveQuery& comp : connected_components(flat)) {
    if (!decide_uid_entailment(bin, comp)) {
      all = false;
      break;
    }
  }
  Verdict v;
  if (!all) {
    v.outcome = Outcome::NotDisclosed;
    v.certificate = SaturationInfo{0, 0, "complete-procedure"};
    return v;
  }
  v.outcome = Outcome::Disclosed;
  Verdict cross = vischase::disclose_via_vischase(sigma, m, p, witness_budget);
  if (cross.outcome == Outcome::Disclosed) {
    v.witness = cross.witness;
    v.rounds = cross.rounds;
    v.facts = cross.facts;
  } else {
    v.note = "no concrete witness within the cross-check budget";
  }
  return v;
}

}  // namespace disclose::uid
