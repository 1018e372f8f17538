#include "disclose/hardgen.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace disclose::hardgen {

// ---------------------------------------------------------------------------
// 3-coloring
// ---------------------------------------------------------------------------

Graph parse_graph(const std::string& spec, int n) {
  Graph g;
  g.n = n;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    auto dash = tok.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("edge must look like '1-2'");
    int a = std::stoi(tok.substr(0, dash));
    int b = std::stoi(tok.substr(dash + 1));
    if (a < 1 || b < 1 || a == b) throw std::invalid_argument("bad edge '" + tok + "'");
    g.n = std::max({g.n, a, b});
    g.edges.emplace_back(a, b);
  }
  if (n > 0) {
    for (auto [a, b] : g.edges)
      if (a > n || b > n) throw std::invalid_argument("edge endpoint beyond n");
    g.n = n;
  }
  return g;
}

Graph random_graph(std::uint64_t seed, int max_n) {
  std::mt19937_64 rng(seed);
  Graph g;
  g.n = 3 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, max_n - 2)));
  for (int a = 1; a <= g.n; ++a)
    for (int b = a + 1; b <= g.n; ++b)
      if (rng() % 100 < 45) g.edges.emplace_back(a, b);
  if (g.edges.empty() && g.n >= 2) g.edges.emplace_back(1, 2);
  return g;
}

ProblemFile gen_3coloring(const Graph& g) {
  ProblemFile pf;
  pf.schema.source["OK"] = 3;
  pf.schema.global["M"] = 0;

  Dependency swap23;
  swap23.body.atoms.push_back(var_atom("OK", {"x", "y", "z"}));
  swap23.head.atoms.push_back(var_atom("OK", {"x", "z", "y"}));
  swap23.label = "c1";
  pf.constraints.push_back(std::move(swap23));

  Dependency swap12;
  swap12.body.atoms.push_back(var_atom("OK", {"x", "y", "z"}));
  swap12.head.atoms.push_back(var_atom("OK", {"y", "x", "z"}));
  swap12.label = "c2";
  pf.constraints.push_back(std::move(swap12));

  Dependency view;
  view.body.atoms.push_back(var_atom("OK", {"x", "y", "z"}));
  view.head.atoms.emplace_back("M", std::vector<Term>{});
  pf.mappings.add(std::move(view));

  ConjunctiveQuery p;
  if (g.edges.empty()) {
    p.atoms.push_back(var_atom("OK", {"a", "b", "w"}));
  } else {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto [a, b] = g.edges[e];
      p.atoms.push_back(var_atom("OK", {"v" + std::to_string(a), "v" + std::to_string(b),
                                        "w" + std::to_string(e + 1)}));
    }
  }
  pf.policy = std::move(p);
  return pf;
}

bool color3(const Graph& g) {
  if (g.n > 16) throw std::invalid_argument("color3 caps at 16 vertices");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n) + 1);
  for (auto [a, b] : g.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<int> color(static_cast<std::size_t>(g.n) + 1, 0);
  std::function<bool(int)> go = [&](int v) -> bool {
    if (v > g.n) return true;
    for (int c = 1; c <= 3; ++c) {
      bool ok = true;
      for (int u : adj[static_cast<std::size_t>(v)])
        if (color[static_cast<std::size_t>(u)] == c) {
          ok = false;
          break;
        }
      if (!ok) continue;
      color[static_cast<std::size_t>(v)] = c;
      if (go(v + 1)) return true;
      color[static_cast<std::size_t>(v)] = 0;
    }
    return false;
  };
  return go(1);
}

// ---------------------------------------------------------------------------
// Circuit satisfiability
// ---------------------------------------------------------------------------

std::vector<int> Circuit::inputs() const {
  std::set<int> produced;
  for (const NotGate& g : nots) produced.insert(g.out);
  for (const OrGate& g : ors) produced.insert(g.out);
  std::vector<int> out;
  for (int w = 1; w <= wires; ++w)
    if (!produced.count(w)) out.push_back(w);
  return out;
}

void Circuit::validate() const {
  if (wires < 1) throw std::invalid_argument("circuit needs at least the output wire");
  std::map<int, std::vector<int>> feeds;  // out -> ins
  std::set<int> produced;
  auto wire_ok = [&](int w) {
    if (w < 1 || w > wires) throw std::invalid_argument("wire out of range");
  };
  for (const NotGate& g : nots) {
    wire_ok(g.in);
    wire_ok(g.out);
    if (!produced.insert(g.out).second) throw std::invalid_argument("wire produced twice");
    feeds[g.out] = {g.in};
  }
  for (const OrGate& g : ors) {
    wire_ok(g.a);
    wire_ok(g.b);
    wire_ok(g.out);
    if (!produced.insert(g.out).second) throw std::invalid_argument("wire produced twice");
    feeds[g.out] = {g.a, g.b};
  }
  std::map<int, int> state;  // 0 unseen, 1 open, 2 done
  std::function<void(int)> dfs = [&](int w) {
    int& s = state[w];
    if (s == 2) return;
    if (s == 1) throw std::invalid_argument("circuit has a cycle");
    s = 1;
    for (int in : feeds[w]) dfs(in);
    s = 2;
  };
  for (int w = 1; w <= wires; ++w) dfs(w);
}

namespace {

struct CircuitParser {
  const std::string& s;
  std::size_t i = 0;
  Circuit c;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool word(const std::string& w) {
    ws();
    if (s.compare(i, w.size(), w) != 0) return false;
    i += w.size();
    return true;
  }
  int number() {
    ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("expected a wire number in circuit spec");
    int v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    c.wires = std::max(c.wires, v);
    return v;
  }
  void expect(char ch) {
    ws();
    if (i >= s.size() || s[i] != ch)
      throw std::invalid_argument(std::string("expected '") + ch + "' in circuit spec");
    ++i;
  }
  int fresh() { return ++c.wires; }

  int expr() {
    if (word("NOT")) {
      int in = expr();
      int out = fresh();
      c.nots.push_back({in, out});
      return out;
    }
    if (word("OR")) {
      expect('(');
      int a = expr();
      expect(',');
      int b = expr();
      expect(')');
      int out = fresh();
      c.ors.push_back({a, b, out});
      return out;
    }
    return number();
  }

  void statement() {
    ws();
    int target;
    if (word("out") || word("o")) {
      target = 1;  // the output wire
      c.wires = std::max(c.wires, 1);
    } else {
      target = number();
    }
    expect('=');
    int src = expr();
    // Re-point the gate that produced `src` (if any) to `target`.
    bool moved = false;
    for (auto& g : c.nots)
      if (g.out == src) {
        g.out = target;
        moved = true;
        break;
      }
    if (!moved)
      for (auto& g : c.ors)
        if (g.out == src) {
          g.out = target;
          moved = true;
          break;
        }
    if (!moved && src != target)
      throw std::invalid_argument("a wire can only be defined by a gate");
  }
};

}  // namespace

Circuit parse_circuit(const std::string& spec) {
  CircuitParser p{.s = spec, .i = 0, .c = {}};
  for (;;) {
    p.statement();
    p.ws();
    if (p.i >= spec.size()) break;
    p.expect(';');
  }
  // Compact wire numbering: drop gaps and scratch wires left by re-pointing.
  std::set<int> used{1};
  for (const auto& g : p.c.nots) used.insert({g.in, g.out});
  for (const auto& g : p.c.ors) used.insert({g.a, g.b, g.out});
  std::map<int, int> renum;
  for (int w : used) renum[w] = static_cast<int>(renum.size()) + 1;
  for (auto& g : p.c.nots) {
    g.in = renum[g.in];
    g.out = renum[g.out];
  }
  for (auto& g : p.c.ors) {
    g.a = renum[g.a];
    g.b = renum[g.b];
    g.out = renum[g.out];
  }
  p.c.wires = static_cast<int>(used.size());
  p.c.validate();
  return p.c;
}

Circuit random_circuit(std::uint64_t seed, int max_gates) {
  std::mt19937_64 rng(seed);
  Circuit c;
  c.wires = 0;
  int budget = max_gates <= 0 ? 0 : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_gates));
  std::function<int(int)> build = [&](int gates) -> int {
    int w = ++c.wires;
    if (gates <= 0) return w;  // input wire
    switch (rng() % 3) {
      case 0:
        return w;  // input wire
      case 1:
        c.nots.push_back({build(gates - 1), w});
        return w;
      default: {
        int split = static_cast<int>(rng() % static_cast<std::uint64_t>(gates));
        int a = build(split);
        int b = build(gates - 1 - split);
        c.ors.push_back({a, b, w});
        return w;
      }
    }
  };
  build(budget);
  c.validate();
  return c;
}

bool sat(const Circuit& c) {
  c.validate();
  const std::vector<int> ins = c.inputs();
  if (ins.size() > 20) throw std::invalid_argument("sat caps at 20 inputs");
  std::map<int, const Circuit::NotGate*> notof;
  std::map<int, const Circuit::OrGate*> orof;
  for (const auto& g : c.nots) notof[g.out] = &g;
  for (const auto& g : c.ors) orof[g.out] = &g;
  for (std::uint64_t mask = 0; mask < (1ull << ins.size()); ++mask) {
    std::map<int, bool> val;
    for (std::size_t k = 0; k < ins.size(); ++k) val[ins[k]] = (mask >> k) & 1;
    std::function<bool(int)> eval = [&](int w) -> bool {
      auto it = val.find(w);
      if (it != val.end()) return it->second;
      bool v = notof.count(w) ? !eval(notof[w]->in) : eval(orof[w]->a) || eval(orof[w]->b);
      val[w] = v;
      return v;
    };
    if (eval(1)) return true;
  }
  return false;
}

namespace {

/// Variable grids of the six mapping patterns; 'x' marks the shared value.
const std::vector<std::vector<std::string>> kPatterns = {
    {"y", "y", "x", "x", "y", "v1", "x", "y"},
    {"x", "y", "y", "x", "x", "v1", "v2", "v3"},
    {"y", "x", "x", "y", "x", "v1", "v2", "v3"},
    {"x", "x", "y", "y", "x", "v1", "v2", "v2"},
    {"x", "u", "y", "y", "v1", "x", "v2", "v3"},
    {"v1", "v2", "v3", "x", "v4", "y", "y", "x"},
};

}  // namespace

Instance circuit_instance() {
  Instance db;
  for (const auto& pattern : kPatterns) {
    // Repeated pattern variables share one null within a row; rows share only
    // the critical value, exactly as hiding the mapping rules would produce.
    std::map<std::string, Term> val{{"x", Term::crit()}};
    Fact f;
    f.pred = "R";
    for (const std::string& cell : pattern)
      f.args.push_back(val.emplace(cell, Term::fresh_null()).first->second);
    db.insert(f);
  }
  return db;
}

ConjunctiveQuery circuit_query(const Circuit& c) {
  c.validate();
  ConjunctiveQuery q;
  int blanks = 0;
  auto fresh = [&] { return Term::variable("q" + std::to_string(++blanks)); };
  auto wire = [](int w) { return Term::variable("u" + std::to_string(w)); };
  auto atom = [&](const std::map<int, Term>& fixed) {
    Atom a;
    a.pred = "R";
    for (int i = 1; i <= 8; ++i) {
      auto it = fixed.find(i);
      a.args.push_back(it == fixed.end() ? fresh() : it->second);
    }
    q.atoms.push_back(std::move(a));
  };
  for (int w = 1; w <= c.wires; ++w) atom({{1, wire(w)}, {2, wire(w)}});
  atom({{3, wire(1)}, {4, wire(1)}});
  for (std::size_t j = 0; j < c.nots.size(); ++j) {
    const auto& g = c.nots[j];
    Term r = Term::variable("nr" + std::to_string(j + 1));
    Term p = Term::variable("np" + std::to_string(j + 1));
    atom({{1, wire(g.in)}, {3, r}});
    atom({{4, r}, {6, p}});
    atom({{7, p}, {8, wire(g.out)}});
  }
  for (std::size_t j = 0; j < c.ors.size(); ++j) {
    const auto& g = c.ors[j];
    Term x = Term::variable("ox" + std::to_string(j + 1));
    Term y = Term::variable("oy" + std::to_string(j + 1));
    atom({{1, wire(g.a)}, {3, x}});
    atom({{2, wire(g.b)}, {4, y}});
    atom({{3, x}, {4, y}, {5, wire(g.out)}});
  }
  return q;
}

ProblemFile gen_circuit_sat(const Circuit& c, CircuitVariant v) {
  c.validate();
  ProblemFile pf;
  pf.schema.source["R"] = 8;
  if (v == CircuitVariant::AtomMapNoConstraints) {
    for (std::size_t i = 0; i < kPatterns.size(); ++i) {
      const std::string T = "T" + std::to_string(i + 1);
      pf.schema.global[T] = 1;
      Dependency rule;
      rule.body.atoms.push_back(var_atom("R", kPatterns[i]));
      rule.head.atoms.push_back(var_atom(T, {"x"}));
      pf.mappings.add(std::move(rule));
    }
  } else {
    pf.schema.source["A"] = 1;
    pf.schema.global["T"] = 1;
    Dependency rule;
    rule.body.atoms.push_back(var_atom("A", {"x"}));
    rule.head.atoms.push_back(var_atom("T", {"x"}));
    pf.mappings.add(std::move(rule));
    for (std::size_t i = 0; i < kPatterns.size(); ++i) {
      Dependency d;
      d.body.atoms.push_back(var_atom("A", {"x"}));
      d.head.atoms.push_back(var_atom("R", kPatterns[i]));
      d.label = "c" + std::to_string(i + 1);
      pf.constraints.push_back(std::move(d));
    }
  }
  pf.policy = circuit_query(c);
  return pf;
}

// ---------------------------------------------------------------------------
// Inclusion-dependency implication
// ---------------------------------------------------------------------------

IdImplication random_id_implication(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IdImplication p;
  p.arity = 1 + static_cast<int>(rng() % 3);
  const int k = 2 + static_cast<int>(rng() % 3);
  auto pred = [](int i) { return "P" + std::to_string(i); };
  p.lhs = pred(1);
  p.rhs = pred(2 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1)));

  const int rules = 1 + static_cast<int>(rng() % 4);
  for (int r = 0; r < rules; ++r) {
    int from = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    int to = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    if (to == from) to = 1 + to % k;
    Dependency d;
    std::vector<std::string> bvars;
    for (int i = 0; i < p.arity; ++i) bvars.push_back("x" + std::to_string(i + 1));
    d.body.atoms.push_back(var_atom(pred(from), bvars));
    std::vector<std::string> pool = bvars;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::string> hvars;
    int fresh = 0;
    for (int i = 0; i < p.arity; ++i) {
      if (!pool.empty() && rng() % 10 < 7) {
        hvars.push_back(pool.back());
        pool.pop_back();
      } else {
        hvars.push_back("e" + std::to_string(++fresh));
      }
    }
    d.head.atoms.push_back(var_atom(pred(to), hvars));
    d.label = "id" + std::to_string(r + 1);
    p.ids.push_back(std::move(d));
  }
  if (rng() % 2 == 0) {
    // Seed a copy chain so the implication holds reasonably often.
    std::vector<std::string> vars;
    for (int i = 0; i < p.arity; ++i) vars.push_back("x" + std::to_string(i + 1));
    Dependency d;
    d.body.atoms.push_back(var_atom(p.lhs, vars));
    d.head.atoms.push_back(var_atom(p.rhs, vars));
    d.label = "id" + std::to_string(p.ids.size() + 1);
    p.ids.push_back(std::move(d));
  }
  return p;
}

ProblemFile gen_id_implication(const IdImplication& p) {
  ProblemFile pf;
  std::set<std::string> preds{p.lhs, p.rhs};
  for (const Dependency& d : p.ids) {
    preds.insert(d.body.atoms.front().pred);
    preds.insert(d.head.atoms.front().pred);
  }
  for (const std::string& q : preds) pf.schema.source[q] = p.arity;
  pf.schema.source["Shadow"] = p.arity;
  pf.schema.global["V"] = 0;

  pf.constraints = p.ids;
  std::vector<std::string> vars;
  for (int i = 0; i < p.arity; ++i) vars.push_back("x" + std::to_string(i + 1));
  Dependency copy;
  copy.body.atoms.push_back(var_atom("Shadow", vars));
  copy.head.atoms.push_back(var_atom(p.lhs, vars));
  copy.label = "shadow";
  pf.constraints.push_back(std::move(copy));

  Dependency view;
  view.body.atoms.push_back(var_atom("Shadow", vars));
  view.head.atoms.emplace_back("V", std::vector<Term>{});
  pf.mappings.add(std::move(view));

  ConjunctiveQuery q;
  q.atoms.push_back(var_atom("Shadow", vars));
  q.atoms.push_back(var_atom(p.rhs, vars));
  pf.policy = std::move(q);
  return pf;
}

std::optional<bool> implies(const IdImplication& p, std::size_t max_rounds) {
  std::set<Fact> facts;
  Fact start;
  start.pred = p.lhs;
  for (int i = 0; i < p.arity; ++i) start.args.push_back(Term::constant("k" + std::to_string(i + 1)));
  facts.insert(start);
  Fact goal = start;
  goal.pred = p.rhs;

  for (std::size_t round = 0; round < max_rounds; ++round) {
    if (facts.count(goal)) return true;
    std::vector<Fact> fresh;
    for (const Dependency& d : p.ids) {
      const Atom& b = d.body.atoms.front();
      const Atom& h = d.head.atoms.front();
      for (const Fact& f : facts) {
        if (f.pred != b.pred) continue;
        std::map<std::string, Term> bind;
        for (std::size_t i = 0; i < b.args.size(); ++i) bind[b.args[i].name()] = f.args[i];
        // Witness check: some fact matching the exported positions.
        bool witnessed = false;
        for (const Fact& g : facts) {
          if (g.pred != h.pred) continue;
          bool match = true;
          for (std::size_t j = 0; j < h.args.size(); ++j) {
            auto it = bind.find(h.args[j].name());
            if (it != bind.end() && !(it->second == g.args[j])) {
              match = false;
              break;
            }
          }
          if (match) {
            witnessed = true;
            break;
          }
        }
        if (witnessed) continue;
        Fact nf;
        nf.pred = h.pred;
        std::map<std::string, Term> ext;
        for (std::size_t j = 0; j < h.args.size(); ++j) {
          auto it = bind.find(h.args[j].name());
          if (it != bind.end()) {
            nf.args.push_back(it->second);
          } else {
            auto eit = ext.emplace(h.args[j].name(), Term::fresh_null()).first;
            nf.args.push_back(eit->second);
          }
        }
        fresh.push_back(std::move(nf));
      }
    }
    std::size_t before = facts.size();
    for (Fact& f : fresh) facts.insert(std::move(f));
    if (facts.size() == before) return facts.count(goal) > 0;
    if (facts.size() > 5000) break;
  }
  return facts.count(goal) ? std::optional<bool>(true) : std::nullopt;
}

}  // namespace disclose::hardgen
