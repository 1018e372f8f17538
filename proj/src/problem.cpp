#include "disclose/problem.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace disclose {
namespace {

struct Line {
  const std::string& s;
  std::size_t i = 0;
  int no;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  bool peek(char c) {
    skip_ws();
    return i < s.size() && s[i] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++i;
    return true;
  }
  void expect(char c, const std::string& what) {
    if (!eat(c)) throw ParseError(no, "expected '" + std::string(1, c) + "' " + what);
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(i, w.size(), w) != 0) return false;
    std::size_t end = i + w.size();
    if (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
      return false;
    i = end;
    return true;
  }
  std::string ident(const std::string& what) {
    skip_ws();
    if (i >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i])))
      throw ParseError(no, "expected " + what);
    std::size_t b = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    std::string out = s.substr(b, i - b);
    if (out == kIsCrit) throw ParseError(no, "'IsCrit' is reserved");
    return out;
  }
  int integer() {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError(no, "expected an arity");
    int v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    return v;
  }
};

struct Builder {
  ProblemFile pf;
  int n_constraints = 0;

  void check_new_pred(Line& ln, const std::string& name) {
    if (pf.schema.declared(name))
      throw ParseError(ln.no, "predicate '" + name + "' declared twice");
  }

  Atom parse_atom(Line& ln) {
    Atom a;
    a.pred = ln.ident("a predicate name");
    auto ar = pf.schema.arity_of(a.pred);
    if (!ar) throw ParseError(ln.no, "undeclared predicate '" + a.pred + "'");
    ln.expect('(', "after predicate '" + a.pred + "'");
    if (!ln.eat(')')) {
      for (;;) {
        std::string v = ln.ident("a variable");
        if (pf.schema.declared(v))
          throw ParseError(ln.no, "argument '" + v +
                                      "' is a declared predicate; arguments must be variables");
        a.args.push_back(Term::variable(v));
        if (ln.eat(')')) break;
        ln.expect(',', "between arguments");
      }
    }
    if (a.arity() != *ar)
      throw ParseError(ln.no, "predicate '" + a.pred + "' has arity " + std::to_string(*ar) +
                                  ", got " + std::to_string(a.arity()));
    return a;
  }

  std::vector<Atom> parse_atoms(Line& ln) {
    std::vector<Atom> out;
    out.push_back(parse_atom(ln));
    while (ln.eat(',')) out.push_back(parse_atom(ln));
    return out;
  }

  void require_source(Line& ln, const std::vector<Atom>& atoms, const std::string& where) {
    for (const Atom& a : atoms)
      if (!pf.schema.source.count(a.pred))
        throw ParseError(ln.no, where + " must use source predicates, got global '" + a.pred + "'");
  }

  void declaration(Line& ln, bool global) {
    std::string name = ln.ident("a predicate name");
    check_new_pred(ln, name);
    ln.expect('/', "between name and arity");
    int ar = ln.integer();
    (global ? pf.schema.global : pf.schema.source)[name] = ar;
  }

  void constraint(Line& ln) {
    std::vector<Atom> body = parse_atoms(ln);
    require_source(ln, body, "constraints");
    ln.expect('-', "('->' between body and head)");
    ln.expect('>', "('->' between body and head)");
    std::vector<std::string> declared_ex;
    if (ln.eat_word("exists")) {
      for (;;) {
        declared_ex.push_back(ln.ident("an existential variable"));
        if (ln.eat('.')) break;
        ln.expect(',', "between existential variables");
      }
    }
    std::vector<Atom> head = parse_atoms(ln);
    require_source(ln, head, "constraints");
    Dependency d;
    d.body.atoms = std::move(body);
    d.head.atoms = std::move(head);
    d.label = "c" + std::to_string(++n_constraints);

    std::set<std::string> bvars;
    for (const std::string& v : d.body.variables()) bvars.insert(v);
    std::set<std::string> exset(declared_ex.begin(), declared_ex.end());
    if (exset.size() != declared_ex.size())
      throw ParseError(ln.no, "existential variable listed twice");
    std::set<std::string> hvars;
    for (const std::string& v : d.head.variables()) hvars.insert(v);
    for (const std::string& v : declared_ex) {
      if (bvars.count(v))
        throw ParseError(ln.no, "existential variable '" + v + "' occurs in the body");
      if (!hvars.count(v))
        throw ParseError(ln.no, "existential variable '" + v + "' does not occur in the head");
    }
    for (const std::string& v : d.head.variables())
      if (!bvars.count(v) && !exset.count(v))
        throw ParseError(ln.no, "head variable '" + v +
                                    "' is neither a body variable nor declared existential");
    pf.constraints.push_back(std::move(d));
  }

  void mapping(Line& ln) {
    Atom head = parse_atom(ln);
    if (!pf.schema.global.count(head.pred))
      throw ParseError(ln.no, "mapping head '" + head.pred + "' is not a global predicate");
    ln.expect(':', "(':=' between head and body)");
    ln.expect('=', "(':=' between head and body)");
    std::vector<Atom> body = parse_atoms(ln);
    require_source(ln, body, "mapping bodies");
    Dependency d;
    d.body.atoms = std::move(body);
    d.head.atoms.push_back(std::move(head));
    try {
      pf.mappings.add(std::move(d));
    } catch (const std::invalid_argument& e) {
      throw ParseError(ln.no, e.what());
    }
  }

  void policy(Line& ln) {
    if (pf.policy) throw ParseError(ln.no, "more than one policy");
    ConjunctiveQuery q;
    if (ln.eat('(')) {
      if (!ln.eat(')')) {
        for (;;) {
          std::string v = ln.ident("a free variable");
          q.free_vars.push_back(v);
          if (ln.eat(')')) break;
          ln.expect(',', "between free variables");
        }
      }
    }
    q.atoms = parse_atoms(ln);
    require_source(ln, q.atoms, "policies");
    std::set<std::string> fv(q.free_vars.begin(), q.free_vars.end());
    if (fv.size() != q.free_vars.size())
      throw ParseError(ln.no, "free variable listed twice");
    std::set<std::string> used;
    for (const std::string& v : q.variables()) used.insert(v);
    for (const std::string& v : q.free_vars)
      if (!used.count(v))
        throw ParseError(ln.no, "free variable '" + v + "' does not occur in the policy");
    pf.policy = std::move(q);
  }

  void finish(int last_line) {
    for (const auto& [global, arity] : pf.schema.global)
      if (!pf.mappings.rules().count(global))
        throw ParseError(last_line, "global predicate '" + global + "' has no mapping");
  }
};

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  Builder b;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::string stripped = strip_comment(raw);
    Line ln{stripped, 0, no};
    if (ln.done()) continue;
    if (ln.eat_word("source")) {
      b.declaration(ln, false);
    } else if (ln.eat_word("global")) {
      b.declaration(ln, true);
    } else if (ln.eat_word("constraint")) {
      ln.expect(':', "after 'constraint'");
      b.constraint(ln);
    } else if (ln.eat_word("mapping")) {
      ln.expect(':', "after 'mapping'");
      b.mapping(ln);
    } else if (ln.eat_word("policy")) {
      ln.expect(':', "after 'policy'");
      b.policy(ln);
    } else {
      throw ParseError(no, "expected source/global/constraint/mapping/policy");
    }
    if (!ln.done())
      throw ParseError(no, "trailing input: '" + stripped.substr(ln.i) + "'");
  }
  b.finish(no);
  return std::move(b.pf);
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

namespace {

std::string atoms_str(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    out += atoms[i].str();
  }
  return out;
}

}  // namespace

std::string print_problem(const ProblemFile& pf) {
  std::ostringstream out;
  for (const auto& [name, ar] : pf.schema.source) out << "source " << name << "/" << ar << "\n";
  for (const auto& [name, ar] : pf.schema.global) out << "global " << name << "/" << ar << "\n";
  for (const Dependency& d : pf.constraints) {
    out << "constraint: " << atoms_str(d.body.atoms) << " -> ";
    const auto ex = d.existentials();
    if (!ex.empty()) {
      out << "exists ";
      for (std::size_t i = 0; i < ex.size(); ++i) out << (i ? ", " : "") << ex[i];
      out << ". ";
    }
    out << atoms_str(d.head.atoms) << "\n";
  }
  for (const auto& [global, rule] : pf.mappings.rules())
    out << "mapping: " << rule.head.atoms.front().str() << " := " << atoms_str(rule.body.atoms)
        << "\n";
  if (pf.policy) {
    out << "policy: ";
    if (!pf.policy->free_vars.empty()) {
      out << "(";
      for (std::size_t i = 0; i < pf.policy->free_vars.size(); ++i)
        out << (i ? ", " : "") << pf.policy->free_vars[i];
      out << ") ";
    }
    out << atoms_str(pf.policy->atoms) << "\n";
  }
  return out.str();
}

bool ProblemFile::operator==(const ProblemFile& o) const {
  auto same_dep = [](const Dependency& a, const Dependency& b) {
    return a.body == b.body && a.head == b.head;
  };
  if (schema.source != o.schema.source || schema.global != o.schema.global) return false;
  if (constraints.size() != o.constraints.size()) return false;
  for (std::size_t i = 0; i < constraints.size(); ++i)
    if (!same_dep(constraints[i], o.constraints[i])) return false;
  if (mappings.size() != o.mappings.size()) return false;
  for (auto a = mappings.rules().begin(), b = o.mappings.rules().begin();
       a != mappings.rules().end(); ++a, ++b)
    if (a->first != b->first || !same_dep(a->second, b->second)) return false;
  if (policy.has_value() != o.policy.has_value()) return false;
  if (policy && !(*policy == *o.policy)) return false;
  return true;
}

}  // namespace disclose
