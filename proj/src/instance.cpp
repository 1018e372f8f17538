#include "disclose/instance.hpp"

#include <algorithm>

namespace disclose {

bool Instance::insert(const Fact& f) {
  if (!f.ground())
    throw std::invalid_argument("instance facts must be ground: " + f.str());
  auto [it, fresh] = rels_.try_emplace(f.pred);
  Relation& rel = it->second;
  if (!fresh && !rel.rows.empty() && rel.rows[0].arity() != f.arity())
    throw std::invalid_argument("arity conflict for predicate " + f.pred);
  if (rel.by_args.count(f.args)) return false;
  auto id = static_cast<std::uint32_t>(rel.rows.size());
  rel.by_args.emplace(f.args, id);
  if (rel.pos_index.size() < f.args.size()) rel.pos_index.resize(f.args.size());
  for (std::size_t i = 0; i < f.args.size(); ++i)
    rel.pos_index[i][f.args[i]].push_back(id);
  rel.rows.push_back(f);
  ++size_;
  return true;
}

bool Instance::contains(const Fact& f) const {
  auto it = rels_.find(f.pred);
  return it != rels_.end() && it->second.by_args.count(f.args) > 0;
}

const std::vector<Fact>& Instance::rows(const std::string& pred) const {
  static const std::vector<Fact> kEmpty;
  auto it = rels_.find(pred);
  return it == rels_.end() ? kEmpty : it->second.rows;
}

const std::vector<std::uint32_t>* Instance::index(const std::string& pred, int pos,
                                                  const Term& v) const {
  auto it = rels_.find(pred);
  if (it == rels_.end()) return nullptr;
  const Relation& rel = it->second;
  if (pos < 0 || static_cast<std::size_t>(pos) >= rel.pos_index.size()) return nullptr;
  auto jt = rel.pos_index[pos].find(v);
  return jt == rel.pos_index[pos].end() ? nullptr : &jt->second;
}

std::vector<std::string> Instance::predicates() const {
  std::vector<std::string> out;
  for (const auto& [name, rel] : rels_)
    if (!rel.rows.empty()) out.push_back(name);
  return out;
}

std::vector<Fact> Instance::sorted_facts() const {
  std::vector<Fact> out;
  out.reserve(size_);
  for (const auto& [name, rel] : rels_)
    for (const auto& [args, id] : rel.by_args) out.emplace_back(name, args);
  return out;  // rels_ and by_args are ordered maps, so this is sorted
}

Instance Instance::mapped(const std::function<Term(const Term&)>& f) const {
  Instance out;
  for (const auto& [name, rel] : rels_)
    for (const auto& row : rel.rows) {
      Fact g(name, {});
      g.args.reserve(row.args.size());
      for (const auto& t : row.args) g.args.push_back(f(t));
      out.insert(g);
    }
  return out;
}

bool Instance::operator==(const Instance& o) const {
  return size_ == o.size_ && sorted_facts() == o.sorted_facts();
}

}  // namespace disclose
