// SPDX-License-Identifier: MIT
// Finite relational structures and their constructions.
#include <hornlog/structure.hh>

#include <algorithm>
#include <deque>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace hornlog
{
  using nlohmann::json;

  void
  vocabulary::add(const std::string& pred, int k)
  {
    if (k < 0)
      throw error("negative arity for predicate " + pred);
    auto [it, fresh] = arity.emplace(pred, k);
    if (!fresh && it->second != k)
      throw error("arity mismatch for predicate " + pred + ": "
                  + std::to_string(it->second) + " vs " + std::to_string(k));
  }

  void
  vocabulary::merge(const vocabulary& other)
  {
    for (auto& [p, k] : other.arity)
      add(p, k);
  }

  int
  vocabulary::max_arity() const
  {
    int m = 0;
    for (auto& [p, k] : arity)
      m = std::max(m, k);
    return m;
  }

  std::vector<std::string>
  vocabulary::concept_names() const
  {
    std::vector<std::string> r;
    for (auto& [p, k] : arity)
      if (k == 1)
        r.push_back(p);
    return r;
  }

  std::vector<std::string>
  vocabulary::role_names() const
  {
    std::vector<std::string> r;
    for (auto& [p, k] : arity)
      if (k == 2)
        r.push_back(p);
    return r;
  }

  structure::structure(vocabulary v)
  {
    extend_vocab(v);
  }

  int
  structure::add_element(const std::string& name)
  {
    if (pos_.count(name))
      throw error("duplicate element " + name);
    int i = static_cast<int>(names_.size());
    names_.push_back(name);
    pos_.emplace(name, i);
    index_.reset();
    return i;
  }

  void
  structure::declare(const std::string& pred, int k)
  {
    vocab_.add(pred, k);
    facts_[pred];
    index_.reset();
  }

  void
  structure::extend_vocab(const vocabulary& v)
  {
    for (auto& [p, k] : v.arity)
      declare(p, k);
  }

  void
  structure::add_fact(const std::string& pred, const tuple_t& t)
  {
    declare(pred, static_cast<int>(t.size()));
    for (int a : t)
      if (a < 0 || a >= static_cast<int>(size()))
        throw error("fact " + pred + " refers to unknown element");
    facts_[pred].insert(t);
    index_.reset();
  }

  void
  structure::remove_fact(const std::string& pred, const tuple_t& t)
  {
    auto it = facts_.find(pred);
    if (it != facts_.end() && it->second.erase(t))
      index_.reset();
  }

  int
  structure::find(const std::string& name) const
  {
    auto it = pos_.find(name);
    return it == pos_.end() ? -1 : it->second;
  }

  int
  structure::at(const std::string& name) const
  {
    int i = find(name);
    if (i < 0)
      throw error("unknown element " + name);
    return i;
  }

  const std::set<tuple_t>&
  structure::tuples(const std::string& pred) const
  {
    static const std::set<tuple_t> none;
    auto it = facts_.find(pred);
    return it == facts_.end() ? none : it->second;
  }

  bool
  structure::holds(const std::string& pred, const tuple_t& t) const
  {
    auto it = facts_.find(pred);
    return it != facts_.end() && it->second.count(t);
  }

  void
  structure::build_index() const
  {
    auto idx = std::make_shared<index>();
    std::size_t n = size();
    for (auto& [p, k] : vocab_.arity)
      {
        auto& ts = facts_.at(p);
        if (k == 1)
          {
            elem_set s(n);
            for (auto& t : ts)
              s.set(t[0]);
            idx->unary.emplace(p, std::move(s));
          }
        else if (k == 2)
          {
            std::vector<elem_set> su(n, elem_set(n)), pr(n, elem_set(n));
            for (auto& t : ts)
              {
                su[t[0]].set(t[1]);
                pr[t[1]].set(t[0]);
              }
            idx->succ.emplace(p, std::move(su));
            idx->pred.emplace(p, std::move(pr));
          }
      }
    index_ = idx;
  }

  const elem_set&
  structure::unary(const std::string& pred) const
  {
    if (!index_)
      build_index();
    auto it = index_->unary.find(pred);
    if (it == index_->unary.end())
      throw error("unknown concept name " + pred);
    return it->second;
  }

  const std::vector<elem_set>&
  structure::succ(const std::string& role) const
  {
    if (!index_)
      build_index();
    auto it = index_->succ.find(role);
    if (it == index_->succ.end())
      throw error("unknown role name " + role);
    return it->second;
  }

  const std::vector<elem_set>&
  structure::pred(const std::string& role) const
  {
    if (!index_)
      build_index();
    auto it = index_->pred.find(role);
    if (it == index_->pred.end())
      throw error("unknown role name " + role);
    return it->second;
  }

  std::vector<std::string>
  structure::labels(int a) const
  {
    std::vector<std::string> r;
    for (auto& [p, k] : vocab_.arity)
      if (k == 1 && facts_.at(p).count({a}))
        r.push_back(p);
    return r;
  }

  elem_set
  structure::full_set() const
  {
    elem_set s(size());
    s.set();
    return s;
  }

  elem_set
  structure::set_of(const std::vector<std::string>& names) const
  {
    elem_set s(size());
    for (auto& n : names)
      s.set(at(n));
    return s;
  }

  std::vector<std::string>
  structure::names_of(const elem_set& s) const
  {
    std::vector<std::string> r;
    for_each_elem(s, [&](int a) { r.push_back(names_[a]); });
    return r;
  }

  std::vector<int>
  elems_of(const elem_set& x)
  {
    std::vector<int> r;
    for_each_elem(x, [&](int a) { r.push_back(a); });
    return r;
  }

  namespace
  {
    int
    elem_ref(const structure& s, const json& j, const std::string& pred)
    {
      if (!j.is_string())
        throw error("element reference in " + pred + " is not a string");
      int i = s.find(j.get<std::string>());
      if (i < 0)
        throw error("unknown element " + j.get<std::string>() + " in "
                    + pred);
      return i;
    }
  }

  structure
  parse_structure(const std::string& text)
  {
    json j;
    try
      {
        j = json::parse(text);
      }
    catch (const json::exception& e)
      {
        throw error(std::string("malformed JSON: ") + e.what());
      }
    if (!j.is_object() || !j.contains("domain") || !j["domain"].is_array())
      throw error("structure document needs a \"domain\" array");
    if (j["domain"].empty())
      throw error("empty domain");
    structure s;
    for (auto& e : j["domain"])
      {
        if (!e.is_string())
          throw error("domain entries must be strings");
        s.add_element(e.get<std::string>());
      }
    if (j.contains("unary"))
      for (auto& [p, elems] : j["unary"].items())
        {
          s.declare(p, 1);
          for (auto& e : elems)
            s.add_fact(p, {elem_ref(s, e, p)});
        }
    if (j.contains("relations"))
      for (auto& [p, rel] : j["relations"].items())
        {
          if (!rel.contains("arity") || !rel["arity"].is_number_integer())
            throw error("relation " + p + " needs an integer arity");
          int k = rel["arity"].get<int>();
          s.declare(p, k);
          if (rel.contains("tuples"))
            for (auto& t : rel["tuples"])
              {
                if (!t.is_array() || static_cast<int>(t.size()) != k)
                  throw error("arity mismatch in tuple of " + p);
                tuple_t tt;
                for (auto& e : t)
                  tt.push_back(elem_ref(s, e, p));
                s.add_fact(p, tt);
              }
        }
    if (j.contains("roles"))
      for (auto& [p, edges] : j["roles"].items())
        {
          s.declare(p, 2);
          for (auto& t : edges)
            {
              if (!t.is_array() || t.size() != 2)
                throw error("arity mismatch in tuple of " + p);
              s.add_fact(p, {elem_ref(s, t[0], p), elem_ref(s, t[1], p)});
            }
        }
    return s;
  }

  structure
  structure_from_json_file(const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_structure(ss.str());
  }

  std::string
  serialize_structure(const structure& s)
  {
    json j;
    j["domain"] = s.names();
    j["unary"] = json::object();
    j["relations"] = json::object();
    for (auto& [p, k] : s.vocab().arity)
      {
        if (k == 1)
          {
            json arr = json::array();
            for (auto& t : s.tuples(p))
              arr.push_back(s.name(t[0]));
            j["unary"][p] = arr;
          }
        else
          {
            json arr = json::array();
            for (auto& t : s.tuples(p))
              {
                json row = json::array();
                for (int a : t)
                  row.push_back(s.name(a));
                arr.push_back(row);
              }
            j["relations"][p] = {{"arity", k}, {"tuples", arr}};
          }
      }
    return j.dump(2);
  }

  union_result
  disjoint_union(const std::vector<structure>& parts, bool plain)
  {
    if (parts.empty())
      throw error("disjoint union of an empty family");
    union_result r;
    for (auto& p : parts)
      r.s.extend_vocab(p.vocab());
    for (std::size_t i = 0; i < parts.size(); ++i)
      {
        std::vector<int> emb;
        for (auto& n : parts[i].names())
          emb.push_back(r.s.add_element(
            plain ? n : "part#" + std::to_string(i) + "/" + n));
        r.embed.push_back(emb);
      }
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (auto& [p, k] : parts[i].vocab().arity)
        for (auto& t : parts[i].tuples(p))
          {
            tuple_t tt;
            for (int a : t)
              tt.push_back(r.embed[i][a]);
            r.s.add_fact(p, tt);
          }
    return r;
  }

  product_result
  product(const std::vector<structure>& parts, std::size_t cap)
  {
    if (parts.empty())
      throw error("product of an empty family");
    vocabulary v;
    for (auto& p : parts)
      v.merge(p.vocab());
    std::size_t total = 1;
    for (auto& p : parts)
      {
        if (p.size() == 0)
          throw error("product factor with empty domain");
        total *= p.size();
        if (total > cap)
          throw cap_exceeded("product has more than " + std::to_string(cap)
                             + " elements");
      }
    product_result r;
    r.s = structure(v);
    std::map<tuple_t, int> pos;
    tuple_t cur(parts.size(), 0);
    for (std::size_t n = 0; n < total; ++n)
      {
        std::string nm = "(";
        for (std::size_t i = 0; i < parts.size(); ++i)
          nm += (i ? "," : "") + parts[i].name(cur[i]);
        nm += ")";
        pos[cur] = r.s.add_element(nm);
        r.comp.push_back(cur);
        for (std::size_t i = parts.size(); i-- > 0;)
          {
            if (++cur[i] < static_cast<int>(parts[i].size()))
              break;
            cur[i] = 0;
          }
      }
    for (auto& [p, k] : v.arity)
      {
        // Enumerate combinations of one fact per part, then zip them.
        std::vector<std::vector<tuple_t>> per;
        bool empty = false;
        for (auto& part : parts)
          {
            auto& ts = part.tuples(p);
            per.emplace_back(ts.begin(), ts.end());
            empty = empty || ts.empty();
          }
        if (empty)
          continue;
        std::vector<std::size_t> idx(parts.size(), 0);
        for (;;)
          {
            tuple_t fact(k);
            for (int j = 0; j < k; ++j)
              {
                tuple_t key(parts.size());
                for (std::size_t i = 0; i < parts.size(); ++i)
                  key[i] = per[i][idx[i]][j];
                fact[j] = pos.at(key);
              }
            r.s.add_fact(p, fact);
            std::size_t i = parts.size();
            while (i-- > 0)
              {
                if (++idx[i] < per[i].size())
                  break;
                idx[i] = 0;
              }
            if (i == static_cast<std::size_t>(-1))
              break;
          }
      }
    return r;
  }

  tree_result
  unravel(const structure& s, int root, int depth)
  {
    if (root < 0 || root >= static_cast<int>(s.size()))
      throw error("unravel root not in domain");
    tree_result r;
    vocabulary v;
    for (auto& [p, k] : s.vocab().arity)
      if (k <= 2)
        v.add(p, k);
    r.s = structure(v);
    auto label = [&](int node, int orig) {
      for (auto& c : s.labels(orig))
        r.s.add_label(c, node);
    };
    r.root = r.s.add_element(s.name(root));
    r.origin.push_back(root);
    label(r.root, root);
    std::vector<int> frontier{r.root};
    auto roles = s.vocab().role_names();
    for (int d = 0; d < depth; ++d)
      {
        std::vector<int> next;
        for (int node : frontier)
          {
            int orig = r.origin[node];
            for (auto& role : roles)
              for_each_elem(s.succ(role)[orig], [&](int t) {
                int child = r.s.add_element(r.s.name(node) + "/" + role + ":"
                                            + s.name(t));
                r.origin.push_back(t);
                label(child, t);
                r.s.add_edge(role, node, child);
                next.push_back(child);
              });
          }
        frontier = std::move(next);
      }
    return r;
  }

  std::vector<int>
  forest_depths(const structure& s)
  {
    std::size_t n = s.size();
    std::vector<int> parent(n, -1), depth(n, -1);
    for (auto& [p, k] : s.vocab().arity)
      {
        if (k > 2)
          throw error("forest check on a predicate of arity > 2");
        if (k != 2)
          continue;
        for (auto& t : s.tuples(p))
          {
            if (parent[t[1]] != -1)
              throw error("not a forest: element " + s.name(t[1])
                          + " has two incoming edges");
            parent[t[1]] = t[0];
          }
      }
    std::vector<std::vector<int>> kids(n);
    std::deque<int> q;
    for (std::size_t x = 0; x < n; ++x)
      if (parent[x] == -1)
        {
          depth[x] = 0;
          q.push_back(static_cast<int>(x));
        }
      else
        kids[parent[x]].push_back(static_cast<int>(x));
    while (!q.empty())
      {
        int x = q.front();
        q.pop_front();
        for (int c : kids[x])
          {
            depth[c] = depth[x] + 1;
            q.push_back(c);
          }
      }
    for (std::size_t x = 0; x < n; ++x)
      if (depth[x] < 0)
        throw error("not a forest: cycle through " + s.name(x));
    return depth;
  }

  structure
  truncate(const structure& s, int depth)
  {
    auto d = forest_depths(s);
    structure r(s.vocab());
    std::vector<int> map(s.size(), -1);
    for (std::size_t x = 0; x < s.size(); ++x)
      if (d[x] <= depth)
        map[x] = r.add_element(s.name(x));
    for (auto& [p, k] : s.vocab().arity)
      for (auto& t : s.tuples(p))
        {
          tuple_t tt;
          for (int a : t)
            {
              if (map[a] < 0)
                break;
              tt.push_back(map[a]);
            }
          if (tt.size() == t.size())
            r.add_fact(p, tt);
        }
    return r;
  }

  elem_set
  successors(const structure& s, const std::string& role, const elem_set& x)
  {
    elem_set r(s.size());
    auto& su = s.succ(role);
    for_each_elem(x, [&](int a) { r |= su[a]; });
    return r;
  }

  bool
  r_up_holds(const structure& s, const std::string& role, const elem_set& x,
             const elem_set& y)
  {
    if (x.size() != s.size() || y.size() != s.size())
      throw error("element set width does not match the domain");
    auto& su = s.succ(role);
    for (auto a = x.find_first(); a != elem_set::npos; a = x.find_next(a))
      if (!su[a].intersects(y))
        return false;
    return true;
  }

  bool
  r_down_holds(const structure& s, const std::string& role, const elem_set& x,
               const elem_set& y)
  {
    if (x.size() != s.size() || y.size() != s.size())
      throw error("element set width does not match the domain");
    auto& pr = s.pred(role);
    for (auto b = y.find_first(); b != elem_set::npos; b = y.find_next(b))
      if (!pr[b].intersects(x))
        return false;
    return true;
  }
}
