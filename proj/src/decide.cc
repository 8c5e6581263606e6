// SPDX-License-Identifier: MIT
// Entailment, equivalence and concept learning deciders for hornALC.
#include <hornlog/decide.hh>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace hornlog
{
  structure
  widen(const structure& s, const vocabulary& v)
  {
    structure out = s;
    out.extend_vocab(v);
    return out;
  }

  elem_set
  eval_widened(const concept_ptr& c, const structure& s)
  {
    vocabulary v = concept_vocab(c);
    for (auto& [p, k] : v.arity)
      if (s.vocab().has(p) && s.vocab().arity.at(p) != k)
        throw error("predicate " + p + " used with two arities");
    bool missing = false;
    for (auto& [p, k] : v.arity)
      missing = missing || !s.vocab().has(p);
    if (!missing)
      return eval_concept(c, s);
    return eval_concept(c, widen(s, v));
  }

  elem_set
  canonical_filter(const structure& a, const elem_set& x, const structure& b,
                   int y, int ell)
  {
    auto sim = greatest_sim(sim_kind::simulation, b, a, ell);
    return x & sim.rows.at(y);
  }

  bool
  entails_set(const structure& a, const elem_set& x, const structure& b,
              int y, int ell)
  {
    if (x.none())
      throw error("entailment needs a nonempty set");
    elem_set f = canonical_filter(a, x, b, y, ell);
    if (f.none())
      return false;
    horn_options opt;
    opt.ell = ell;
    opt.witness = false;
    return hornsim(a, f, b, y, opt).holds;
  }

  bool
  entails(const structure& a, int x, const structure& b, int y, int ell)
  {
    elem_set one(a.size());
    one.set(x);
    return entails_set(a, one, b, y, ell);
  }

  bool
  equiv(const structure& a, int x, const structure& b, int y, int ell)
  {
    return entails(a, x, b, y, ell) && entails(b, y, a, x, ell);
  }

  bool
  tbox_entails(const structure& a, const structure& b, int ell)
  {
    horn_options opt;
    opt.ell = ell;
    opt.witness = false;
    return global_hornsim(a, b, opt).holds;
  }

  bool
  tbox_equiv(const structure& a, const structure& b, int ell)
  {
    return tbox_entails(a, b, ell) && tbox_entails(b, a, ell);
  }

  cbe_instance
  make_cbe(const structure& s, const std::vector<std::string>& positives,
           const std::vector<std::string>& negatives)
  {
    cbe_instance inst{s, s.set_of(positives), s.set_of(negatives)};
    if (inst.positives.none())
      throw error("CBE instance needs a positive example");
    if (inst.positives.intersects(inst.negatives))
      throw error("positive and negative examples overlap");
    return inst;
  }

  cbe_instance
  parse_cbe(const std::string& text)
  {
    nlohmann::json in;
    try
      {
        in = nlohmann::json::parse(text);
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed CBE JSON: ") + e.what());
      }
    if (!in.is_object() || !in.contains("structure")
        || !in.contains("positives") || !in.contains("negatives"))
      throw error("CBE JSON needs structure, positives and negatives");
    try
      {
        return make_cbe(parse_structure(in["structure"].dump()),
                        in["positives"].get<std::vector<std::string>>(),
                        in["negatives"].get<std::vector<std::string>>());
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed CBE JSON: ") + e.what());
      }
  }

  bool
  cbe(const cbe_instance& inst, int ell)
  {
    for (int y : elems_of(inst.negatives))
      if (entails_set(inst.s, inst.positives, inst.s, y, ell))
        return false;
    return true;
  }

  // ---------------------------------------------------------------------
  // Separators

  namespace
  {
    /// Reads a separating concept off the moves that win a lost game.
    class separator_builder
    {
    public:
      separator_builder(const structure& a, const structure& b, int ell)
        : b_(b), game_(a, b, options(ell))
      {}

      concept_ptr
      build(const elem_set& z, int y)
      {
        return sep(z, y, game_.top_stage());
      }

    private:
      static horn_options
      options(int ell)
      {
        horn_options o;
        o.ell = ell;
        o.witness = false;
        return o;
      }

      concept_ptr
      lambda(int stage, int y)
      {
        int depth = game_.staged() ? stage : game_.filter_rounds();
        return char_el(b_, depth, y);
      }

      concept_ptr
      sep(const elem_set& z, int y, int stage)
      {
        elem_set f = z & game_.filter(stage, y);
        if (f.none())
          return c_imp(lambda(stage, y), c_bot());
        auto key = std::make_tuple(f, y, stage);
        concept_ptr d;
        auto it = memo_.find(key);
        if (it != memo_.end())
          d = it->second;
        else
          {
            int id = game_.solve(f, y, stage);
            if (game_.alive(id))
              throw error("no separator: the position is won by player 2");
            auto l = game_.why_lost(id);
            int ns = game_.next_stage(stage);
            switch (l.kind)
              {
              case horn_game::loss_kind::atom:
                d = c_name(game_.concepts()[l.concept_index]);
                break;
              case horn_game::loss_kind::forth:
                {
                  // Members of f skipped by the move have a successor that
                  // no answer can use; add one so the move covers f.
                  elem_set move = l.move;
                  elem_set live(move.size());
                  for (int b2 : game_.successors_b(l.role, y))
                    live |= game_.filter(ns, b2);
                  for_each_elem(f, [&](int a) {
                    elem_set one(f.size());
                    one.set(a);
                    elem_set sa = game_.successors(l.role, one);
                    if (!sa.intersects(move))
                      {
                        elem_set dead = sa - live;
                        move.set(dead.any() ? dead.find_first()
                                            : sa.find_first());
                      }
                  });
                  std::vector<concept_ptr> parts;
                  for (int b2 : game_.successors_b(l.role, y))
                    add_conjunct(parts, sep(move, b2, ns));
                  d = c_some(game_.roles()[l.role], c_and(parts));
                  break;
                }
              case horn_game::loss_kind::back:
                d = c_all(game_.roles()[l.role],
                          sep(game_.successors(l.role, f), l.target, ns));
                break;
              case horn_game::loss_kind::none:
                throw error("lost position without a recorded move");
              }
            memo_.emplace(key, d);
          }
        if (f != z)
          d = c_imp(lambda(stage, y), d);
        return d;
      }

      static void
      add_conjunct(std::vector<concept_ptr>& parts, const concept_ptr& c)
      {
        if (c->kind == ckind::top)
          return;
        for (auto& p : parts)
          if (same_concept(p, c))
            return;
        parts.push_back(c);
      }

      const structure& b_;
      horn_game game_;
      std::map<std::tuple<elem_set, int, int>, concept_ptr> memo_;
    };

    bool
    separates(const concept_ptr& c, const structure& a, const elem_set& x,
              const structure& b, int y, int ell)
    {
      if (!classify(c).is_hornALC || (ell >= 0 && depth(c) > ell))
        return false;
      return x.is_subset_of(eval_widened(c, a)) && !eval_widened(c, b).test(y);
    }

    concept_ptr
    enumerate_separator(const structure& a, const elem_set& x,
                        const structure& b, int y, int ell)
    {
      vocabulary v = a.vocab();
      v.merge(b.vocab());
      vocabulary dl;
      for (auto& [p, k] : v.arity)
        if (k == 1 || k == 2)
          dl.add(p, k);
      auto res = enum_concepts(fragment::hornALC, dl, ell < 0 ? 2 : ell, 7,
                               {a, b});
      for (auto& c : res.concepts)
        if (separates(c, a, x, b, y, ell))
          return c;
      return nullptr;
    }
  }

  separator_result
  synthesize_separator(const structure& a, const elem_set& x,
                       const structure& b, int y, int ell)
  {
    separator_result r;
    if (entails_set(a, x, b, y, ell))
      return r;
    concept_ptr c;
    try
      {
        separator_builder sb(a, b, ell);
        c = sb.build(x, y);
      }
    catch (const cap_exceeded&)
      {
        c = nullptr;
      }
    if (!c || !separates(c, a, x, b, y, ell))
      c = enumerate_separator(a, x, b, y, ell);
    if (c)
      {
        r.concept_value = c;
        r.verified = true;
      }
    return r;
  }

  separator_result
  cbe_separator(const cbe_instance& inst, int ell)
  {
    separator_result r;
    std::vector<concept_ptr> parts;
    for (int y : elems_of(inst.negatives))
      {
        auto s = synthesize_separator(inst.s, inst.positives, inst.s, y, ell);
        if (!s.concept_value)
          return r;
        bool dup = false;
        for (auto& p : parts)
          dup = dup || same_concept(p, s.concept_value);
        if (!dup)
          parts.push_back(s.concept_value);
      }
    concept_ptr c = c_and(parts);
    elem_set ext = eval_widened(c, inst.s);
    if (inst.positives.is_subset_of(ext) && !ext.intersects(inst.negatives)
        && classify(c).is_hornALC)
      {
        r.concept_value = c;
        r.verified = true;
      }
    return r;
  }

  // ---------------------------------------------------------------------
  // Reductions

  namespace
  {
    std::string
    first_role(const structure& a, const structure& b)
    {
      vocabulary v = a.vocab();
      v.merge(b.vocab());
      auto roles = v.role_names();
      return roles.empty() ? "R" : roles.front();
    }

    std::string
    fresh(const structure& s, const std::string& base)
    {
      std::string n = base;
      while (s.find(n) >= 0)
        n += "'";
      return n;
    }
  }

  entailment_instance
  reduce_hornsim_to_entailment(const structure& a, const structure& b,
                               const elem_set& x, int y)
  {
    if (x.size() != a.size() || x.none())
      throw error("reduction needs a nonempty set over A");
    std::string r = first_role(a, b);
    vocabulary v = a.vocab();
    v.merge(b.vocab());
    v.add(r, 2);
    entailment_instance out;
    out.a = widen(a, v);
    out.x = out.a.add_element(fresh(out.a, "new:a"));
    for (int e : elems_of(x))
      out.a.add_edge(r, out.x, e);
    auto u = disjoint_union({widen(a, v), widen(b, v)});
    out.b = std::move(u.s);
    out.y = out.b.add_element(fresh(out.b, "new:d"));
    out.b.add_edge(r, out.y, u.embed[1].at(y));
    for (int e : elems_of(x))
      out.b.add_edge(r, out.y, u.embed[0][e]);
    return out;
  }

  equivalence_instance
  reduce_entailment_to_equivalence(const structure& a, const structure& b,
                                   int x, int y)
  {
    std::string r = first_role(a, b);
    vocabulary v = a.vocab();
    v.merge(b.vocab());
    v.add(r, 2);
    auto u = disjoint_union({widen(a, v), widen(b, v)});
    equivalence_instance out;
    out.s = std::move(u.s);
    out.x = out.s.add_element(fresh(out.s, "new:a'"));
    out.y = out.s.add_element(fresh(out.s, "new:b'"));
    out.s.add_edge(r, out.x, u.embed[0].at(x));
    out.s.add_edge(r, out.x, u.embed[1].at(y));
    out.s.add_edge(r, out.y, u.embed[1].at(y));
    return out;
  }

  // ---------------------------------------------------------------------
  // Satisfiability of concepts by bounded tree models

  namespace
  {
    struct sub_index
    {
      std::vector<concept_ptr> subs;
      std::vector<std::vector<int>> kids;
      std::vector<int> depth;
      std::unordered_map<std::string, int> pos;
      std::vector<std::string> names, roles;

      int
      add(const concept_ptr& c)
      {
        std::string key = to_string(c);
        auto it = pos.find(key);
        if (it != pos.end())
          return it->second;
        std::vector<int> ks;
        for (auto& k : c->kids)
          ks.push_back(add(k));
        int d = 0;
        for (int k : ks)
          d = std::max(d, depth[k]);
        if (c->kind == ckind::exists || c->kind == ckind::forall)
          ++d;
        int id = static_cast<int>(subs.size());
        subs.push_back(c);
        kids.push_back(ks);
        depth.push_back(d);
        pos.emplace(key, id);
        return id;
      }
    };

    using vec_t = boost::dynamic_bitset<>;

    struct type_entry
    {
      vec_t v;
      std::size_t labels = 0;
      std::vector<std::vector<int>> children;  // per role, indices one level down
    };

    vec_t
    evaluate(const sub_index& ix, int k, std::size_t labels,
             const std::vector<std::pair<vec_t, vec_t>>& per_role,
             const std::vector<std::unordered_map<int, int>>& slot)
    {
      vec_t v(ix.subs.size());
      for (std::size_t i = 0; i < ix.subs.size(); ++i)
        {
          if (ix.depth[i] > k)
            continue;
          const auto& c = ix.subs[i];
          const auto& ks = ix.kids[i];
          bool val = false;
          switch (c->kind)
            {
            case ckind::top: val = true; break;
            case ckind::bot: val = false; break;
            case ckind::name:
              {
                auto n = std::find(ix.names.begin(), ix.names.end(), c->sym);
                val = labels >> (n - ix.names.begin()) & 1;
                break;
              }
            case ckind::neg: val = !v[ks[0]]; break;
            case ckind::conj:
              val = true;
              for (int q : ks)
                val = val && v[q];
              break;
            case ckind::disj:
              for (int q : ks)
                val = val || v[q];
              break;
            case ckind::impl: val = !v[ks[0]] || v[ks[1]]; break;
            case ckind::exists:
            case ckind::forall:
              {
                int r = static_cast<int>(
                  std::find(ix.roles.begin(), ix.roles.end(), c->sym)
                  - ix.roles.begin());
                int s = slot[r].at(ks[0]);
                val = c->kind == ckind::exists ? per_role[r].first[s]
                                               : per_role[r].second[s];
                break;
              }
            case ckind::nabla:
              throw error("nabla must be expanded before model search");
            }
          v[i] = val;
        }
      return v;
    }

    constexpr std::size_t type_cap = 200000;

    /// Realizable truth vectors per remaining depth.
    std::vector<std::vector<type_entry>>
    realizable(const sub_index& ix, int depth)
    {
      std::size_t nr = ix.roles.size();
      std::size_t nl = std::size_t(1) << ix.names.size();
      std::vector<std::vector<type_entry>> levels;
      for (int k = 0; k <= depth; ++k)
        {
          // Quantifier bodies per role usable at this depth.
          std::vector<std::unordered_map<int, int>> slot(nr);
          std::vector<std::vector<int>> bodies(nr);
          for (std::size_t i = 0; i < ix.subs.size(); ++i)
            {
              auto kind = ix.subs[i]->kind;
              if ((kind != ckind::exists && kind != ckind::forall)
                  || ix.depth[i] > k)
                continue;
              int r = static_cast<int>(
                std::find(ix.roles.begin(), ix.roles.end(), ix.subs[i]->sym)
                - ix.roles.begin());
              int body = ix.kids[i][0];
              if (!slot[r].count(body))
                {
                  slot[r].emplace(body, static_cast<int>(bodies[r].size()));
                  bodies[r].push_back(body);
                }
            }
          // Achievable (exists, forall) summaries of child sets per role.
          struct summary
          {
            vec_t any, all;
            std::vector<int> kids;
          };
          std::vector<std::vector<summary>> sums(nr);
          for (std::size_t r = 0; r < nr; ++r)
            {
              std::size_t q = bodies[r].size();
              std::map<std::pair<vec_t, vec_t>, std::size_t> seen;
              sums[r].push_back({vec_t(q), ~vec_t(q), {}});
              seen.emplace(std::make_pair(vec_t(q), ~vec_t(q)), 0);
              if (k > 0)
                {
                  std::set<vec_t> projs;
                  const auto& below = levels[k - 1];
                  for (std::size_t t = 0; t < below.size(); ++t)
                    {
                      vec_t p(q);
                      for (std::size_t j = 0; j < q; ++j)
                        p[j] = below[t].v[bodies[r][j]];
                      if (!projs.insert(p).second)
                        continue;
                      std::size_t cur = sums[r].size();
                      for (std::size_t s = 0; s < cur; ++s)
                        {
                          vec_t any = sums[r][s].any | p;
                          vec_t all = sums[r][s].all & p;
                          if (seen.emplace(std::make_pair(any, all),
                                           sums[r].size()).second)
                            {
                              auto kids = sums[r][s].kids;
                              kids.push_back(static_cast<int>(t));
                              sums[r].push_back({any, all, kids});
                              if (sums[r].size() > type_cap)
                                throw cap_exceeded("model search too large");
                            }
                        }
                    }
                }
            }
          std::vector<type_entry> level;
          std::map<vec_t, std::size_t> have;
          std::vector<std::size_t> pick(nr, 0);
          for (std::size_t l = 0; l < nl; ++l)
            {
              std::fill(pick.begin(), pick.end(), 0);
              for (;;)
                {
                  std::vector<std::pair<vec_t, vec_t>> per_role;
                  for (std::size_t r = 0; r < nr; ++r)
                    per_role.push_back({sums[r][pick[r]].any,
                                        sums[r][pick[r]].all});
                  vec_t v = evaluate(ix, k, l, per_role, slot);
                  if (!have.count(v))
                    {
                      type_entry te{v, l, {}};
                      for (std::size_t r = 0; r < nr; ++r)
                        te.children.push_back(sums[r][pick[r]].kids);
                      have.emplace(v, level.size());
                      level.push_back(std::move(te));
                      if (level.size() > type_cap)
                        throw cap_exceeded("model search too large");
                    }
                  std::size_t r = 0;
                  while (r < nr && ++pick[r] == sums[r].size())
                    pick[r++] = 0;
                  if (r == nr)
                    break;
                }
            }
          levels.push_back(std::move(level));
        }
      return levels;
    }

    int
    build_tree(const sub_index& ix,
               const std::vector<std::vector<type_entry>>& levels, int k,
               int t, structure& s, const std::string& name)
    {
      int me = s.add_element(name);
      const auto& te = levels[k][t];
      for (std::size_t i = 0; i < ix.names.size(); ++i)
        if (te.labels >> i & 1)
          s.add_label(ix.names[i], me);
      for (std::size_t r = 0; r < te.children.size(); ++r)
        for (std::size_t j = 0; j < te.children[r].size(); ++j)
          {
            int c = build_tree(ix, levels, k - 1, te.children[r][j], s,
                               name + "/" + ix.roles[r] + std::to_string(j));
            s.add_edge(ix.roles[r], me, c);
          }
      return me;
    }
  }

  std::optional<pointed_model>
  find_model(const concept_ptr& c0)
  {
    concept_ptr c = expand_nabla(c0);
    sub_index ix;
    vocabulary v = concept_vocab(c);
    ix.names = v.concept_names();
    ix.roles = v.role_names();
    if (ix.names.size() > 12)
      throw cap_exceeded("too many concept names for model search");
    int root = ix.add(c);
    int d = ix.depth[root];
    auto levels = realizable(ix, d);
    for (std::size_t t = 0; t < levels[d].size(); ++t)
      if (levels[d][t].v[root])
        {
          pointed_model m;
          m.s.extend_vocab(v);
          m.root = build_tree(ix, levels, d, static_cast<int>(t), m.s, "r");
          return m;
        }
    return std::nullopt;
  }

  bool
  subsumed(const concept_ptr& c, const concept_ptr& d)
  {
    return !find_model(c_and({c, c_not(d)}));
  }

  bool
  equivalent(const concept_ptr& c, const concept_ptr& d)
  {
    return subsumed(c, d) && subsumed(d, c);
  }

  // ---------------------------------------------------------------------
  // Horn expressibility at toy scale

  namespace
  {
    /// Trees of depth <= ell whose root has at most two children and
    /// whose other nodes have at most one, over the given names and roles.
    std::vector<structure>
    small_trees(const vocabulary& v, int ell)
    {
      auto names = v.concept_names();
      auto roles = v.role_names();
      std::size_t nl = std::size_t(1) << names.size();
      // shapes[k] = trees of depth <= k, as (labels, children) recipes.
      struct recipe
      {
        std::size_t labels;
        std::vector<std::pair<int, int>> kids;  // (role, tree index one level down)
      };
      std::vector<std::vector<recipe>> inner(ell + 1), top(ell + 1);
      for (int k = 0; k <= ell; ++k)
        {
          std::vector<std::pair<int, int>> opts;
          if (k > 0)
            for (std::size_t r = 0; r < roles.size(); ++r)
              for (std::size_t t = 0; t < inner[k - 1].size(); ++t)
                opts.push_back({static_cast<int>(r), static_cast<int>(t)});
          for (std::size_t l = 0; l < nl; ++l)
            {
              inner[k].push_back({l, {}});
              top[k].push_back({l, {}});
              for (std::size_t i = 0; i < opts.size(); ++i)
                {
                  inner[k].push_back({l, {opts[i]}});
                  top[k].push_back({l, {opts[i]}});
                  for (std::size_t j = i; j < opts.size(); ++j)
                    top[k].push_back({l, {opts[i], opts[j]}});
                }
            }
        }
      std::vector<structure> out;
      std::function<int(structure&, int, const recipe&, const std::string&)> build =
        [&](structure& s, int k, const recipe& rc, const std::string& name) {
          int me = s.add_element(name);
          for (std::size_t i = 0; i < names.size(); ++i)
            if (rc.labels >> i & 1)
              s.add_label(names[i], me);
          for (std::size_t j = 0; j < rc.kids.size(); ++j)
            {
              auto [r, t] = rc.kids[j];
              int c = build(s, k - 1, inner[k - 1][t],
                            name + "/" + std::to_string(j));
              s.add_edge(roles[r], me, c);
            }
          return me;
        };
      for (auto& rc : top[ell])
        {
          structure s(v);
          build(s, ell, rc, "t");
          out.push_back(std::move(s));
        }
      return out;
    }
  }

  expressible_result
  horn_expressible(const concept_ptr& c, int ell,
                   const expressible_options& opt)
  {
    expressible_result res;
    if (ell < 0 || depth(c) > ell)
      throw error("horn_expressible needs depth(C) <= ell");
    vocabulary v = concept_vocab(c);
    auto fr = classify(c);
    try
      {
        if (fr.is_hornALC)
          {
            res.verdict = expressible::yes;
            res.horn = c;
            return res;
          }
        if (fr.is_p_horn)
          {
            auto d = to_horn(nnf(expand_nabla(c)));
            if (classify(d).is_hornALC && depth(d) <= ell && equivalent(c, d))
              {
                res.verdict = expressible::yes;
                res.horn = d;
                return res;
              }
          }
        auto cands = enum_concepts(fragment::hornALC, v, ell, opt.size_cap, {});
        std::size_t tried = 0;
        for (auto& d : cands.concepts)
          {
            if (++tried > opt.candidate_cap)
              break;
            if (equivalent(c, d))
              {
                res.verdict = expressible::yes;
                res.horn = d;
                return res;
              }
          }
      }
    catch (const cap_exceeded& e)
      {
        res.note = e.what();
      }

    // Look for X inside C and b outside C with X Horn simulated by b.
    auto trees = small_trees(v, ell);
    auto u = disjoint_union(trees);
    elem_set ext = eval_concept(c, u.s);
    std::vector<int> roots;
    for (auto& e : u.embed)
      roots.push_back(e[0]);
    auto sims = greatest_sim(sim_kind::simulation, u.s, u.s, ell);
    std::size_t tried = 0;
    for (std::size_t bi = 0; bi < trees.size(); ++bi)
      {
        int y = roots[bi];
        if (ext.test(y))
          continue;
        if (++tried > opt.candidate_cap)
          break;
        std::vector<structure> parts;
        for (std::size_t ai = 0; ai < trees.size(); ++ai)
          if (ext.test(roots[ai]) && sims.holds(y, roots[ai]))
            parts.push_back(trees[ai]);
        if (parts.empty())
          continue;
        auto a = disjoint_union(parts);
        elem_set x(a.s.size());
        for (auto& e : a.embed)
          x.set(e[0]);
        horn_options ho;
        ho.ell = ell;
        ho.witness = false;
        ho.position_cap = opt.position_cap;
        try
          {
            if (hornsim(a.s, x, trees[bi], 0, ho).holds)
              {
                res.verdict = expressible::no;
                res.a = std::move(a.s);
                res.x = x;
                res.b = trees[bi];
                res.y = 0;
                return res;
              }
          }
        catch (const cap_exceeded& e)
          {
            res.note = e.what();
          }
      }
    res.verdict = expressible::unknown;
    if (res.note.empty())
      res.note = "no equivalent candidate and no witness within the caps";
    return res;
  }
}
