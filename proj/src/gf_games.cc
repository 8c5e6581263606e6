// SPDX-License-Identifier: MIT
// Guarded simulations and guarded Horn simulation games over links.
#include <hornlog/gf_games.hh>

#include <algorithm>
#include <chrono>
#include <climits>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

namespace hornlog
{
  namespace
  {
    constexpr int never = INT_MAX;

    tuple_t
    sorted_set(const tuple_t& t)
    {
      tuple_t u = t;
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      return u;
    }

    /// Position of every element of \a t inside the sorted set \a s.
    std::vector<int>
    positions_in(const tuple_t& s, const tuple_t& t)
    {
      std::vector<int> pos;
      for (int e : t)
        pos.push_back(static_cast<int>(
          std::lower_bound(s.begin(), s.end(), e) - s.begin()));
      return pos;
    }

    tuple_t
    image_of(const tuple_t& image, const std::vector<int>& pos)
    {
      tuple_t out;
      for (int i : pos)
        out.push_back(image[i]);
      return out;
    }

    /// Map over the sorted set of \a target given by the tuple pair; empty
    /// when the pair does not define a map.
    std::optional<tuple_t>
    as_map(const tuple_t& target, const tuple_t& image)
    {
      tuple_t s = sorted_set(target);
      tuple_t out(s.size(), -1);
      auto pos = positions_in(s, target);
      for (std::size_t i = 0; i < target.size(); ++i)
        {
          if (out[pos[i]] >= 0 && out[pos[i]] != image[i])
            return std::nullopt;
          out[pos[i]] = image[i];
        }
      return out;
    }

    /// Predicates of two structures plus equality, and fact access where
    /// "=" is the diagonal.
    class gf_pair
    {
    public:
      gf_pair(const structure& a, const structure& b)
      {
        for (auto* s : {&a, &b})
          for (auto& [p, k] : s->vocab().arity)
            {
              auto it = preds.find(p);
              if (it != preds.end() && it->second != k)
                throw error("predicate " + p + " has different arities");
              preds.emplace(p, k);
            }
        if (preds.count("="))
          throw error("\"=\" cannot be a predicate name");
        preds.emplace("=", 2);
      }

      const std::vector<tuple_t>&
      facts(const structure& s, const std::string& p)
      {
        auto key = std::make_pair(&s, p);
        auto it = cache_.find(key);
        if (it != cache_.end())
          return it->second;
        std::vector<tuple_t> out;
        if (p == "=")
          for (std::size_t e = 0; e < s.size(); ++e)
            out.push_back({static_cast<int>(e), static_cast<int>(e)});
        else if (s.vocab().has(p))
          out.assign(s.tuples(p).begin(), s.tuples(p).end());
        return cache_.emplace(key, std::move(out)).first->second;
      }

      static bool
      holds(const structure& s, const std::string& p, const tuple_t& t)
      {
        if (p == "=")
          return t[0] == t[1];
        return s.vocab().has(p) && s.holds(p, t);
      }

      std::map<std::string, int> preds;

    private:
      std::map<std::pair<const structure*, std::string>,
               std::vector<tuple_t>> cache_;
    };

    struct inner_fact
    {
      std::string pred;
      std::vector<int> pos;
    };

    /// Facts of \a s whose elements all lie in the sorted set \a set.
    std::vector<inner_fact>
    inner_facts(const structure& s, const tuple_t& set)
    {
      std::vector<inner_fact> out;
      for (auto& [p, k] : s.vocab().arity)
        for (auto& t : s.tuples(p))
          if (std::all_of(t.begin(), t.end(), [&](int e) {
                return std::binary_search(set.begin(), set.end(), e);
              }))
            out.push_back({p, positions_in(set, t)});
      return out;
    }

    bool
    is_hom(const std::vector<inner_fact>& inner, const structure& dst,
           const tuple_t& image)
    {
      for (auto& f : inner)
        if (!gf_pair::holds(dst, f.pred, image_of(image, f.pos)))
          return false;
      return true;
    }

    std::vector<std::pair<int, int>>
    common_positions(const tuple_t& s, const tuple_t& t)
    {
      std::vector<std::pair<int, int>> out;
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
          if (s[i] == t[j])
            out.emplace_back(static_cast<int>(i), static_cast<int>(j));
      return out;
    }

    /// Homomorphisms from guarded sets of src into dst with the stage at
    /// which each leaves the greatest guarded simulation.
    class gsim_table
    {
    public:
      gsim_table(const structure& src, const structure& dst)
        : sets(guarded_sets(src))
      {
        for (std::size_t i = 0; i < sets.size(); ++i)
          index.emplace(sets[i], static_cast<int>(i));
        std::size_t n = dst.size();
        maps.resize(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i)
          {
            auto inner = inner_facts(src, sets[i]);
            std::size_t m = sets[i].size();
            tuple_t img(m, 0);
            if (n == 0)
              continue;
            for (;;)
              {
                if (is_hom(inner, dst, img))
                  maps[i].emplace(img, never);
                std::size_t j = m;
                while (j > 0 && ++img[j - 1] == static_cast<int>(n))
                  img[--j] = 0;
                if (j == 0)
                  break;
              }
          }
        refine();
      }

      /// The map is a homomorphism surviving \a ell rounds (all rounds
      /// when ell < 0).
      bool
      alive(int set, const tuple_t& img, int ell) const
      {
        auto it = maps[set].find(img);
        if (it == maps[set].end())
          return false;
        return ell < 0 ? it->second == never : it->second > ell;
      }

      int
      set_index(const tuple_t& s) const
      {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
      }

      std::vector<tuple_t> sets;
      std::map<tuple_t, int> index;
      std::vector<std::map<tuple_t, int>> maps;

    private:
      void
      refine()
      {
        std::size_t k = sets.size();
        std::vector<std::vector<std::vector<std::pair<int, int>>>> common(
          k, std::vector<std::vector<std::pair<int, int>>>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j)
            common[i][j] = common_positions(sets[i], sets[j]);
        for (int stage = 0;; ++stage)
          {
            bool changed = false;
            for (std::size_t i = 0; i < k; ++i)
              for (auto& [img, death] : maps[i])
                {
                  if (death != never)
                    continue;
                  for (std::size_t j = 0; j < k && death == never; ++j)
                    {
                      bool found = false;
                      for (auto& [img2, death2] : maps[j])
                        {
                          if (death2 <= stage)
                            continue;
                          bool agree = true;
                          for (auto [x, y] : common[i][j])
                            if (img[x] != img2[y])
                              {
                                agree = false;
                                break;
                              }
                          if (agree)
                            {
                              found = true;
                              break;
                            }
                        }
                      if (!found)
                        {
                          death = stage + 1;
                          changed = true;
                        }
                    }
                }
            if (!changed)
              return;
          }
      }
    };

    /// A move pattern: an atom whose positions hold an element of the
    /// current guarded set (code < m) or a fresh variable (code - m).
    struct pattern
    {
      std::string pred;
      std::vector<int> code;
      int m = 0;
      bool has_old = false;
    };

    std::vector<pattern>
    patterns_for(const std::map<std::string, int>& preds, int m)
    {
      std::vector<pattern> out;
      for (auto& [p, r] : preds)
        {
          if (r == 0)
            continue;
          std::vector<int> code(r);
          std::function<void(int, int)> rec = [&](int i, int fresh) {
            if (i == r)
              {
                if (fresh == 0)
                  return;
                pattern pt{p, code, m, false};
                pt.has_old = std::any_of(code.begin(), code.end(),
                                         [&](int c) { return c < m; });
                out.push_back(pt);
                return;
              }
            for (int c = 0; c < m; ++c)
              {
                code[i] = c;
                rec(i + 1, fresh);
              }
            for (int v = 0; v <= fresh; ++v)
              {
                code[i] = m + v;
                rec(i + 1, std::max(fresh, v + 1));
              }
          };
          rec(0, 0);
        }
      return out;
    }

    /// t instantiates the pattern with old elements taken from base.
    bool
    matches(const tuple_t& t, const pattern& pt, const tuple_t& base)
    {
      std::vector<int> fresh(t.size(), -1);
      for (std::size_t i = 0; i < t.size(); ++i)
        {
          int c = pt.code[i];
          if (c < pt.m)
            {
              if (t[i] != base[c])
                return false;
            }
          else if (fresh[c - pt.m] < 0)
            fresh[c - pt.m] = t[i];
          else if (fresh[c - pt.m] != t[i])
            return false;
        }
      return true;
    }

    /// The inclusion-minimal sets containing one candidate per row.
    std::vector<std::vector<tuple_t>>
    minimal_choices(const std::vector<std::vector<tuple_t>>& cands,
                    std::size_t cap)
    {
      std::set<std::vector<tuple_t>> found;
      std::vector<tuple_t> cur;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == cands.size())
          {
            auto y = cur;
            std::sort(y.begin(), y.end());
            found.insert(y);
            if (found.size() > cap)
              throw cap_exceeded("too many choice sets in a forth move");
            return;
          }
        for (auto& c : cands[i])
          if (std::find(cur.begin(), cur.end(), c) != cur.end())
            {
              rec(i + 1);
              return;
            }
        for (auto& c : cands[i])
          {
            cur.push_back(c);
            rec(i + 1);
            cur.pop_back();
          }
      };
      rec(0);
      std::vector<std::vector<tuple_t>> all(found.begin(), found.end());
      std::vector<std::vector<tuple_t>> out;
      for (auto& y : all)
        {
          bool minimal = true;
          for (auto& z : all)
            if (z.size() < y.size()
                && std::includes(y.begin(), y.end(), z.begin(), z.end()))
              {
                minimal = false;
                break;
              }
          if (minimal)
            out.push_back(y);
        }
      return out;
    }

    /// Every set with one tuple per group.
    std::vector<std::vector<tuple_t>>
    one_per_group(const std::vector<std::vector<tuple_t>>& groups,
                  std::size_t cap)
    {
      std::vector<std::vector<tuple_t>> out{{}};
      for (auto& g : groups)
        {
          std::vector<std::vector<tuple_t>> next;
          for (auto& y : out)
            for (auto& t : g)
              {
                auto z = y;
                z.push_back(t);
                std::sort(z.begin(), z.end());
                next.push_back(z);
                if (next.size() > cap)
                  throw cap_exceeded("too many choice sets in a forth move");
              }
          out = std::move(next);
        }
      return out;
    }

    /// Shared state of the games from A (the structure of the maps'
    /// images) to B (the structure of the link targets).
    class link_game
    {
    public:
      link_game(const structure& a, const structure& b)
        : a_(a), b_(b), pair_(a, b), to_a_(b, a)
      {
      }

      const structure& a_;
      const structure& b_;
      gf_pair pair_;
      gsim_table to_a_;

      const std::vector<tuple_t>&
      bsets() const
      {
        return to_a_.sets;
      }

      const std::vector<pattern>&
      patterns(int m)
      {
        auto it = patterns_.find(m);
        if (it == patterns_.end())
          it = patterns_.emplace(m, patterns_for(pair_.preds, m)).first;
        return it->second;
      }

      /// Admissible maps on guarded set s with k rounds left (k < 0:
      /// unbounded): homomorphisms passing the guarded simulation filter.
      const std::vector<tuple_t>&
      admissible(int k, int s)
      {
        auto key = std::make_pair(k, s);
        auto it = admissible_.find(key);
        if (it != admissible_.end())
          return it->second;
        std::vector<tuple_t> out;
        for (auto& [img, death] : to_a_.maps[s])
          if (k < 0 ? death == never : death > k)
            out.push_back(img);
        std::size_t bound = to_a_.sets[s].size() == 1 ? a_.size()
                                                      : atom_count();
        if (out.size() > bound)
          throw error("internal: link exceeds the ground-atom bound");
        return admissible_.emplace(key, std::move(out)).first->second;
      }

      /// Empty string when (atom) holds for the maps P on guarded set s.
      std::string
      atom_violation(int s, const std::vector<tuple_t>& p)
      {
        const tuple_t& set = to_a_.sets[s];
        int m = static_cast<int>(set.size());
        for (auto& [r, k] : pair_.preds)
          {
            std::vector<int> idx(k, 0);
            for (;;)
              {
                tuple_t bt;
                for (int i : idx)
                  bt.push_back(set[i]);
                if (!gf_pair::holds(b_, r, bt)
                    && std::all_of(p.begin(), p.end(), [&](const tuple_t& q) {
                         return gf_pair::holds(a_, r, image_of(q, idx));
                       }))
                  {
                    std::string s = r + "(";
                    for (std::size_t i = 0; i < bt.size(); ++i)
                      s += (i ? "," : "") + b_.name(bt[i]);
                    return s + ") holds under every map but not in B";
                  }
                int i = k - 1;
                while (i >= 0 && ++idx[i] == m)
                  idx[i--] = 0;
                if (i < 0)
                  break;
              }
          }
        return {};
      }

      /// Candidate A-facts per map for a forth pattern; empty when some
      /// map has none.
      std::vector<std::vector<tuple_t>>
      candidates(const pattern& pt, const std::vector<tuple_t>& p)
      {
        std::vector<std::vector<tuple_t>> out;
        auto& facts = pair_.facts(a_, pt.pred);
        for (auto& q : p)
          {
            std::vector<tuple_t> c;
            for (auto& t : facts)
              if (matches(t, pt, q))
                c.push_back(t);
            if (c.empty())
              return {};
            out.push_back(std::move(c));
          }
        return out;
      }

      /// B-facts answering a forth pattern from guarded set s.
      std::vector<tuple_t>
      responses(const pattern& pt, int s)
      {
        std::vector<tuple_t> out;
        for (auto& t : pair_.facts(b_, pt.pred))
          if (matches(t, pt, to_a_.sets[s]))
            out.push_back(t);
        return out;
      }

      /// Maps of \a maps on the guarded set of \a fact sending it into Y.
      std::vector<tuple_t>
      restrict_to(const tuple_t& fact, const std::vector<tuple_t>& maps,
                  const std::vector<tuple_t>& y)
      {
        auto pos = positions_in(sorted_set(fact), fact);
        std::vector<tuple_t> out;
        for (auto& q : maps)
          if (std::binary_search(y.begin(), y.end(), image_of(q, pos)))
            out.push_back(q);
        return out;
      }

      /// Maps of \a maps agreeing with some map of \a p on the common part
      /// of guarded sets s and t.
      std::vector<tuple_t>
      agreeing(int s, const std::vector<tuple_t>& p, int t,
               const std::vector<tuple_t>& maps)
      {
        auto common = common_positions(to_a_.sets[s], to_a_.sets[t]);
        std::set<tuple_t> proj;
        for (auto& q : p)
          {
            tuple_t v;
            for (auto [i, j] : common)
              v.push_back(q[i]);
            proj.insert(v);
          }
        std::vector<tuple_t> out;
        for (auto& q : maps)
          {
            tuple_t v;
            for (auto [i, j] : common)
              v.push_back(q[j]);
            if (proj.count(v))
              out.push_back(q);
          }
        return out;
      }

      int
      bset_of(const tuple_t& fact) const
      {
        return to_a_.set_index(sorted_set(fact));
      }

    private:
      std::size_t
      atom_count()
      {
        std::size_t n = 0;
        for (auto& [p, k] : a_.vocab().arity)
          n += a_.tuples(p).size();
        return n;
      }

      std::map<int, std::vector<pattern>> patterns_;
      std::map<std::pair<int, int>, std::vector<tuple_t>> admissible_;
    };

    /// Greatest fixpoint over explored positions (k, s, P).
    class ghsim_engine
    {
    public:
      ghsim_engine(link_game& g, const ghsim_options& opt)
        : g_(g), opt_(opt)
      {
      }

      int
      intern(int k, int s, std::vector<tuple_t> p)
      {
        std::sort(p.begin(), p.end());
        auto key = std::make_tuple(k, s, p);
        auto it = ids_.find(key);
        if (it != ids_.end())
          return it->second;
        if (nodes_.size() >= opt_.position_cap)
          throw cap_exceeded("guarded Horn simulation game exceeds the "
                             "position cap");
        int id = static_cast<int>(nodes_.size());
        ids_.emplace(key, id);
        nodes_.push_back({k, s, std::move(p), true, {}});
        todo_.push_back(id);
        return id;
      }

      void
      solve()
      {
        while (!todo_.empty())
          {
            int id = todo_.back();
            todo_.pop_back();
            expand(id);
          }
        for (bool changed = true; changed; ++rounds_)
          {
            changed = false;
            for (auto& n : nodes_)
              {
                if (!n.alive)
                  continue;
                for (auto& mv : n.moves)
                  if (std::none_of(mv.begin(), mv.end(), [&](int r) {
                        return nodes_[r].alive;
                      }))
                    {
                      n.alive = false;
                      changed = true;
                      break;
                    }
              }
          }
      }

      bool alive(int id) const { return nodes_[id].alive; }
      std::size_t size() const { return nodes_.size(); }
      int rounds() const { return rounds_; }

    private:
      struct node
      {
        int k, s;
        std::vector<tuple_t> p;
        bool alive;
        std::vector<std::vector<int>> moves;
      };

      void
      expand(int id)
      {
        int k = nodes_[id].k, s = nodes_[id].s;
        auto p = nodes_[id].p;
        if (!g_.atom_violation(s, p).empty())
          {
            nodes_[id].alive = false;
            return;
          }
        if (k == 0)
          return;
        int nk = k < 0 ? -1 : k - 1;
        std::set<std::vector<int>> moves;
        auto add_move = [&](std::vector<int> mv) {
          if (mv.empty())
            {
              nodes_[id].alive = false;
              return false;
            }
          std::sort(mv.begin(), mv.end());
          mv.erase(std::unique(mv.begin(), mv.end()), mv.end());
          moves.insert(mv);
          return true;
        };
        for (std::size_t t = 0; t < g_.bsets().size(); ++t)
          {
            int ti = static_cast<int>(t);
            auto next = g_.agreeing(s, p, ti, g_.admissible(nk, ti));
            std::vector<int> mv;
            if (!next.empty())
              mv.push_back(intern(nk, ti, next));
            if (!add_move(mv))
              return;
          }
        int m = static_cast<int>(g_.bsets()[s].size());
        for (auto& pt : g_.patterns(m))
          {
            auto cands = g_.candidates(pt, p);
            if (cands.empty())
              continue;
            auto answers = g_.responses(pt, s);
            for (auto& y : minimal_choices(cands, opt_.choice_cap))
              {
                std::vector<int> mv;
                for (auto& fact : answers)
                  {
                    int t = g_.bset_of(fact);
                    auto next = g_.restrict_to(fact, g_.admissible(nk, t), y);
                    if (!next.empty())
                      mv.push_back(intern(nk, t, next));
                  }
                if (!add_move(mv))
                  return;
              }
          }
        nodes_[id].moves.assign(moves.begin(), moves.end());
      }

      link_game& g_;
      ghsim_options opt_;
      std::vector<node> nodes_;
      std::map<std::tuple<int, int, std::vector<tuple_t>>, int> ids_;
      std::vector<int> todo_;
      int rounds_ = 0;
    };

    void
    check_caps(const structure& a, const structure& b,
               const ghsim_options& opt)
    {
      if (a.size() > opt.dom_cap || b.size() > opt.dom_cap)
        throw cap_exceeded("guarded games are limited to "
                           + std::to_string(opt.dom_cap) + " elements");
      if (a.vocab().max_arity() > opt.arity_cap
          || b.vocab().max_arity() > opt.arity_cap)
        throw cap_exceeded("guarded games are limited to arity "
                           + std::to_string(opt.arity_cap));
    }

    double
    millis_since(std::chrono::steady_clock::time_point t0)
    {
      return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
    }

    std::string
    names_of_tuple(const structure& s, const tuple_t& t)
    {
      std::string out;
      for (int e : t)
        out += s.name(e);
      return out;
    }
  }

  bool
  gsim(const structure& a, const tuple_t& at, const structure& b,
       const tuple_t& bt, int ell)
  {
    if (at.size() != bt.size() || at.empty())
      throw error("gsim needs nonempty tuples of equal length");
    if (!is_guarded(a, at) || !is_guarded(b, bt))
      throw error("gsim needs guarded tuples");
    gf_pair check(a, b);
    auto img = as_map(at, bt);
    if (!img)
      return false;
    gsim_table t(a, b);
    return t.alive(t.set_index(sorted_set(at)), *img, ell);
  }

  ghsim_verdict
  ghsim(const structure& a, const std::vector<tuple_t>& x, const structure& b,
        const tuple_t& bt, const ghsim_options& opt)
  {
    auto t0 = std::chrono::steady_clock::now();
    check_caps(a, b, opt);
    if (x.empty())
      throw error("ghsim needs a nonempty set of tuples");
    if (bt.empty() || !is_guarded(b, bt))
      throw error("the target tuple is not guarded");
    for (auto& t : x)
      if (t.size() != bt.size() || !is_guarded(a, t))
        throw error("source tuples must be guarded and match the target "
                    "length");
    link_game g(a, b);
    int s = g.bset_of(bt);
    ghsim_verdict v;
    std::vector<tuple_t> p0;
    const auto& adm = g.admissible(opt.ell, s);
    for (auto& t : x)
      {
        auto img = as_map(bt, t);
        if (img && std::binary_search(adm.begin(), adm.end(), *img))
          {
            p0.push_back(*img);
            v.filtered.push_back(t);
          }
      }
    if (p0.empty())
      {
        v.note = "canonical filter is empty";
        v.stats.millis = millis_since(t0);
        return v;
      }
    ghsim_engine e(g, opt);
    int root = e.intern(opt.ell, s, p0);
    e.solve();
    v.holds = e.alive(root);
    v.stats = {e.size(), e.rounds(), millis_since(t0)};
    return v;
  }

  ghsim_verdict
  global_ghsim(const structure& a, const structure& b,
               const ghsim_options& opt)
  {
    auto t0 = std::chrono::steady_clock::now();
    check_caps(a, b, opt);
    link_game g(a, b);
    ghsim_verdict v;
    v.note = "global guarded Horn simulation is an extrapolation: every "
             "guarded set of B must be a winning target";
    ghsim_engine e(g, opt);
    std::vector<int> roots;
    for (std::size_t s = 0; s < g.bsets().size(); ++s)
      {
        int si = static_cast<int>(s);
        const auto& adm = g.admissible(opt.ell, si);
        if (adm.empty())
          {
            v.stats.millis = millis_since(t0);
            return v;
          }
        roots.push_back(e.intern(opt.ell, si, adm));
      }
    e.solve();
    v.holds = std::all_of(roots.begin(), roots.end(),
                          [&](int r) { return e.alive(r); });
    v.stats = {e.size(), e.rounds(), millis_since(t0)};
    return v;
  }

  namespace
  {
    struct canon_link
    {
      int s;
      std::vector<tuple_t> p;
      bool operator<(const canon_link& o) const
      {
        return std::tie(s, p) < std::tie(o.s, o.p);
      }
    };

    /// Literal check of the (generalized) conditions on the closure of z.
    class relation_checker
    {
    public:
      relation_checker(const structure& a, const structure& b,
                       std::vector<int> part_of,
                       std::vector<const structure*> parts,
                       std::vector<std::vector<int>> local)
        : g_(a, b), part_of_(std::move(part_of)), parts_(std::move(parts)),
          local_(std::move(local))
      {
        for (auto* part : parts_)
          part_sim_.emplace_back(b, *part);
      }

      check_result
      run(const std::vector<glink>& z)
      {
        std::set<canon_link> closed;
        for (auto& l : z)
          {
            if (l.target.empty() || !is_guarded(g_.b_, l.target))
              return fail("link target " + names_of_tuple(g_.b_, l.target)
                          + " is not guarded");
            if (l.images.empty())
              return fail("link with target "
                          + names_of_tuple(g_.b_, l.target)
                          + " has no maps");
            int s = g_.bset_of(l.target);
            std::vector<tuple_t> p;
            for (auto& im : l.images)
              {
                if (im.size() != l.target.size())
                  return fail("image length differs from the target");
                auto mp = as_map(l.target, im);
                if (!mp)
                  return fail("image " + names_of_tuple(g_.a_, im)
                              + " does not define a map");
                p.push_back(*mp);
              }
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
            const tuple_t& set = g_.bsets()[s];
            for (std::size_t t = 0; t < g_.bsets().size(); ++t)
              {
                const tuple_t& sub = g_.bsets()[t];
                if (!std::includes(set.begin(), set.end(), sub.begin(),
                                   sub.end()))
                  continue;
                auto pos = positions_in(set, sub);
                std::vector<tuple_t> q;
                for (auto& m : p)
                  q.push_back(image_of(m, pos));
                std::sort(q.begin(), q.end());
                q.erase(std::unique(q.begin(), q.end()), q.end());
                closed.insert({static_cast<int>(t), q});
              }
          }
        for (auto& l : closed)
          by_set_[l.s].push_back(&l);
        for (auto& l : closed)
          {
            auto r = check_link(l);
            if (!r.ok)
              return r;
          }
        return {};
      }

    private:
      static check_result
      fail(std::string why)
      {
        return {false, std::move(why)};
      }

      std::string
      describe(const canon_link& l)
      {
        std::string s = "({";
        for (std::size_t i = 0; i < l.p.size(); ++i)
          s += (i ? "," : "") + names_of_tuple(g_.a_, l.p[i]);
        return s + "}, " + names_of_tuple(g_.b_, g_.bsets()[l.s]) + ")";
      }

      bool
      simulated(int s, const tuple_t& img)
      {
        if (parts_.empty())
          return g_.to_a_.alive(s, img, -1);
        int part = part_of_[img[0]];
        tuple_t loc;
        for (int e : img)
          {
            if (part_of_[e] != part)
              return false;
            loc.push_back(local_[part][e]);
          }
        auto& t = part_sim_[part];
        return t.alive(t.set_index(g_.bsets()[s]), loc, -1);
      }

      check_result
      check_link(const canon_link& l)
      {
        const tuple_t& set = g_.bsets()[l.s];
        auto inner = inner_facts(g_.b_, set);
        for (auto& q : l.p)
          {
            if (!is_hom(inner, g_.a_, q))
              return fail(describe(l) + ": a map is not a homomorphism");
            if (!simulated(l.s, q))
              return fail(describe(l) + ": (sim) fails for "
                          + names_of_tuple(g_.a_, q));
          }
        auto why = g_.atom_violation(l.s, l.p);
        if (!why.empty())
          return fail(describe(l) + ": (atom) fails, " + why);
        for (std::size_t t = 0; t < g_.bsets().size(); ++t)
          {
            int ti = static_cast<int>(t);
            bool ok = false;
            for (auto* other : by_set_[ti])
              if (g_.agreeing(l.s, l.p, ti, other->p).size()
                  == other->p.size())
                {
                  ok = true;
                  break;
                }
            if (!ok)
              return fail(describe(l) + ": (back) fails for "
                          + names_of_tuple(g_.b_, g_.bsets()[t]));
          }
        int m = static_cast<int>(set.size());
        for (auto& pt : g_.patterns(m))
          {
            auto cands = g_.candidates(pt, l.p);
            if (cands.empty())
              continue;
            std::vector<std::vector<tuple_t>> ys;
            if (!pt.has_old && !parts_.empty())
              {
                std::vector<std::vector<tuple_t>> groups(parts_.size());
                for (auto& f : cands[0])
                  groups[part_of_[f[0]]].push_back(f);
                if (std::any_of(groups.begin(), groups.end(),
                                [](auto& gr) { return gr.empty(); }))
                  continue;
                ys = one_per_group(groups, 100000);
              }
            else
              ys = minimal_choices(cands, 100000);
            auto answers = g_.responses(pt, l.s);
            for (auto& y : ys)
              {
                bool ok = false;
                for (auto& fact : answers)
                  {
                    int t = g_.bset_of(fact);
                    for (auto* other : by_set_[t])
                      if (g_.restrict_to(fact, other->p, y).size()
                          == other->p.size())
                        {
                          ok = true;
                          break;
                        }
                    if (ok)
                      break;
                  }
                if (!ok)
                  {
                    std::string ys_text;
                    for (auto& f : y)
                      ys_text += (ys_text.empty() ? "" : ",")
                                 + names_of_tuple(g_.a_, f);
                    return fail(describe(l) + ": (forth) fails for "
                                + pt.pred + " with Y = {" + ys_text + "}");
                  }
              }
          }
        return {};
      }

      link_game g_;
      std::vector<int> part_of_;
      std::vector<const structure*> parts_;
      std::vector<std::vector<int>> local_;
      std::vector<gsim_table> part_sim_;
      std::map<int, std::vector<const canon_link*>> by_set_;
    };
  }

  check_result
  check_ghsim_relation(const std::vector<glink>& z, const structure& a,
                       const structure& b)
  {
    relation_checker c(a, b, {}, {}, {});
    return c.run(z);
  }

  check_result
  check_generalized_ghsim(const std::vector<structure>& parts,
                          const std::vector<glink>& z, const structure& b)
  {
    if (parts.empty())
      throw error("the family of structures is empty");
    auto u = disjoint_union(parts, true);
    std::vector<int> part_of(u.s.size());
    std::vector<std::vector<int>> local(parts.size(),
                                        std::vector<int>(u.s.size(), -1));
    std::vector<const structure*> ptrs;
    for (std::size_t i = 0; i < parts.size(); ++i)
      {
        ptrs.push_back(&parts[i]);
        for (std::size_t e = 0; e < parts[i].size(); ++e)
          {
            part_of[u.embed[i][e]] = static_cast<int>(i);
            local[i][u.embed[i][e]] = static_cast<int>(e);
          }
      }
    relation_checker c(u.s, b, part_of, ptrs, local);
    return c.run(z);
  }

  std::vector<glink>
  links_from_json(const std::string& text, const structure& a,
                  const structure& b)
  {
    nlohmann::json j;
    try
      {
        j = nlohmann::json::parse(text);
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed link JSON: ") + e.what());
      }
    if (j.is_object() && j.contains("links"))
      j = j["links"];
    if (!j.is_array())
      throw error("link JSON must be a list of links");
    std::vector<glink> out;
    try
      {
        for (auto& item : j)
          {
            glink l;
            for (auto& n : item.at("target"))
              l.target.push_back(b.at(n.get<std::string>()));
            for (auto& im : item.at("images"))
              {
                tuple_t t;
                for (auto& n : im)
                  t.push_back(a.at(n.get<std::string>()));
                l.images.push_back(t);
              }
            out.push_back(std::move(l));
          }
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed link JSON: ") + e.what());
      }
    return out;
  }

  std::string
  links_to_json(const std::vector<glink>& z, const structure& a,
                const structure& b)
  {
    nlohmann::json j = nlohmann::json::array();
    for (auto& l : z)
      {
        nlohmann::json item;
        item["target"] = nlohmann::json::array();
        for (int e : l.target)
          item["target"].push_back(b.name(e));
        item["images"] = nlohmann::json::array();
        for (auto& im : l.images)
          {
            nlohmann::json t = nlohmann::json::array();
            for (int e : im)
              t.push_back(a.name(e));
            item["images"].push_back(t);
          }
        j.push_back(item);
      }
    return j.dump(2);
  }
}
