// SPDX-License-Identifier: MIT
// Simulation, bisimulation and Horn simulation games.
#include <hornlog/games.hh>

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace hornlog
{
  namespace
  {
    game_side
    make_side(const structure& s, const std::vector<std::string>& concepts,
              const std::vector<std::string>& roles)
    {
      game_side g;
      g.s = &s;
      std::size_t n = s.size();
      for (auto& c : concepts)
        g.label.push_back(s.vocab().has(c) ? s.unary(c) : elem_set(n));
      g.succ.assign(roles.size(), std::vector<std::vector<int>>(n));
      g.pred = g.succ;
      g.succ_set.assign(roles.size(), std::vector<elem_set>(n, elem_set(n)));
      for (std::size_t r = 0; r < roles.size(); ++r)
        {
          if (!s.vocab().has(roles[r]))
            continue;
          for (auto& t : s.tuples(roles[r]))
            {
              g.succ[r][t[0]].push_back(t[1]);
              g.pred[r][t[1]].push_back(t[0]);
              g.succ_set[r][t[0]].set(t[1]);
            }
        }
      return g;
    }

    std::string
    set_text(const structure& s, const elem_set& x)
    {
      std::string out = "{";
      bool first = true;
      for_each_elem(x, [&](int a) {
        out += (first ? "" : ",") + s.name(a);
        first = false;
      });
      return out + "}";
    }

    std::string
    pos_text(const structure& a, const elem_set& x, const structure& b, int y)
    {
      return "(" + set_text(a, x) + ", " + b.name(y) + ")";
    }

    bool
    subset(const elem_set& x, const elem_set& y)
    {
      return x.is_subset_of(y);
    }

    double
    millis_since(std::chrono::steady_clock::time_point t0)
    {
      return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0).count();
    }
  }

  game_vocab
  make_game_vocab(const structure& a, const structure& b)
  {
    vocabulary v = a.vocab();
    v.merge(b.vocab());
    game_vocab g;
    g.concepts = v.concept_names();
    g.roles = v.role_names();
    g.left = make_side(a, g.concepts, g.roles);
    g.right = make_side(b, g.concepts, g.roles);
    return g;
  }

  // ---------------------------------------------------------------------
  // Simulations

  namespace
  {
    std::vector<elem_set>
    sim_seed(sim_kind k, const game_vocab& g)
    {
      const auto& A = g.left;
      const auto& B = g.right;
      std::vector<elem_set> s0(A.size(), ~elem_set(B.size()));
      for (std::size_t c = 0; c < g.concepts.size(); ++c)
        for (std::size_t a = 0; a < A.size(); ++a)
          {
            if (A.label[c].test(a))
              s0[a] &= B.label[c];
            else if (k == sim_kind::bisimulation)
              s0[a] -= B.label[c];
          }
      return s0;
    }

    std::vector<elem_set>
    sim_step(sim_kind k, const game_vocab& g, const std::vector<elem_set>& s0,
             const std::vector<elem_set>& s)
    {
      const auto& A = g.left;
      const auto& B = g.right;
      std::size_t m = B.size();
      std::vector<elem_set> next = s0;
      for (std::size_t r = 0; r < g.roles.size(); ++r)
        {
          // pre[a'] = elements of B with an R-successor related to a'.
          std::vector<elem_set> pre(A.size());
          std::vector<bool> done(A.size(), false);
          for (std::size_t a = 0; a < A.size(); ++a)
            {
              if (next[a].none())
                continue;
              for (int a2 : A.succ[r][a])
                {
                  if (!done[a2])
                    {
                      pre[a2] = elem_set(m);
                      for_each_elem(s[a2], [&](int b2) {
                        for (int p : B.pred[r][b2])
                          pre[a2].set(p);
                      });
                      done[a2] = true;
                    }
                  next[a] &= pre[a2];
                }
              bool back = k == sim_kind::bisimulation
                          || (k == sim_kind::nabla && !A.succ[r][a].empty());
              if (back && next[a].any())
                {
                  elem_set q(m);
                  for (int a2 : A.succ[r][a])
                    q |= s[a2];
                  for (std::size_t b2 = 0; b2 < m; ++b2)
                    if (!q.test(b2))
                      for (int p : B.pred[r][b2])
                        next[a].reset(p);
                }
            }
        }
      return next;
    }
  }

  std::vector<sim_relation>
  sim_stages(sim_kind k, const structure& a, const structure& b, int ell)
  {
    auto g = make_game_vocab(a, b);
    auto s0 = sim_seed(k, g);
    std::vector<sim_relation> out;
    out.push_back({s0, 0});
    for (int i = 1; i <= ell; ++i)
      out.push_back({sim_step(k, g, s0, out.back().rows), i});
    return out;
  }

  sim_relation
  greatest_sim(sim_kind k, const structure& a, const structure& b, int ell)
  {
    if (ell >= 0)
      return sim_stages(k, a, b, ell).back();
    auto g = make_game_vocab(a, b);
    auto s0 = sim_seed(k, g);
    sim_relation cur{s0, 0};
    for (;;)
      {
        auto next = sim_step(k, g, s0, cur.rows);
        if (next == cur.rows)
          return cur;
        cur.rows = std::move(next);
        ++cur.rounds;
      }
  }

  sim_relation
  greatest_simulation(const structure& a, const structure& b)
  {
    return greatest_sim(sim_kind::simulation, a, b);
  }

  bool
  sim_holds(const structure& a, int x, const structure& b, int y)
  {
    return greatest_simulation(a, b).holds(x, y);
  }

  bool
  sim_k(const structure& a, int x, const structure& b, int y, int ell)
  {
    return greatest_sim(sim_kind::simulation, a, b, ell).holds(x, y);
  }

  sim_relation
  greatest_bisimulation(const structure& a, const structure& b)
  {
    return greatest_sim(sim_kind::bisimulation, a, b);
  }

  bool
  bisim_holds(const structure& a, int x, const structure& b, int y)
  {
    return greatest_bisimulation(a, b).holds(x, y);
  }

  bool
  bisim_k(const structure& a, int x, const structure& b, int y, int ell)
  {
    return greatest_sim(sim_kind::bisimulation, a, b, ell).holds(x, y);
  }

  bool
  elu_nabla_sim(const structure& a, int x, const structure& b, int y, int ell)
  {
    return greatest_sim(sim_kind::nabla, a, b, ell).holds(x, y);
  }

  // ---------------------------------------------------------------------
  // Horn games: shared preparation

  namespace
  {
    /// Filters for condition (sim): filt[k][y] is the set of a in A with
    /// B,y simulated by A,a at stage k (and the nabla relation when
    /// requested). For unbounded games only index 0 is used and holds the
    /// stable relation.
    struct horn_prep
    {
      game_vocab g;
      std::vector<std::vector<elem_set>> filt;
      bool staged = false;
      int ell = -1;
      int rounds = 0;

      const elem_set& filter(int k, int y) const
      {
        return filt[staged ? k : 0][y];
      }
    };

    horn_prep
    prepare(const structure& a, const structure& b, const horn_options& opt)
    {
      horn_prep p;
      p.g = make_game_vocab(a, b);
      p.staged = opt.ell >= 0;
      p.ell = opt.ell;
      std::vector<sim_relation> sims, nabs;
      if (p.staged)
        {
          sims = sim_stages(sim_kind::simulation, b, a, opt.ell);
          if (opt.nabla)
            nabs = sim_stages(sim_kind::nabla, b, a, opt.ell);
        }
      else
        {
          sims.push_back(greatest_sim(sim_kind::simulation, b, a));
          p.rounds = sims.back().rounds;
          if (opt.nabla)
            {
              nabs.push_back(greatest_sim(sim_kind::nabla, b, a));
              p.rounds = std::max(p.rounds, nabs.back().rounds);
            }
        }
      for (std::size_t k = 0; k < sims.size(); ++k)
        {
          auto rows = sims[k].rows;
          if (opt.nabla)
            for (std::size_t y = 0; y < rows.size(); ++y)
              rows[y] &= nabs[k].rows[y];
          p.filt.push_back(std::move(rows));
        }
      return p;
    }

    bool
    r_up_holds_sets(const game_side& A, std::size_t r, const elem_set& x,
                    const elem_set& y)
    {
      for (auto a = x.find_first(); a != elem_set::npos; a = x.find_next(a))
        if (!A.succ_set[r][a].intersects(y))
          return false;
      return true;
    }

    /// First concept name c with X inside c^A and y outside c^B, or -1.
    int
    atom_failure(const game_vocab& g, const elem_set& x, int y)
    {
      for (std::size_t c = 0; c < g.concepts.size(); ++c)
        if (!g.right.label[c].test(y) && subset(x, g.left.label[c]))
          return static_cast<int>(c);
      return -1;
    }

    /// Successor sets Y of X for role r that player 1 needs to try: one
    /// successor per member of X, skipping members that already have a
    /// successor in Y or one outside \a live. Returns false if some member
    /// of X has no successor (then no Y with X R-up Y exists).
    bool
    choice_images(const game_side& A, std::size_t r, const elem_set& x,
                  const elem_set& live, std::size_t cap,
                  std::vector<elem_set>& out)
    {
      std::vector<int> xs = elems_of(x);
      for (int a : xs)
        if (A.succ[r][a].empty())
          return false;
      std::vector<int> todo;
      for (int a : xs)
        if (!A.succ_set[r][a].is_subset_of(live))
          continue;
        else
          todo.push_back(a);
      elem_set y(A.size());
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        while (i < todo.size() && A.succ_set[r][todo[i]].intersects(y))
          ++i;
        if (i == todo.size())
          {
            out.push_back(y);
            if (out.size() > cap)
              throw cap_exceeded("too many forth moves to enumerate");
            return;
          }
        for (int s : A.succ[r][todo[i]])
          {
            y.set(s);
            rec(i + 1);
            y.reset(s);
          }
      };
      rec(0);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      if (out.size() <= 4096)
        {
          std::vector<elem_set> minimal;
          for (auto& c : out)
            {
              bool dominated = false;
              for (auto& d : out)
                if (d != c && d.is_subset_of(c))
                  {
                    dominated = true;
                    break;
                  }
              if (!dominated)
                minimal.push_back(c);
            }
          out = std::move(minimal);
        }
      return true;
    }

    // -------------------------------------------------------------------
    // Local engine

    struct local_key
    {
      elem_set x;
      int y, k;
      bool operator==(const local_key&) const = default;
    };

    struct local_key_hash
    {
      std::size_t operator()(const local_key& key) const
      {
        std::size_t h = std::hash<elem_set>()(key.x);
        h ^= std::hash<int>()(key.y) + 0x9e3779b97f4a7c15ULL + (h << 6);
        h ^= std::hash<int>()(key.k) + 0x9e3779b97f4a7c15ULL + (h << 6);
        return h;
      }
    };

    enum class why
    {
      none, atom, forth, back
    };

    struct local_node
    {
      local_key key;
      bool alive = true;
      bool expanded = false;
      // Each forth group is a move of player 1; the node survives it while
      // some child in the group survives.
      struct group
      {
        int role;
        elem_set move;
        std::vector<int> kids;
        int live = 0;
      };
      std::vector<group> groups;
      struct back_edge
      {
        int role, target, kid;
      };
      std::vector<back_edge> backs;
      why reason = why::none;
      int detail = -1;   // concept, group index or back index
      int order = -1;
    };

    class local_solver
    {
    public:
      local_solver(const horn_prep& p, const horn_options& opt)
        : p_(p), opt_(opt)
      {}

      int
      node(const elem_set& x, int y, int k)
      {
        local_key key{x, y, p_.staged ? k : -1};
        auto it = ids_.find(key);
        if (it != ids_.end())
          return it->second;
        if (nodes_.size() >= opt_.position_cap)
          throw cap_exceeded("position cap exceeded in Horn game");
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_.back().key = key;
        ids_.emplace(key, id);
        todo_.push_back(id);
        return id;
      }

      void
      explore()
      {
        while (!todo_.empty())
          {
            int id = todo_.back();
            todo_.pop_back();
            expand(id);
          }
      }

      /// Decides every position created since the previous call. Earlier
      /// positions are final: their reachable part was complete when they
      /// were solved.
      void
      solve()
      {
        std::size_t first = solved_;
        parents_.resize(nodes_.size());
        std::vector<int> queue;
        auto kill = [&](int id, why w, int detail) {
          nodes_[id].alive = false;
          nodes_[id].reason = w;
          nodes_[id].detail = detail;
          nodes_[id].order = order_++;
          queue.push_back(id);
        };
        for (std::size_t i = first; i < nodes_.size(); ++i)
          if (!nodes_[i].alive)
            {
              nodes_[i].order = order_++;
              queue.push_back(static_cast<int>(i));
            }
        for (std::size_t i = first; i < nodes_.size(); ++i)
          {
            auto& nd = nodes_[i];
            if (!nd.alive)
              continue;
            int id = static_cast<int>(i);
            for (std::size_t gi = 0; gi < nd.groups.size(); ++gi)
              {
                auto& gr = nd.groups[gi];
                gr.live = static_cast<int>(gr.kids.size());
                for (int c : gr.kids)
                  {
                    if (static_cast<std::size_t>(c) >= first)
                      parents_[c].push_back({id, static_cast<int>(gi)});
                    else if (!nodes_[c].alive)
                      --gr.live;
                  }
              }
            for (std::size_t bi = 0; bi < nd.backs.size(); ++bi)
              {
                int c = nd.backs[bi].kid;
                if (static_cast<std::size_t>(c) >= first)
                  parents_[c].push_back({id, -1 - static_cast<int>(bi)});
              }
            for (std::size_t gi = 0; gi < nd.groups.size() && nd.alive; ++gi)
              if (nd.groups[gi].live == 0)
                kill(id, why::forth, static_cast<int>(gi));
            for (std::size_t bi = 0; bi < nd.backs.size() && nd.alive; ++bi)
              if (static_cast<std::size_t>(nd.backs[bi].kid) < first
                  && !nodes_[nd.backs[bi].kid].alive)
                kill(id, why::back, static_cast<int>(bi));
          }
        for (std::size_t qi = 0; qi < queue.size(); ++qi)
          for (auto [par, slot] : parents_[queue[qi]])
            {
              auto& pn = nodes_[par];
              if (!pn.alive)
                continue;
              if (slot < 0)
                kill(par, why::back, -1 - slot);
              else if (--pn.groups[slot].live == 0)
                kill(par, why::forth, slot);
            }
        solved_ = nodes_.size();
      }

      const local_node& at(int id) const { return nodes_[id]; }
      const horn_prep& prep() const { return p_; }
      std::size_t size() const { return nodes_.size(); }

      std::vector<std::string>
      trace(int id) const
      {
        std::vector<std::string> out;
        const auto& A = *p_.g.left.s;
        const auto& B = *p_.g.right.s;
        while (id >= 0)
          {
            const auto& nd = nodes_[id];
            std::string here = pos_text(A, nd.key.x, B, nd.key.y);
            id = -1;
            switch (nd.reason)
              {
              case why::atom:
                out.push_back(here + ": atom " + p_.g.concepts[nd.detail]
                              + " holds on every element of the set but not at "
                              + B.name(nd.key.y));
                break;
              case why::forth:
                {
                  const auto& gr = nd.groups[nd.detail];
                  std::string s = here + ": forth " + p_.g.roles[gr.role]
                                  + " with Y = " + set_text(A, gr.move);
                  if (gr.kids.empty())
                    s += "; no response";
                  else
                    {
                      s += "; every response loses, e.g. "
                           + pos_text(A, nodes_[gr.kids[0]].key.x, B,
                                      nodes_[gr.kids[0]].key.y);
                      // Follow the response that died first.
                      id = *std::min_element(
                        gr.kids.begin(), gr.kids.end(),
                        [&](int u, int v) { return nodes_[u].order < nodes_[v].order; });
                    }
                  out.push_back(s);
                  break;
                }
              case why::back:
                {
                  const auto& be = nd.backs[nd.detail];
                  std::string s = here + ": back " + p_.g.roles[be.role]
                                  + " to " + B.name(be.target);
                  if (be.kid < 0)
                    s += "; no response";
                  else
                    {
                      s += "; best response "
                           + pos_text(A, nodes_[be.kid].key.x, B,
                                      nodes_[be.kid].key.y) + " loses";
                      id = be.kid;
                    }
                  out.push_back(s);
                  break;
                }
              case why::none:
                out.push_back(here + ": survives");
                break;
              }
          }
        return out;
      }

    private:
      void
      kill_now(int id, why w, int detail)
      {
        nodes_[id].alive = false;
        nodes_[id].reason = w;
        nodes_[id].detail = detail;
      }

      void
      expand(int id)
      {
        const auto& g = p_.g;
        const auto& A = g.left;
        const auto& B = g.right;
        elem_set x = nodes_[id].key.x;
        int y = nodes_[id].key.y;
        int k = nodes_[id].key.k;
        nodes_[id].expanded = true;
        int c = atom_failure(g, x, y);
        if (c >= 0)
          {
            kill_now(id, why::atom, c);
            return;
          }
        if (p_.staged && k == 0)
          return;
        int kn = k - 1;
        // Responses are collected first and turned into nodes only once
        // this position is known not to lose immediately.
        struct pending
        {
          elem_set x;
          int y;
        };
        std::vector<pending> pend;
        std::vector<local_node::back_edge> backs;
        std::vector<local_node::group> groups;
        for (std::size_t r = 0; r < g.roles.size(); ++r)
          {
            const auto& bs = B.succ[r][y];
            if (bs.empty())
              {
                // Player 1 may still move forth; player 2 cannot answer.
                bool all_have = true;
                for_each_elem(x, [&](int a) {
                  all_have = all_have && !A.succ[r][a].empty();
                });
                if (all_have)
                  {
                    elem_set move(A.size());
                    for_each_elem(x, [&](int a) { move.set(A.succ[r][a][0]); });
                    nodes_[id].groups.push_back({static_cast<int>(r), move, {}, 0});
                    kill_now(id, why::forth,
                             static_cast<int>(nodes_[id].groups.size() - 1));
                    return;
                  }
                continue;
              }
            elem_set sx(A.size());
            for_each_elem(x, [&](int a) { sx |= A.succ_set[r][a]; });
            for (int b2 : bs)
              {
                elem_set resp = sx & p_.filter(kn, b2);
                if (resp.none())
                  {
                    nodes_[id].backs.push_back({static_cast<int>(r), b2, -1});
                    kill_now(id, why::back,
                             static_cast<int>(nodes_[id].backs.size() - 1));
                    return;
                  }
                backs.push_back({static_cast<int>(r), b2,
                                 -2 - static_cast<int>(pend.size())});
                pend.push_back({std::move(resp), b2});
              }
            elem_set live(A.size());
            for (int b2 : bs)
              live |= p_.filter(kn, b2);
            std::vector<elem_set> moves;
            if (!choice_images(A, r, x, live, opt_.position_cap, moves))
              continue;
            for (auto& mv : moves)
              {
                local_node::group gr{static_cast<int>(r), mv, {}, 0};
                for (int b2 : bs)
                  {
                    elem_set resp = mv & p_.filter(kn, b2);
                    if (resp.any())
                      {
                        gr.kids.push_back(-2 - static_cast<int>(pend.size()));
                        pend.push_back({std::move(resp), b2});
                      }
                  }
                if (gr.kids.empty())
                  {
                    nodes_[id].groups.push_back(std::move(gr));
                    kill_now(id, why::forth,
                             static_cast<int>(nodes_[id].groups.size() - 1));
                    return;
                  }
                groups.push_back(std::move(gr));
              }
          }
        for (auto& be : backs)
          {
            auto& pe = pend[-2 - be.kid];
            be.kid = node(pe.x, pe.y, kn);
          }
        for (auto& gr : groups)
          for (auto& kid : gr.kids)
            {
              auto& pe = pend[-2 - kid];
              kid = node(pe.x, pe.y, kn);
            }
        nodes_[id].backs = std::move(backs);
        nodes_[id].groups = std::move(groups);
      }

      const horn_prep& p_;
      const horn_options& opt_;
      std::vector<local_node> nodes_;
      std::unordered_map<local_key, int, local_key_hash> ids_;
      std::vector<int> todo_;
      std::vector<std::vector<std::pair<int, int>>> parents_;
      std::size_t solved_ = 0;
      int order_ = 0;
    };

    horn_relation
    local_witness(const local_solver& s, int round)
    {
      horn_relation z;
      z.round = round;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s.at(i).alive)
          z.positions.push_back({s.at(i).key.x, s.at(i).key.y});
      return z;
    }

  }

  struct horn_game::impl
  {
    horn_options opt;
    horn_prep prep;
    local_solver solver;

    impl(const structure& a, const structure& b, const horn_options& o)
      : opt(o), prep(prepare(a, b, o)), solver(prep, opt)
    {}
  };

  horn_game::horn_game(const structure& a, const structure& b,
                       const horn_options& opt)
    : p_(std::make_unique<impl>(a, b, opt))
  {}

  horn_game::~horn_game() = default;

  bool
  horn_game::staged() const
  {
    return p_->prep.staged;
  }

  int
  horn_game::top_stage() const
  {
    return p_->prep.staged ? p_->prep.ell : 0;
  }

  const elem_set&
  horn_game::filter(int stage, int y) const
  {
    return p_->prep.filter(stage, y);
  }

  int
  horn_game::filter_rounds() const
  {
    return p_->prep.staged ? p_->prep.ell : p_->prep.rounds;
  }

  const std::vector<std::string>&
  horn_game::roles() const
  {
    return p_->prep.g.roles;
  }

  const std::vector<std::string>&
  horn_game::concepts() const
  {
    return p_->prep.g.concepts;
  }

  elem_set
  horn_game::successors(int role, const elem_set& x) const
  {
    const auto& A = p_->prep.g.left;
    elem_set out(A.size());
    for_each_elem(x, [&](int a) { out |= A.succ_set[role][a]; });
    return out;
  }

  const std::vector<int>&
  horn_game::successors_b(int role, int y) const
  {
    return p_->prep.g.right.succ[role][y];
  }

  int
  horn_game::solve(const elem_set& x, int y, int stage)
  {
    if (x.none() || !subset(x, filter(stage, y)))
      throw error("Horn game position outside the simulation filter");
    int id = p_->solver.node(x, y, stage);
    p_->solver.explore();
    p_->solver.solve();
    return id;
  }

  bool
  horn_game::alive(int id) const
  {
    return p_->solver.at(id).alive;
  }

  const elem_set&
  horn_game::set(int id) const
  {
    return p_->solver.at(id).key.x;
  }

  int
  horn_game::target(int id) const
  {
    return p_->solver.at(id).key.y;
  }

  int
  horn_game::stage(int id) const
  {
    return p_->prep.staged ? p_->solver.at(id).key.k : 0;
  }

  horn_game::loss
  horn_game::why_lost(int id) const
  {
    const auto& nd = p_->solver.at(id);
    loss l;
    switch (nd.reason)
      {
      case why::none:
        break;
      case why::atom:
        l.kind = loss_kind::atom;
        l.concept_index = nd.detail;
        break;
      case why::forth:
        l.kind = loss_kind::forth;
        l.role = nd.groups[nd.detail].role;
        l.move = nd.groups[nd.detail].move;
        break;
      case why::back:
        l.kind = loss_kind::back;
        l.role = nd.backs[nd.detail].role;
        l.target = nd.backs[nd.detail].target;
        break;
      }
    return l;
  }

  std::vector<std::string>
  horn_game::trace(int id) const
  {
    return p_->solver.trace(id);
  }

  horn_relation
  horn_game::survivors() const
  {
    return local_witness(p_->solver, p_->prep.staged ? p_->prep.ell : -1);
  }

  std::size_t
  horn_game::positions() const
  {
    return p_->solver.size();
  }

  namespace
  {
    // -------------------------------------------------------------------
    // Lattice engine

    using mask_t = std::uint32_t;

    mask_t
    to_mask(const elem_set& x)
    {
      mask_t m = 0;
      for_each_elem(x, [&](int a) { m |= mask_t(1) << a; });
      return m;
    }

    elem_set
    from_mask(mask_t m, std::size_t n)
    {
      elem_set x(n);
      for (std::size_t a = 0; a < n; ++a)
        if (m >> a & 1)
          x.set(a);
      return x;
    }

    struct lattice_data
    {
      int n = 0;
      std::size_t full = 0;
      std::vector<std::vector<mask_t>> pre, succx; // [role][mask]
      std::vector<mask_t> label;                    // per concept
    };

    lattice_data
    lattice_prep(const game_vocab& g)
    {
      lattice_data d;
      d.n = static_cast<int>(g.left.size());
      d.full = std::size_t(1) << d.n;
      for (auto& l : g.left.label)
        d.label.push_back(to_mask(l));
      for (std::size_t r = 0; r < g.roles.size(); ++r)
        {
          std::vector<mask_t> predm(d.n), succm(d.n);
          for (int a = 0; a < d.n; ++a)
            {
              for (int s : g.left.succ[r][a])
                succm[a] |= mask_t(1) << s;
              for (int s : g.left.pred[r][a])
                predm[a] |= mask_t(1) << s;
            }
          std::vector<mask_t> pre(d.full, 0), sx(d.full, 0);
          for (std::size_t m = 1; m < d.full; ++m)
            {
              int low = __builtin_ctz(static_cast<mask_t>(m));
              pre[m] = pre[m & (m - 1)] | predm[low];
              sx[m] = sx[m & (m - 1)] | succm[low];
            }
          d.pre.push_back(std::move(pre));
          d.succx.push_back(std::move(sx));
        }
      return d;
    }

    /// up[m] = some nonempty subset of m is winning.
    std::vector<std::uint8_t>
    up_closure(const std::vector<std::uint8_t>& w, int n)
    {
      std::vector<std::uint8_t> up = w;
      up[0] = 0;
      for (int i = 0; i < n; ++i)
        for (std::size_t m = 0; m < up.size(); ++m)
          if (m >> i & 1)
            up[m] |= up[m ^ (std::size_t(1) << i)];
      return up;
    }

    using table_t = std::vector<std::vector<std::uint8_t>>;

    table_t
    lattice_seed(const horn_prep& p, const lattice_data& d, int k)
    {
      const auto& g = p.g;
      std::size_t m = g.right.size();
      table_t w(m, std::vector<std::uint8_t>(d.full, 0));
      for (std::size_t y = 0; y < m; ++y)
        {
          mask_t f = to_mask(p.filter(k, y));
          std::vector<mask_t> bad;
          for (std::size_t c = 0; c < g.concepts.size(); ++c)
            if (!g.right.label[c].test(y))
              bad.push_back(d.label[c]);
          for (std::size_t x = 1; x < d.full; ++x)
            {
              if ((x & ~f) != 0)
                continue;
              bool ok = true;
              for (mask_t l : bad)
                if ((x & ~l) == 0)
                  {
                    ok = false;
                    break;
                  }
              w[y][x] = ok;
            }
        }
      return w;
    }

    /// One round: keeps positions of \a seed whose forth and back moves are
    /// answered within \a w.
    table_t
    lattice_round(const horn_prep& p, const lattice_data& d, const table_t& w,
                  const table_t& seed)
    {
      const auto& g = p.g;
      std::size_t m = g.right.size();
      table_t up(m);
      for (std::size_t y = 0; y < m; ++y)
        up[y] = up_closure(w[y], d.n);
      table_t next = seed;
      std::vector<std::uint8_t> bad(d.full);
      for (std::size_t y = 0; y < m; ++y)
        for (std::size_t r = 0; r < g.roles.size(); ++r)
          {
            const auto& bs = g.right.succ[r][y];
            // forth: X loses if X R-up Y for some Y that no successor of y
            // answers, i.e. X is below pre(Y).
            std::fill(bad.begin(), bad.end(), 0);
            for (std::size_t ym = 0; ym < d.full; ++ym)
              {
                bool answered = false;
                for (int b2 : bs)
                  if (up[b2][ym])
                    {
                      answered = true;
                      break;
                    }
                if (!answered)
                  bad[d.pre[r][ym]] = 1;
              }
            for (int i = 0; i < d.n; ++i)
              for (std::size_t xm = d.full; xm-- > 0;)
                if (!(xm >> i & 1))
                  bad[xm] |= bad[xm | (std::size_t(1) << i)];
            for (std::size_t xm = 1; xm < d.full; ++xm)
              {
                if (!next[y][xm])
                  continue;
                if (bad[xm])
                  {
                    next[y][xm] = 0;
                    continue;
                  }
                mask_t sx = d.succx[r][xm];
                for (int b2 : bs)
                  if (!up[b2][sx])
                    {
                      next[y][xm] = 0;
                      break;
                    }
              }
          }
      return next;
    }

    table_t
    lattice_solve(const horn_prep& p, const lattice_data& d, int& rounds)
    {
      rounds = 0;
      if (p.staged)
        {
          table_t w = lattice_seed(p, d, 0);
          for (int k = 1; k <= p.ell; ++k)
            {
              w = lattice_round(p, d, w, lattice_seed(p, d, k));
              ++rounds;
            }
          return w;
        }
      table_t w = lattice_seed(p, d, 0);
      for (;;)
        {
          table_t next = lattice_round(p, d, w, w);
          ++rounds;
          if (next == w)
            return w;
          w = std::move(next);
        }
    }

    // -------------------------------------------------------------------
    // Naive engine: literal quantification over all subsets

    table_t
    naive_solve(const horn_prep& p, const lattice_data& d, int& rounds)
    {
      const auto& g = p.g;
      std::size_t m = g.right.size();
      auto round = [&](const table_t& w, const table_t& seed) {
        table_t next = seed;
        for (std::size_t y = 0; y < m; ++y)
          for (std::size_t xm = 1; xm < d.full; ++xm)
            {
              if (!next[y][xm])
                continue;
              bool ok = true;
              for (std::size_t r = 0; ok && r < g.roles.size(); ++r)
                {
                  const auto& bs = g.right.succ[r][y];
                  // forth_h
                  for (std::size_t ym = 0; ok && ym < d.full; ++ym)
                    {
                      if ((xm & ~d.pre[r][ym]) != 0)
                        continue;
                      bool found = false;
                      for (int b2 : bs)
                        for (std::size_t sub = ym; !found && sub; sub = (sub - 1) & ym)
                          found = w[b2][sub];
                      ok = found;
                    }
                  // back_h
                  for (int b2 : bs)
                    {
                      if (!ok)
                        break;
                      bool found = false;
                      for (std::size_t ym = 1; !found && ym < d.full; ++ym)
                        {
                          bool down = true;
                          for (int s = 0; s < d.n; ++s)
                            if ((ym >> s & 1)
                                && !(d.pre[r][std::size_t(1) << s] & xm))
                              down = false;
                          found = down && w[b2][ym];
                        }
                      ok = found;
                    }
                }
              next[y][xm] = ok;
            }
        return next;
      };
      rounds = 0;
      table_t w = lattice_seed(p, d, 0);
      if (p.staged)
        {
          for (int k = 1; k <= p.ell; ++k, ++rounds)
            w = round(w, lattice_seed(p, d, k));
          return w;
        }
      for (;;)
        {
          table_t next = round(w, w);
          ++rounds;
          if (next == w)
            return w;
          w = std::move(next);
        }
    }

    void
    check_width(const structure& a, const elem_set& x)
    {
      if (x.size() != a.size())
        throw error("element set width does not match the structure");
      if (x.none())
        throw error("Horn game needs a nonempty set");
    }

    table_t
    table_for(const horn_prep& p, const horn_options& opt, int& rounds)
    {
      std::size_t n = p.g.left.size();
      std::size_t cap = opt.engine == horn_engine::naive ? opt.naive_cap
                                                          : opt.lattice_cap;
      if (n > cap || n > 24)
        throw cap_exceeded("structure too large for the "
                           + std::string(opt.engine == horn_engine::naive
                                         ? "naive" : "lattice")
                           + " Horn engine");
      auto d = lattice_prep(p.g);
      return opt.engine == horn_engine::naive ? naive_solve(p, d, rounds)
                                              : lattice_solve(p, d, rounds);
    }

    horn_relation
    table_witness(const table_t& w, std::size_t n, int round)
    {
      horn_relation z;
      z.round = round;
      for (std::size_t y = 0; y < w.size(); ++y)
        for (std::size_t xm = 1; xm < w[y].size(); ++xm)
          if (w[y][xm])
            z.positions.push_back({from_mask(static_cast<mask_t>(xm), n),
                                   static_cast<int>(y)});
      return z;
    }
  }

  horn_table
  horn_lattice(const structure& a, const structure& b, const horn_options& opt)
  {
    auto p = prepare(a, b, opt);
    horn_table t;
    t.n = static_cast<int>(a.size());
    t.win = table_for(p, opt, t.rounds);
    return t;
  }

  game_verdict
  hornsim(const structure& a, const elem_set& x, const structure& b, int y,
          const horn_options& opt)
  {
    auto t0 = std::chrono::steady_clock::now();
    check_width(a, x);
    if (y < 0 || static_cast<std::size_t>(y) >= b.size())
      throw error("element index out of range");
    auto p = prepare(a, b, opt);
    game_verdict v;
    int k0 = p.staged ? opt.ell : 0;
    if (opt.engine != horn_engine::local)
      {
        table_t w = table_for(p, opt, v.stats.rounds);
        v.holds = w[y][to_mask(x)];
        v.stats.positions = w.size() * (w.empty() ? 0 : w[0].size() - 1);
        if (v.holds && opt.witness)
          v.witness = table_witness(w, a.size(), p.staged ? opt.ell : -1);
        if (!v.holds)
          v.trace.push_back(pos_text(a, x, b, y) + ": deleted by the "
                            + std::string(opt.engine == horn_engine::naive
                                          ? "naive" : "lattice")
                            + " fixpoint");
        v.stats.millis = millis_since(t0);
        return v;
      }
    if (!subset(x, p.filter(k0, y)))
      {
        elem_set bad = x - p.filter(k0, y);
        int a0 = static_cast<int>(bad.find_first());
        v.holds = false;
        v.trace.push_back(pos_text(a, x, b, y) + ": sim fails, " + b.name(y)
                          + " is not simulated by " + a.name(a0));
        v.stats.millis = millis_since(t0);
        return v;
      }
    local_solver s(p, opt);
    int root = s.node(x, y, k0);
    s.explore();
    s.solve();
    v.holds = s.at(root).alive;
    v.stats.positions = s.size();
    v.stats.rounds = p.staged ? opt.ell : 0;
    if (v.holds && opt.witness)
      v.witness = local_witness(s, p.staged ? opt.ell : -1);
    if (!v.holds)
      v.trace = s.trace(root);
    v.stats.millis = millis_since(t0);
    return v;
  }

  game_verdict
  global_hornsim(const structure& a, const structure& b,
                 const horn_options& opt)
  {
    auto t0 = std::chrono::steady_clock::now();
    auto p = prepare(a, b, opt);
    game_verdict v;
    int k0 = p.staged ? opt.ell : 0;
    if (opt.engine != horn_engine::local)
      {
        table_t w = table_for(p, opt, v.stats.rounds);
        v.holds = true;
        for (std::size_t y = 0; y < w.size(); ++y)
          if (std::find(w[y].begin() + 1, w[y].end(), 1) == w[y].end())
            {
              v.holds = false;
              v.trace.push_back("no set of " + std::string("A")
                                + " survives against " + b.name(y));
              break;
            }
        v.stats.positions = w.size() * (w.empty() ? 0 : w[0].size() - 1);
        if (v.holds && opt.witness)
          v.witness = table_witness(w, a.size(), p.staged ? opt.ell : -1);
        v.stats.millis = millis_since(t0);
        return v;
      }
    // A set survives against y only if a subset inside the (sim) filter
    // does, and the filter itself is the largest such candidate.
    local_solver s(p, opt);
    std::vector<int> roots(b.size(), -1);
    v.holds = true;
    for (std::size_t y = 0; y < b.size(); ++y)
      {
        const elem_set& f = p.filter(k0, y);
        if (f.none())
          {
            v.holds = false;
            v.trace.push_back(b.name(y) + " is simulated by no element");
            v.stats.millis = millis_since(t0);
            return v;
          }
        roots[y] = s.node(f, static_cast<int>(y), k0);
      }
    s.explore();
    s.solve();
    for (std::size_t y = 0; y < b.size() && v.holds; ++y)
      if (!s.at(roots[y]).alive)
        {
          v.holds = false;
          v.trace = s.trace(roots[y]);
        }
    v.stats.positions = s.size();
    v.stats.rounds = p.staged ? opt.ell : 0;
    if (v.holds && opt.witness)
      v.witness = local_witness(s, p.staged ? opt.ell : -1);
    v.stats.millis = millis_since(t0);
    return v;
  }

  check_result
  check_horn_relation(const horn_relation& z, const structure& a,
                      const structure& b, bool nabla)
  {
    auto g = make_game_vocab(a, b);
    auto sim = greatest_sim(sim_kind::simulation, b, a);
    sim_relation nab;
    if (nabla)
      nab = greatest_sim(sim_kind::nabla, b, a);
    std::vector<std::vector<const elem_set*>> by_target(b.size());
    for (auto& pos : z.positions)
      {
        if (pos.x.size() != a.size() || pos.b < 0
            || static_cast<std::size_t>(pos.b) >= b.size())
          return {false, "position does not fit the structures"};
        by_target[pos.b].push_back(&pos.x);
      }
    for (auto& pos : z.positions)
      {
        std::string here = pos_text(a, pos.x, b, pos.b);
        if (pos.x.none())
          return {false, "(X,b) in Z implies X nonempty: " + here};
        int c = atom_failure(g, pos.x, pos.b);
        if (c >= 0)
          return {false, "atom_h fails at " + here + " for " + g.concepts[c]};
        for (int x : elems_of(pos.x))
          {
            if (!sim.holds(pos.b, x))
              return {false, "sim fails at " + here + ": " + b.name(pos.b)
                               + " is not simulated by " + a.name(x)};
            if (nabla && !nab.holds(pos.b, x))
              return {false, "sim_nabla fails at " + here + " for "
                               + a.name(x)};
          }
        for (std::size_t r = 0; r < g.roles.size(); ++r)
          {
            const auto& bs = g.right.succ[r][pos.b];
            // forth_h: a response for Y serves every superset of Y, so
            // only successor sets inside R(X) need to be tried.
            elem_set sx(a.size());
            for_each_elem(pos.x, [&](int x) { sx |= g.left.succ_set[r][x]; });
            auto answered = [&](const elem_set& y) {
              for (int b2 : bs)
                for (auto* y2 : by_target[b2])
                  if (y2->is_subset_of(y))
                    return true;
              return false;
            };
            std::vector<int> cand = elems_of(sx);
            bool covered = true;
            for_each_elem(pos.x, [&](int x) {
              covered = covered && g.left.succ_set[r][x].any();
            });
            if (covered)
              {
                if (cand.size() <= 20)
                  {
                    for (std::size_t m = 1; m < (std::size_t(1) << cand.size()); ++m)
                      {
                        elem_set y(a.size());
                        for (std::size_t i = 0; i < cand.size(); ++i)
                          if (m >> i & 1)
                            y.set(cand[i]);
                        if (r_up_holds_sets(g.left, r, pos.x, y) && !answered(y))
                          return {false, "forth_h fails at " + here + " for "
                                           + g.roles[r] + " and Y = "
                                           + set_text(a, y)};
                      }
                  }
                else
                  {
                    std::vector<elem_set> moves;
                    choice_images(g.left, r, pos.x, ~elem_set(a.size()),
                                  1000000, moves);
                    for (auto& y : moves)
                      if (!answered(y))
                        return {false, "forth_h fails at " + here + " for "
                                         + g.roles[r] + " and Y = "
                                         + set_text(a, y)};
                  }
              }
            // back_h
            for (int b2 : bs)
              {
                bool found = false;
                for (auto* y2 : by_target[b2])
                  if (y2->is_subset_of(sx))
                    {
                      found = true;
                      break;
                    }
                if (!found)
                  return {false, "back_h fails at " + here + " for "
                                   + g.roles[r] + " and " + b.name(b2)};
              }
          }
      }
    return {};
  }

  std::string
  relation_to_json(const horn_relation& z, const structure& a,
                   const structure& b)
  {
    nlohmann::json out = nlohmann::json::array();
    for (auto& pos : z.positions)
      out.push_back({{"X", a.names_of(pos.x)}, {"b", b.name(pos.b)}});
    return out.dump();
  }

  horn_relation
  relation_from_json(const std::string& text, const structure& a,
                     const structure& b)
  {
    nlohmann::json in;
    try
      {
        in = nlohmann::json::parse(text);
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed relation JSON: ") + e.what());
      }
    const nlohmann::json* list = &in;
    horn_relation z;
    if (in.is_object())
      {
        if (!in.contains("positions"))
          throw error("relation JSON needs a positions list");
        list = &in["positions"];
        if (in.contains("round"))
          z.round = in["round"].get<int>();
      }
    if (!list->is_array())
      throw error("relation JSON must be a list of positions");
    for (auto& item : *list)
      {
        if (!item.is_object() || !item.contains("X") || !item.contains("b"))
          throw error("relation position needs X and b");
        z.positions.push_back(
          {a.set_of(item["X"].get<std::vector<std::string>>()),
           b.at(item["b"].get<std::string>())});
      }
    return z;
  }
}
