// SPDX-License-Identifier: MIT
// Simulation, bisimulation and Horn simulation games.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <hornlog/structure.hh>

namespace hornlog
{
  /// Roles, concept names and adjacency of one structure with respect to a
  /// vocabulary shared by both sides of a game. Predicates the structure
  /// does not declare are empty.
  struct game_side
  {
    const structure* s = nullptr;
    std::vector<elem_set> label;   // per concept name
    std::vector<std::vector<std::vector<int>>> succ, pred;  // [role][elem]
    std::vector<std::vector<elem_set>> succ_set;            // [role][elem]
    std::size_t size() const { return s->size(); }
  };

  struct game_vocab
  {
    std::vector<std::string> concepts, roles;
    game_side left, right;
  };

  /// Merges the vocabularies of \a a and \a b; throws on arity conflicts.
  game_vocab make_game_vocab(const structure& a, const structure& b);

  enum class sim_kind
  {
    simulation, bisimulation, nabla
  };

  /// rows[a] = set of b with (a,b) in the relation.
  struct sim_relation
  {
    std::vector<elem_set> rows;
    /// Number of refinement rounds performed.
    int rounds = 0;
    bool holds(int a, int b) const { return rows.at(a).test(b); }
  };

  /// Greatest relation of the given kind from A to B; ell < 0 means the
  /// greatest fixpoint, otherwise the ell-round refinement.
  sim_relation greatest_sim(sim_kind k, const structure& a,
                            const structure& b, int ell = -1);
  /// All refinement stages 0..ell (ell >= 0).
  std::vector<sim_relation> sim_stages(sim_kind k, const structure& a,
                                       const structure& b, int ell);

  sim_relation greatest_simulation(const structure& a, const structure& b);
  bool sim_holds(const structure& a, int x, const structure& b, int y);
  bool sim_k(const structure& a, int x, const structure& b, int y, int ell);
  sim_relation greatest_bisimulation(const structure& a, const structure& b);
  bool bisim_holds(const structure& a, int x, const structure& b, int y);
  bool bisim_k(const structure& a, int x, const structure& b, int y, int ell);
  bool elu_nabla_sim(const structure& a, int x, const structure& b, int y,
                     int ell = -1);

  enum class horn_engine
  {
    /// Explores positions reachable from the input, keeping the first
    /// component filtered by simulation.
    local,
    /// Decides all positions over the full set lattice of dom(A).
    lattice,
    /// Literal quantification over all subsets; for cross-checks only.
    naive
  };

  struct horn_options
  {
    int ell = -1;                 ///< rounds; < 0 means unbounded
    bool nabla = false;           ///< add the ELU-nabla simulation condition
    horn_engine engine = horn_engine::local;
    std::size_t lattice_cap = 14; ///< max |dom(A)| for the lattice engine
    std::size_t naive_cap = 8;    ///< max |dom(A)| for the naive engine
    std::size_t position_cap = 4000000; ///< max positions for local
    bool witness = true;
  };

  struct horn_position
  {
    elem_set x;
    int b;
    bool operator==(const horn_position&) const = default;
  };

  struct horn_relation
  {
    std::vector<horn_position> positions;
    /// Number of rounds the relation is valid for; -1 when stable.
    int round = -1;
  };

  struct game_stats
  {
    std::size_t positions = 0;
    int rounds = 0;
    double millis = 0;
  };

  struct game_verdict
  {
    bool holds = false;
    std::optional<horn_relation> witness;
    /// Moves by which the first player wins, when holds is false.
    std::vector<std::string> trace;
    game_stats stats;
  };

  game_verdict hornsim(const structure& a, const elem_set& x,
                       const structure& b, int y,
                       const horn_options& opt = {});
  /// Every element of B is matched by some nonempty set of A.
  game_verdict global_hornsim(const structure& a, const structure& b,
                              const horn_options& opt = {});

  /// Game graph of the local engine, kept for analysing lost positions.
  /// Positions are (X, y, stage) with X inside filter(stage, y); unbounded
  /// games use stage 0 throughout.
  class horn_game
  {
  public:
    horn_game(const structure& a, const structure& b,
              const horn_options& opt = {});
    ~horn_game();
    horn_game(const horn_game&) = delete;
    horn_game& operator=(const horn_game&) = delete;

    bool staged() const;
    /// Stage of the input position: ell for staged games, 0 otherwise.
    int top_stage() const;
    /// Stage of positions reached by one move from \a stage.
    int next_stage(int stage) const { return staged() ? stage - 1 : stage; }
    /// Elements a of A with B,y simulated by A,a at \a stage.
    const elem_set& filter(int stage, int y) const;
    /// Rounds after which the simulation filter is stable.
    int filter_rounds() const;
    const std::vector<std::string>& roles() const;
    const std::vector<std::string>& concepts() const;
    /// R-successors in A of members of \a x.
    elem_set successors(int role, const elem_set& x) const;
    const std::vector<int>& successors_b(int role, int y) const;

    /// Explores and decides (x, y) at \a stage; x must be nonempty and
    /// inside the filter. Returns the position id.
    int solve(const elem_set& x, int y, int stage);
    bool alive(int id) const;
    const elem_set& set(int id) const;
    int target(int id) const;
    int stage(int id) const;

    enum class loss_kind
    {
      none, atom, forth, back
    };
    struct loss
    {
      loss_kind kind = loss_kind::none;
      int role = -1;     ///< forth and back
      int concept_index = -1;  ///< atom
      elem_set move;     ///< forth: the set Y player 1 picked
      int target = -1;   ///< back: the successor of y player 1 picked
    };
    loss why_lost(int id) const;
    std::vector<std::string> trace(int id) const;
    /// All surviving positions.
    horn_relation survivors() const;
    std::size_t positions() const;

  private:
    struct impl;
    std::unique_ptr<impl> p_;
  };

  struct check_result
  {
    bool ok = true;
    std::string violation;
  };

  /// Literal check of the Horn simulation conditions (and of the
  /// ELU-nabla condition when \a nabla is set).
  check_result check_horn_relation(const horn_relation& z, const structure& a,
                                   const structure& b, bool nabla = false);

  /// Winning positions of the lattice engine: win[y][mask] for every
  /// nonempty mask over dom(A) and element y of B.
  struct horn_table
  {
    int n = 0;
    std::vector<std::vector<std::uint8_t>> win;
    int rounds = 0;
  };
  horn_table horn_lattice(const structure& a, const structure& b,
                          const horn_options& opt = {});

  std::string relation_to_json(const horn_relation& z, const structure& a,
                               const structure& b);
  horn_relation relation_from_json(const std::string& text,
                                   const structure& a, const structure& b);
}
