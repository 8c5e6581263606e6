// SPDX-License-Identifier: MIT
// Alternating Turing machines and their compilation into HornSim instances.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <hornlog/structure.hh>

namespace hornlog
{
  /// A space-bounded alternating Turing machine with binary branching.
  struct atm
  {
    enum class move
    {
      left, right, hold
    };
    struct step
    {
      std::string state, symbol;
      move dir = move::hold;
      bool operator==(const step&) const = default;
    };
    std::vector<std::string> existential, universal, accepting, rejecting;
    std::string initial;
    std::vector<std::string> input_alphabet, tape_alphabet;
    std::string blank;
    /// (q, a) -> (left branch, right branch) for every non-final q.
    std::map<std::pair<std::string, std::string>, std::pair<step, step>> delta;
    /// Number of tape cells.
    int space = 1;

    bool is_existential(const std::string& q) const;
    bool is_universal(const std::string& q) const;
    bool is_accepting(const std::string& q) const;
    bool is_rejecting(const std::string& q) const;
    bool is_final(const std::string& q) const
    {
      return is_accepting(q) || is_rejecting(q);
    }
    std::vector<std::string> states() const;
  };

  using atm_word = std::vector<std::string>;

  struct atm_problem
  {
    std::string name;
    atm machine;
    atm_word word;
  };

  /// Throws error unless the state sets are disjoint, the initial state is
  /// universal and every non-final (q, a) has exactly one branching pair.
  void validate(const atm& m);
  /// Throws error if \a w is not over the input alphabet or is too long.
  void validate_word(const atm& m, const atm_word& w);

  /// {"existential":[..],"universal":[..],"accepting":[..],"rejecting":[..],
  ///  "initial":q,"input_alphabet":[..],"tape_alphabet":[..],"blank":b,
  ///  "transitions":[[[q,a],[[q_l,b_l,"L|R|H"],[q_r,b_r,"L|R|H"]]],..],
  ///  "space":s,"word":[..] or "word":"ab"}
  atm_problem atm_from_json(const std::string& text);
  std::string atm_to_json(const atm_problem& p);

  /// A configuration; head is a 0-based cell index.
  struct atm_config
  {
    std::string state;
    int head = 0;
    std::vector<std::string> tape;
    bool operator==(const atm_config&) const = default;
    auto operator<=>(const atm_config&) const = default;
  };

  atm_config initial_config(const atm& m, const atm_word& w);
  /// Left and right successor of a non-final configuration. A head move
  /// past either end of the tape leaves the head in place.
  std::pair<atm_config, atm_config> successors(const atm& m,
                                               const atm_config& c);

  struct atm_result
  {
    bool accepts = false;
    std::size_t configurations = 0;
  };

  /// AND-OR evaluation of the configurations reachable from the initial
  /// one. Throws error if a non-final configuration lies on a cycle and
  /// cap_exceeded beyond \a cap configurations.
  atm_result atm_run(const atm& m, const atm_word& w,
                     std::size_t cap = 1000000);
  bool atm_accepts(const atm& m, const atm_word& w, std::size_t cap = 1000000);

  struct hornsim_instance
  {
    structure a, b;
    elem_set x;
    int b_hat = -1;
  };

  /// A = cells A_1..A_s plus a copy of the controller B with the cell
  /// connections; X = cells of the initial configuration tagged with the
  /// left direction; b_hat = (and,1,1,1,left).
  hornsim_instance build_hornsim_instance(const atm& m, const atm_word& w,
                                          std::size_t vocab_cap = 4096);
  /// The same pair with S* marking X in A and b_hat in B.
  hornsim_instance build_global_instance(const atm& m, const atm_word& w,
                                         std::size_t vocab_cap = 4096);

  /// Elements (c_i, d, i) of A for the cells of \a c; d is the right
  /// direction when \a right is set.
  elem_set config_elements(const structure& a, const atm_config& c,
                           bool right);

  /// Element and symbol names used by the construction.
  namespace atm_names
  {
    std::string dir(bool right);
    std::string cell(int i, const std::string& content, bool right);
    std::string role(const std::string& q, const std::string& a, int i,
                     bool right);
    inline const char* star = "S*";
  }

  /// Ten small machines covering immediate verdicts, alternation and head
  /// movement in both directions, each with an input word.
  std::vector<atm_problem> atm_zoo();
}
