// SPDX-License-Identifier: MIT
// Entailment, equivalence and concept learning deciders for hornALC.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <hornlog/concept.hh>
#include <hornlog/games.hh>

namespace hornlog
{
  /// Elements a of X with B,b simulated by A,a (ell rounds, or the
  /// greatest simulation when ell < 0).
  elem_set canonical_filter(const structure& a, const elem_set& x,
                            const structure& b, int y, int ell = -1);

  /// Every hornALC concept (of depth <= ell if ell >= 0) holding at a holds
  /// at b.
  bool entails(const structure& a, int x, const structure& b, int y,
               int ell = -1);
  /// Every such concept holding on all of X holds at b.
  bool entails_set(const structure& a, const elem_set& x, const structure& b,
                   int y, int ell = -1);
  bool equiv(const structure& a, int x, const structure& b, int y,
             int ell = -1);
  /// Every hornALC TBox satisfied by A is satisfied by B.
  bool tbox_entails(const structure& a, const structure& b, int ell = -1);
  bool tbox_equiv(const structure& a, const structure& b, int ell = -1);

  struct cbe_instance
  {
    structure s;
    elem_set positives, negatives;
  };

  cbe_instance parse_cbe(const std::string& text);
  cbe_instance make_cbe(const structure& s,
                        const std::vector<std::string>& positives,
                        const std::vector<std::string>& negatives);

  /// Some hornALC concept holds on all positives and on no negative.
  bool cbe(const cbe_instance& inst, int ell = -1);

  struct separator_result
  {
    concept_ptr concept_value;
    bool verified = false;
  };

  /// A hornALC concept C (depth <= ell when ell >= 0) with X inside C^A and
  /// b outside C^B; empty when X entails b.
  separator_result synthesize_separator(const structure& a, const elem_set& x,
                                        const structure& b, int y,
                                        int ell = -1);
  separator_result cbe_separator(const cbe_instance& inst, int ell = -1);

  /// A copy of \a s declaring every predicate of \a v.
  structure widen(const structure& s, const vocabulary& v);
  /// Evaluates \a c on \a s after declaring any missing names as empty.
  elem_set eval_widened(const concept_ptr& c, const structure& s);

  struct entailment_instance
  {
    structure a;
    int x = 0;
    structure b;
    int y = 0;
  };

  /// A' adds a fresh R-predecessor of X to A; B' is the disjoint union of
  /// A and B plus a fresh d that is an R-predecessor of b and of the copy
  /// of X. R is the first role name, or "R" when there is none.
  entailment_instance reduce_hornsim_to_entailment(const structure& a,
                                                   const structure& b,
                                                   const elem_set& x, int y);

  struct equivalence_instance
  {
    structure s;
    int x = 0, y = 0;
  };

  /// Disjoint union of A and B plus a fresh x' with R-successors a and b
  /// and a fresh y' with R-successor b.
  equivalence_instance reduce_entailment_to_equivalence(const structure& a,
                                                        const structure& b,
                                                        int x, int y);

  /// A model of \a c of depth at most depth(c), as a tree with its root.
  struct pointed_model
  {
    structure s;
    int root = 0;
  };
  std::optional<pointed_model> find_model(const concept_ptr& c);
  bool subsumed(const concept_ptr& c, const concept_ptr& d);
  bool equivalent(const concept_ptr& c, const concept_ptr& d);

  enum class expressible
  {
    yes, no, unknown
  };

  struct expressible_result
  {
    expressible verdict = expressible::unknown;
    /// Equivalent hornALC concept when verdict is yes.
    concept_ptr horn;
    /// When verdict is no: X inside C^A, b outside C^B and X Horn
    /// simulated by b for ell rounds.
    structure a, b;
    elem_set x;
    int y = -1;
    std::string note;
  };

  struct expressible_options
  {
    int size_cap = 6;
    std::size_t candidate_cap = 4000;
    std::size_t position_cap = 200000;
  };

  /// Whether \a c is equivalent to a hornALC concept of depth <= ell.
  expressible_result horn_expressible(const concept_ptr& c, int ell,
                                      const expressible_options& opt = {});
}
