// SPDX-License-Identifier: MIT
// Guarded simulations and guarded Horn simulation games over links.
#pragma once

#include <string>
#include <vector>

#include <hornlog/games.hh>
#include <hornlog/gf.hh>

namespace hornlog
{
  /// A link (P, b): a guarded tuple b of B and the images p(b) of the maps
  /// in P, each a tuple of A of the same length.
  struct glink
  {
    tuple_t target;
    std::vector<tuple_t> images;
    bool operator==(const glink&) const = default;
  };

  struct ghsim_options
  {
    int ell = -1; ///< rounds; < 0 means unbounded
    std::size_t position_cap = 200000;
    std::size_t choice_cap = 100000; ///< max choice sets Y per move
    std::size_t dom_cap = 8;
    int arity_cap = 3;
  };

  struct ghsim_verdict
  {
    bool holds = false;
    /// The canonical filter X0 as tuples of A (ghsim only).
    std::vector<tuple_t> filtered;
    /// Set when the verdict rests on a notion with no counterpart in the
    /// literature.
    std::string note;
    game_stats stats;
  };

  /// A, a is guardedly simulated by B, b (for ell rounds when ell >= 0).
  /// Throws if a tuple is not guarded or the lengths differ.
  bool gsim(const structure& a, const tuple_t& at, const structure& b,
            const tuple_t& bt, int ell = -1);

  /// Some guarded Horn simulation has a link (P, b) with P[b] the canonical
  /// filter {a in X : B, b gsim A, a}; false when the filter is empty.
  ghsim_verdict ghsim(const structure& a, const std::vector<tuple_t>& x,
                      const structure& b, const tuple_t& bt,
                      const ghsim_options& opt = {});

  /// Every guarded set of B is the target of a winning link that uses all
  /// admissible maps.
  ghsim_verdict global_ghsim(const structure& a, const structure& b,
                             const ghsim_options& opt = {});

  /// Checks the guarded Horn simulation conditions for \a z closed under
  /// restriction to guarded subtuples of the targets.
  check_result check_ghsim_relation(const std::vector<glink>& z,
                                    const structure& a, const structure& b);

  /// The generalized conditions between the family \a parts (element names
  /// pairwise distinct; links name elements of the parts) and \a b.
  check_result check_generalized_ghsim(const std::vector<structure>& parts,
                                       const std::vector<glink>& z,
                                       const structure& b);

  /// JSON list of {"target":[names],"images":[[names],...]}.
  std::vector<glink> links_from_json(const std::string& text,
                                     const structure& a, const structure& b);
  std::string links_to_json(const std::vector<glink>& z, const structure& a,
                            const structure& b);
}
