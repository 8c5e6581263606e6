// SPDX-License-Identifier: MIT
// Exhaustive and seeded random generation of small structures.
#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include <hornlog/structure.hh>

namespace hornlog
{
  using rng_t = std::mt19937_64;

  /// Number of candidate facts over \a n elements for vocabulary \a v.
  std::size_t fact_slots(const vocabulary& v, int n);

  /// Calls \a f on every structure with domain {0..n-1} over \a v. With
  /// \a sorted_labels, only structures whose elements carry label sets in
  /// nondecreasing order are produced; every structure is isomorphic to
  /// one of those. Stops early when \a f returns false.
  void for_each_structure(const vocabulary& v, int n, bool sorted_labels,
                          const std::function<bool(const structure&)>& f);

  /// Random structure where each candidate fact holds with probability p.
  structure random_structure(const vocabulary& v, int n, double p, rng_t& rng);

  /// Random nonempty subset of the domain of \a s.
  elem_set random_nonempty_subset(const structure& s, rng_t& rng);
}
