// SPDX-License-Identifier: MIT
// Small named structures used by examples, tests and the CLI.
#pragma once

#include <string>

#include <hornlog/concept.hh>
#include <hornlog/gf_games.hh>
#include <hornlog/structure.hh>

namespace hornlog::fixtures
{
  structure a0();
  structure b0();
  structure a1();
  structure b1();
  /// (some R. top & all R. A) -> B
  concept_ptr c_nabla_example();
  tbox t_horn();
  /// Horn relation {({a,d},a'), ({e},b')} between a0() and b0().
  horn_relation a0_b0_relation();
  /// Horn relation from a1() onto every element of b1().
  horn_relation a1_b1_relation();

  /// Guarded Horn simulation pair: ex_guard_b() copies ex_guard_a() and adds
  /// an element f labelled E with an S-edge to a' and an R-edge to d'.
  structure ex_guard_a();
  structure ex_guard_b();
  /// E <= some R. top & some S. top, E & all R. A & all S. B <= D
  tbox t_guard();
  /// Singleton and edge links plus the three links at f.
  std::vector<glink> ex_guard_links();

  /// One-element parts labelled A1 and A2 respectively.
  std::vector<structure> ggg_parts();
}
