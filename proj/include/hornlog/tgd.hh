// SPDX-License-Identifier: MIT
// Guarded tgds, translations to and from hornGF, the chase and CQ answering.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <hornlog/gf.hh>

namespace hornlog
{
  /// body -> exists exist . head. An empty body stands for top and an
  /// empty head for bot.
  struct tgd
  {
    std::vector<gf_atom> body, head;
    std::vector<std::string> exist;
    bool operator==(const tgd&) const = default;
  };

  /// Index of a body atom containing every body variable, or -1. An empty
  /// body counts as guarded (index -1, see is_guarded).
  int tgd_guard(const tgd& t);
  bool is_guarded(const tgd& t);
  /// Throws unless the head only uses body variables and existentials.
  void validate(const tgd& t);

  gf_atom parse_atom(const std::string& text);
  std::string to_string(const gf_atom& a);
  std::string to_string(const tgd& t);

  /// JSON list of {"body":[...],"head":[...],"exist":[...]} with atoms
  /// written as "R(x,y)" or "x=y".
  std::vector<tgd> parse_tgds(const std::string& text);
  std::string tgds_to_json(const std::vector<tgd>& sigma);

  /// Vocabulary of the rules, equality excluded.
  vocabulary tgd_vocab(const std::vector<tgd>& sigma);

  /// Guarded tgds for a hornGF sentence. Fresh predicates are named
  /// "__sub/k" (subformulas), "__aux/k" (existential witnesses) and "__E"
  /// (equality); throws if the input already uses those names.
  std::vector<tgd> horngf_to_tgds(const gf_ptr& sentence);
  /// A conjunction of hornGF sentences for a set of guarded tgds, with one
  /// fresh "__aux/k" predicate per rule.
  gf_ptr tgds_to_horngf(const std::vector<tgd>& sigma);

  /// Truth of a rule set in a structure (every predicate declared or empty).
  bool satisfies(const structure& s, const std::vector<tgd>& sigma);

  struct chase_result
  {
    enum class status
    {
      model, inconsistent, cap_exceeded
    } state = status::model;
    structure s;
    std::size_t steps = 0;
    std::size_t nulls = 0;
  };

  /// Oblivious chase: every trigger fires once, existentials get fresh
  /// nulls named "_n1", "_n2", ... Stops at a fixpoint, when a rule with
  /// empty head fires, or after step_cap rule applications.
  chase_result chase(const structure& db, const std::vector<tgd>& sigma,
                     std::size_t step_cap = 10000);

  /// The chase result restricted to \a v, with elements related by "__E"
  /// merged (each class keeps the name of its first element).
  structure chase_reduct(const structure& s, const vocabulary& v);

  /// Conjunctive query: answer variables plus body atoms.
  struct cq
  {
    std::vector<std::string> answer;
    std::vector<gf_atom> body;
  };
  /// JSON {"answer":[...],"body":[...]}.
  cq parse_cq(const std::string& text);
  std::vector<tuple_t> cq_answers(const cq& q, const structure& s);

  struct certain_result
  {
    enum class status
    {
      answers, inconsistent, unknown
    } state = status::answers;
    /// Answers over the database elements (by name) when state is answers.
    std::vector<std::vector<std::string>> tuples;
  };
  certain_result certain_answers(const cq& q, const structure& db,
                                 const std::vector<tgd>& sigma,
                                 std::size_t step_cap = 10000);
}
