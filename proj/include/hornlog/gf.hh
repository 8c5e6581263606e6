// SPDX-License-Identifier: MIT
// Guarded fragment formulas: syntax, fragments, evaluation and guarded tuples.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <hornlog/concept.hh>
#include <hornlog/structure.hh>

namespace hornlog
{
  enum class gkind
  {
    top, bot, eq, atom, conj, disj, neg, impl, exists, forall
  };

  struct gf_node;
  using gf_ptr = std::shared_ptr<const gf_node>;

  /// Atom R(x1..xn); the predicate "=" denotes equality.
  struct gf_atom
  {
    std::string pred;
    std::vector<std::string> args;
    bool operator==(const gf_atom&) const = default;
  };

  struct gf_node
  {
    gkind kind;
    /// eq and atom: the atom itself; quantifiers: the guard.
    gf_atom atom;
    /// Quantifiers: the bound variables.
    std::vector<std::string> bound;
    std::vector<gf_ptr> kids;
    /// Quantifier written without a guard and read as guarded by x = x.
    bool implicit_guard = false;
  };

  gf_ptr g_top();
  gf_ptr g_bot();
  gf_ptr g_atom(const std::string& pred, std::vector<std::string> args);
  gf_ptr g_eq(const std::string& x, const std::string& y);
  gf_ptr g_and(std::vector<gf_ptr> fs);
  gf_ptr g_or(std::vector<gf_ptr> fs);
  gf_ptr g_not(gf_ptr f);
  gf_ptr g_imp(gf_ptr l, gf_ptr r);
  /// Guarded quantifiers; throw when the guard misses a bound variable or
  /// a free variable of the body.
  gf_ptr g_exists(std::vector<std::string> bound, gf_atom guard, gf_ptr body);
  gf_ptr g_forall(std::vector<std::string> bound, gf_atom guard, gf_ptr body);

  /// Parses the text grammar: atoms R(x,y), x=y, top, bot, !, &, |, ->,
  /// "exists y1 y2 : G(x,y1,y2) . body" and "forall y : G(x,y) . body".
  /// A quantifier over one variable may omit the guard.
  gf_ptr parse_gf(const std::string& text);
  std::string to_string(const gf_ptr& f);

  /// Free variables in order of first occurrence.
  std::vector<std::string> free_vars(const gf_ptr& f);
  /// Nesting depth of guarded quantifiers.
  int gf_depth(const gf_ptr& f);
  /// Predicates with their arities, equality excluded.
  vocabulary gf_vocab(const gf_ptr& f);
  bool uses_equality(const gf_ptr& f);

  struct gf_report
  {
    bool is_gf = true;
    bool is_gf_exists = false;
    bool is_horn_gf = false;
    /// Some quantifier was written without a guard.
    bool implicit_guards = false;
  };
  gf_report classify_gf(const gf_ptr& f);

  using assignment = std::map<std::string, int>;

  /// Truth of \a f in \a s; every free variable must be assigned.
  bool eval_gf(const gf_ptr& f, const structure& s, const assignment& env = {});
  /// Tuples over \a vars (default: free_vars(f)) satisfying \a f.
  std::vector<tuple_t> gf_answers(const gf_ptr& f, const structure& s,
                                  std::vector<std::string> vars = {});

  /// Standard translation with free variable \a var.
  gf_ptr std_translation(const concept_ptr& c, const std::string& var = "x");
  /// The sentence "forall x . (C -> D)" for every inclusion.
  gf_ptr std_translation(const tbox& t);

  /// [t] is a singleton or the set of arguments of some fact.
  bool is_guarded(const structure& s, const tuple_t& t);
  /// Guarded tuples of length 1..max_len (default: the maximal arity,
  /// at least 1), in lexicographic order.
  std::vector<tuple_t> guarded_tuples(const structure& s, int max_len = -1);
  /// Guarded sets as sorted tuples of distinct elements.
  std::vector<tuple_t> guarded_sets(const structure& s);
}
