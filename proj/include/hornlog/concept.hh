// SPDX-License-Identifier: MIT
// ALC concepts: syntax, fragments, evaluation and enumeration.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include <hornlog/structure.hh>

namespace hornlog
{
  enum class ckind
  {
    top, bot, name, neg, conj, disj, impl, exists, forall, nabla
  };

  struct concept_node;
  using concept_ptr = std::shared_ptr<const concept_node>;

  struct concept_node
  {
    ckind kind;
    /// Concept name for ckind::name, role name for the quantifiers.
    std::string sym;
    std::vector<concept_ptr> kids;
  };

  concept_ptr c_top();
  concept_ptr c_bot();
  concept_ptr c_name(const std::string& a);
  concept_ptr c_not(concept_ptr c);
  /// Conjunction; flattens nothing, returns the single child for one
  /// argument and top for none.
  concept_ptr c_and(std::vector<concept_ptr> cs);
  concept_ptr c_or(std::vector<concept_ptr> cs);
  concept_ptr c_imp(concept_ptr l, concept_ptr r);
  concept_ptr c_some(const std::string& role, concept_ptr c);
  concept_ptr c_all(const std::string& role, concept_ptr c);
  concept_ptr c_nabla(const std::string& role, concept_ptr c);

  class parse_error : public error
  {
  public:
    parse_error(const std::string& msg, std::size_t pos);
    std::size_t pos;
  };

  concept_ptr parse_concept(const std::string& text);
  /// Text form accepted by parse_concept.
  std::string to_string(const concept_ptr& c);

  int depth(const concept_ptr& c);
  int concept_size(const concept_ptr& c);
  bool same_concept(const concept_ptr& a, const concept_ptr& b);
  /// Concept and role names occurring in \a c.
  vocabulary concept_vocab(const concept_ptr& c);

  concept_ptr expand_nabla(const concept_ptr& c);
  concept_ptr nnf(const concept_ptr& c);
  bool is_nnf(const concept_ptr& c);

  struct fragment_report
  {
    bool is_EL = false, is_ELU = false, is_ELU_nabla = false;
    bool is_hornALC = false, is_hornALC_nabla = false;
    bool is_p_horn = false, is_s_horn = false, is_n_horn = false;
    int pol_plus = 0, pol_minus = 0;
  };

  fragment_report classify(const concept_ptr& c);
  /// Translation of a p-horn concept in negation normal form into an
  /// equivalent hornALC concept.
  concept_ptr to_horn(const concept_ptr& c);

  elem_set eval_concept(const concept_ptr& c, const structure& s);

  struct inclusion
  {
    concept_ptr lhs, rhs;
  };
  using tbox = std::vector<inclusion>;

  tbox parse_tbox(const std::string& text);
  std::string to_string(const tbox& t);
  int depth(const tbox& t);
  bool eval_tbox(const tbox& t, const structure& s);
  /// Elements of \a s violating some inclusion of \a t.
  elem_set tbox_violations(const tbox& t, const structure& s);

  /// Characteristic EL concept of depth <= ell for element a of s.
  concept_ptr char_el(const structure& s, int ell, int a);

  enum class fragment
  {
    EL, ELU, ELU_nabla, hornALC, hornALC_nabla, ALC
  };

  struct enum_result
  {
    std::vector<concept_ptr> concepts;
    /// True when new extensions still appeared at the size cap.
    bool cap_hit = false;
  };

  /// All concepts of fragment \a f with depth <= ell and syntactic size
  /// <= size_cap over the given names, keeping the smallest concept per
  /// extension signature across \a family. An empty family deduplicates
  /// syntactically only.
  enum_result enum_concepts(fragment f, const vocabulary& v, int ell,
                            int size_cap,
                            const std::vector<structure>& family);
}
