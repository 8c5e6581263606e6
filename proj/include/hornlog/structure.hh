// SPDX-License-Identifier: MIT
// Finite relational structures and their constructions.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace hornlog
{
  /// Base class for every error raised by the library.
  class error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Raised when a configured size limit would be exceeded.
  class cap_exceeded : public error
  {
  public:
    using error::error;
  };

  using elem_set = boost::dynamic_bitset<std::uint64_t>;
  using tuple_t = std::vector<int>;

  struct vocabulary
  {
    std::map<std::string, int> arity;

    void add(const std::string& pred, int k);
    void merge(const vocabulary& other);
    bool has(const std::string& pred) const { return arity.count(pred) > 0; }
    int max_arity() const;
    std::vector<std::string> concept_names() const;
    std::vector<std::string> role_names() const;
    bool operator==(const vocabulary&) const = default;
  };

  /// A finite relational structure. Element order is insertion order and
  /// fixes the bit positions used by every element set over it.
  class structure
  {
  public:
    structure() = default;
    explicit structure(vocabulary v);

    int add_element(const std::string& name);
    void declare(const std::string& pred, int k);
    void add_fact(const std::string& pred, const tuple_t& t);
    /// Removes a fact if present; the predicate stays declared.
    void remove_fact(const std::string& pred, const tuple_t& t);
    void add_label(const std::string& name, int a) { add_fact(name, {a}); }
    void add_edge(const std::string& role, int a, int b) { add_fact(role, {a, b}); }
    /// Ensures every predicate of \a v is declared (empty if new).
    void extend_vocab(const vocabulary& v);

    std::size_t size() const { return names_.size(); }
    const std::string& name(int a) const { return names_.at(a); }
    const std::vector<std::string>& names() const { return names_; }
    /// Index of \a name or -1.
    int find(const std::string& name) const;
    /// Index of \a name; throws if absent.
    int at(const std::string& name) const;
    const vocabulary& vocab() const { return vocab_; }

    const std::set<tuple_t>& tuples(const std::string& pred) const;
    bool holds(const std::string& pred, const tuple_t& t) const;
    /// Extension of a declared unary predicate.
    const elem_set& unary(const std::string& pred) const;
    /// R-successors / R-predecessors of every element.
    const std::vector<elem_set>& succ(const std::string& role) const;
    const std::vector<elem_set>& pred(const std::string& role) const;
    /// Unary predicates holding at \a a.
    std::vector<std::string> labels(int a) const;

    elem_set empty_set() const { return elem_set(size()); }
    elem_set full_set() const;
    elem_set set_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const elem_set& s) const;

  private:
    struct index
    {
      std::unordered_map<std::string, elem_set> unary;
      std::unordered_map<std::string, std::vector<elem_set>> succ, pred;
    };
    void build_index() const;

    vocabulary vocab_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> pos_;
    std::map<std::string, std::set<tuple_t>> facts_;
    mutable std::shared_ptr<index> index_;
  };

  structure parse_structure(const std::string& text);
  structure structure_from_json_file(const std::string& path);
  std::string serialize_structure(const structure& s);

  struct union_result
  {
    structure s;
    /// embed[i][a] is the element of the union representing element a of
    /// part i.
    std::vector<std::vector<int>> embed;
  };

  /// Disjoint union; element names are "part#i/name" unless \a plain is set,
  /// in which case names are kept and must be pairwise distinct.
  union_result disjoint_union(const std::vector<structure>& parts,
                              bool plain = false);

  struct product_result
  {
    structure s;
    /// comp[x][i] is the component of element x in part i.
    std::vector<tuple_t> comp;
  };

  constexpr std::size_t default_product_cap = 10000;
  product_result product(const std::vector<structure>& parts,
                         std::size_t cap = default_product_cap);

  struct tree_result
  {
    structure s;
    int root = 0;
    /// origin[x] is the element of the unravelled structure that node x
    /// copies.
    std::vector<int> origin;
  };

  tree_result unravel(const structure& s, int root, int depth);

  /// Depth of every node of a forest; throws if \a s is not a forest.
  std::vector<int> forest_depths(const structure& s);
  structure truncate(const structure& s, int depth);

  bool r_up_holds(const structure& s, const std::string& role,
                  const elem_set& x, const elem_set& y);
  bool r_down_holds(const structure& s, const std::string& role,
                    const elem_set& x, const elem_set& y);

  /// Elements of \a s reachable from members of \a x in one R-step.
  elem_set successors(const structure& s, const std::string& role,
                      const elem_set& x);

  /// Iterates over set bits of an element set.
  template <class F>
  void for_each_elem(const elem_set& x, F&& f)
  {
    for (auto i = x.find_first(); i != elem_set::npos; i = x.find_next(i))
      f(static_cast<int>(i));
  }

  std::vector<int> elems_of(const elem_set& x);
}
