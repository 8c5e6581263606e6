// SPDX-License-Identifier: MIT
// Exhaustive and seeded random generation of small structures.
#include <hornlog/generate.hh>

#include <bit>

namespace hornlog
{
  namespace
  {
    struct slot
    {
      std::string pred;
      tuple_t args;
    };

    std::vector<slot>
    slots(const vocabulary& v, int n)
    {
      std::vector<slot> r;
      for (auto& [p, k] : v.arity)
        {
          tuple_t t(k, 0);
          for (;;)
            {
              r.push_back({p, t});
              int i = k - 1;
              while (i >= 0 && ++t[i] == n)
                t[i--] = 0;
              if (i < 0)
                break;
            }
        }
      return r;
    }

    structure
    base(const vocabulary& v, int n)
    {
      structure s(v);
      for (int i = 0; i < n; ++i)
        s.add_element("e" + std::to_string(i));
      return s;
    }
  }

  std::size_t
  fact_slots(const vocabulary& v, int n)
  {
    return slots(v, n).size();
  }

  void
  for_each_structure(const vocabulary& v, int n, bool sorted_labels,
                     const std::function<bool(const structure&)>& f)
  {
    auto names = v.concept_names();
    vocabulary rest;
    for (auto& [p, k] : v.arity)
      if (k != 1)
        rest.arity.emplace(p, k);
    auto other = slots(rest, n);
    if (other.size() >= 63 || names.size() * n >= 63)
      throw cap_exceeded("too many candidate facts for exhaustive search");
    std::uint64_t label_codes = std::uint64_t(1) << names.size();
    std::vector<std::uint64_t> code(n, 0);
    for (;;)
      {
        auto s = base(v, n);
        for (int e = 0; e < n; ++e)
          for (std::size_t j = 0; j < names.size(); ++j)
            if (code[e] >> j & 1)
              s.add_fact(names[j], {e});
        // Gray-code order: consecutive structures differ in one fact.
        std::uint64_t gray = 0;
        for (std::uint64_t m = 0;; )
          {
            if (!f(s))
              return;
            if (++m == std::uint64_t(1) << other.size())
              break;
            int j = std::countr_zero(m);
            gray ^= std::uint64_t(1) << j;
            if (gray >> j & 1)
              s.add_fact(other[j].pred, other[j].args);
            else
              s.remove_fact(other[j].pred, other[j].args);
          }
        int i = n - 1;
        while (i >= 0 && ++code[i] == label_codes)
          code[i--] = 0;
        if (i < 0)
          return;
        if (sorted_labels)
          for (int j = i + 1; j < n; ++j)
            code[j] = code[i];
      }
  }

  structure
  random_structure(const vocabulary& v, int n, double p, rng_t& rng)
  {
    auto s = base(v, n);
    std::bernoulli_distribution coin(p);
    for (auto& sl : slots(v, n))
      if (coin(rng))
        s.add_fact(sl.pred, sl.args);
    return s;
  }

  elem_set
  random_nonempty_subset(const structure& s, rng_t& rng)
  {
    elem_set x(s.size());
    std::bernoulli_distribution coin(0.5);
    while (x.none())
      for (std::size_t i = 0; i < s.size(); ++i)
        x[i] = coin(rng);
    return x;
  }
}
