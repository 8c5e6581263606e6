// SPDX-License-Identifier: MIT
// ALC concepts: syntax, fragments, evaluation and enumeration.
#include <hornlog/concept.hh>

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hornlog
{
  namespace
  {
    concept_ptr
    make(ckind k, std::string sym = {}, std::vector<concept_ptr> kids = {})
    {
      return std::make_shared<const concept_node>(
        concept_node{k, std::move(sym), std::move(kids)});
    }
  }

  concept_ptr
  c_top()
  {
    static const concept_ptr t = make(ckind::top);
    return t;
  }

  concept_ptr
  c_bot()
  {
    static const concept_ptr b = make(ckind::bot);
    return b;
  }

  concept_ptr c_name(const std::string& a) { return make(ckind::name, a); }
  concept_ptr c_not(concept_ptr c) { return make(ckind::neg, {}, {c}); }

  concept_ptr
  c_and(std::vector<concept_ptr> cs)
  {
    if (cs.empty())
      return c_top();
    if (cs.size() == 1)
      return cs[0];
    return make(ckind::conj, {}, std::move(cs));
  }

  concept_ptr
  c_or(std::vector<concept_ptr> cs)
  {
    if (cs.empty())
      return c_bot();
    if (cs.size() == 1)
      return cs[0];
    return make(ckind::disj, {}, std::move(cs));
  }

  concept_ptr
  c_imp(concept_ptr l, concept_ptr r)
  {
    return make(ckind::impl, {}, {l, r});
  }

  concept_ptr
  c_some(const std::string& role, concept_ptr c)
  {
    return make(ckind::exists, role, {c});
  }

  concept_ptr
  c_all(const std::string& role, concept_ptr c)
  {
    return make(ckind::forall, role, {c});
  }

  concept_ptr
  c_nabla(const std::string& role, concept_ptr c)
  {
    return make(ckind::nabla, role, {c});
  }

  parse_error::parse_error(const std::string& msg, std::size_t p)
    : error(msg + " at position " + std::to_string(p)), pos(p)
  {
  }

  namespace
  {
    class concept_parser
    {
    public:
      explicit concept_parser(const std::string& t) : text_(t) {}

      concept_ptr
      parse_all()
      {
        auto c = parse_impl();
        skip_ws();
        if (i_ != text_.size())
          throw parse_error("unexpected input", i_);
        return c;
      }

    private:
      void
      skip_ws()
      {
        while (i_ < text_.size() && std::isspace((unsigned char)text_[i_]))
          ++i_;
      }

      bool
      eat(const std::string& tok)
      {
        skip_ws();
        if (text_.compare(i_, tok.size(), tok) == 0)
          {
            i_ += tok.size();
            return true;
          }
        return false;
      }

      static bool
      ident_char(char c, bool first)
      {
        return std::isalpha((unsigned char)c) || c == '_'
               || (!first && std::isdigit((unsigned char)c));
      }

      std::string
      peek_ident()
      {
        skip_ws();
        std::size_t j = i_;
        if (j >= text_.size() || !ident_char(text_[j], true))
          return {};
        while (j < text_.size() && ident_char(text_[j], false))
          ++j;
        return text_.substr(i_, j - i_);
      }

      std::string
      ident()
      {
        auto id = peek_ident();
        if (id.empty())
          throw parse_error("identifier expected", i_);
        i_ += id.size();
        return id;
      }

      concept_ptr
      parse_impl()
      {
        auto l = parse_disj();
        if (eat("->"))
          return c_imp(l, parse_impl());
        return l;
      }

      concept_ptr
      parse_disj()
      {
        std::vector<concept_ptr> cs{parse_conj()};
        while (eat("|"))
          cs.push_back(parse_conj());
        return c_or(std::move(cs));
      }

      concept_ptr
      parse_conj()
      {
        std::vector<concept_ptr> cs{parse_unary()};
        while (eat("&"))
          cs.push_back(parse_unary());
        return c_and(std::move(cs));
      }

      concept_ptr
      parse_unary()
      {
        skip_ws();
        if (i_ >= text_.size())
          throw parse_error("unexpected end of input", i_);
        if (eat("!"))
          return c_not(parse_unary());
        if (eat("("))
          {
            auto c = parse_impl();
            if (!eat(")"))
              throw parse_error("')' expected", i_);
            return c;
          }
        std::size_t at = i_;
        auto id = ident();
        if (id == "top")
          return c_top();
        if (id == "bot")
          return c_bot();
        if (id == "some" || id == "all" || id == "nabla")
          {
            auto role = ident();
            if (role == "top" || role == "bot" || role == "some"
                || role == "all" || role == "nabla")
              throw parse_error("role name expected", at);
            if (!eat("."))
              throw parse_error("'.' expected", i_);
            auto body = parse_unary();
            if (id == "some")
              return c_some(role, body);
            if (id == "all")
              return c_all(role, body);
            return c_nabla(role, body);
          }
        return c_name(id);
      }

      const std::string& text_;
      std::size_t i_ = 0;
    };

    int
    level(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::impl:
          return 0;
        case ckind::disj:
          return 1;
        case ckind::conj:
          return 2;
        default:
          return 3;
        }
    }

    void
    print(std::ostream& os, const concept_ptr& c, int min_level)
    {
      bool paren = level(c) < min_level;
      if (paren)
        os << '(';
      switch (c->kind)
        {
        case ckind::top:
          os << "top";
          break;
        case ckind::bot:
          os << "bot";
          break;
        case ckind::name:
          os << c->sym;
          break;
        case ckind::neg:
          os << '!';
          print(os, c->kids[0], 3);
          break;
        case ckind::conj:
        case ckind::disj:
          for (std::size_t i = 0; i < c->kids.size(); ++i)
            {
              if (i)
                os << (c->kind == ckind::conj ? " & " : " | ");
              print(os, c->kids[i], level(c) + 1);
            }
          break;
        case ckind::impl:
          print(os, c->kids[0], 1);
          os << " -> ";
          print(os, c->kids[1], 0);
          break;
        case ckind::exists:
        case ckind::forall:
        case ckind::nabla:
          os << (c->kind == ckind::exists  ? "some "
                 : c->kind == ckind::forall ? "all "
                                            : "nabla ")
             << c->sym << ". ";
          print(os, c->kids[0], 3);
          break;
        }
      if (paren)
        os << ')';
    }
  }

  concept_ptr
  parse_concept(const std::string& text)
  {
    return concept_parser(text).parse_all();
  }

  std::string
  to_string(const concept_ptr& c)
  {
    std::ostringstream os;
    print(os, c, 0);
    return os.str();
  }

  int
  depth(const concept_ptr& c)
  {
    int d = 0;
    for (auto& k : c->kids)
      d = std::max(d, depth(k));
    bool quant = c->kind == ckind::exists || c->kind == ckind::forall
                 || c->kind == ckind::nabla;
    return d + (quant ? 1 : 0);
  }

  int
  concept_size(const concept_ptr& c)
  {
    int n = 1;
    for (auto& k : c->kids)
      n += concept_size(k);
    return n;
  }

  bool
  same_concept(const concept_ptr& a, const concept_ptr& b)
  {
    if (a == b)
      return true;
    if (a->kind != b->kind || a->sym != b->sym
        || a->kids.size() != b->kids.size())
      return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
      if (!same_concept(a->kids[i], b->kids[i]))
        return false;
    return true;
  }

  namespace
  {
    void
    collect_vocab(const concept_ptr& c, vocabulary& v)
    {
      if (c->kind == ckind::name)
        v.add(c->sym, 1);
      else if (!c->sym.empty())
        v.add(c->sym, 2);
      for (auto& k : c->kids)
        collect_vocab(k, v);
    }
  }

  vocabulary
  concept_vocab(const concept_ptr& c)
  {
    vocabulary v;
    collect_vocab(c, v);
    return v;
  }

  concept_ptr
  expand_nabla(const concept_ptr& c)
  {
    std::vector<concept_ptr> kids;
    bool changed = false;
    for (auto& k : c->kids)
      {
        kids.push_back(expand_nabla(k));
        changed = changed || kids.back() != k;
      }
    if (c->kind == ckind::nabla)
      return c_and({c_some(c->sym, c_top()), c_all(c->sym, kids[0])});
    if (!changed)
      return c;
    return make(c->kind, c->sym, std::move(kids));
  }

  namespace
  {
    // Builds a conjunction or disjunction, splicing children of the same
    // kind into the result.
    concept_ptr
    flat(ckind k, const std::vector<concept_ptr>& cs)
    {
      std::vector<concept_ptr> out;
      for (auto& c : cs)
        if (c->kind == k)
          out.insert(out.end(), c->kids.begin(), c->kids.end());
        else
          out.push_back(c);
      return k == ckind::conj ? c_and(std::move(out)) : c_or(std::move(out));
    }

    concept_ptr
    push_neg(const concept_ptr& c, bool positive)
    {
      switch (c->kind)
        {
        case ckind::top:
          return positive ? c : c_bot();
        case ckind::bot:
          return positive ? c : c_top();
        case ckind::name:
          return positive ? c : c_not(c);
        case ckind::neg:
          return push_neg(c->kids[0], !positive);
        case ckind::conj:
        case ckind::disj:
          {
            std::vector<concept_ptr> ks;
            for (auto& k : c->kids)
              ks.push_back(push_neg(k, positive));
            bool as_conj = (c->kind == ckind::conj) == positive;
            return flat(as_conj ? ckind::conj : ckind::disj, ks);
          }
        case ckind::impl:
          {
            if (positive)
              return flat(ckind::disj, {push_neg(c->kids[0], false),
                                        push_neg(c->kids[1], true)});
            return flat(ckind::conj, {push_neg(c->kids[0], true),
                                      push_neg(c->kids[1], false)});
          }
        case ckind::exists:
        case ckind::forall:
          {
            bool ex = (c->kind == ckind::exists) == positive;
            auto body = push_neg(c->kids[0], positive);
            return ex ? c_some(c->sym, body) : c_all(c->sym, body);
          }
        case ckind::nabla:
          break;
        }
      throw error("nabla left after expansion");
    }
  }

  concept_ptr
  nnf(const concept_ptr& c)
  {
    return push_neg(expand_nabla(c), true);
  }

  bool
  is_nnf(const concept_ptr& c)
  {
    switch (c->kind)
      {
      case ckind::neg:
        return c->kids[0]->kind == ckind::name;
      case ckind::impl:
      case ckind::nabla:
        return false;
      default:
        for (auto& k : c->kids)
          if (!is_nnf(k))
            return false;
        return true;
      }
  }

  namespace
  {
    bool
    is_positive(const concept_ptr& c, bool allow_or, bool allow_nabla)
    {
      switch (c->kind)
        {
        case ckind::top:
        case ckind::name:
          return true;
        case ckind::disj:
          if (!allow_or)
            return false;
          [[fallthrough]];
        case ckind::conj:
          for (auto& k : c->kids)
            if (!is_positive(k, allow_or, allow_nabla))
              return false;
          return true;
        case ckind::nabla:
          if (!allow_nabla)
            return false;
          [[fallthrough]];
        case ckind::exists:
          return is_positive(c->kids[0], allow_or, allow_nabla);
        default:
          return false;
        }
    }

    bool
    is_horn(const concept_ptr& c, bool nabla_left)
    {
      switch (c->kind)
        {
        case ckind::top:
        case ckind::bot:
        case ckind::name:
          return true;
        case ckind::conj:
          for (auto& k : c->kids)
            if (!is_horn(k, nabla_left))
              return false;
          return true;
        case ckind::impl:
          return is_positive(c->kids[0], true, nabla_left)
                 && is_horn(c->kids[1], nabla_left);
        case ckind::exists:
        case ckind::forall:
          return is_horn(c->kids[0], nabla_left);
        default:
          return false;
        }
    }

    std::pair<int, int>
    polarity(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::top:
        case ckind::bot:
          return {0, 0};
        case ckind::name:
          return {1, 0};
        case ckind::neg:
          {
            auto [p, m] = polarity(c->kids[0]);
            return {m, p};
          }
        case ckind::conj:
          {
            int p = 0, m = 0;
            for (auto& k : c->kids)
              {
                auto [kp, km] = polarity(k);
                p = std::max(p, kp);
                m += km;
              }
            return {p, m};
          }
        case ckind::disj:
          {
            int p = 0, m = 0;
            for (auto& k : c->kids)
              {
                auto [kp, km] = polarity(k);
                p += kp;
                m = std::max(m, km);
              }
            return {p, m};
          }
        case ckind::impl:
          {
            auto [lp, lm] = polarity(c->kids[0]);
            auto [rp, rm] = polarity(c->kids[1]);
            return {lm + rp, std::max(lp, rm)};
          }
        case ckind::exists:
          {
            auto [p, m] = polarity(c->kids[0]);
            return {std::max(1, p), m};
          }
        case ckind::forall:
          {
            auto [p, m] = polarity(c->kids[0]);
            return {p, std::max(1, m)};
          }
        case ckind::nabla:
          return polarity(expand_nabla(c));
        }
      return {0, 0};
    }

    bool
    in_hb(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::bot:
          return true;
        case ckind::neg:
          return c->kids[0]->kind == ckind::name;
        case ckind::conj:
        case ckind::disj:
          for (auto& k : c->kids)
            if (!in_hb(k))
              return false;
          return true;
        case ckind::forall:
          return in_hb(c->kids[0]);
        default:
          return false;
        }
    }

    bool
    in_sh(const concept_ptr& c)
    {
      if (in_hb(c))
        return true;
      switch (c->kind)
        {
        case ckind::name:
          return true;
        case ckind::conj:
          for (auto& k : c->kids)
            if (!in_sh(k))
              return false;
          return true;
        case ckind::exists:
        case ckind::forall:
          return in_sh(c->kids[0]);
        case ckind::disj:
          {
            int outside = 0;
            for (auto& k : c->kids)
              {
                if (!in_sh(k))
                  return false;
                outside += in_hb(k) ? 0 : 1;
              }
            return outside <= 1;
          }
        default:
          return false;
        }
    }

    bool
    in_np(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::top:
        case ckind::bot:
        case ckind::name:
          return true;
        case ckind::conj:
        case ckind::disj:
        case ckind::exists:
        case ckind::forall:
          for (auto& k : c->kids)
            if (!in_np(k))
              return false;
          return true;
        default:
          return false;
        }
    }

    bool
    in_ng(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::name:
          return true;
        case ckind::neg:
          return in_np(c->kids[0]);
        case ckind::conj:
          for (auto& k : c->kids)
            if (!in_ng(k))
              return false;
          return true;
        case ckind::exists:
        case ckind::forall:
          return in_ng(c->kids[0]);
        case ckind::impl:
          return in_np(c->kids[0]) && in_ng(c->kids[1]);
        default:
          return false;
        }
    }
  }

  fragment_report
  classify(const concept_ptr& c)
  {
    fragment_report r;
    r.is_EL = is_positive(c, false, false);
    r.is_ELU = is_positive(c, true, false);
    r.is_ELU_nabla = is_positive(c, true, true);
    r.is_hornALC = is_horn(c, false);
    r.is_hornALC_nabla = is_horn(c, true);
    std::tie(r.pol_plus, r.pol_minus) = polarity(c);
    r.is_p_horn = r.pol_plus <= 1;
    auto e = expand_nabla(c);
    r.is_s_horn = in_sh(e);
    r.is_n_horn = in_ng(e);
    return r;
  }

  namespace
  {
    // Removes bot from a positive concept; returns nullptr if the whole
    // concept is equivalent to bot.
    concept_ptr
    drop_bot(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::bot:
          return nullptr;
        case ckind::conj:
          {
            std::vector<concept_ptr> ks;
            for (auto& k : c->kids)
              {
                auto d = drop_bot(k);
                if (!d)
                  return nullptr;
                ks.push_back(d);
              }
            return c_and(ks);
          }
        case ckind::disj:
          {
            std::vector<concept_ptr> ks;
            for (auto& k : c->kids)
              if (auto d = drop_bot(k))
                ks.push_back(d);
            if (ks.empty())
              return nullptr;
            return c_or(ks);
          }
        case ckind::exists:
          {
            auto d = drop_bot(c->kids[0]);
            return d ? c_some(c->sym, d) : nullptr;
          }
        default:
          return c;
        }
    }

    concept_ptr
    sh(const concept_ptr& c)
    {
      switch (c->kind)
        {
        case ckind::top:
        case ckind::bot:
        case ckind::name:
          return c;
        case ckind::neg:
          return c_imp(c->kids[0], c_bot());
        case ckind::conj:
          {
            std::vector<concept_ptr> ks;
            for (auto& k : c->kids)
              ks.push_back(sh(k));
            return c_and(ks);
          }
        case ckind::exists:
          return c_some(c->sym, sh(c->kids[0]));
        case ckind::forall:
          return c_all(c->sym, sh(c->kids[0]));
        case ckind::disj:
          {
            std::vector<concept_ptr> rest;
            concept_ptr d = c_bot();
            bool found = false;
            for (auto& k : c->kids)
              if (!found && polarity(k).first == 1)
                {
                  d = sh(k);
                  found = true;
                }
              else
                rest.push_back(k);
            auto l = drop_bot(nnf(c_not(c_or(rest))));
            if (!l)
              return c_top();
            return c_imp(l, d);
          }
        default:
          break;
        }
      throw error("to_horn expects a concept in negation normal form");
    }
  }

  concept_ptr
  to_horn(const concept_ptr& c)
  {
    if (!is_nnf(c))
      throw error("to_horn expects a concept in negation normal form");
    if (polarity(c).first > 1)
      throw error("to_horn expects a p-horn concept");
    return sh(c);
  }

  namespace
  {
    elem_set
    eval_rec(const concept_ptr& c, const structure& s)
    {
      switch (c->kind)
        {
        case ckind::top:
          return s.full_set();
        case ckind::bot:
          return s.empty_set();
        case ckind::name:
          return s.unary(c->sym);
        case ckind::neg:
          return ~eval_rec(c->kids[0], s);
        case ckind::conj:
          {
            auto r = eval_rec(c->kids[0], s);
            for (std::size_t i = 1; i < c->kids.size(); ++i)
              r &= eval_rec(c->kids[i], s);
            return r;
          }
        case ckind::disj:
          {
            auto r = eval_rec(c->kids[0], s);
            for (std::size_t i = 1; i < c->kids.size(); ++i)
              r |= eval_rec(c->kids[i], s);
            return r;
          }
        case ckind::impl:
          return ~eval_rec(c->kids[0], s) | eval_rec(c->kids[1], s);
        case ckind::exists:
        case ckind::forall:
        case ckind::nabla:
          {
            auto body = eval_rec(c->kids[0], s);
            auto& su = s.succ(c->sym);
            elem_set r(s.size());
            for (std::size_t a = 0; a < s.size(); ++a)
              {
                bool some = su[a].intersects(body);
                bool all = su[a].is_subset_of(body);
                bool v = c->kind == ckind::exists  ? some
                         : c->kind == ckind::forall ? all
                                                    : su[a].any() && all;
                r[a] = v;
              }
            return r;
          }
        }
      return s.empty_set();
    }
  }

  elem_set
  eval_concept(const concept_ptr& c, const structure& s)
  {
    return eval_rec(c, s);
  }

  tbox
  parse_tbox(const std::string& text)
  {
    tbox t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
      {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
          line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
          continue;
        auto sep = line.find("<=");
        if (sep == std::string::npos)
          throw error("line " + std::to_string(lineno) + ": '<=' expected");
        try
          {
            t.push_back({parse_concept(line.substr(0, sep)),
                         parse_concept(line.substr(sep + 2))});
          }
        catch (const parse_error& e)
          {
            throw error("line " + std::to_string(lineno) + ": " + e.what());
          }
      }
    return t;
  }

  std::string
  to_string(const tbox& t)
  {
    std::string r;
    for (auto& ci : t)
      r += to_string(ci.lhs) + " <= " + to_string(ci.rhs) + "\n";
    return r;
  }

  int
  depth(const tbox& t)
  {
    int d = 0;
    for (auto& ci : t)
      d = std::max({d, depth(ci.lhs), depth(ci.rhs)});
    return d;
  }

  elem_set
  tbox_violations(const tbox& t, const structure& s)
  {
    elem_set bad(s.size());
    for (auto& ci : t)
      bad |= eval_concept(ci.lhs, s) - eval_concept(ci.rhs, s);
    return bad;
  }

  bool
  eval_tbox(const tbox& t, const structure& s)
  {
    return tbox_violations(t, s).none();
  }

  concept_ptr
  char_el(const structure& s, int ell, int a)
  {
    if (a < 0 || a >= static_cast<int>(s.size()))
      throw error("char_el: element not in domain");
    if (ell < 0)
      throw error("char_el: negative depth");
    auto roles = s.vocab().role_names();
    std::vector<concept_ptr> prev(s.size()), cur(s.size());
    for (int k = 0; k <= ell; ++k)
      {
        for (std::size_t x = 0; x < s.size(); ++x)
          {
            std::vector<concept_ptr> parts;
            std::unordered_set<std::string> seen;
            auto push = [&](concept_ptr c) {
              if (seen.insert(to_string(c)).second)
                parts.push_back(c);
            };
            for (auto& lab : s.labels(x))
              push(c_name(lab));
            if (k > 0)
              for (auto& r : roles)
                for_each_elem(s.succ(r)[x],
                              [&](int y) { push(c_some(r, prev[y])); });
            cur[x] = c_and(parts);
          }
        std::swap(prev, cur);
      }
    return prev[a];
  }

  namespace
  {
    struct enum_item
    {
      concept_ptr c;
      elem_set sig;
      int size;
    };

    class enumerator
    {
    public:
      enumerator(fragment f, const vocabulary& v, int ell, int cap,
                 const std::vector<structure>& family)
        : f_(f), ell_(ell), cap_(cap)
      {
        std::vector<structure> fam = family;
        for (auto& s : fam)
          s.extend_vocab(v);
        syntactic_ = fam.empty();
        u_ = syntactic_ ? structure(v) : disjoint_union(fam).s;
        u_.extend_vocab(v);
        names_ = v.concept_names();
        roles_ = v.role_names();
      }

      enum_result
      run()
      {
        bool horn = f_ == fragment::hornALC || f_ == fragment::hornALC_nabla;
        fragment lf = f_ == fragment::hornALC        ? fragment::ELU
                      : f_ == fragment::hornALC_nabla ? fragment::ELU_nabla
                                                     : f_;
        std::vector<enum_item> lprev, hprev;
        for (int d = 0; d <= ell_; ++d)
          {
            auto lcur = level(lf, d, lprev, {});
            if (horn)
              hprev = level(f_, d, hprev, lcur);
            lprev = std::move(lcur);
          }
        auto& out = horn ? hprev : lprev;
        enum_result r;
        std::stable_sort(out.begin(), out.end(),
                         [](auto& a, auto& b) { return a.size < b.size; });
        for (auto& it : out)
          r.concepts.push_back(it.c);
        r.cap_hit = cap_hit_;
        return r;
      }

    private:
      elem_set
      quant(ckind k, const std::string& role, const elem_set& body) const
      {
        auto& su = u_.succ(role);
        elem_set r(u_.size());
        for (std::size_t a = 0; a < u_.size(); ++a)
          {
            bool some = su[a].intersects(body);
            bool all = su[a].is_subset_of(body);
            r[a] = k == ckind::exists  ? some
                   : k == ckind::forall ? all
                                        : su[a].any() && all;
          }
        return r;
      }

      // Concepts of depth <= d for fragment f. Quantifier bodies come from
      // \a below (depth <= d-1), implication premises from \a lefts.
      std::vector<enum_item>
      level(fragment f, int d, const std::vector<enum_item>& below,
            const std::vector<enum_item>& lefts)
      {
        std::map<int, std::vector<enum_item>> by_size;
        std::unordered_set<elem_set> seen;
        std::unordered_set<std::string> seen_text;
        std::vector<enum_item> all;
        auto add = [&](concept_ptr c, elem_set sig, int size) {
          if (size > cap_)
            return false;
          if (syntactic_ ? !seen_text.insert(to_string(c)).second
                         : !seen.insert(sig).second)
            return false;
          enum_item it{c, sig, size};
          by_size[size].push_back(it);
          all.push_back(it);
          return true;
        };
        for (auto& it : below)
          add(it.c, it.sig, it.size);
        bool horn = f == fragment::hornALC || f == fragment::hornALC_nabla;
        bool alc = f == fragment::ALC;
        bool with_or = f != fragment::EL && !horn;
        bool with_nabla = f == fragment::ELU_nabla;
        add(c_top(), u_.full_set(), 1);
        if (horn || alc)
          add(c_bot(), u_.empty_set(), 1);
        for (auto& n : names_)
          add(c_name(n), u_.unary(n), 1);
        std::map<int, std::vector<const enum_item*>> below_by_size, left_by_size;
        for (auto& it : below)
          below_by_size[it.size].push_back(&it);
        for (auto& it : lefts)
          left_by_size[it.size].push_back(&it);
        for (int s = 2; s <= cap_; ++s)
          {
            bool fresh = false;
            if (d > 0)
              for (auto* b : below_by_size[s - 1])
                for (auto& r : roles_)
                  {
                    fresh |= add(c_some(r, b->c),
                                 quant(ckind::exists, r, b->sig), s);
                    if (horn || alc)
                      fresh |= add(c_all(r, b->c),
                                   quant(ckind::forall, r, b->sig), s);
                    if (with_nabla)
                      fresh |= add(c_nabla(r, b->c),
                                   quant(ckind::nabla, r, b->sig), s);
                  }
            if (alc)
              for (auto& it : std::vector<enum_item>(by_size[s - 1]))
                fresh |= add(c_not(it.c), ~it.sig, s);
            for (int i = 1; i + 1 < s; ++i)
              {
                int j = s - 1 - i;
                if (i > j)
                  break;
                auto li = by_size[i], lj = by_size[j];
                for (std::size_t x = 0; x < li.size(); ++x)
                  for (std::size_t y = (i == j ? x + 1 : 0); y < lj.size(); ++y)
                    {
                      auto& p = li[x];
                      auto& q = lj[y];
                      fresh |= add(c_and({p.c, q.c}), p.sig & q.sig, s);
                      if (with_or || alc)
                        fresh |= add(c_or({p.c, q.c}), p.sig | q.sig, s);
                    }
              }
            if (horn)
              for (int i = 1; i + 1 < s; ++i)
                {
                  auto hs = by_size[s - 1 - i];
                  for (auto* l : left_by_size[i])
                    for (auto& h : hs)
                      fresh |= add(c_imp(l->c, h.c), ~l->sig | h.sig, s);
                }
            if (s == cap_ && fresh)
              cap_hit_ = true;
          }
        return all;
      }

      fragment f_;
      int ell_, cap_;
      structure u_;
      std::vector<std::string> names_, roles_;
      bool cap_hit_ = false;
      bool syntactic_ = false;
    };
  }

  enum_result
  enum_concepts(fragment f, const vocabulary& v, int ell, int size_cap,
                const std::vector<structure>& family)
  {
    if (ell < 0 || size_cap < 1)
      throw error("enum_concepts: bad parameters");
    return enumerator(f, v, ell, size_cap, family).run();
  }
}
