// SPDX-License-Identifier: MIT
// Guarded fragment formulas: syntax, fragments, evaluation and guarded tuples.
#include <hornlog/gf.hh>

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace hornlog
{
  namespace
  {
    gf_ptr
    make(gkind k, gf_atom a = {}, std::vector<std::string> bound = {},
         std::vector<gf_ptr> kids = {}, bool implicit = false)
    {
      return std::make_shared<const gf_node>(
        gf_node{k, std::move(a), std::move(bound), std::move(kids), implicit});
    }

    void
    collect_free(const gf_ptr& f, std::set<std::string>& bound,
                 std::vector<std::string>& out)
    {
      auto note = [&](const std::string& v) {
        if (!bound.count(v) && std::find(out.begin(), out.end(), v) == out.end())
          out.push_back(v);
      };
      switch (f->kind)
        {
        case gkind::eq:
        case gkind::atom:
          for (auto& v : f->atom.args)
            note(v);
          break;
        case gkind::exists:
        case gkind::forall:
          {
            for (auto& v : f->atom.args)
              if (std::find(f->bound.begin(), f->bound.end(), v)
                  == f->bound.end())
                note(v);
            std::set<std::string> inner = bound;
            inner.insert(f->bound.begin(), f->bound.end());
            collect_free(f->kids[0], inner, out);
            break;
          }
        default:
          for (auto& k : f->kids)
            collect_free(k, bound, out);
        }
    }

    gf_ptr
    quantifier(gkind k, std::vector<std::string> bound, gf_atom guard,
               gf_ptr body, bool implicit)
    {
      if (bound.empty())
        throw error("quantifier without bound variables");
      std::set<std::string> gv(guard.args.begin(), guard.args.end());
      for (auto& v : bound)
        if (!gv.count(v))
          throw error("unguarded quantifier: " + v + " is not in the guard "
                      + guard.pred);
      for (auto& v : free_vars(body))
        if (!gv.count(v))
          throw error("unguarded quantifier: free variable " + v
                      + " of the body is not in the guard " + guard.pred);
      return make(k, std::move(guard), std::move(bound), {std::move(body)},
                  implicit);
    }
  }

  gf_ptr g_top() { return make(gkind::top); }
  gf_ptr g_bot() { return make(gkind::bot); }

  gf_ptr
  g_atom(const std::string& pred, std::vector<std::string> args)
  {
    if (pred == "=")
      {
        if (args.size() != 2)
          throw error("equality takes two arguments");
        return g_eq(args[0], args[1]);
      }
    return make(gkind::atom, {pred, std::move(args)});
  }

  gf_ptr
  g_eq(const std::string& x, const std::string& y)
  {
    return make(gkind::eq, {"=", {x, y}});
  }

  gf_ptr
  g_and(std::vector<gf_ptr> fs)
  {
    if (fs.empty())
      return g_top();
    if (fs.size() == 1)
      return fs[0];
    return make(gkind::conj, {}, {}, std::move(fs));
  }

  gf_ptr
  g_or(std::vector<gf_ptr> fs)
  {
    if (fs.empty())
      return g_bot();
    if (fs.size() == 1)
      return fs[0];
    return make(gkind::disj, {}, {}, std::move(fs));
  }

  gf_ptr g_not(gf_ptr f) { return make(gkind::neg, {}, {}, {std::move(f)}); }

  gf_ptr
  g_imp(gf_ptr l, gf_ptr r)
  {
    return make(gkind::impl, {}, {}, {std::move(l), std::move(r)});
  }

  gf_ptr
  g_exists(std::vector<std::string> bound, gf_atom guard, gf_ptr body)
  {
    return quantifier(gkind::exists, std::move(bound), std::move(guard),
                      std::move(body), false);
  }

  gf_ptr
  g_forall(std::vector<std::string> bound, gf_atom guard, gf_ptr body)
  {
    return quantifier(gkind::forall, std::move(bound), std::move(guard),
                      std::move(body), false);
  }

  std::vector<std::string>
  free_vars(const gf_ptr& f)
  {
    std::set<std::string> bound;
    std::vector<std::string> out;
    collect_free(f, bound, out);
    return out;
  }

  // ---------------------------------------------------------------------
  // Parsing and printing

  namespace
  {
    class gf_parser
    {
    public:
      explicit gf_parser(const std::string& t) : text_(t) {}

      gf_ptr
      parse_all()
      {
        auto f = parse_impl();
        skip_ws();
        if (i_ != text_.size())
          throw parse_error("unexpected input", i_);
        return f;
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

      bool
      peek(char c)
      {
        skip_ws();
        return i_ < text_.size() && text_[i_] == c;
      }

      static bool
      ident_char(char c, bool first)
      {
        return std::isalpha((unsigned char)c) || c == '_'
               || (!first && (std::isdigit((unsigned char)c) || c == '\''
                              || c == '/'));
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

      static bool
      keyword(const std::string& s)
      {
        return s == "top" || s == "bot" || s == "exists" || s == "forall";
      }

      std::string
      variable()
      {
        std::size_t at = i_;
        auto v = ident();
        if (keyword(v))
          throw parse_error("variable expected", at);
        return v;
      }

      std::vector<std::string>
      arg_list()
      {
        std::vector<std::string> args;
        if (eat(")"))
          return args;
        do
          args.push_back(variable());
        while (eat(","));
        if (!eat(")"))
          throw parse_error("')' expected", i_);
        return args;
      }

      gf_atom
      atom_after(const std::string& id)
      {
        if (eat("("))
          return {id, arg_list()};
        if (eat("="))
          return {"=", {id, variable()}};
        throw parse_error("'(' or '=' expected after " + id, i_);
      }

      gf_ptr
      parse_impl()
      {
        auto l = parse_disj();
        if (eat("->"))
          return g_imp(l, parse_impl());
        return l;
      }

      gf_ptr
      parse_disj()
      {
        std::vector<gf_ptr> fs{parse_conj()};
        while (eat("|"))
          fs.push_back(parse_conj());
        return g_or(std::move(fs));
      }

      gf_ptr
      parse_conj()
      {
        std::vector<gf_ptr> fs{parse_unary()};
        while (eat("&"))
          fs.push_back(parse_unary());
        return g_and(std::move(fs));
      }

      gf_ptr
      parse_unary()
      {
        skip_ws();
        if (i_ >= text_.size())
          throw parse_error("unexpected end of input", i_);
        if (eat("!"))
          return g_not(parse_unary());
        if (eat("("))
          {
            auto f = parse_impl();
            if (!eat(")"))
              throw parse_error("')' expected", i_);
            return f;
          }
        std::size_t at = i_;
        auto id = ident();
        if (id == "top")
          return g_top();
        if (id == "bot")
          return g_bot();
        if (id == "exists" || id == "forall")
          {
            std::vector<std::string> bound;
            while (!peek(':') && !peek('.'))
              bound.push_back(variable());
            if (bound.empty())
              throw parse_error("bound variable expected", i_);
            gf_atom guard;
            bool implicit = false;
            if (eat(":"))
              {
                std::size_t gat = i_;
                auto g = ident();
                if (keyword(g))
                  throw parse_error("guard atom expected", gat);
                guard = atom_after(g);
              }
            else
              {
                if (bound.size() != 1)
                  throw parse_error("a guard is required when binding "
                                    "several variables", at);
                guard = {"=", {bound[0], bound[0]}};
                implicit = true;
              }
            if (!eat("."))
              throw parse_error("'.' expected", i_);
            auto body = parse_unary();
            try
              {
                return quantifier(id == "exists" ? gkind::exists
                                                 : gkind::forall,
                                  std::move(bound), std::move(guard),
                                  std::move(body), implicit);
              }
            catch (const parse_error&)
              {
                throw;
              }
            catch (const error& e)
              {
                throw parse_error(e.what(), at);
              }
          }
        auto a = atom_after(id);
        if (a.pred == "=")
          return g_eq(a.args[0], a.args[1]);
        return g_atom(a.pred, a.args);
      }

      const std::string& text_;
      std::size_t i_ = 0;
    };

    int
    level(const gf_ptr& f)
    {
      switch (f->kind)
        {
        case gkind::impl:
          return 0;
        case gkind::disj:
          return 1;
        case gkind::conj:
          return 2;
        default:
          return 3;
        }
    }

    void
    print_atom(std::ostream& os, const gf_atom& a)
    {
      if (a.pred == "=")
        {
          os << a.args[0] << " = " << a.args[1];
          return;
        }
      os << a.pred << '(';
      for (std::size_t i = 0; i < a.args.size(); ++i)
        os << (i ? "," : "") << a.args[i];
      os << ')';
    }

    void
    print(std::ostream& os, const gf_ptr& f, int min_level)
    {
      bool paren = level(f) < min_level;
      if (paren)
        os << '(';
      switch (f->kind)
        {
        case gkind::top: os << "top"; break;
        case gkind::bot: os << "bot"; break;
        case gkind::eq:
        case gkind::atom:
          print_atom(os, f->atom);
          break;
        case gkind::neg:
          os << '!';
          print(os, f->kids[0], 3);
          break;
        case gkind::conj:
        case gkind::disj:
          for (std::size_t i = 0; i < f->kids.size(); ++i)
            {
              if (i)
                os << (f->kind == gkind::conj ? " & " : " | ");
              print(os, f->kids[i], level(f) + 1);
            }
          break;
        case gkind::impl:
          print(os, f->kids[0], 1);
          os << " -> ";
          print(os, f->kids[1], 0);
          break;
        case gkind::exists:
        case gkind::forall:
          os << (f->kind == gkind::exists ? "exists" : "forall");
          for (auto& v : f->bound)
            os << ' ' << v;
          if (!f->implicit_guard)
            {
              os << " : ";
              print_atom(os, f->atom);
            }
          os << " . ";
          print(os, f->kids[0], 3);
          break;
        }
      if (paren)
        os << ')';
    }
  }

  gf_ptr
  parse_gf(const std::string& text)
  {
    return gf_parser(text).parse_all();
  }

  std::string
  to_string(const gf_ptr& f)
  {
    std::ostringstream os;
    print(os, f, 0);
    return os.str();
  }

  // ---------------------------------------------------------------------
  // Structural properties

  int
  gf_depth(const gf_ptr& f)
  {
    int d = 0;
    for (auto& k : f->kids)
      d = std::max(d, gf_depth(k));
    if (f->kind == gkind::exists || f->kind == gkind::forall)
      ++d;
    return d;
  }

  namespace
  {
    void
    add_pred(vocabulary& v, const gf_atom& a)
    {
      if (a.pred == "=")
        return;
      int k = static_cast<int>(a.args.size());
      if (v.has(a.pred) && v.arity.at(a.pred) != k)
        throw error("predicate " + a.pred + " used with two arities");
      v.add(a.pred, k);
    }

    void
    collect_vocab(const gf_ptr& f, vocabulary& v)
    {
      if (f->kind == gkind::atom || f->kind == gkind::exists
          || f->kind == gkind::forall)
        add_pred(v, f->atom);
      for (auto& k : f->kids)
        collect_vocab(k, v);
    }

    bool
    is_exists_fragment(const gf_ptr& f)
    {
      switch (f->kind)
        {
        case gkind::top:
        case gkind::eq:
        case gkind::atom:
          return true;
        case gkind::conj:
        case gkind::disj:
        case gkind::exists:
          for (auto& k : f->kids)
            if (!is_exists_fragment(k))
              return false;
          return true;
        default:
          return false;
        }
    }

    bool
    is_horn(const gf_ptr& f)
    {
      switch (f->kind)
        {
        case gkind::top:
        case gkind::bot:
        case gkind::eq:
        case gkind::atom:
          return true;
        case gkind::conj:
        case gkind::exists:
        case gkind::forall:
          for (auto& k : f->kids)
            if (!is_horn(k))
              return false;
          return true;
        case gkind::impl:
          return is_exists_fragment(f->kids[0]) && is_horn(f->kids[1]);
        default:
          return false;
        }
    }

    bool
    any_implicit(const gf_ptr& f)
    {
      if (f->implicit_guard)
        return true;
      for (auto& k : f->kids)
        if (any_implicit(k))
          return true;
      return false;
    }
  }

  vocabulary
  gf_vocab(const gf_ptr& f)
  {
    vocabulary v;
    collect_vocab(f, v);
    return v;
  }

  bool
  uses_equality(const gf_ptr& f)
  {
    if (f->kind == gkind::eq)
      return true;
    if ((f->kind == gkind::exists || f->kind == gkind::forall)
        && f->atom.pred == "=" && !f->implicit_guard)
      return true;
    for (auto& k : f->kids)
      if (uses_equality(k))
        return true;
    return false;
  }

  gf_report
  classify_gf(const gf_ptr& f)
  {
    gf_report r;
    r.is_gf_exists = is_exists_fragment(f);
    r.is_horn_gf = is_horn(f);
    r.implicit_guards = any_implicit(f);
    return r;
  }

  // ---------------------------------------------------------------------
  // Evaluation

  namespace
  {
    /// A formula with variables resolved to slots and predicates to
    /// indices; independent of any structure.
    struct cnode
    {
      gkind kind;
      int pred = -1; ///< -1: equality
      std::vector<int> args, bound;
      std::vector<cnode> kids;
    };

    struct program
    {
      std::vector<std::string> preds;
      std::vector<int> arities;
      std::map<std::string, int> slots;
      std::vector<std::string> free;
      cnode root;
    };

    class compiler
    {
    public:
      explicit compiler(program& p) : p_(p) {}

      cnode
      compile(const gf_ptr& f)
      {
        cnode c;
        c.kind = f->kind;
        if (f->kind == gkind::atom || f->kind == gkind::exists
            || f->kind == gkind::forall)
          c.pred = pred(f->atom);
        if (f->kind == gkind::atom || f->kind == gkind::eq
            || f->kind == gkind::exists || f->kind == gkind::forall)
          for (auto& v : f->atom.args)
            c.args.push_back(slot(v));
        for (auto& v : f->bound)
          c.bound.push_back(slot(v));
        for (auto& k : f->kids)
          c.kids.push_back(compile(k));
        return c;
      }

    private:
      int
      slot(const std::string& v)
      {
        return p_.slots.emplace(v, static_cast<int>(p_.slots.size()))
          .first->second;
      }

      int
      pred(const gf_atom& a)
      {
        if (a.pred == "=")
          return -1;
        int k = static_cast<int>(a.args.size());
        for (std::size_t i = 0; i < p_.preds.size(); ++i)
          if (p_.preds[i] == a.pred)
            {
              if (p_.arities[i] != k)
                throw error("arity mismatch for " + a.pred);
              return static_cast<int>(i);
            }
        p_.preds.push_back(a.pred);
        p_.arities.push_back(k);
        return static_cast<int>(p_.preds.size()) - 1;
      }

      program& p_;
    };

    /// Compiled form of \a f, reused while the same formula is evaluated
    /// repeatedly.
    std::shared_ptr<const program>
    compiled(const gf_ptr& f)
    {
      thread_local std::weak_ptr<const gf_node> key;
      thread_local std::shared_ptr<const program> last;
      if (last && key.lock() == f)
        return last;
      auto p = std::make_shared<program>();
      p->root = compiler(*p).compile(f);
      p->free = free_vars(f);
      key = f;
      last = p;
      return p;
    }

    class evaluator
    {
    public:
      evaluator(const gf_ptr& f, const structure& s)
        : s_(s), prog_(compiled(f))
      {
        for (std::size_t i = 0; i < prog_->preds.size(); ++i)
          {
            auto& name = prog_->preds[i];
            if (!s.vocab().has(name))
              throw error("unknown predicate " + name);
            if (s.vocab().arity.at(name) != prog_->arities[i])
              throw error("arity mismatch for " + name);
            tuples_.push_back(&s.tuples(name));
          }
      }

      const std::vector<std::string>& free() const { return prog_->free; }

      bool
      eval(const assignment& env)
      {
        std::vector<int> val(prog_->slots.size(), -1);
        for (auto& [v, a] : env)
          {
            auto it = prog_->slots.find(v);
            if (it != prog_->slots.end())
              val[it->second] = a;
          }
        return eval(prog_->root, val);
      }

    private:
      static int
      value(const std::vector<int>& val, int v)
      {
        if (val[v] < 0)
          throw error("a variable is not assigned");
        return val[v];
      }

      bool
      eval(const cnode& f, std::vector<int>& val)
      {
        switch (f.kind)
          {
          case gkind::top: return true;
          case gkind::bot: return false;
          case gkind::eq:
            return value(val, f.args[0]) == value(val, f.args[1]);
          case gkind::atom:
            {
              tuple_t t;
              t.reserve(f.args.size());
              for (int v : f.args)
                t.push_back(value(val, v));
              return tuples_[f.pred]->count(t) > 0;
            }
          case gkind::neg: return !eval(f.kids[0], val);
          case gkind::conj:
            for (auto& k : f.kids)
              if (!eval(k, val))
                return false;
            return true;
          case gkind::disj:
            for (auto& k : f.kids)
              if (eval(k, val))
                return true;
            return false;
          case gkind::impl:
            return !eval(f.kids[0], val) || eval(f.kids[1], val);
          case gkind::exists:
          case gkind::forall:
            {
              bool want = f.kind == gkind::exists;
              bool found = false;
              for_each_guard_match(f, val, [&] {
                found = eval(f.kids[0], val) == want;
                return !found;
              });
              return want ? found : !found;
            }
          }
        return false;
      }

      /// Binds the quantified slots to every match of the guard in turn
      /// and calls \a f, stopping when it returns false; restores the
      /// previous values afterwards.
      template <class F>
      void
      for_each_guard_match(const cnode& q, std::vector<int>& val, F&& f)
      {
        int saved[4];
        std::vector<int> more;
        for (std::size_t i = 0; i < q.bound.size(); ++i)
          if (i < 4)
            saved[i] = val[q.bound[i]];
          else
            more.push_back(val[q.bound[i]]);
        auto match = [&](const int* t) {
          for (int v : q.bound)
            val[v] = -1;
          for (std::size_t i = 0; i < q.args.size(); ++i)
            {
              int v = q.args[i];
              if (val[v] < 0)
                val[v] = t[i];
              else if (val[v] != t[i])
                return true;
            }
          return f();
        };
        bool go = true;
        if (q.pred < 0)
          {
            for (std::size_t a = 0; go && a < s_.size(); ++a)
              {
                int t[2] = {static_cast<int>(a), static_cast<int>(a)};
                go = match(t);
              }
          }
        else
          for (auto it = tuples_[q.pred]->begin();
               go && it != tuples_[q.pred]->end(); ++it)
            go = match(it->data());
        for (std::size_t i = 0; i < q.bound.size(); ++i)
          val[q.bound[i]] = i < 4 ? saved[i] : more[i - 4];
      }

      const structure& s_;
      std::shared_ptr<const program> prog_;
      std::vector<const std::set<tuple_t>*> tuples_;
    };
  }

  bool
  eval_gf(const gf_ptr& f, const structure& s, const assignment& env)
  {
    evaluator ev(f, s);
    for (auto& v : ev.free())
      if (!env.count(v))
        throw error("free variable " + v + " is not assigned");
    return ev.eval(env);
  }

  std::vector<tuple_t>
  gf_answers(const gf_ptr& f, const structure& s, std::vector<std::string> vars)
  {
    if (vars.empty())
      vars = free_vars(f);
    for (auto& v : free_vars(f))
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        throw error("free variable " + v + " is not an answer variable");
    std::vector<tuple_t> out;
    evaluator ev(f, s);
    tuple_t t(vars.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == vars.size())
        {
          assignment env;
          for (std::size_t j = 0; j < vars.size(); ++j)
            {
              auto it = env.find(vars[j]);
              if (it != env.end() && it->second != t[j])
                return;
              env[vars[j]] = t[j];
            }
          if (ev.eval(env))
            out.push_back(t);
          return;
        }
      for (std::size_t a = 0; a < s.size(); ++a)
        {
          t[i] = static_cast<int>(a);
          rec(i + 1);
        }
    };
    if (!vars.empty() && s.size() == 0)
      return out;
    rec(0);
    return out;
  }

  // ---------------------------------------------------------------------
  // Standard translation

  namespace
  {
    gf_ptr
    translate(const concept_ptr& c, const std::string& x, const std::string& y)
    {
      switch (c->kind)
        {
        case ckind::top: return g_top();
        case ckind::bot: return g_bot();
        case ckind::name: return g_atom(c->sym, {x});
        case ckind::neg: return g_not(translate(c->kids[0], x, y));
        case ckind::conj:
        case ckind::disj:
          {
            std::vector<gf_ptr> fs;
            for (auto& k : c->kids)
              fs.push_back(translate(k, x, y));
            return c->kind == ckind::conj ? g_and(fs) : g_or(fs);
          }
        case ckind::impl:
          return g_imp(translate(c->kids[0], x, y), translate(c->kids[1], x, y));
        case ckind::exists:
          return g_exists({y}, {c->sym, {x, y}}, translate(c->kids[0], y, x));
        case ckind::forall:
          return g_forall({y}, {c->sym, {x, y}}, translate(c->kids[0], y, x));
        case ckind::nabla:
          return g_and({g_exists({y}, {c->sym, {x, y}}, g_top()),
                        g_forall({y}, {c->sym, {x, y}},
                                 translate(c->kids[0], y, x))});
        }
      return g_top();
    }
  }

  gf_ptr
  std_translation(const concept_ptr& c, const std::string& var)
  {
    return translate(c, var, var == "y" ? "x" : "y");
  }

  gf_ptr
  std_translation(const tbox& t)
  {
    std::vector<gf_ptr> parts;
    for (auto& inc : t)
      parts.push_back(make(gkind::forall, {"=", {"x", "x"}}, {"x"},
                           {g_imp(std_translation(inc.lhs),
                                  std_translation(inc.rhs))},
                           true));
    return g_and(parts);
  }

  // ---------------------------------------------------------------------
  // Guarded tuples

  std::vector<tuple_t>
  guarded_sets(const structure& s)
  {
    std::set<tuple_t> sets;
    for (std::size_t a = 0; a < s.size(); ++a)
      sets.insert({static_cast<int>(a)});
    for (auto& [p, k] : s.vocab().arity)
      for (auto& t : s.tuples(p))
        {
          tuple_t u = t;
          std::sort(u.begin(), u.end());
          u.erase(std::unique(u.begin(), u.end()), u.end());
          if (!u.empty())
            sets.insert(u);
        }
    return {sets.begin(), sets.end()};
  }

  bool
  is_guarded(const structure& s, const tuple_t& t)
  {
    tuple_t u = t;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() == 1)
      return u[0] >= 0 && u[0] < static_cast<int>(s.size());
    if (u.empty())
      return false;
    for (auto& [p, k] : s.vocab().arity)
      for (auto& f : s.tuples(p))
        {
          tuple_t v = f;
          std::sort(v.begin(), v.end());
          v.erase(std::unique(v.begin(), v.end()), v.end());
          if (v == u)
            return true;
        }
    return false;
  }

  std::vector<tuple_t>
  guarded_tuples(const structure& s, int max_len)
  {
    if (max_len < 0)
      max_len = std::max(1, s.vocab().max_arity());
    std::set<tuple_t> out;
    for (auto& g : guarded_sets(s))
      {
        int n = static_cast<int>(g.size());
        for (int len = n; len <= max_len; ++len)
          {
            // Every tuple of this length over g using all of its members.
            tuple_t idx(len, 0);
            for (;;)
              {
                std::vector<bool> used(n, false);
                for (int i : idx)
                  used[i] = true;
                if (std::all_of(used.begin(), used.end(), [](bool b) { return b; }))
                  {
                    tuple_t t;
                    for (int i : idx)
                      t.push_back(g[i]);
                    out.insert(t);
                  }
                int i = len - 1;
                while (i >= 0 && ++idx[i] == n)
                  idx[i--] = 0;
                if (i < 0)
                  break;
              }
          }
      }
    return {out.begin(), out.end()};
  }
}
