#pragma once

// Text formats for opetopes, polygraphs and opetopic sets, and the named
// environment a file defines.
//
//   opetope NAME = EXPR
//   polygraph NAME { gen ... }
//   oset NAME { cell ... }
//
// Gen and cell lines, and bare opetope expressions, may also appear at top
// level; they define anonymous values.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "address.hpp"
#include "detail/lexer.hpp"
#include "error.hpp"
#include "ocat.hpp"
#include "opetope.hpp"
#include "oset.hpp"
#include "polygraph.hpp"

namespace opetopes {

  using Value = std::variant<Opetope, MtoPolygraph, OpetopicSet>;

  inline char const* kind_name(Value const& v) {
    switch (v.index()) {
      case 0:
        return "opetope";
      case 1:
        return "polygraph";
      default:
        return "oset";
    }
  }

  struct Definition {
    std::string name;
    Value       value;
    bool        anonymous = false;
    std::size_t line      = 0;
  };

  class Environment {
   public:
    void define(Definition d) {
      if (_index.contains(d.name)) {
        throw error("'" + d.name + "' is defined twice");
      }
      _index.emplace(d.name, _defs.size());
      _defs.push_back(std::move(d));
    }

    bool has(std::string const& name) const {
      return _index.contains(name);
    }

    Definition const& at(std::string const& name) const {
      auto it = _index.find(name);
      if (it == _index.end()) {
        throw error("nothing is named " + detail::quote_name(name));
      }
      return _defs[it->second];
    }

    Definition& at(std::string const& name) {
      auto it = _index.find(name);
      if (it == _index.end()) {
        throw error("nothing is named " + detail::quote_name(name));
      }
      return _defs[it->second];
    }

    Definition const& last() const {
      if (_defs.empty()) {
        throw error("the input defines nothing");
      }
      return _defs.back();
    }

    std::vector<Definition> const& definitions() const noexcept {
      return _defs;
    }

   private:
    std::vector<Definition>            _defs;
    std::map<std::string, std::size_t> _index;
  };

  ////////////////////////////////////////////////////////////////////////
  // Parsing
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline bool at_name(lexer const& lx) {
      return lx.at(tok::ident) || lx.at(tok::quoted);
    }

    inline std::string parse_name(lexer& lx) {
      if (!at_name(lx)) {
        lx.fail("expected a name");
      }
      return lx.next().text;
    }

    inline std::size_t parse_natural(lexer& lx) {
      auto const& t = lx.peek();
      if (t.kind != tok::ident || t.text.empty()
          || !std::all_of(t.text.begin(), t.text.end(),
                          [](char c) { return c >= '0' && c <= '9'; })) {
        lx.fail("expected a number");
      }
      return std::stoul(lx.next().text);
    }

    // `{ address <- X, ... }` with X read by `item`; rejects repeated
    // addresses, naming both lines.
    template <typename T, typename F>
    std::map<Address, T> parse_bindings(lexer& lx, F&& item) {
      lx.expect(tok::lbrace);
      std::map<Address, T>           out;
      std::map<Address, std::size_t> lines;
      while (true) {
        auto    at = lx.peek();
        Address p  = parse_address(lx);
        lx.expect(tok::larrow);
        T value = item(lx);
        if (auto it = lines.find(p); it != lines.end()) {
          throw parse_error(at.line, at.column,
                            "address " + to_string(p) + " is bound twice (lines "
                                + std::to_string(it->second) + " and "
                                + std::to_string(at.line) + ")");
        }
        lines.emplace(p, at.line);
        out.emplace(std::move(p), std::move(value));
        if (lx.at(tok::comma)) {
          lx.next();
          continue;
        }
        lx.expect(tok::rbrace);
        return out;
      }
    }

    class parser {
     public:
      explicit parser(std::string_view src, Environment* env = nullptr)
          : _lx(src), _env(env) {}

      lexer& lx() {
        return _lx;
      }

      Opetope opetope() {
        auto at = _lx.peek();
        if (_lx.at_word("point")) {
          _lx.next();
          return Opetope::point();
        }
        if (_lx.at_word("arrow")) {
          _lx.next();
          return Opetope::arrow();
        }
        if (_lx.at(tok::lshell)) {
          _lx.next();
          Opetope shell = opetope();
          _lx.expect(tok::rshell);
          return Opetope::degenerate(shell);
        }
        if (_lx.at(tok::lbrace)) {
          auto nodes = parse_bindings<Opetope>(_lx, [this](lexer&) { return opetope(); });
          if (!nodes.contains(Address())) {
            throw parse_error(at.line, at.column, "opetope has no node at []");
          }
          try {
            return Opetope::from_nodes(std::move(nodes));
          } catch (parse_error const&) {
            throw;
          } catch (error const& e) {
            throw parse_error(at.line, at.column, e.what());
          }
        }
        if (at_name(_lx)) {
          std::string name = _lx.next().text;
          if (_env == nullptr || !_env->has(name)
              || !std::holds_alternative<Opetope>(_env->at(name).value)) {
            throw parse_error(at.line, at.column,
                              "no opetope named " + quote_name(name));
          }
          return std::get<Opetope>(_env->at(name).value);
        }
        _lx.fail("expected an opetope");
      }

      Tree<std::string> cell_tree() {
        auto at = _lx.peek();
        if (_lx.at_word("id")) {
          _lx.next();
          _lx.expect(tok::lparen);
          std::string a = parse_name(_lx);
          _lx.expect(tok::rparen);
          return Tree<std::string>::unit(a);
        }
        auto nodes = parse_bindings<std::string>(_lx, parse_name);
        if (!nodes.contains(Address())) {
          throw parse_error(at.line, at.column, "tree has no node at []");
        }
        return Tree<std::string>(std::move(nodes));
      }

      // After `gen`.
      Generator generator() {
        std::size_t dim = parse_natural(_lx);
        Generator   g;
        g.dim  = dim;
        g.name = parse_name(_lx);
        if (dim == 0) {
          return g;
        }
        _lx.expect(tok::colon);
        if (dim == 1) {
          g.source = parse_name(_lx);
        } else {
          g.tree = cell_tree();
        }
        _lx.expect(tok::arrow);
        g.target = parse_name(_lx);
        return g;
      }

      // After `cell`.
      OCell cell() {
        OCell c;
        c.name = parse_name(_lx);
        _lx.expect(tok::colon);
        c.shape = opetope();
        if (!_lx.at(tok::lbrace)) {
          return c;
        }
        _lx.next();
        while (!_lx.at(tok::rbrace)) {
          auto at = _lx.peek();
          Face f  = parse_face(_lx);
          _lx.expect(tok::larrow);
          std::string y = parse_name(_lx);
          if (!c.faces.emplace(f, y).second) {
            throw parse_error(at.line, at.column,
                              "face " + to_string(f, c.shape.dim()) + " is given twice");
          }
          if (!_lx.at(tok::comma)) {
            break;
          }
          _lx.next();
        }
        _lx.expect(tok::rbrace);
        return c;
      }

      template <typename Add>
      void block(Add&& add) {
        _lx.expect(tok::lbrace);
        while (!_lx.at(tok::rbrace)) {
          add();
        }
        _lx.next();
      }

      void add_gen(MtoPolygraph& P) {
        auto at = _lx.peek();
        _lx.expect_word("gen");
        try {
          P.add(generator());
        } catch (parse_error const&) {
          throw;
        } catch (error const& e) {
          throw parse_error(at.line, at.column, e.what());
        }
      }

      void add_cell(OpetopicSet& X) {
        auto at = _lx.peek();
        _lx.expect_word("cell");
        try {
          X.add(cell());
        } catch (parse_error const&) {
          throw;
        } catch (error const& e) {
          throw parse_error(at.line, at.column, e.what());
        }
      }

      Environment file() {
        Environment env;
        _env = &env;
        std::size_t anon = 0;
        auto define = [&](token const& at, Definition d) {
          if (env.has(d.name)) {
            throw parse_error(at.line, at.column,
                              quote_name(d.name) + " is already defined on line "
                                  + std::to_string(env.at(d.name).line));
          }
          d.line = at.line;
          env.define(std::move(d));
        };
        // Bare gen/cell lines extend one anonymous value each.
        auto bare = [&]<typename T>(token const& at, std::string const& name) -> T& {
          if (!env.has(name)) {
            define(at, {name, T{}, true});
          }
          auto& v = env.at(name).value;
          if (!std::holds_alternative<T>(v)) {
            throw parse_error(at.line, at.column, "mixed top-level definitions");
          }
          return std::get<T>(v);
        };
        while (!_lx.at(tok::end)) {
          auto at = _lx.peek();
          if (_lx.at_word("opetope")) {
            _lx.next();
            std::string name = parse_name(_lx);
            _lx.expect(tok::equals);
            define(at, {name, opetope()});
          } else if (_lx.at_word("polygraph")) {
            _lx.next();
            std::string  name = parse_name(_lx);
            MtoPolygraph P;
            block([&] { add_gen(P); });
            define(at, {name, std::move(P)});
          } else if (_lx.at_word("oset")) {
            _lx.next();
            std::string name = parse_name(_lx);
            OpetopicSet X;
            block([&] { add_cell(X); });
            define(at, {name, std::move(X)});
          } else if (_lx.at_word("gen")) {
            add_gen(bare.template operator()<MtoPolygraph>(at, "_polygraph"));
          } else if (_lx.at_word("cell")) {
            add_cell(bare.template operator()<OpetopicSet>(at, "_oset"));
          } else {
            Opetope o = opetope();
            define(at, {"_" + std::to_string(++anon), o, true});
          }
        }
        return env;
      }

     private:
      lexer        _lx;
      Environment* _env;
    };

    inline void expect_end(lexer& lx) {
      if (!lx.at(tok::end)) {
        lx.fail("expected end of input");
      }
    }
  }  // namespace detail

  // An opetope expression; names refer to opetopes in `env`, if given.
  inline Opetope parse_opetope(std::string_view text, Environment const* env = nullptr) {
    detail::parser p(text, const_cast<Environment*>(env));
    Opetope        o = p.opetope();
    detail::expect_end(p.lx());
    return o;
  }

  inline Tree<std::string> parse_cell_tree(std::string_view text) {
    detail::parser p(text);
    auto           t = p.cell_tree();
    detail::expect_end(p.lx());
    return t;
  }

  inline Environment parse_file(std::string_view text) {
    return detail::parser(text).file();
  }

  ////////////////////////////////////////////////////////////////////////
  // Printing
  ////////////////////////////////////////////////////////////////////////

  inline std::string print_generator(Generator const& g) {
    std::string out = "gen " + std::to_string(g.dim) + " " + detail::quote_name(g.name);
    if (g.dim == 1) {
      out += " : " + detail::quote_name(g.source) + " -> " + detail::quote_name(g.target);
    } else if (g.dim >= 2) {
      out += " : " + to_string(*g.tree, g.dim - 1) + " -> " + detail::quote_name(g.target);
    }
    return out;
  }

  inline std::string print_cell(OCell const& c) {
    std::string out = "cell " + detail::quote_name(c.name) + " : " + c.shape.str();
    if (c.faces.empty()) {
      return out;
    }
    out += " {";
    bool first = true;
    for (auto const& [f, y] : c.faces) {
      out += first ? "" : ", ";
      first = false;
      out += to_string(f, c.shape.dim()) + " <- " + detail::quote_name(y);
    }
    return out + "}";
  }

  // Generator lines, by dimension then name.
  inline std::vector<std::string> generator_lines(MtoPolygraph const& P) {
    std::vector<std::string> out;
    for (std::size_t n = 0; n < P.dims(); ++n) {
      for (auto const& x : P.generators(n)) {
        out.push_back(print_generator(P.at(x)));
      }
    }
    return out;
  }

  // Cell lines, by shape dimension then name.
  inline std::vector<std::string> cell_lines(OpetopicSet const& X) {
    std::vector<OCell const*> cells;
    for (auto const& [name, c] : X.all()) {
      cells.push_back(&c);
    }
    std::stable_sort(cells.begin(), cells.end(), [](auto a, auto b) {
      return a->shape.dim() < b->shape.dim();
    });
    std::vector<std::string> out;
    for (auto const* c : cells) {
      out.push_back(print_cell(*c));
    }
    return out;
  }

  inline std::string print_polygraph(MtoPolygraph const& P) {
    std::string out;
    for (auto const& l : generator_lines(P)) {
      out += l + "\n";
    }
    return out;
  }

  inline std::string print_oset(OpetopicSet const& X) {
    std::string out;
    for (auto const& l : cell_lines(X)) {
      out += l + "\n";
    }
    return out;
  }

  inline std::string print_definition(Definition const& d) {
    auto block = [&](char const* kw, std::vector<std::string> const& lines) {
      if (d.anonymous) {
        std::string out;
        for (auto const& l : lines) {
          out += l + "\n";
        }
        return out;
      }
      std::string out = std::string(kw) + " " + detail::quote_name(d.name) + " {\n";
      for (auto const& l : lines) {
        out += "  " + l + "\n";
      }
      return out + "}\n";
    };
    return std::visit(
        [&](auto const& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Opetope>) {
            if (d.anonymous) {
              return v.str() + "\n";
            }
            return "opetope " + detail::quote_name(d.name) + " = " + v.str() + "\n";
          } else if constexpr (std::is_same_v<T, MtoPolygraph>) {
            return block("polygraph", generator_lines(v));
          } else {
            return block("oset", cell_lines(v));
          }
        },
        d.value);
  }

  // Canonical text of a whole environment, definitions separated by a
  // blank line.
  inline std::string print_environment(Environment const& env) {
    std::string out;
    for (auto const& d : env.definitions()) {
      if (!out.empty()) {
        out += "\n";
      }
      out += print_definition(d);
    }
    return out;
  }

}  // namespace opetopes
