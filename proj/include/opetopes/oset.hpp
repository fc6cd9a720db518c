#pragma once

// Finite opetopic sets, given by cells and their generating faces.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "detail/lexer.hpp"
#include "error.hpp"
#include "ocat.hpp"
#include "opetope.hpp"

namespace opetopes {

  struct OCell {
    std::string                 name;
    Opetope                     shape;
    std::map<Face, std::string> faces;

    friend bool operator==(OCell const&, OCell const&) = default;
  };

  class OpetopicSet {
   public:
    // Cell names are unique across shapes.
    void add(OCell c) {
      if (_cells.contains(c.name)) {
        throw error("cell " + detail::quote_name(c.name) + " is defined twice");
      }
      _by_shape[c.shape].insert(c.name);
      auto name = c.name;
      _cells.emplace(std::move(name), std::move(c));
    }

    bool has(std::string const& name) const {
      return _cells.contains(name);
    }

    OCell const& at(std::string const& name) const {
      auto it = _cells.find(name);
      if (it == _cells.end()) {
        throw address_not_found("no cell " + detail::quote_name(name));
      }
      return it->second;
    }

    std::string const& face(std::string const& name, Face const& f) const {
      auto const& c  = at(name);
      auto        it = c.faces.find(f);
      if (it == c.faces.end()) {
        throw address_not_found("cell " + detail::quote_name(name)
                                + " has no face " + to_string(f, c.shape.dim()));
      }
      return it->second;
    }

    // Cells of shape ω, sorted by name.
    std::vector<std::string> cells_of(Opetope const& w) const {
      auto it = _by_shape.find(w);
      if (it == _by_shape.end()) {
        return {};
      }
      return {it->second.begin(), it->second.end()};
    }

    // Shapes with at least one cell, increasing.
    std::vector<Opetope> support() const {
      std::vector<Opetope> out;
      for (auto const& [w, names] : _by_shape) {
        out.push_back(w);
      }
      return out;
    }

    std::map<std::string, OCell> const& all() const noexcept {
      return _cells;
    }

    std::size_t size() const noexcept {
      return _cells.size();
    }

    std::size_t max_dim() const {
      std::size_t d = 0;
      for (auto const& [w, names] : _by_shape) {
        d = std::max(d, w.dim());
      }
      return d;
    }

    friend bool operator==(OpetopicSet const& a, OpetopicSet const& b) {
      return a._cells == b._cells;
    }

   private:
    std::map<std::string, OCell>                _cells;
    std::map<Opetope, std::set<std::string>>    _by_shape;
  };

  // Acts on x by the word, outer face first.
  inline std::string apply_word(OpetopicSet const& X, Word const& w, std::string const& x) {
    std::string cur = x;
    for (auto const& f : w) {
      cur = X.face(cur, f);
    }
    return cur;
  }

  inline std::string apply_morphism(OpetopicSet const&   X,
                                    MorphismClass const& f,
                                    std::string const&   x) {
    if (!(X.at(x).shape == f.codomain)) {
      throw address_not_found("cell " + detail::quote_name(x) + " has shape "
                              + X.at(x).shape.str() + ", not "
                              + f.codomain.str());
    }
    return apply_word(X, f.word, x);
  }

  inline Report validate(OpetopicSet const& X) {
    Report r;
    for (auto const& [name, c] : X.all()) {
      ++r.checked;
      std::string who   = "cell " + detail::quote_name(name);
      auto        faces = faces_of(c.shape);
      bool        ok    = true;
      for (auto const& f : faces) {
        auto it = c.faces.find(f);
        if (it == c.faces.end()) {
          r.fail(who + ": missing face " + to_string(f, c.shape.dim()));
          ok = false;
          continue;
        }
        if (!X.has(it->second)) {
          r.fail(who + ": face " + to_string(f, c.shape.dim()) + " is unknown cell "
                 + detail::quote_name(it->second));
          ok = false;
          continue;
        }
        auto want = face_domain(c.shape, f);
        if (!(X.at(it->second).shape == want)) {
          r.fail(who + ": face " + to_string(f, c.shape.dim()) + " has shape "
                 + X.at(it->second).shape.str() + ", expected " + want.str());
          ok = false;
        }
      }
      for (auto const& [f, y] : c.faces) {
        if (std::find(faces.begin(), faces.end(), f) == faces.end()) {
          r.fail(who + ": " + to_string(f, c.shape.dim()) + " is not a face of " + c.shape.str());
          ok = false;
        }
      }
      if (!ok) {
        continue;
      }
      for (auto const& rel : relation_instances(c.shape)) {
        std::string a, b;
        try {
          a = apply_word(X, rel.lhs, name);
          b = apply_word(X, rel.rhs, name);
        } catch (error const&) {
          // Reported on the offending face cell.
          continue;
        }
        if (a != b) {
          r.fail(who + ": " + family_name(rel.family) + " square "
                 + to_string(rel.lhs, c.shape.dim()) + " = " + to_string(rel.rhs, c.shape.dim())
                 + " fails (" + detail::quote_name(a) + " vs "
                 + detail::quote_name(b) + ")");
        }
      }
    }
    return r;
  }

  // The representable on ω, truncated to dimensions <= max_dim. Cells are
  // named by the least words of their classes.
  inline OpetopicSet yoneda(Opetope const& w, std::size_t max_dim) {
    Slice       s(w);
    OpetopicSet X;
    for (auto const& c : s.classes()) {
      if (c.domain.dim() > max_dim) {
        continue;
      }
      OCell cell{to_string(c.word, w.dim()), c.domain, {}};
      for (auto const& f : faces_of(c.domain)) {
        Word longer = c.word;
        longer.push_back(f);
        cell.faces.emplace(f, to_string(s.canonical(longer), w.dim()));
      }
      X.add(std::move(cell));
    }
    return X;
  }

}  // namespace opetopes
