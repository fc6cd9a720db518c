#pragma once

// Realizations of opetopes and opetopic sets as many-to-one polygraphs, the
// terminal polygraph, shapes of generators, and the nerve.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "ocat.hpp"
#include "opetope.hpp"
#include "oset.hpp"
#include "polygraph.hpp"
#include "sigtree.hpp"

namespace opetopes {

  // Generators of a realization are named by least words; the top one is
  // the identity.
  inline std::string const top_generator = "id";

  namespace detail {
    inline void realize_into(MtoPolygraph& P, Slice const& s, MorphismClass const& c) {
      auto name = [&](Word w, std::vector<Face> const& more) {
        w.insert(w.end(), more.begin(), more.end());
        return to_string(s.canonical(w), s.codomain().dim());
      };
      auto const& phi = c.domain;
      auto const  t   = Face::target();
      switch (phi.dim()) {
        case 0:
          P.add_point(to_string(c.word, s.codomain().dim()));
          return;
        case 1:
          P.add_arrow(to_string(c.word, s.codomain().dim()), name(c.word, {Face::source(Address())}),
                      name(c.word, {t}));
          return;
        default:
          break;
      }
      Tree<std::string> tree = Tree<std::string>::unit("");
      if (phi.is_degenerate()) {
        tree = Tree<std::string>::unit(name(c.word, {t, t}));
      } else {
        std::map<Address, std::string> nodes;
        for (auto const& [p, op] : phi.tree().nodes()) {
          nodes.emplace(p, name(c.word, {Face::source(p)}));
        }
        tree = Tree<std::string>(std::move(nodes));
      }
      P.add_cell(to_string(c.word, s.codomain().dim()), phi.dim(), std::move(tree), name(c.word, {t}));
    }
  }  // namespace detail

  // One generator per morphism into ω.
  inline MtoPolygraph realize_opetope(Opetope const& w) {
    Slice        s(w);
    MtoPolygraph P;
    for (auto const& c : s.classes()) {
      detail::realize_into(P, s, c);
    }
    return P;
  }

  // The realization without its top generator.
  inline MtoPolygraph boundary(Opetope const& w) {
    Slice        s(w);
    MtoPolygraph P;
    for (auto const& c : s.classes()) {
      if (!c.word.empty()) {
        detail::realize_into(P, s, c);
      }
    }
    return P;
  }

  // Glues the realizations of the proper faces of ω along the face maps
  // between them and compares the quotient with boundary(ω).
  inline Report boundary_colimit_check(Opetope const& w) {
    Report r;
    Slice  s(w);

    std::vector<MorphismClass> objects;
    for (auto const& c : s.classes()) {
      if (!c.word.empty()) {
        objects.push_back(c);
      }
    }
    std::map<Word, std::size_t> object_index;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      object_index.emplace(objects[i].word, i);
    }

    // Vertices of the gluing: (object, generator of its realization).
    std::vector<Slice>                                     slices;
    std::vector<std::pair<std::size_t, Word>>              verts;
    std::map<std::pair<std::size_t, Word>, std::size_t>    vindex;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      slices.emplace_back(objects[i].domain);
      for (auto const& g : slices.back().classes()) {
        vindex.emplace(std::make_pair(i, g.word), verts.size());
        verts.emplace_back(i, g.word);
      }
    }
    std::vector<std::size_t> parent(verts.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
      return parent[i] == i ? i : parent[i] = find(parent[i]);
    };

    // A face f of object A gives the object A.f and a map of realizations
    // sending the generator v of |dom f| to f.v in |dom A|.
    for (std::size_t i = 0; i < objects.size(); ++i) {
      for (auto const& f : faces_of(objects[i].domain)) {
        Word        longer = objects[i].word;
        longer.push_back(f);
        std::size_t j = object_index.at(s.canonical(longer));
        for (auto const& g : slices[j].classes()) {
          Word image{f};
          image.insert(image.end(), g.word.begin(), g.word.end());
          auto a = find(vindex.at({j, g.word}));
          auto b = find(vindex.at({i, slices[i].canonical(image)}));
          parent[a] = b;
        }
      }
    }

    // Each glued class must go to one boundary generator, and the classes
    // must cover every boundary generator exactly once.
    std::map<std::size_t, std::set<Word>> images;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      auto [i, word] = verts[v];
      Word full      = objects[i].word;
      full.insert(full.end(), word.begin(), word.end());
      images[find(v)].insert(s.canonical(full));
    }
    std::set<Word> hit;
    for (auto const& [root, ws] : images) {
      ++r.checked;
      if (ws.size() != 1) {
        r.fail("a glued generator of the boundary of " + w.str()
               + " has several images");
        continue;
      }
      if (!hit.insert(*ws.begin()).second) {
        r.fail("boundary generator " + to_string(*ws.begin(), w.dim()) + " of " + w.str()
               + " is hit by two glued generators");
      }
    }
    auto expected = boundary(w);
    if (hit.size() != expected.size()) {
      r.fail("gluing gives " + std::to_string(hit.size())
             + " generators, the boundary of " + w.str() + " has "
             + std::to_string(expected.size()));
    }
    for (auto const& word : hit) {
      if (!expected.has(to_string(word, w.dim()))) {
        r.fail("glued generator " + to_string(word, w.dim()) + " is not in the boundary");
      }
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Shapes
  ////////////////////////////////////////////////////////////////////////

  struct ShapeResult {
    Opetope           shape;
    PolygraphMorphism induced;  // realize_opetope(shape) -> P
  };

  // Shapes of generators, memoised per polygraph.
  class Shaper {
   public:
    explicit Shaper(MtoPolygraph const& P) : _P(&P) {}

    Opetope const& shape(std::string const& x) {
      auto it = _memo.find(x);
      if (it != _memo.end()) {
        return it->second;
      }
      auto const& g = _P->at(x);
      Opetope     o;
      if (g.dim == 0) {
        o = Opetope::point();
      } else if (g.dim == 1) {
        o = Opetope::arrow();
      } else if (g.tree->is_unit()) {
        o = Opetope::degenerate(shape(g.tree->unit_color()));
      } else {
        std::map<Address, Opetope> nodes;
        for (auto const& [p, y] : g.tree->nodes()) {
          nodes.emplace(p, shape(y));
        }
        o = Opetope::from_nodes(std::move(nodes));
      }
      return _memo.emplace(x, o).first->second;
    }

    // Follows a word of faces starting at x.
    std::string const& face(std::string const& x, Word const& w) const {
      std::string const* cur = &x;
      for (auto const& f : w) {
        auto const& g = _P->at(*cur);
        if (f.is_target()) {
          cur = &g.target;
        } else if (g.dim == 1) {
          cur = &g.source;
        } else {
          cur = &g.tree->at(f.address);
        }
      }
      return *cur;
    }

    ShapeResult result(std::string const& x) {
      ShapeResult r{shape(x), {}};
      Slice       s(r.shape);
      for (auto const& c : s.classes()) {
        r.induced.map.emplace(to_string(c.word, r.shape.dim()), face(x, c.word));
      }
      return r;
    }

   private:
    MtoPolygraph const*            _P;
    std::map<std::string, Opetope> _memo;
  };

  inline ShapeResult shape(MtoPolygraph const& P, std::string const& x) {
    return Shaper(P).result(x);
  }

  inline std::vector<std::string> cells_of_shape(MtoPolygraph const& P, Opetope const& w) {
    Shaper                   sh(P);
    std::vector<std::string> out;
    for (auto const& name : P.generators(w.dim())) {
      if (sh.shape(name) == w) {
        out.push_back(name);
      }
    }
    return out;
  }

  // Every morphism realize_opetope(ω) -> P, by exhaustive search, generators
  // assigned in increasing dimension.
  inline std::vector<PolygraphMorphism> morphisms_from_realization(Opetope const&      w,
                                                                   MtoPolygraph const& P) {
    auto R = realize_opetope(w);
    std::vector<std::string> order;
    for (std::size_t n = 0; n < R.dims(); ++n) {
      for (auto const& x : R.generators(n)) {
        order.push_back(x);
      }
    }
    std::vector<PolygraphMorphism> out;
    PolygraphMorphism              f;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == order.size()) {
        out.push_back(f);
        return;
      }
      auto const& g = R.at(order[i]);
      for (auto const& y : P.generators(g.dim)) {
        auto const& h = P.at(y);
        if (g.dim >= 1 && f(g.target) != h.target) {
          continue;
        }
        if (g.dim == 1 && f(g.source) != h.source) {
          continue;
        }
        if (g.dim >= 2 && !(relabel(*g.tree, f) == *h.tree)) {
          continue;
        }
        f.map[order[i]] = y;
        go(i + 1);
        f.map.erase(order[i]);
      }
    };
    go(0);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Terminal polygraph
  ////////////////////////////////////////////////////////////////////////

  inline std::string terminal_name(std::size_t dim, std::size_t index) {
    return "o" + std::to_string(dim) + "_" + std::to_string(index);
  }

  // An (n+1)-generator is a pair (u, v) with u an n-cell of at most
  // budgets[n+1] nodes and v the n-generator parallel to it, when there is
  // one within the truncation. Dimension is budgets.size() - 1.
  inline MtoPolygraph terminal_polygraph(std::vector<std::size_t> const& budgets,
                                         std::uint64_t cap = default_enumeration_cap) {
    std::size_t  max_dim = budgets.empty() ? 0 : budgets.size() - 1;
    MtoPolygraph P;
    P.add_point(terminal_name(0, 0));
    if (max_dim == 0) {
      return P;
    }
    P.add_arrow(terminal_name(1, 0), terminal_name(0, 0), terminal_name(0, 0));
    for (std::size_t n = 1; n < max_dim; ++n) {
      // (n-generators keyed by source and target)
      std::map<std::pair<std::string, std::string>, std::string> by_boundary;
      for (auto const& x : P.generators(n)) {
        auto const& g = P.at(x);
        std::string src = n == 1 ? g.source : to_string(*g.tree, n - 1);
        by_boundary.emplace(std::make_pair(src, g.target), x);
      }
      auto sig = nabla(P, n);
      std::vector<Tree<std::string>> cells;
      for (auto const& a : P.generators(n - 1)) {
        cells.push_back(Tree<std::string>::unit(a));
      }
      auto trees = enumerate_trees(sig, P.generators(n), budgets[n + 1], cap);
      cells.insert(cells.end(), trees.begin(), trees.end());
      std::stable_sort(cells.begin(), cells.end(), [n](auto const& a, auto const& b) {
        return std::make_pair(a.size(), to_string(a, n)) < std::make_pair(b.size(), to_string(b, n));
      });
      std::size_t index = 0;
      std::vector<std::tuple<std::string, Tree<std::string>, std::string>> fresh;
      for (auto const& t : cells) {
        Cell        u{n, t};
        std::string src = to_string(source_cell(P, u));
        auto it = by_boundary.find({src, target_generator(P, u)});
        if (it == by_boundary.end()) {
          continue;
        }
        fresh.emplace_back(terminal_name(n + 1, index++), t, it->second);
      }
      for (auto& [name, t, v] : fresh) {
        P.add_cell(name, n + 1, t, v);
      }
    }
    return P;
  }

  inline MtoPolygraph terminal_polygraph(std::size_t   max_dim,
                                         std::size_t   budget,
                                         std::uint64_t cap = default_enumeration_cap) {
    return terminal_polygraph(std::vector<std::size_t>(max_dim + 1, budget), cap);
  }

  ////////////////////////////////////////////////////////////////////////
  // Nerve and realization
  ////////////////////////////////////////////////////////////////////////

  // Cells are the generators of dimension <= max_dim, faces their faces.
  inline OpetopicSet nerve(MtoPolygraph const& P, std::size_t max_dim) {
    Shaper      sh(P);
    OpetopicSet X;
    for (std::size_t n = 0; n <= max_dim && n < P.dims(); ++n) {
      for (auto const& x : P.generators(n)) {
        OCell c{x, sh.shape(x), {}};
        for (auto const& f : faces_of(c.shape)) {
          c.faces.emplace(f, sh.face(x, {f}));
        }
        X.add(std::move(c));
      }
    }
    return X;
  }

  // One generator per cell, under the cell's name.
  inline MtoPolygraph realize_oset(OpetopicSet const& X) {
    MtoPolygraph P;
    std::vector<OCell const*> cells;
    for (auto const& [name, c] : X.all()) {
      cells.push_back(&c);
    }
    std::stable_sort(cells.begin(), cells.end(), [](auto a, auto b) {
      return a->shape.dim() < b->shape.dim();
    });
    auto const t = Face::target();
    for (auto const* c : cells) {
      auto const& w = c->shape;
      if (w.dim() == 0) {
        P.add_point(c->name);
      } else if (w.dim() == 1) {
        P.add_arrow(c->name, X.face(c->name, Face::source(Address())),
                    X.face(c->name, t));
      } else if (w.is_degenerate()) {
        P.add_cell(c->name, w.dim(),
                   Tree<std::string>::unit(apply_word(X, {t, t}, c->name)),
                   X.face(c->name, t));
      } else {
        std::map<Address, std::string> nodes;
        for (auto const& [p, op] : w.tree().nodes()) {
          nodes.emplace(p, X.face(c->name, Face::source(p)));
        }
        P.add_cell(c->name, w.dim(), Tree<std::string>(std::move(nodes)),
                   X.face(c->name, t));
      }
    }
    return P;
  }

  // x |-> x is a face-compatible bijection X -> N|X| at every shape.
  inline Report unit_check(OpetopicSet const& X) {
    Report r;
    auto   R = realize_oset(X);
    auto   v = validate(R);
    if (!v.ok()) {
      r.fail("realization is not a valid polygraph: " + v.problems.front());
      return r;
    }
    auto Y = nerve(R, X.max_dim());
    for (auto const& w : Y.support()) {
      ++r.checked;
      auto xs = X.cells_of(w);
      auto ys = Y.cells_of(w);
      if (xs != ys) {
        r.fail("at shape " + w.str() + ": " + std::to_string(xs.size())
               + " cells, nerve of the realization has "
               + std::to_string(ys.size()));
      }
    }
    for (auto const& [name, c] : X.all()) {
      ++r.checked;
      if (!Y.has(name) || !(Y.at(name).shape == c.shape)) {
        r.fail("cell " + detail::quote_name(name) + " is lost");
        continue;
      }
      if (!(Y.at(name).faces == c.faces)) {
        r.fail("cell " + detail::quote_name(name) + " changes its faces");
      }
    }
    return r;
  }

  // (ω, x) |-> x is an isomorphism |N P| -> P.
  inline Report counit_check(MtoPolygraph const& P) {
    Report r;
    auto   X = nerve(P, P.dims() == 0 ? 0 : P.dims() - 1);
    auto   v = validate(X);
    if (!v.ok()) {
      r.fail("nerve is not a valid opetopic set: " + v.problems.front());
      return r;
    }
    auto R  = realize_oset(X);
    auto vr = validate(R);
    if (!vr.ok()) {
      r.fail("realization of the nerve is not valid: " + vr.problems.front());
      return r;
    }
    PolygraphMorphism eps;
    for (auto const& [name, c] : X.all()) {
      eps.map.emplace(name, name);
    }
    r.merge(check_isomorphism(R, P, eps));
    return r;
  }

}  // namespace opetopes
