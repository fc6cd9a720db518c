#pragma once

// Many-to-one polygraphs. A cell of dimension n >= 1 is its composition
// tree: a tree over the signature whose operations are the n-generators and
// whose colours are the (n-1)-generators. A 0-cell is a 0-generator, kept
// as a one-node tree so that every cell has the same representation.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "address.hpp"
#include "detail/lexer.hpp"
#include "error.hpp"
#include "sigtree.hpp"

namespace opetopes {

  struct Generator {
    std::string name;
    std::size_t dim = 0;
    std::string source;                    // dim 1 only
    std::optional<Tree<std::string>> tree;  // dim >= 2: source composition tree
    std::string target;                    // dim >= 1

    friend bool operator==(Generator const&, Generator const&) = default;
  };

  class MtoPolygraph {
   public:
    // Generator names are unique across all dimensions.
    void add(Generator g) {
      if (_gens.contains(g.name)) {
        throw error("generator " + detail::quote_name(g.name)
                    + " is defined twice");
      }
      if (g.dim >= _by_dim.size()) {
        _by_dim.resize(g.dim + 1);
      }
      _by_dim[g.dim].insert(g.name);
      auto name = g.name;
      _gens.emplace(std::move(name), std::move(g));
    }

    void add_point(std::string name) {
      add(Generator{std::move(name), 0, {}, std::nullopt, {}});
    }
    void add_arrow(std::string name, std::string src, std::string tgt) {
      add(Generator{std::move(name), 1, std::move(src), std::nullopt, std::move(tgt)});
    }
    void add_cell(std::string name, std::size_t dim, Tree<std::string> src, std::string tgt) {
      add(Generator{std::move(name), dim, {}, std::move(src), std::move(tgt)});
    }

    bool has(std::string const& name) const {
      return _gens.contains(name);
    }

    Generator const& at(std::string const& name) const {
      auto it = _gens.find(name);
      if (it == _gens.end()) {
        throw unknown_generator("unknown generator "
                                + detail::quote_name(name));
      }
      return it->second;
    }

    std::size_t dim_of(std::string const& name) const {
      return at(name).dim;
    }

    // Names of the n-generators, sorted.
    std::vector<std::string> generators(std::size_t n) const {
      if (n >= _by_dim.size()) {
        return {};
      }
      return {_by_dim[n].begin(), _by_dim[n].end()};
    }

    std::map<std::string, Generator> const& all() const noexcept {
      return _gens;
    }

    std::size_t size() const noexcept {
      return _gens.size();
    }

    bool empty() const noexcept {
      return _gens.empty();
    }

    // One more than the highest dimension in use; 0 when empty.
    std::size_t dims() const {
      std::size_t n = _by_dim.size();
      while (n > 0 && _by_dim[n - 1].empty()) {
        --n;
      }
      return n;
    }

    friend bool operator==(MtoPolygraph const& a, MtoPolygraph const& b) {
      return a._gens == b._gens;
    }

   private:
    std::map<std::string, Generator>   _gens;
    std::vector<std::set<std::string>> _by_dim;
  };

  // Operations: n-generators. Colours: (n-1)-generators.
  struct NablaSignature {
    using label_type = std::string;

    MtoPolygraph const* poly = nullptr;
    std::size_t         level = 1;

    std::vector<Address> inputs(std::string const& x) const {
      auto const& g = poly->at(x);
      if (g.dim == 1) {
        return {Address()};
      }
      return node_addresses(*g.tree);
    }
    std::string source_color(std::string const& x, Address const& p) const {
      auto const& g = poly->at(x);
      if (g.dim == 1) {
        if (!p.empty()) {
          throw address_not_found("arrow " + x + " has no input " + to_string(p, 0));
        }
        return g.source;
      }
      return g.tree->at(p);
    }
    std::string target_color(std::string const& x) const {
      return poly->at(x).target;
    }
    Tree<std::string> const& source_tree(std::string const& x) const {
      return *poly->at(x).tree;
    }
    NablaSignature lower() const {
      return {poly, level - 1};
    }
    bool is_base() const {
      return level <= 1;
    }
  };

  struct Cell {
    std::size_t       dim = 0;
    Tree<std::string> tree = Tree<std::string>::unit("");

    bool is_identity() const {
      return tree.is_unit();
    }

    friend bool operator==(Cell const&, Cell const&) = default;
  };

  // Tree of an n-cell; its addresses have level n.
  inline std::string to_string(Tree<std::string> const& t, std::size_t dim) {
    if (t.is_unit()) {
      return "id(" + detail::quote_name(t.unit_color()) + ")";
    }
    std::string out = "{";
    bool        first = true;
    for (auto const& [p, x] : t.nodes()) {
      if (!first) {
        out += ", ";
      }
      first = false;
      out += to_string(p, dim) + " <- " + detail::quote_name(x);
    }
    return out + "}";
  }

  inline std::string to_string(Cell const& c) {
    if (c.dim == 0) {
      return detail::quote_name(c.tree.at(Address()));
    }
    return to_string(c.tree, c.dim);
  }

  inline NablaSignature nabla(MtoPolygraph const& P, std::size_t n) {
    return {&P, n};
  }

  inline Cell identity_cell(MtoPolygraph const& P, std::string const& a) {
    return {P.dim_of(a) + 1, Tree<std::string>::unit(a)};
  }

  inline Cell generator_cell(MtoPolygraph const& P, std::string const& x) {
    return {P.dim_of(x), Tree<std::string>::corolla(x)};
  }

  // The generator the cell's target is; many-to-one cells have one.
  inline std::string const& target_generator(MtoPolygraph const& P, Cell const& u) {
    if (u.dim == 0) {
      throw error("a 0-cell has no target");
    }
    if (u.tree.is_unit()) {
      return u.tree.unit_color();
    }
    return P.at(u.tree.at(Address())).target;
  }

  inline Cell target_cell(MtoPolygraph const& P, Cell const& u) {
    return generator_cell(P, target_generator(P, u));
  }

  inline Cell source_cell(MtoPolygraph const& P, Cell const& u) {
    if (u.dim == 0) {
      throw error("a 0-cell has no source");
    }
    auto sig = nabla(P, u.dim);
    if (u.dim == 1) {
      auto leaves = leaf_addresses(sig, u.tree);
      return {0, Tree<std::string>::corolla(edge_color(sig, u.tree, leaves.at(0)))};
    }
    return {u.dim - 1, flatten(sig, u.tree).tree};
  }

  // Leaves of the cell's tree, matched with the nodes of its source.
  inline std::map<Address, Address> source_readdress(MtoPolygraph const& P,
                                                     Cell const&         u) {
    if (u.dim < 2) {
      throw error("source readdressing needs a cell of dimension at least 2");
    }
    return flatten(nabla(P, u.dim), u.tree).readdress;
  }

  struct Occurrence {
    Address     address;
    std::string generator;

    friend bool operator==(Occurrence const&, Occurrence const&) = default;
  };

  inline std::vector<Occurrence> occurrences(Cell const& u) {
    std::vector<Occurrence> out;
    if (u.dim == 0) {
      return out;
    }
    for (auto const& [p, x] : u.tree.nodes()) {
      out.push_back({p, x});
    }
    return out;
  }

  inline std::vector<Address> leaf_contexts(MtoPolygraph const& P, Cell const& u) {
    return leaf_addresses(nabla(P, u.dim), u.tree);
  }

  inline std::size_t count(Cell const& u) {
    return u.dim == 0 ? 0 : u.tree.size();
  }

  inline std::size_t count_gen(Cell const& u, std::string const& a) {
    if (u.dim == 0) {
      return 0;
    }
    std::size_t n = 0;
    for (auto const& [p, x] : u.tree.nodes()) {
      n += x == a ? 1 : 0;
    }
    return n;
  }

  inline Cell partial_compose(MtoPolygraph const& P,
                              Cell const&         x,
                              Address const&      leaf,
                              Cell const&         y) {
    if (x.dim != y.dim || x.dim == 0) {
      throw error("partial composition needs two cells of one positive dimension");
    }
    auto        sig  = nabla(P, x.dim);
    auto        edge = edge_color(sig, x.tree, leaf);
    auto const& tgt  = target_generator(P, y);
    if (edge != tgt) {
      throw coherence_error("cannot compose at " + to_string(leaf, x.dim) + ": leaf is "
                            + detail::quote_name(edge) + ", target is "
                            + detail::quote_name(tgt));
    }
    return {x.dim, graft(sig, x.tree, leaf, y.tree)};
  }

  inline Cell total_compose(MtoPolygraph const&                        P,
                            Cell const&                                z,
                            std::map<Address, Cell> const&             assignment,
                            std::optional<std::vector<Address>> const& order = std::nullopt) {
    auto leaves = leaf_contexts(P, z);
    for (auto const& l : leaves) {
      if (!assignment.contains(l)) {
        throw address_not_found("total composition: no cell for leaf "
                                + to_string(l, z.dim));
      }
    }
    if (assignment.size() != leaves.size()) {
      throw address_not_found("total composition: a cell is assigned to a "
                              "non-leaf address");
    }
    Cell result = z;
    for (auto const& l : order ? *order : leaves) {
      result = partial_compose(P, result, l, assignment.at(l));
    }
    return result;
  }

  struct Decomposed {
    enum class Kind { identity, generator, composite };

    Kind        kind;
    std::string generator;  // identity: the (n-1)-generator; otherwise the removed one
    Cell        rest;       // composite only
    Address     leaf;       // composite only: where `generator` reattaches
  };

  // Splits off the node at the greatest address, which never has children.
  inline Decomposed decompose(Cell const& u) {
    if (u.tree.is_unit()) {
      return {Decomposed::Kind::identity, u.tree.unit_color(), u, {}};
    }
    if (u.tree.size() == 1) {
      return {Decomposed::Kind::generator, u.tree.at(Address()), u, {}};
    }
    auto nodes = u.tree.nodes();
    auto last  = std::prev(nodes.end());
    Address     p = last->first;
    std::string x = last->second;
    nodes.erase(last);
    return {Decomposed::Kind::composite, x, {u.dim, Tree<std::string>(std::move(nodes))}, p};
  }

  inline Cell reassemble(MtoPolygraph const& P, Decomposed const& d) {
    switch (d.kind) {
      case Decomposed::Kind::identity:
      case Decomposed::Kind::generator:
        return d.rest;
      case Decomposed::Kind::composite:
        return partial_compose(P, d.rest, d.leaf, generator_cell(P, d.generator));
    }
    return d.rest;
  }

  inline bool parallel(MtoPolygraph const& P, Cell const& u, Cell const& v) {
    if (u.dim != v.dim) {
      throw error("parallel: cells of dimensions " + std::to_string(u.dim)
                  + " and " + std::to_string(v.dim));
    }
    if (u.dim == 0) {
      return true;
    }
    return target_generator(P, u) == target_generator(P, v)
           && source_cell(P, u) == source_cell(P, v);
  }

  // Checks that every generator is well typed and parallel to its target.
  inline Report validate(MtoPolygraph const& P) {
    Report r;
    for (std::size_t n = 0; n < P.dims(); ++n) {
      for (auto const& name : P.generators(n)) {
        ++r.checked;
        auto const& g  = P.at(name);
        auto        is = [&](std::string const& x, std::size_t d) {
          return P.has(x) && P.at(x).dim == d;
        };
        std::string who = "generator " + detail::quote_name(name);
        if (n == 0) {
          continue;
        }
        if (!is(g.target, n - 1)) {
          r.fail(who + ": target " + detail::quote_name(g.target)
                 + " is not a " + std::to_string(n - 1) + "-generator");
          continue;
        }
        if (n == 1) {
          if (!is(g.source, 0)) {
            r.fail(who + ": source " + detail::quote_name(g.source)
                   + " is not a 0-generator");
          }
          continue;
        }
        if (!g.tree) {
          r.fail(who + ": no source tree");
          continue;
        }
        auto const& t  = *g.tree;
        bool        ok = true;
        if (t.is_unit()) {
          if (!is(t.unit_color(), n - 2)) {
            r.fail(who + ": identity source on "
                   + detail::quote_name(t.unit_color()) + ", not a "
                   + std::to_string(n - 2) + "-generator");
            ok = false;
          }
        }
        for (auto const& [p, x] : t.nodes()) {
          if (!is(x, n - 1)) {
            r.fail(who + ": node " + to_string(p, n - 1) + " is "
                   + detail::quote_name(x) + ", not a "
                   + std::to_string(n - 1) + "-generator");
            ok = false;
          }
        }
        if (!ok) {
          continue;
        }
        try {
          if (auto err = check_tree(nabla(P, n - 1), t)) {
            r.fail(who + ": source tree: " + *err);
            continue;
          }
          if (!parallel(P, Cell{n - 1, t}, generator_cell(P, g.target))) {
            r.fail(who + ": source and target are not parallel");
          }
        } catch (error const& e) {
          r.fail(who + ": " + e.what());
        }
      }
    }
    return r;
  }

  // Generator maps between polygraphs, dimension by dimension.
  struct PolygraphMorphism {
    std::map<std::string, std::string> map;

    std::string const& operator()(std::string const& x) const {
      auto it = map.find(x);
      if (it == map.end()) {
        throw unknown_generator("morphism does not map "
                                + detail::quote_name(x));
      }
      return it->second;
    }

    friend bool operator==(PolygraphMorphism const&, PolygraphMorphism const&) = default;
  };

  inline Report check_morphism(MtoPolygraph const&      P,
                               MtoPolygraph const&      Q,
                               PolygraphMorphism const& f) {
    Report r;
    for (auto const& [name, g] : P.all()) {
      ++r.checked;
      std::string who = "generator " + detail::quote_name(name);
      auto        it  = f.map.find(name);
      if (it == f.map.end()) {
        r.fail(who + " is not mapped");
        continue;
      }
      if (!Q.has(it->second) || Q.at(it->second).dim != g.dim) {
        r.fail(who + " maps to " + detail::quote_name(it->second)
               + ", not a generator of the same dimension");
        continue;
      }
      auto const& h = Q.at(it->second);
      auto mapped   = [&](std::string const& x) {
        auto j = f.map.find(x);
        return j == f.map.end() ? std::string() : j->second;
      };
      if (g.dim >= 1 && mapped(g.target) != h.target) {
        r.fail(who + ": target is not preserved");
      }
      if (g.dim == 1 && mapped(g.source) != h.source) {
        r.fail(who + ": source is not preserved");
      }
      if (g.dim >= 2 && !(relabel(*g.tree, mapped) == *h.tree)) {
        r.fail(who + ": source tree is not preserved");
      }
    }
    return r;
  }

  // Node addresses are unchanged: a morphism preserves source trees.
  inline Cell map_cell(PolygraphMorphism const& f, Cell const& u) {
    return {u.dim, relabel(u.tree, f)};
  }

  // Composite of two morphisms: g after f.
  inline PolygraphMorphism compose(PolygraphMorphism const& g,
                                   PolygraphMorphism const& f) {
    PolygraphMorphism h;
    for (auto const& [x, y] : f.map) {
      h.map.emplace(x, g(y));
    }
    return h;
  }

  // Generator-preserving isomorphism test: f bijective and both directions
  // morphisms.
  inline Report check_isomorphism(MtoPolygraph const&      P,
                                  MtoPolygraph const&      Q,
                                  PolygraphMorphism const& f) {
    Report r = check_morphism(P, Q, f);
    if (!r.ok()) {
      return r;
    }
    PolygraphMorphism inv;
    for (auto const& [x, y] : f.map) {
      if (!inv.map.emplace(y, x).second) {
        r.fail("generators " + detail::quote_name(inv.map.at(y)) + " and "
               + detail::quote_name(x) + " have the same image");
      }
    }
    if (!r.ok()) {
      return r;
    }
    if (inv.map.size() != Q.size()) {
      r.fail("morphism is not surjective: " + std::to_string(inv.map.size())
             + " of " + std::to_string(Q.size()) + " generators hit");
      return r;
    }
    r.merge(check_morphism(Q, P, inv));
    return r;
  }

}  // namespace opetopes
