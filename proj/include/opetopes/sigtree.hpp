#pragma once

// Decorated trees over a graded signature, with grafting, substitution and
// the flattening (monad multiplication) that computes targets.
//
// A tree is stored as a flat map from node address to operation. A node at
// address p with input q has its child, if any, at p ++ [q]. The edge-only
// tree is kept separately with its single colour.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "address.hpp"
#include "error.hpp"

namespace opetopes {

  template <typename L>
  class Tree {
   public:
    using label_type = L;

    static Tree unit(L color) {
      Tree t;
      t._unit = std::move(color);
      return t;
    }

    static Tree corolla(L op) {
      Tree t;
      t._nodes.emplace(Address(), std::move(op));
      return t;
    }

    // Structural constructor; colours are only checked by check_tree.
    explicit Tree(std::map<Address, L> nodes) : _nodes(std::move(nodes)) {
      if (_nodes.empty()) {
        throw error("a tree with nodes needs at least the root node");
      }
      if (!_nodes.contains(Address())) {
        throw error("tree has no root node at address []");
      }
    }

    bool is_unit() const noexcept {
      return _unit.has_value();
    }

    L const& unit_color() const {
      if (!_unit) {
        throw error("unit_color() called on a tree with nodes");
      }
      return *_unit;
    }

    std::map<Address, L> const& nodes() const noexcept {
      return _nodes;
    }

    std::size_t size() const noexcept {
      return _nodes.size();
    }

    bool has_node(Address const& p) const {
      return _nodes.contains(p);
    }

    L const& at(Address const& p) const {
      auto it = _nodes.find(p);
      if (it == _nodes.end()) {
        throw address_not_found("no node at address " + to_string(p));
      }
      return it->second;
    }

    friend bool operator==(Tree const&, Tree const&) = default;

   private:
    Tree() = default;

    std::optional<L>     _unit;
    std::map<Address, L> _nodes;
  };

  // Colours, operations, typed inputs. Colours and operations share one
  // label type; an operation's colour lives one dimension down.
  template <typename S>
  concept Signature = requires(S const&                       s,
                               typename S::label_type const& op,
                               Address const&                q) {
    { s.inputs(op) } -> std::convertible_to<std::vector<Address>>;
    { s.source_color(op, q) } -> std::convertible_to<typename S::label_type>;
    { s.target_color(op) } -> std::convertible_to<typename S::label_type>;
  };

  // A signature whose operations are themselves trees one level down. The
  // base level is the one whose trees are linear (every operation has the
  // single input []); flattening is not available there.
  template <typename S>
  concept LayeredSignature
      = Signature<S>
        && requires(S const& s, typename S::label_type const& op) {
             { s.source_tree(op) }
             -> std::convertible_to<Tree<typename S::label_type>>;
             { s.lower() } -> std::convertible_to<S>;
             { s.is_base() } -> std::convertible_to<bool>;
           };

  template <typename S>
  using label_t = typename S::label_type;

  ////////////////////////////////////////////////////////////////////////
  // Addresses of nodes, leaves and edges
  ////////////////////////////////////////////////////////////////////////

  template <typename L>
  std::vector<Address> node_addresses(Tree<L> const& t) {
    std::vector<Address> out;
    out.reserve(t.size());
    for (auto const& [p, op] : t.nodes()) {
      out.push_back(p);
    }
    return out;
  }

  template <Signature S>
  std::vector<Address> leaf_addresses(S const& sig, Tree<label_t<S>> const& t) {
    if (t.is_unit()) {
      return {Address()};
    }
    std::vector<Address> out;
    for (auto const& [p, op] : t.nodes()) {
      for (auto const& q : sig.inputs(op)) {
        Address e = p.extended(q);
        if (!t.has_node(e)) {
          out.push_back(std::move(e));
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  template <typename L>
  L const& decoration_at(Tree<L> const& t, Address const& p) {
    return t.at(p);
  }

  // Colour of the edge at `a`: the root edge for [], otherwise the input
  // edge q of the node at p when a = p ++ [q].
  template <Signature S>
  label_t<S> edge_color(S const& sig, Tree<label_t<S>> const& t, Address const& a) {
    if (a.empty()) {
      return t.is_unit() ? t.unit_color() : sig.target_color(t.at(Address()));
    }
    if (t.is_unit()) {
      throw address_not_found("no edge at address " + to_string(a)
                              + " in a tree without nodes");
    }
    Address p  = a.parent();
    auto    it = t.nodes().find(p);
    if (it == t.nodes().end()) {
      throw address_not_found("no edge at address " + to_string(a));
    }
    auto ins = sig.inputs(it->second);
    if (std::find(ins.begin(), ins.end(), a.back()) == ins.end()) {
      throw address_not_found("no edge at address " + to_string(a));
    }
    return sig.source_color(it->second, a.back());
  }

  // First violation of the tree condition or of colour coherence, if any.
  template <Signature S>
  std::optional<std::string> check_tree(S const& sig, Tree<label_t<S>> const& t) {
    for (auto const& [k, op] : t.nodes()) {
      if (k.empty()) {
        continue;
      }
      Address p  = k.parent();
      auto    it = t.nodes().find(p);
      if (it == t.nodes().end()) {
        return "orphan node at " + to_string(k) + ": no node at "
               + to_string(p);
      }
      auto ins = sig.inputs(it->second);
      if (std::find(ins.begin(), ins.end(), k.back()) == ins.end()) {
        return "node at " + to_string(k) + " hangs off " + to_string(k.back())
               + ", which is not an input of the node at " + to_string(p);
      }
      if (!(sig.target_color(op) == sig.source_color(it->second, k.back()))) {
        return "inner edge " + to_string(k) + " is incoherent";
      }
    }
    return std::nullopt;
  }

  template <Signature S>
  void validate_tree(S const& sig, Tree<label_t<S>> const& t) {
    if (auto err = check_tree(sig, t)) {
      throw coherence_error(*err);
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Grafting
  ////////////////////////////////////////////////////////////////////////

  template <Signature S>
  Tree<label_t<S>> graft(S const&                 sig,
                         Tree<label_t<S>> const& lower,
                         Address const&           leaf,
                         Tree<label_t<S>> const& upper) {
    auto leaves = leaf_addresses(sig, lower);
    if (!std::binary_search(leaves.begin(), leaves.end(), leaf)) {
      throw address_not_found(to_string(leaf) + " is not a leaf");
    }
    if (!(edge_color(sig, lower, leaf) == edge_color(sig, upper, Address()))) {
      throw coherence_error("cannot graft at " + to_string(leaf)
                            + ": leaf and root colours differ");
    }
    if (lower.is_unit()) {
      return upper;
    }
    if (upper.is_unit()) {
      return lower;
    }
    auto nodes = lower.nodes();
    for (auto const& [p, op] : upper.nodes()) {
      nodes.emplace(concat(leaf, p), op);
    }
    return Tree<label_t<S>>(std::move(nodes));
  }

  // Grafts a tree on every leaf. `order` fixes the processing order (all
  // orders give the same tree); by default leaves go in address order.
  template <Signature S>
  Tree<label_t<S>> total_graft(
      S const&                                          sig,
      Tree<label_t<S>> const&                          base,
      std::map<Address, Tree<label_t<S>>> const&       assignment,
      std::optional<std::vector<Address>> const&       order = std::nullopt) {
    auto leaves = leaf_addresses(sig, base);
    for (auto const& l : leaves) {
      if (!assignment.contains(l)) {
        throw address_not_found("total grafting: no tree assigned to leaf "
                                + to_string(l));
      }
    }
    if (assignment.size() != leaves.size()) {
      throw address_not_found("total grafting: a tree is assigned to a "
                              "non-leaf address");
    }
    std::vector<Address> seq = order ? *order : leaves;
    Tree<label_t<S>>     result = base;
    for (auto const& l : seq) {
      result = graft(sig, result, l, assignment.at(l));
    }
    return result;
  }

  // The part of `t` above the edge at `a`, readdressed relative to it.
  template <Signature S>
  Tree<label_t<S>> subtree(S const& sig, Tree<label_t<S>> const& t, Address const& a) {
    if (t.is_unit() || !t.has_node(a)) {
      return Tree<label_t<S>>::unit(edge_color(sig, t, a));
    }
    std::map<Address, label_t<S>> nodes;
    for (auto it = t.nodes().lower_bound(a); it != t.nodes().end(); ++it) {
      if (!a.is_prefix_of(it->first)) {
        // Prefix-first order keeps every extension of a contiguous.
        break;
      }
      nodes.emplace(it->first.drop(a.size()), it->second);
    }
    return Tree<label_t<S>>(std::move(nodes));
  }

  // S = outer o_{root_edge} T (total graft) above[l], for T a subtree of S.
  template <typename L>
  struct Decomposition {
    Tree<L>                    outer;
    Address                    root_edge;
    std::map<Address, Tree<L>> above;  // keyed by leaves of T
  };

  template <Signature S>
  Decomposition<label_t<S>> subtree_decomposition(S const&                 sig,
                                                  Tree<label_t<S>> const& whole,
                                                  Address const&           root_edge,
                                                  Tree<label_t<S>> const& part) {
    using L = label_t<S>;
    for (auto const& [p, op] : part.nodes()) {
      Address at = concat(root_edge, p);
      if (!whole.has_node(at) || !(whole.at(at) == op)) {
        throw address_not_found("not a subtree: mismatch at "
                                + to_string(at));
      }
    }
    if (part.is_unit()
        && !(edge_color(sig, whole, root_edge) == part.unit_color())) {
      throw address_not_found("not a subtree: edge colour differs at "
                              + to_string(root_edge));
    }
    std::map<Address, L> outer;
    for (auto const& [p, op] : whole.nodes()) {
      if (!root_edge.is_prefix_of(p)) {
        outer.emplace(p, op);
      }
    }
    Decomposition<L> d{outer.empty()
                           ? Tree<L>::unit(edge_color(sig, whole, root_edge))
                           : Tree<L>(std::move(outer)),
                       root_edge,
                       {}};
    for (auto const& l : leaf_addresses(sig, part)) {
      d.above.emplace(l, subtree(sig, whole, concat(root_edge, l)));
    }
    return d;
  }

  template <Signature S>
  Tree<label_t<S>> reassemble(S const&                          sig,
                              Decomposition<label_t<S>> const& d,
                              Tree<label_t<S>> const&          part) {
    auto                                mid = graft(sig, d.outer, d.root_edge, part);
    std::map<Address, Tree<label_t<S>>> shifted;
    for (auto const& [l, v] : d.above) {
      shifted.emplace(concat(d.root_edge, l), v);
    }
    for (auto const& l : leaf_addresses(sig, mid)) {
      if (!shifted.contains(l)) {
        shifted.emplace(l, Tree<label_t<S>>::unit(edge_color(sig, mid, l)));
      }
    }
    return total_graft(sig, mid, shifted);
  }

  ////////////////////////////////////////////////////////////////////////
  // Substitution and flattening
  ////////////////////////////////////////////////////////////////////////

  // A tree to put in place of one node, with the bijection from its leaves
  // to the inputs of the node it replaces.
  template <typename L>
  struct Insertion {
    Tree<L>                    tree;
    std::map<Address, Address> gluing;
  };

  template <typename L>
  struct Substituted {
    Tree<L> tree;
    // New address of every node of the host that was kept.
    std::map<Address, Address> kept;
    // For each replaced host node, new address of every inserted node.
    std::map<Address, std::map<Address, Address>> inserted;
  };

  // Simultaneous substitution of nodes of `host`. A host node p = r ++ [q] ++ w
  // passing through input q of a replaced node r moves to r' ++ l ++ w', where
  // l is the leaf glued to q; inserted node v lands at r' ++ v.
  template <Signature S>
  Substituted<label_t<S>> substitute(
      S const&                                           sig,
      Tree<label_t<S>> const&                            host,
      std::map<Address, Insertion<label_t<S>>> const&    subs) {
    using L = label_t<S>;
    Substituted<L> out{host, {}, {}};
    if (host.is_unit()) {
      if (!subs.empty()) {
        throw address_not_found("substitution into a tree without nodes");
      }
      return out;
    }
    for (auto const& [r, ins] : subs) {
      auto inputs = sig.inputs(host.at(r));
      std::sort(inputs.begin(), inputs.end());
      std::vector<Address> glued;
      for (auto const& [l, q] : ins.gluing) {
        glued.push_back(q);
      }
      std::sort(glued.begin(), glued.end());
      if (glued != inputs || leaf_addresses(sig, ins.tree).size() != glued.size()) {
        throw coherence_error("substitution at " + to_string(r)
                              + ": gluing is not a bijection onto the inputs");
      }
    }
    std::map<Address, L>                         nodes;
    std::function<void(Address const&, Address const&)> rebuild
        = [&](Address const& from, Address const& to) {
            auto it = subs.find(from);
            if (it != subs.end()) {
              auto& moved = out.inserted[from];
              for (auto const& [v, op] : it->second.tree.nodes()) {
                nodes.emplace(concat(to, v), op);
                moved.emplace(v, concat(to, v));
              }
              for (auto const& [l, q] : it->second.gluing) {
                Address child = from.extended(q);
                if (host.has_node(child)) {
                  rebuild(child, concat(to, l));
                }
              }
              return;
            }
            auto const& op = host.at(from);
            nodes.emplace(to, op);
            out.kept.emplace(from, to);
            for (auto const& q : sig.inputs(op)) {
              Address child = from.extended(q);
              if (host.has_node(child)) {
                rebuild(child, to.extended(q));
              }
            }
          };
    rebuild(Address(), Address());
    out.tree = nodes.empty()
                   ? Tree<L>::unit(sig.target_color(host.at(Address())))
                   : Tree<L>(std::move(nodes));
    return out;
  }

  template <typename L>
  struct Flattened {
    Tree<L>                    tree;
    std::map<Address, Address> readdress;  // leaves of input -> nodes of tree
  };

  template <LayeredSignature S>
  Flattened<label_t<S>> flatten(S const& sig, Tree<label_t<S>> const& t);

  // Bijection from the leaves of `t` (a tree over `sig`) to the inputs of
  // the operation it composes to.
  template <LayeredSignature S>
  std::map<Address, Address> composite_readdress(S const& sig,
                                                 Tree<label_t<S>> const& t) {
    if (sig.is_base()) {
      std::map<Address, Address> r;
      for (auto const& l : leaf_addresses(sig, t)) {
        r.emplace(l, Address());
      }
      return r;
    }
    return flatten(sig, t).readdress;
  }

  // Composite of a tree over `sig`, as a tree one level down: each node is
  // replaced by its source tree, glued along the composites of the subtrees
  // above it.
  template <LayeredSignature S>
  Flattened<label_t<S>> flatten(S const& sig, Tree<label_t<S>> const& t) {
    using L = label_t<S>;
    if (sig.is_base()) {
      throw error("flatten is not available on trees of base operations");
    }
    if (t.is_unit()) {
      Flattened<L> f{Tree<L>::corolla(t.unit_color()), {}};
      f.readdress.emplace(Address(), Address());
      return f;
    }
    auto const& root  = t.at(Address());
    S           lower = sig.lower();
    Tree<L>     host  = sig.source_tree(root);

    std::map<Address, Insertion<L>>  subs;
    std::map<Address, Flattened<L>>  above;
    for (auto const& q : sig.inputs(root)) {
      Address child = Address().extended(q);
      if (!t.has_node(child)) {
        continue;
      }
      auto f = flatten(sig, subtree(sig, t, child));
      subs.emplace(q, Insertion<L>{f.tree, composite_readdress(lower, f.tree)});
      above.emplace(q, std::move(f));
    }
    auto s = substitute(lower, host, subs);

    Flattened<L> out{s.tree, {}};
    for (auto const& l : leaf_addresses(sig, t)) {
      Address const& q  = l[0];
      auto           it = above.find(q);
      if (it == above.end()) {
        out.readdress.emplace(l, s.kept.at(q));
      } else {
        Address inner = it->second.readdress.at(l.drop(1));
        out.readdress.emplace(l, s.inserted.at(q).at(inner));
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Relabelling and bounded enumeration
  ////////////////////////////////////////////////////////////////////////

  template <typename L, typename F>
  auto relabel(Tree<L> const& t, F&& f) -> Tree<std::decay_t<decltype(f(std::declval<L const&>()))>> {
    using M = std::decay_t<decltype(f(std::declval<L const&>()))>;
    if (t.is_unit()) {
      return Tree<M>::unit(f(t.unit_color()));
    }
    std::map<Address, M> nodes;
    for (auto const& [p, op] : t.nodes()) {
      nodes.emplace(p, f(op));
    }
    return Tree<M>(std::move(nodes));
  }

  namespace detail {
    inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
      return a > std::numeric_limits<std::uint64_t>::max() - b
                 ? std::numeric_limits<std::uint64_t>::max()
                 : a + b;
    }

    inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
      if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
      }
      return a * b;
    }

    // Shared state for counting and generating coherent trees whose
    // decorations come from a fixed finite list of operations.
    template <Signature S>
    class tree_generator {
      using L      = label_t<S>;
      using nodes_t = std::map<Address, L>;

     public:
      tree_generator(S const& sig, std::vector<L> const& ops) : _sig(sig) {
        for (auto const& op : ops) {
          auto ins = sig.inputs(op);
          std::sort(ins.begin(), ins.end());
          std::vector<L> colors;
          for (auto const& q : ins) {
            colors.push_back(sig.source_color(op, q));
          }
          _by_target[sig.target_color(op)].push_back({op, ins, colors});
        }
      }

      std::vector<L> root_colors() const {
        std::vector<L> out;
        for (auto const& [c, v] : _by_target) {
          out.push_back(c);
        }
        return out;
      }

      // Number of trees with root colour c and exactly n nodes.
      std::uint64_t count(L const& c, std::size_t n) {
        if (n == 0) {
          return 0;
        }
        auto key = std::make_pair(c, n);
        if (auto it = _counts.find(key); it != _counts.end()) {
          return it->second;
        }
        std::uint64_t total = 0;
        if (auto it = _by_target.find(c); it != _by_target.end()) {
          for (auto const& e : it->second) {
            total = sat_add(total, count_fill(e.colors, 0, n - 1));
          }
        }
        _counts.emplace(key, total);
        return total;
      }

      // Trees with root colour c and between 1 and n nodes.
      std::vector<nodes_t> const& trees(L const& c, std::size_t n) {
        auto key = std::make_pair(c, n);
        if (auto it = _trees.find(key); it != _trees.end()) {
          return it->second;
        }
        std::vector<nodes_t> out;
        if (n > 0) {
          if (auto it = _by_target.find(c); it != _by_target.end()) {
            for (auto const& e : it->second) {
              nodes_t cur;
              cur.emplace(Address(), e.op);
              fill(e, 0, n - 1, cur, out);
            }
          }
        }
        return _trees.emplace(key, std::move(out)).first->second;
      }

     private:
      struct entry {
        L                    op;
        std::vector<Address> inputs;
        std::vector<L>       colors;
      };

      std::uint64_t count_fill(std::vector<L> const& colors,
                               std::size_t           i,
                               std::size_t           n) {
        if (i == colors.size()) {
          return n == 0 ? 1 : 0;
        }
        std::uint64_t total = 0;
        for (std::size_t m = 0; m <= n; ++m) {
          std::uint64_t here = m == 0 ? 1 : count(colors[i], m);
          if (here != 0) {
            total = sat_add(total, sat_mul(here, count_fill(colors, i + 1, n - m)));
          }
        }
        return total;
      }

      void fill(entry const&          e,
                std::size_t           i,
                std::size_t           budget,
                nodes_t&              cur,
                std::vector<nodes_t>& out) {
        if (i == e.inputs.size()) {
          out.push_back(cur);
          return;
        }
        fill(e, i + 1, budget, cur, out);
        if (budget == 0) {
          return;
        }
        Address const prefix = Address().extended(e.inputs[i]);
        // Copy: the memo vector may grow while we recurse.
        std::vector<nodes_t> subs = trees(e.colors[i], budget);
        for (auto const& sub : subs) {
          if (sub.size() > budget) {
            continue;
          }
          for (auto const& [p, op] : sub) {
            cur.emplace(concat(prefix, p), op);
          }
          fill(e, i + 1, budget - sub.size(), cur, out);
          for (auto const& [p, op] : sub) {
            cur.erase(concat(prefix, p));
          }
        }
      }

      S                                                   _sig;
      std::map<L, std::vector<entry>>                     _by_target;
      std::map<std::pair<L, std::size_t>, std::uint64_t>  _counts;
      std::map<std::pair<L, std::size_t>, std::vector<nodes_t>> _trees;
    };
  }  // namespace detail

  // Number of coherent trees with 1..max_nodes nodes decorated by `ops`
  // (saturating at the largest 64-bit value).
  template <Signature S>
  std::uint64_t count_trees(S const&                   sig,
                            std::vector<label_t<S>> const& ops,
                            std::size_t                max_nodes) {
    detail::tree_generator<S> gen(sig, ops);
    std::uint64_t             total = 0;
    for (auto const& c : gen.root_colors()) {
      for (std::size_t n = 1; n <= max_nodes; ++n) {
        total = detail::sat_add(total, gen.count(c, n));
      }
    }
    return total;
  }

  // All coherent trees with 1..max_nodes nodes decorated by `ops`. Throws
  // resource_limit, before building anything, when there are more than `cap`.
  template <Signature S>
  std::vector<Tree<label_t<S>>> enumerate_trees(S const&                       sig,
                                                std::vector<label_t<S>> const& ops,
                                                std::size_t                    max_nodes,
                                                std::uint64_t                  cap) {
    auto n = count_trees(sig, ops, max_nodes);
    if (n > cap) {
      throw resource_limit("tree enumeration would produce " + std::to_string(n)
                           + " trees, above the cap of " + std::to_string(cap));
    }
    detail::tree_generator<S>     gen(sig, ops);
    std::vector<Tree<label_t<S>>> out;
    out.reserve(n);
    for (auto const& c : gen.root_colors()) {
      for (auto const& nodes : gen.trees(c, max_nodes)) {
        out.emplace_back(nodes);
      }
    }
    return out;
  }

}  // namespace opetopes
