#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "address.hpp"
#include "error.hpp"
#include "sigtree.hpp"

namespace opetopes {

  class Opetope;

  namespace detail {
    struct opetope_data;
  }

  class Opetope {
   public:
    enum class Kind { point, arrow, degenerate, nodes };

    // The point.
    Opetope();

    static Opetope point();
    static Opetope arrow();
    static Opetope degenerate(Opetope const& shell);
    // Validated: tree condition, equal decoration dimensions, inner coherence.
    static Opetope from_nodes(std::map<Address, Opetope> nodes);
    // No checks; for trees known to be coherent.
    static Opetope from_tree_unchecked(Tree<Opetope> const& t);
    // The linear tree of k arrows; k = 0 gives <<point>>.
    static Opetope integer(std::size_t k);

    std::size_t dim() const noexcept;
    Kind        kind() const noexcept;
    bool        is_degenerate() const noexcept {
      return kind() == Kind::degenerate;
    }

    Opetope const& shell() const;
    // Underlying tree, for dim >= 2 (a unit tree when degenerate).
    Tree<Opetope> const& tree() const;

    // Node addresses; {[]} for the arrow, empty for the point.
    std::vector<Address> node_addresses() const;
    std::vector<Address> leaf_addresses() const;
    Opetope const&       source_at(Address const& p) const;
    Opetope const&       target() const;
    // Leaves of this opetope to nodes of its target.
    std::map<Address, Address> const& readdress() const;

    std::string const& str() const noexcept;

    friend bool operator==(Opetope const& a, Opetope const& b) noexcept {
      return a._d == b._d || a.str() == b.str();
    }
    friend std::strong_ordering operator<=>(Opetope const& a,
                                            Opetope const& b);

   private:
    explicit Opetope(std::shared_ptr<detail::opetope_data const> d)
        : _d(std::move(d)) {}

    void compute_target() const;

    std::shared_ptr<detail::opetope_data const> _d;
  };

  // Operations are n-opetopes, trees over them are (n+1)-opetopes.
  struct OpetopeSignature {
    using label_type = Opetope;

    std::size_t level = 1;

    std::vector<Address> inputs(Opetope const& op) const {
      return op.node_addresses();
    }
    Opetope source_color(Opetope const& op, Address const& q) const {
      return op.source_at(q);
    }
    Opetope target_color(Opetope const& op) const {
      return op.target();
    }
    Tree<Opetope> const& source_tree(Opetope const& op) const {
      return op.tree();
    }
    OpetopeSignature lower() const {
      return {level - 1};
    }
    bool is_base() const {
      return level <= 1;
    }
  };

  namespace detail {
    struct opetope_data {
      std::size_t                  dim  = 0;
      Opetope::Kind                kind = Opetope::Kind::point;
      std::optional<Opetope>       shell;
      std::optional<Tree<Opetope>> tree;
      std::string                  str;

      mutable std::once_flag             target_once;
      mutable std::optional<Opetope>     target;
      mutable std::map<Address, Address> readdress;
    };

    inline std::shared_ptr<opetope_data const> make_basic(std::size_t   dim,
                                                          Opetope::Kind k,
                                                          std::string   s) {
      auto d  = std::make_shared<opetope_data>();
      d->dim  = dim;
      d->kind = k;
      d->str  = std::move(s);
      return d;
    }

    inline std::string print_nodes(std::map<Address, Opetope> const& nodes) {
      std::string out = "{";
      bool        first = true;
      for (auto const& [p, op] : nodes) {
        if (!first) {
          out += ", ";
        }
        first = false;
        out += to_string(p, op.dim());
        out += " <- ";
        out += op.str();
      }
      out += "}";
      return out;
    }
  }  // namespace detail

  inline Opetope Opetope::point() {
    static auto const d = detail::make_basic(0, Kind::point, "point");
    return Opetope(d);
  }

  inline Opetope::Opetope() : Opetope(point()) {}

  inline Opetope Opetope::arrow() {
    static auto const d = detail::make_basic(1, Kind::arrow, "arrow");
    return Opetope(d);
  }

  inline Opetope Opetope::degenerate(Opetope const& shell) {
    auto d   = std::make_shared<detail::opetope_data>();
    d->dim   = shell.dim() + 2;
    d->kind  = Kind::degenerate;
    d->shell = shell;
    d->tree  = Tree<Opetope>::unit(shell);
    d->str   = "<<" + shell.str() + ">>";
    return Opetope(d);
  }

  inline Opetope Opetope::from_tree_unchecked(Tree<Opetope> const& t) {
    if (t.is_unit()) {
      return degenerate(t.unit_color());
    }
    if (t.at(Address()).dim() == 0) {
      return arrow();
    }
    auto d  = std::make_shared<detail::opetope_data>();
    d->dim  = t.at(Address()).dim() + 1;
    d->kind = Kind::nodes;
    d->tree = t;
    d->str  = detail::print_nodes(t.nodes());
    return Opetope(d);
  }

  inline Opetope Opetope::from_nodes(std::map<Address, Opetope> nodes) {
    Tree<Opetope> t(std::move(nodes));
    std::size_t   dim = t.at(Address()).dim();
    if (dim == 0) {
      throw coherence_error("nodes of an opetope cannot be points");
    }
    for (auto const& [p, op] : t.nodes()) {
      if (op.dim() != dim) {
        throw coherence_error("node " + to_string(p, dim) + " has dimension "
                              + std::to_string(op.dim()) + ", expected "
                              + std::to_string(dim));
      }
    }
    OpetopeSignature sig{dim};
    for (auto const& [k, op] : t.nodes()) {
      if (k.empty()) {
        continue;
      }
      Address p = k.parent();
      if (!t.has_node(p)) {
        throw coherence_error("orphan address " + to_string(k, dim) + ": no node at "
                              + to_string(p, dim));
      }
      auto ins = sig.inputs(t.at(p));
      if (std::find(ins.begin(), ins.end(), k.back()) == ins.end()) {
        throw coherence_error("address " + to_string(k, dim) + " uses "
                              + to_string(k.back(), dim - 1)
                              + ", not a node of " + t.at(p).str());
      }
      auto const& below = sig.source_color(t.at(p), k.back());
      auto const& above = sig.target_color(op);
      if (!(below == above)) {
        throw coherence_error("inner edge " + to_string(k, dim) + ": target "
                              + above.str() + " of the upper node differs from "
                              + below.str());
      }
    }
    return from_tree_unchecked(t);
  }

  inline Opetope Opetope::integer(std::size_t k) {
    if (k == 0) {
      return degenerate(point());
    }
    std::map<Address, Opetope> nodes;
    for (std::size_t i = 0; i < k; ++i) {
      nodes.emplace(Address::base(i), arrow());
    }
    return from_tree_unchecked(Tree<Opetope>(std::move(nodes)));
  }

  inline std::size_t Opetope::dim() const noexcept {
    return _d->dim;
  }

  inline Opetope::Kind Opetope::kind() const noexcept {
    return _d->kind;
  }

  inline Opetope const& Opetope::shell() const {
    if (!_d->shell) {
      throw error(str() + " is not degenerate");
    }
    return *_d->shell;
  }

  inline Tree<Opetope> const& Opetope::tree() const {
    if (!_d->tree) {
      throw error(str() + " has no underlying tree");
    }
    return *_d->tree;
  }

  inline std::vector<Address> Opetope::node_addresses() const {
    switch (kind()) {
      case Kind::point:
      case Kind::degenerate:
        return {};
      case Kind::arrow:
        return {Address()};
      case Kind::nodes:
        return opetopes::node_addresses(tree());
    }
    return {};
  }

  inline std::vector<Address> Opetope::leaf_addresses() const {
    if (dim() < 2) {
      throw error(str() + " has no leaves");
    }
    return opetopes::leaf_addresses(OpetopeSignature{dim() - 1}, tree());
  }

  inline Opetope const& Opetope::source_at(Address const& p) const {
    if (kind() == Kind::arrow && p.empty()) {
      static Opetope const pt = point();
      return pt;
    }
    if (kind() != Kind::nodes) {
      throw address_not_found(str() + " has no node at "
                              + to_string(p, dim() == 0 ? 0 : dim() - 1));
    }
    return tree().at(p);
  }

  inline void Opetope::compute_target() const {
    auto& d = *_d;
    switch (d.kind) {
      case Kind::point:
        throw error("the point has no target");
      case Kind::arrow:
        d.target = point();
        return;
      case Kind::degenerate:
        d.target = from_tree_unchecked(Tree<Opetope>::corolla(*d.shell));
        d.readdress.emplace(Address(), Address());
        return;
      case Kind::nodes:
        break;
    }
    if (d.dim == 2) {
      d.target = arrow();
      for (auto const& l : leaf_addresses()) {
        d.readdress.emplace(l, Address());
      }
      return;
    }
    auto f      = flatten(OpetopeSignature{d.dim - 1}, *d.tree);
    d.target    = from_tree_unchecked(f.tree);
    d.readdress = std::move(f.readdress);
  }

  inline Opetope const& Opetope::target() const {
    std::call_once(_d->target_once, [this] { compute_target(); });
    return *_d->target;
  }

  inline std::map<Address, Address> const& Opetope::readdress() const {
    if (dim() < 2) {
      throw error(str() + " has no readdressing");
    }
    target();
    return _d->readdress;
  }

  inline std::string const& Opetope::str() const noexcept {
    return _d->str;
  }

  // Dimension first, then degenerate before non-degenerate, then shells or
  // binding sequences (prefix before extension).
  inline std::strong_ordering operator<=>(Opetope const& a, Opetope const& b) {
    if (a._d == b._d) {
      return std::strong_ordering::equal;
    }
    if (auto c = a.dim() <=> b.dim(); c != 0) {
      return c;
    }
    if (auto c = a.kind() <=> b.kind(); c != 0) {
      return c;
    }
    if (a.kind() == Opetope::Kind::degenerate) {
      return a.shell() <=> b.shell();
    }
    if (a.kind() != Opetope::Kind::nodes) {
      return std::strong_ordering::equal;
    }
    auto const& x  = a.tree().nodes();
    auto const& y  = b.tree().nodes();
    auto        ix = x.begin();
    auto        iy = y.begin();
    for (; ix != x.end() && iy != y.end(); ++ix, ++iy) {
      if (auto c = ix->first <=> iy->first; c != 0) {
        return c;
      }
      if (auto c = ix->second <=> iy->second; c != 0) {
        return c;
      }
    }
    return x.size() <=> y.size();
  }

  inline std::string to_string(Opetope const& o) {
    return o.str();
  }

  inline std::ostream& operator<<(std::ostream& os, Opetope const& o) {
    return os << o.str();
  }

  ////////////////////////////////////////////////////////////////////////

  inline Opetope point() {
    return Opetope::point();
  }
  inline Opetope arrow() {
    return Opetope::arrow();
  }
  inline Opetope opt_int(std::size_t k) {
    return Opetope::integer(k);
  }

  // The four identity families, checked pointwise.
  inline Report check_identities(Opetope const& w) {
    Report r;
    if (w.dim() < 2) {
      r.fail(w.str() + ": identities need dimension at least 2");
      return r;
    }
    auto const& t = w.target();
    if (w.is_degenerate()) {
      ++r.checked;
      if (!(t.source_at(Address()) == t.target())) {
        r.fail("Degen fails on " + w.str());
      }
      return r;
    }
    for (auto const& [k, op] : w.tree().nodes()) {
      if (k.empty()) {
        continue;
      }
      ++r.checked;
      auto const& lhs = op.target();
      auto const& rhs = w.source_at(k.parent()).source_at(k.back());
      if (!(lhs == rhs)) {
        r.fail("Inner fails at " + to_string(k, w.dim() - 1) + " of " + w.str());
      }
    }
    ++r.checked;
    if (!(w.source_at(Address()).target() == t.target())) {
      r.fail("Glob1 fails on " + w.str());
    }
    auto const& re = w.readdress();
    for (auto const& l : w.leaf_addresses()) {
      ++r.checked;
      auto it = re.find(l);
      if (it == re.end()) {
        r.fail("Glob2: leaf " + to_string(l, w.dim() - 1) + " of " + w.str()
               + " is not readdressed");
        continue;
      }
      auto const& lhs = w.source_at(l.parent()).source_at(l.back());
      auto const& rhs = t.source_at(it->second);
      if (!(lhs == rhs)) {
        r.fail("Glob2 fails at leaf " + to_string(l, w.dim() - 1) + " of " + w.str());
      }
    }
    return r;
  }

  // readdress is a bijection from the leaves onto the nodes of the target.
  // Nothing to check below dimension 2.
  inline Report check_readdress(Opetope const& w) {
    Report r;
    if (w.dim() < 2) {
      return r;
    }
    ++r.checked;
    auto leaves = w.leaf_addresses();
    auto nodes  = w.target().node_addresses();
    std::vector<Address> image;
    for (auto const& l : leaves) {
      auto it = w.readdress().find(l);
      if (it == w.readdress().end()) {
        r.fail("leaf " + to_string(l, w.dim() - 1) + " of " + w.str() + " is not readdressed");
        return r;
      }
      image.push_back(it->second);
    }
    std::sort(image.begin(), image.end());
    if (w.readdress().size() != leaves.size() || image != nodes) {
      r.fail("readdressing of " + w.str() + " is not a bijection onto the "
             "nodes of its target");
    }
    return r;
  }

  inline constexpr std::uint64_t default_enumeration_cap = 2'000'000;

  // Every n-opetope all of whose iterated source trees have at most
  // max_nodes nodes, in increasing order.
  inline std::vector<Opetope> enumerate(std::size_t   n,
                                        std::size_t   max_nodes,
                                        std::uint64_t cap = default_enumeration_cap) {
    std::vector<Opetope> out;
    if (n == 0) {
      return {point()};
    }
    if (n == 1) {
      return {arrow()};
    }
    auto shells = enumerate(n - 2, max_nodes, cap);
    if (n == 2) {
      for (std::size_t k = 0; k <= max_nodes; ++k) {
        out.push_back(opt_int(k));
      }
      return out;
    }
    auto ops = enumerate(n - 1, max_nodes, cap);
    if (shells.size() > cap) {
      throw resource_limit("too many degenerate opetopes");
    }
    auto trees = enumerate_trees(OpetopeSignature{n - 1}, ops, max_nodes,
                                 cap - shells.size());
    out.reserve(trees.size() + shells.size());
    for (auto const& s : shells) {
      out.push_back(Opetope::degenerate(s));
    }
    for (auto const& t : trees) {
      out.push_back(Opetope::from_tree_unchecked(t));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Number of opetopes enumerate(n, max_nodes) would return, without
  // building the top dimension.
  inline std::uint64_t count_opetopes(std::size_t   n,
                                      std::size_t   max_nodes,
                                      std::uint64_t cap = default_enumeration_cap) {
    if (n <= 1) {
      return 1;
    }
    if (n == 2) {
      return max_nodes + 1;
    }
    auto ops = enumerate(n - 1, max_nodes, cap);
    return detail::sat_add(count_opetopes(n - 2, max_nodes, cap),
                           count_trees(OpetopeSignature{n - 1}, ops, max_nodes));
  }

}  // namespace opetopes

template <>
struct std::hash<opetopes::Opetope> {
  std::size_t operator()(opetopes::Opetope const& o) const noexcept {
    return std::hash<std::string>{}(o.str());
  }
};
