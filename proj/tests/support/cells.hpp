#pragma once

// Random cells of a polygraph, and their boundaries computed the slow way.

#include <optional>
#include <string>
#include <vector>

#include <opetopes/polygraph.hpp>

#include "oracles.hpp"
#include "random.hpp"

namespace testing_support {

  using namespace opetopes;

  // A random cell of P of dimension >= 1, identities included.
  inline std::optional<Cell> random_cell(rng_t& rng, MtoPolygraph const& P, std::size_t max_nodes) {
    std::vector<std::size_t> dims;
    for (std::size_t n = 1; n < P.dims(); ++n) {
      if (!P.generators(n).empty()) {
        dims.push_back(n);
      }
    }
    if (dims.empty()) {
      return std::nullopt;
    }
    std::size_t n     = pick(rng, dims);
    auto        lower = P.generators(n - 1);
    auto const& c     = pick(rng, lower);
    if (coin(rng, 0.1)) {
      return identity_cell(P, c);
    }
    auto t = random_tree(rng, nabla(P, n), P.generators(n), c, max_nodes);
    if (!t) {
      return std::nullopt;
    }
    return Cell{n, *t};
  }

  // Source of a cell by structural recursion: peel one generator off,
  // take the source of the rest, substitute.
  inline Cell inductive_source(MtoPolygraph const& P, Cell const& u) {
    if (u.dim == 1) {
      // s(x after y) = s(y); the removed node is the first arrow of the path
      if (u.tree.is_unit()) {
        return {0, Tree<std::string>::corolla(u.tree.unit_color())};
      }
      return {0, Tree<std::string>::corolla(P.at(decompose(u).generator).source)};
    }
    return {u.dim - 1, oracle::flatten(nabla(P, u.dim), u.tree).tree};
  }

  inline std::string inductive_target(MtoPolygraph const& P, Cell const& u) {
    auto d = decompose(u);
    switch (d.kind) {
      case Decomposed::Kind::identity:
        return d.generator;
      case Decomposed::Kind::generator:
        return P.at(d.generator).target;
      case Decomposed::Kind::composite:
        return inductive_target(P, d.rest);
    }
    return {};
  }

}  // namespace testing_support
