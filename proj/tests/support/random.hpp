#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <opetopes/opetope.hpp>
#include <opetopes/polygraph.hpp>
#include <opetopes/sigtree.hpp>

namespace testing_support {

  using opetopes::Address;
  using opetopes::label_t;
  using opetopes::Tree;

  using rng_t = std::mt19937_64;

  inline std::size_t uniform(rng_t& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }

  inline bool coin(rng_t& rng, double p = 0.5) {
    return std::bernoulli_distribution(p)(rng);
  }

  template <typename T>
  T const& pick(rng_t& rng, std::vector<T> const& v) {
    return v[uniform(rng, v.size())];
  }

  inline Address random_address(rng_t& rng, std::size_t depth) {
    std::vector<Address> entries;
    std::size_t          n = uniform(rng, 4);
    for (std::size_t i = 0; i < n; ++i) {
      entries.push_back(depth == 0 || coin(rng) ? Address() : random_address(rng, depth - 1));
    }
    return Address(std::move(entries));
  }

  // Grows a coherent tree with root colour c by grafting corollas of `ops`
  // on random leaves; nullopt if no operation has target c.
  template <typename S>
  std::optional<Tree<label_t<S>>> random_tree(rng_t&                         rng,
                                              S const&                       sig,
                                              std::vector<label_t<S>> const& ops,
                                              label_t<S> const&              c,
                                              std::size_t                    max_nodes) {
    using L = label_t<S>;
    std::map<L, std::vector<L>> by_target;
    for (auto const& op : ops) {
      by_target[sig.target_color(op)].push_back(op);
    }
    if (!by_target.contains(c)) {
      return std::nullopt;
    }
    if (max_nodes == 0) {
      return Tree<L>::unit(c);
    }
    auto        t      = Tree<L>::corolla(pick(rng, by_target.at(c)));
    std::size_t target = 1 + uniform(rng, max_nodes);
    for (std::size_t tries = 0; t.size() < target && tries < 8 * max_nodes; ++tries) {
      auto leaves = opetopes::leaf_addresses(sig, t);
      if (leaves.empty()) {
        break;
      }
      auto const& l  = pick(rng, leaves);
      auto        it = by_target.find(opetopes::edge_color(sig, t, l));
      if (it == by_target.end()) {
        continue;
      }
      t = opetopes::graft(sig, t, l, Tree<L>::corolla(pick(rng, it->second)));
    }
    return t;
  }

  // A valid polygraph of dimension <= max_dim with at most max_gens
  // generators. Sources are random pasting diagrams; targets are reused
  // when a parallel generator exists and created otherwise.
  inline opetopes::MtoPolygraph random_polygraph(rng_t&      rng,
                                                 std::size_t max_gens = 20,
                                                 std::size_t max_dim  = 3) {
    using opetopes::Cell;
    opetopes::MtoPolygraph P;
    std::size_t            next = 0;
    auto fresh = [&](char const* prefix) { return prefix + std::to_string(next++); };

    std::size_t points = 1 + uniform(rng, 3);
    for (std::size_t i = 0; i < points; ++i) {
      P.add_point(fresh("a"));
    }
    std::size_t arrows = 1 + uniform(rng, 4);
    for (std::size_t i = 0; i < arrows && P.size() < max_gens; ++i) {
      auto pts = P.generators(0);
      P.add_arrow(fresh("f"), pick(rng, pts), pick(rng, pts));
    }
    for (std::size_t n = 2; n <= max_dim; ++n) {
      std::size_t wanted = 1 + uniform(rng, 4);
      for (std::size_t i = 0; i < wanted && P.size() < max_gens; ++i) {
        auto sig   = opetopes::nabla(P, n - 1);
        auto lower = P.generators(n - 1);
        if (lower.empty()) {
          break;
        }
        // Source: an identity now and then, otherwise a random composite.
        Tree<std::string> src = Tree<std::string>::unit("");
        auto              c   = pick(rng, lower);
        auto const&       cg  = P.at(c);
        if (coin(rng, 0.15)) {
          if (n == 2) {
            src = Tree<std::string>::unit(cg.source);
          } else {
            // Identity on an (n-2)-generator.
            src = Tree<std::string>::unit(cg.target);
          }
        } else {
          auto t = random_tree(rng, sig, lower, cg.target, 3);
          if (!t) {
            continue;
          }
          src = *t;
        }
        Cell        u{n - 1, src};
        auto        s    = opetopes::source_cell(P, u);
        std::string tgt  = opetopes::target_generator(P, u);
        std::string name;
        for (auto const& v : lower) {
          if (opetopes::parallel(P, u, opetopes::generator_cell(P, v))) {
            name = v;
            if (coin(rng)) {
              break;
            }
          }
        }
        if (name.empty()) {
          if (P.size() + 2 > max_gens) {
            break;
          }
          name = fresh(n == 2 ? "f" : "m");
          if (n == 2) {
            P.add_arrow(name, s.tree.at(Address()), tgt);
          } else {
            P.add_cell(name, n - 1, s.tree, tgt);
          }
        }
        P.add_cell(fresh(n == 2 ? "m" : "A"), n, src, name);
      }
    }
    return P;
  }

}  // namespace testing_support
