#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include <opetopes/opetope.hpp>
#include <opetopes/sigtree.hpp>

#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace opetopes;

namespace {

  using OTree = Tree<Opetope>;

  Address A(char const* text) {
    return parse_address(text);
  }

  std::vector<Address> As(std::initializer_list<char const*> texts) {
    std::vector<Address> out;
    for (auto t : texts) {
      out.push_back(A(t));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  OTree arrows(std::size_t k) {
    return opt_int(k).tree();
  }

  OpetopeSignature const sig1{1};
  OpetopeSignature const sig2{2};
  OpetopeSignature const sig3{3};

  // Trees over the 2-opetopes with at most three nodes, plus units.
  std::vector<OTree> small_level2_trees() {
    std::vector<OTree> out{OTree::unit(arrow())};
    for (auto const& o : enumerate(3, 3)) {
      out.push_back(o.tree());
    }
    return out;
  }

}  // namespace

TEST(Sigtree, UnitTree) {
  auto u = OTree::unit(arrow());
  EXPECT_TRUE(node_addresses(u).empty());
  EXPECT_EQ(leaf_addresses(sig2, u), As({"[]"}));
  EXPECT_EQ(edge_color(sig2, u, Address()), arrow());
}

TEST(Sigtree, Corolla) {
  auto c = OTree::corolla(arrow());
  EXPECT_EQ(node_addresses(c), As({"[]"}));
  EXPECT_EQ(leaf_addresses(sig1, c), As({"[*]"}));
  EXPECT_TRUE(leaf_addresses(sig2, OTree::corolla(opt_int(0))).empty());
  EXPECT_EQ(leaf_addresses(sig2, OTree::corolla(opt_int(2))), As({"[[]]", "[[*]]"}));
}

TEST(Sigtree, LinearTree) {
  auto t = arrows(3);
  EXPECT_EQ(node_addresses(t), As({"[]", "[*]", "[**]"}));
  EXPECT_EQ(leaf_addresses(sig1, t), As({"[***]"}));
  EXPECT_EQ(decoration_at(t, A("[*]")), arrow());
  EXPECT_THROW(decoration_at(t, A("[***]")), address_not_found);
}

TEST(Sigtree, EdgeColors) {
  std::map<Address, Opetope> nodes{{A("[]"), opt_int(2)}, {A("[[]]"), opt_int(2)}};
  OTree                      t(nodes);
  EXPECT_EQ(edge_color(sig2, t, Address()), arrow());
  EXPECT_EQ(edge_color(sig2, t, A("[[]]")), arrow());
  EXPECT_EQ(edge_color(sig2, t, A("[[*]]")), arrow());
  EXPECT_THROW(edge_color(sig2, t, A("[[**]]")), address_not_found);
  EXPECT_THROW(edge_color(sig2, t, A("[[*][]]")), address_not_found);
}

TEST(Sigtree, CheckTreeFindsProblems) {
  EXPECT_FALSE(check_tree(sig2, OTree({{A("[]"), opt_int(2)}, {A("[[*]]"), opt_int(1)}})));
  EXPECT_TRUE(check_tree(sig2, OTree({{A("[]"), opt_int(2)}, {A("[[**]]"), opt_int(1)}})));
  EXPECT_TRUE(check_tree(sig2, OTree({{A("[]"), opt_int(2)}, {A("[[][]]"), opt_int(1)}})));
  auto bad = check_tree(sig2, OTree({{A("[]"), opt_int(1)}, {A("[[*]]"), opt_int(1)}}));
  ASSERT_TRUE(bad);
  EXPECT_NE(bad->find("[[*]]"), std::string::npos);
  EXPECT_THROW(OTree(std::map<Address, Opetope>{{A("[*]"), arrow()}}), error);
}

TEST(Sigtree, GraftExamples) {
  EXPECT_EQ(graft(sig1, arrows(1), A("[*]"), arrows(1)), arrows(2));
  auto u = OTree::unit(point());
  EXPECT_EQ(graft(sig1, u, Address(), arrows(2)), arrows(2));
  EXPECT_EQ(graft(sig1, arrows(2), A("[**]"), u), arrows(2));

  auto c = OTree::corolla(opt_int(2));
  auto g = graft(sig2, c, A("[[]]"), c);
  EXPECT_EQ(node_addresses(g), As({"[]", "[[]]"}));
  EXPECT_EQ(leaf_addresses(sig2, g), As({"[[][]]", "[[][*]]", "[[*]]"}));
}

TEST(Sigtree, GraftErrors) {
  auto c = OTree::corolla(opt_int(2));
  EXPECT_THROW(graft(sig2, c, A("[]"), c), address_not_found);
  // Level-3 trees whose colours are 2-opetopes can mismatch.
  auto w = Opetope::from_nodes({{A("[]"), opt_int(2)}});
  auto t = OTree::corolla(w);
  EXPECT_THROW(graft(sig3, t, A("[[]]"), OTree::unit(opt_int(3))), coherence_error);
}

TEST(Sigtree, GraftAddressFormulas) {
  testing_support::rng_t rng(1);
  auto                   trees = small_level2_trees();
  int                    done  = 0;
  while (done < 1000) {
    auto const& s      = testing_support::pick(rng, trees);
    auto        leaves = leaf_addresses(sig2, s);
    if (leaves.empty()) {
      continue;
    }
    auto const& l = testing_support::pick(rng, leaves);
    auto const& t = testing_support::pick(rng, trees);
    auto        g = graft(sig2, s, l, t);
    auto        n = node_addresses(g);
    auto        f = leaf_addresses(sig2, g);
    EXPECT_EQ(std::set<Address>(n.begin(), n.end()),
              oracle::graft_nodes(node_addresses(s), l, node_addresses(t)));
    EXPECT_EQ(std::set<Address>(f.begin(), f.end()),
              oracle::graft_leaves(leaves, l, leaf_addresses(sig2, t)));
    EXPECT_FALSE(check_tree(sig2, g));
    ++done;
  }
}

TEST(Sigtree, TotalGraftIsOrderIndependent) {
  auto c = OTree::corolla(opt_int(2));
  std::map<Address, OTree> assignment{{A("[[]]"), OTree::corolla(opt_int(1))},
                                      {A("[[*]]"), OTree::corolla(opt_int(1))}};
  auto forward  = total_graft(sig2, c, assignment);
  auto backward = total_graft(sig2, c, assignment, std::vector<Address>{A("[[*]]"), A("[[]]")});
  EXPECT_EQ(forward, backward);
  EXPECT_EQ(forward.size(), 3u);
  EXPECT_EQ(leaf_addresses(sig2, forward), As({"[[][]]", "[[*][]]"}));

  EXPECT_EQ(total_graft(sig1, arrows(1), {{A("[*]"), OTree::unit(point())}}), arrows(1));
  EXPECT_THROW(total_graft(sig2, c, {{A("[[]]"), OTree::unit(arrow())}}), address_not_found);

  testing_support::rng_t rng(5);
  auto                   trees = small_level2_trees();
  for (int i = 0; i < 300; ++i) {
    auto const& base   = testing_support::pick(rng, trees);
    auto        leaves = leaf_addresses(sig2, base);
    if (leaves.size() < 2) {
      continue;
    }
    std::map<Address, OTree> as;
    for (auto const& l : leaves) {
      as.emplace(l, testing_support::pick(rng, trees));
    }
    auto order = leaves;
    auto ref   = total_graft(sig2, base, as);
    std::sort(order.begin(), order.end());
    do {
      EXPECT_EQ(total_graft(sig2, base, as, order), ref);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(Sigtree, SubtreeDecomposition) {
  auto s    = arrows(3);
  auto part = arrows(1);
  auto d    = subtree_decomposition(sig1, s, A("[*]"), part);
  EXPECT_EQ(node_addresses(d.outer), As({"[]"}));
  ASSERT_EQ(d.above.size(), 1u);
  EXPECT_EQ(d.above.begin()->first, A("[*]"));
  EXPECT_EQ(d.above.begin()->second, arrows(1));
  EXPECT_EQ(reassemble(sig1, d, part), s);

  auto whole = subtree_decomposition(sig1, s, Address(), s);
  EXPECT_TRUE(whole.outer.is_unit());
  EXPECT_EQ(reassemble(sig1, whole, s), s);

  auto at_leaf = subtree_decomposition(sig1, s, A("[***]"), OTree::unit(point()));
  EXPECT_EQ(at_leaf.outer, s);
  EXPECT_EQ(reassemble(sig1, at_leaf, OTree::unit(point())), s);

  EXPECT_THROW(subtree_decomposition(sig1, s, A("[**]"), arrows(2)), address_not_found);
}

TEST(Sigtree, EveryTreeIsIteratedGraftOfCorollas) {
  for (auto const& o : enumerate(3, 3)) {
    if (o.is_degenerate()) {
      continue;
    }
    auto const& t = o.tree();
    for (auto const& [p, op] : t.nodes()) {
      auto sub = subtree(sig2, t, p);
      auto d   = subtree_decomposition(sig2, t, p, sub);
      EXPECT_EQ(reassemble(sig2, d, sub), t);
      auto c = subtree_decomposition(sig2, t, p, OTree::corolla(op));
      EXPECT_EQ(reassemble(sig2, c, OTree::corolla(op)), t);
    }
    // Rebuild from the root corolla, grafting the rest in address order.
    OTree rebuilt = OTree::corolla(t.at(Address()));
    for (auto const& [p, op] : t.nodes()) {
      if (!p.empty()) {
        rebuilt = graft(sig2, rebuilt, p, OTree::corolla(op));
      }
    }
    EXPECT_EQ(rebuilt, t);
  }
}

TEST(Sigtree, FlattenExamples) {
  auto u = flatten(sig2, OTree::unit(arrow()));
  EXPECT_EQ(u.tree, OTree::corolla(arrow()));
  EXPECT_EQ(u.readdress, (std::map<Address, Address>{{A("[]"), A("[]")}}));

  auto c = flatten(sig2, OTree::corolla(opt_int(2)));
  EXPECT_EQ(c.tree, arrows(2));
  EXPECT_EQ(c.readdress, (std::map<Address, Address>{{A("[[]]"), A("[]")}, {A("[[*]]"), A("[*]")}}));

  OTree t({{A("[]"), opt_int(2)}, {A("[[]]"), opt_int(2)}});
  auto  f = flatten(sig2, t);
  EXPECT_EQ(f.tree, arrows(3));
  EXPECT_EQ(f.readdress, (std::map<Address, Address>{
                             {A("[[][]]"), A("[]")}, {A("[[][*]]"), A("[*]")}, {A("[[*]]"), A("[**]")}}));

  EXPECT_THROW(flatten(sig1, arrows(2)), error);
}

TEST(Sigtree, FlattenAgreesWithOneNodeAtATimeOracle) {
  auto check = [](OpetopeSignature const& sig, OTree const& t) {
    auto f = flatten(sig, t);
    auto o = oracle::flatten(sig, t);
    EXPECT_EQ(f.tree, o.tree);
    EXPECT_EQ(f.readdress, o.readdress);
    EXPECT_EQ(f.tree.size(), leaf_addresses(sig, t).size());
  };
  for (auto const& o : enumerate(3, 3)) {
    check(sig2, o.tree());
  }
  for (auto const& o : enumerate(4, 2)) {
    check(sig3, o.tree());
  }
}

TEST(Sigtree, SubstitutionNodeCount) {
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t m = 0; m <= 3; ++m) {
        Insertion<Opetope> ins{m == 0 ? OTree::unit(point()) : arrows(m),
                               {{Address::base(m), Address()}}};
        auto s = substitute(sig1, arrows(k), {{Address::base(i), ins}});
        EXPECT_EQ(s.tree, k - 1 + m == 0 ? OTree::unit(point()) : arrows(k - 1 + m));
      }
    }
  }

  // Replace a node of a level-2 tree by any tree composing to it.
  testing_support::rng_t rng(9);
  auto                   all = enumerate(3, 3);
  std::map<Opetope, std::vector<Opetope>> by_target;
  for (auto const& o : all) {
    by_target[o.target()].push_back(o);
  }
  int done = 0;
  while (done < 500) {
    auto const& h = testing_support::pick(rng, all);
    if (h.is_degenerate()) {
      continue;
    }
    auto        nodes = node_addresses(h.tree());
    auto const& r     = testing_support::pick(rng, nodes);
    auto const& v     = testing_support::pick(rng, by_target.at(h.tree().at(r)));
    Insertion<Opetope> ins{v.tree(), v.readdress()};
    auto s = substitute(sig2, h.tree(), {{r, ins}});
    std::size_t expected = h.tree().size() - 1 + v.tree().size();
    EXPECT_EQ(s.tree.size(), expected);
    EXPECT_FALSE(check_tree(sig2, s.tree)) << h << " at " << r << " by " << v;
    // The composite is unchanged by substituting a composite for a node.
    EXPECT_EQ(flatten(sig2, s.tree).tree, flatten(sig2, h.tree()).tree);
    ++done;
  }
}

TEST(Sigtree, EnumerateTreesCountsAgree) {
  auto ops = enumerate(2, 3);
  for (std::size_t n = 0; n <= 3; ++n) {
    auto trees = enumerate_trees(sig2, ops, n, 1'000'000);
    EXPECT_EQ(trees.size(), count_trees(sig2, ops, n));
    std::set<std::string> seen;
    for (auto const& t : trees) {
      EXPECT_FALSE(check_tree(sig2, t));
      EXPECT_LE(t.size(), n);
      seen.insert(Opetope::from_tree_unchecked(t).str());
    }
    EXPECT_EQ(seen.size(), trees.size());
  }
  EXPECT_THROW(enumerate_trees(sig2, ops, 3, 10), resource_limit);
}
