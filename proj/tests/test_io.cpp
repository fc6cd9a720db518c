#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <opetopes/equiv.hpp>
#include <opetopes/io.hpp>

#include "support/random.hpp"

using namespace opetopes;
using testing_support::rng_t;

namespace {

  namespace fs = std::filesystem;

  std::string slurp(fs::path const& p) {
    std::ifstream      in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<fs::path> opt_files(char const* sub) {
    std::vector<fs::path> out;
    for (auto const& e : fs::directory_iterator(fs::path(OPETOPES_GOLDEN_DIR) / sub)) {
      if (e.path().extension() == ".opt") {
        out.push_back(e.path());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Position of a parse failure, or {0, 0} if none.
  std::pair<std::size_t, std::size_t> error_at(std::string const& text) {
    try {
      parse_file(text);
    } catch (parse_error const& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  }

  std::string error_text(std::string const& text) {
    try {
      parse_file(text);
    } catch (parse_error const& e) {
      return e.what();
    }
    return {};
  }

}  // namespace

TEST(Io, ParseExamples) {
  EXPECT_EQ(parse_opetope("point"), point());
  EXPECT_EQ(parse_opetope("arrow"), arrow());
  EXPECT_EQ(parse_opetope("<<point>>"), opt_int(0));
  EXPECT_EQ(parse_opetope("{[] <- arrow}"), opt_int(1));
  EXPECT_EQ(parse_opetope("{[] <- arrow, [*] <- arrow}"), opt_int(2));
  EXPECT_EQ(parse_opetope("  {[*]<-arrow,[]<-arrow}  # two\n"), opt_int(2));
  EXPECT_THROW(parse_opetope("{[*] <- arrow}"), parse_error);
  EXPECT_THROW(parse_opetope("arrow arrow"), parse_error);
  EXPECT_THROW(parse_opetope(""), parse_error);
}

TEST(Io, StarIsSugarForEmptyAddress) {
  EXPECT_EQ(parse_opetope("{[] <- arrow, [[]] <- arrow}"), opt_int(2));
  EXPECT_EQ(parse_address("[**]"), parse_address("[[][]]"));
  auto w = parse_opetope("{[] <- {[] <- arrow, [*] <- arrow}, [[*]] <- {[] <- arrow}}");
  EXPECT_EQ(w, parse_opetope("{[] <- {[] <- arrow, [[]] <- arrow}, [[[]]] <- {[] <- arrow}}"));
  EXPECT_EQ(w.str(), "{[] <- {[] <- arrow, [*] <- arrow}, [[*]] <- {[] <- arrow}}");
}

TEST(Io, OpetopeTextRoundTrips) {
  for (std::size_t n = 0; n <= 4; ++n) {
    for (auto const& w : enumerate(n, n == 4 ? 2 : 3)) {
      auto text = w.str();
      EXPECT_EQ(parse_opetope(text), w) << text;
      EXPECT_EQ(parse_opetope(text).str(), text);
    }
  }
}

TEST(Io, NamedReferences) {
  auto env = parse_file("opetope a = arrow\nopetope two = {[] <- a, [*] <- a}\n");
  EXPECT_EQ(std::get<Opetope>(env.at("two").value), opt_int(2));
  EXPECT_EQ(parse_opetope("<<two>>", &env), Opetope::degenerate(opt_int(2)));
  EXPECT_EQ(error_at("opetope a = {[] <- b}"), std::make_pair(std::size_t{1}, std::size_t{20}));
  // a polygraph is not an opetope
  EXPECT_NE(error_text("polygraph p { gen 0 x }\nopetope q = <<p>>").find("no opetope named p"),
            std::string::npos);
}

TEST(Io, AnonymousDefinitions) {
  auto env = parse_file("arrow\n<<point>>\ngen 0 x\ngen 1 f : x -> x\n");
  ASSERT_EQ(env.definitions().size(), 3u);
  EXPECT_TRUE(env.definitions()[0].anonymous);
  EXPECT_EQ(std::get<Opetope>(env.definitions()[1].value), opt_int(0));
  EXPECT_EQ(std::get<MtoPolygraph>(env.definitions()[2].value).size(), 2u);
  EXPECT_EQ(print_environment(env), "arrow\n\n<<point>>\n\ngen 0 x\ngen 1 f : x -> x\n");

  auto X = parse_file("cell a : point\ncell f : arrow {t <- a, s[] <- a}\n");
  EXPECT_EQ(std::get<OpetopicSet>(X.last().value).size(), 2u);
  auto both = parse_file("gen 0 x\ncell a : point\ngen 0 y\n");
  ASSERT_EQ(both.definitions().size(), 2u);
  EXPECT_EQ(std::get<MtoPolygraph>(both.definitions()[0].value).size(), 2u);
  EXPECT_NE(error_text("opetope _polygraph = arrow\ngen 0 x\n").find("mixed"), std::string::npos);
}

TEST(Io, CorpusIsFixedByPrinting) {
  auto files = opt_files("corpus");
  ASSERT_GE(files.size(), 5u);
  for (auto const& f : files) {
    auto text = slurp(f);
    auto env  = parse_file(text);
    EXPECT_EQ(print_environment(env), text) << f;
    for (auto const& d : env.definitions()) {
      auto again = parse_file(print_definition(d));
      ASSERT_EQ(again.definitions().size(), 1u) << f << " " << d.name;
      EXPECT_TRUE(again.definitions()[0].value == d.value) << f << " " << d.name;
    }
  }
}

TEST(Io, VariantsPrintAsTheirCanonicalForm) {
  auto variants = opt_files("variants");
  ASSERT_FALSE(variants.empty());
  for (auto const& v : variants) {
    auto canonical = fs::path(OPETOPES_GOLDEN_DIR) / "corpus" / v.filename();
    ASSERT_TRUE(fs::exists(canonical)) << canonical;
    auto once = print_environment(parse_file(slurp(v)));
    EXPECT_EQ(once, slurp(canonical)) << v;
    EXPECT_EQ(print_environment(parse_file(once)), once) << v;
  }
}

TEST(Io, DuplicateBindingNamesBothLines) {
  auto text = "opetope x = arrow\n\n  opetope x = point\n";
  EXPECT_EQ(error_at(text), std::make_pair(std::size_t{3}, std::size_t{3}));
  auto what = error_text(text);
  EXPECT_NE(what.find("line 3"), std::string::npos) << what;
  EXPECT_NE(what.find("already defined on line 1"), std::string::npos) << what;

  auto node = error_text("{[] <- arrow,\n [] <- arrow}");
  EXPECT_NE(node.find("line 2"), std::string::npos) << node;
  auto gen = error_text("polygraph p {\n  gen 0 x\n  gen 0 x\n}");
  EXPECT_NE(gen.find("line 3"), std::string::npos) << gen;
  EXPECT_NE(gen.find("defined twice"), std::string::npos) << gen;
  auto face = error_text("cell a : point\ncell f : arrow {t <- a, t <- a}");
  EXPECT_NE(face.find("face t is given twice"), std::string::npos) << face;
}

TEST(Io, ErrorPositions) {
  using P = std::pair<std::size_t, std::size_t>;
  EXPECT_EQ(error_at("opetope a = arrow\nopetope b = {[] <- a,, }"), (P{2, 22}));
  // dangling names are a validation matter, not a syntax error
  EXPECT_EQ(error_at("gen 1 f : x -> y"), (P{0, 0}));
  EXPECT_EQ(error_at("gen 1 f : x y"), (P{1, 13}));
  EXPECT_EQ(error_at("oset X {\n  cell a : point\n  cell b : arow\n}"), (P{3, 12}));
  EXPECT_EQ(error_at("opetope \"open = arrow\n"), (P{1, 9}));
  EXPECT_EQ(error_at("opetope a = arrow ; "), (P{1, 19}));
  EXPECT_EQ(error_at("polygraph p {\n  gen 0 x\n"), (P{3, 1}));
  EXPECT_EQ(error_at("opetope a = {[] <- arrow, [**] <- arrow}"), (P{1, 13}));
  EXPECT_NE(error_text("polygraph p {\n  gen 0 x\n").find("end of input"), std::string::npos);
}

TEST(Io, NameQuoting) {
  EXPECT_EQ(detail::quote_name("f"), "f");
  EXPECT_EQ(detail::quote_name("f.g'_2"), "f.g'_2");
  EXPECT_EQ(detail::quote_name("2x"), "2x");
  EXPECT_EQ(detail::quote_name("a b"), "\"a b\"");
  EXPECT_EQ(detail::quote_name("s[]"), "\"s[]\"");
  EXPECT_EQ(detail::quote_name(""), "\"\"");
  EXPECT_EQ(detail::quote_name("point"), "\"point\"");
  EXPECT_EQ(detail::quote_name("arrow"), "\"arrow\"");
  EXPECT_EQ(detail::quote_name("id"), "id");

  MtoPolygraph P;
  for (auto const* x : {"point", "arrow", "a b", "#", "id", "gen"}) {
    P.add_point(x);
  }
  P.add_arrow("->", "point", "#");
  P.add_cell("<-", 2, Tree<std::string>({{Address(), "->"}}), "->");
  auto text = print_polygraph(P);
  auto env  = parse_file(text);
  EXPECT_EQ(std::get<MtoPolygraph>(env.last().value), P) << text;

  auto named = parse_file("opetope \"point\" = arrow\nopetope b = <<\"point\">>\n");
  EXPECT_EQ(std::get<Opetope>(named.at("b").value), Opetope::degenerate(arrow()));
  EXPECT_EQ(print_environment(named), "opetope \"point\" = arrow\n\nopetope b = <<arrow>>\n");
}

TEST(Io, RandomPolygraphsAndSetsRoundTrip) {
  rng_t rng(53);
  for (int round = 0; round < 100; ++round) {
    auto P    = testing_support::random_polygraph(rng, 15, 3);
    auto text = print_polygraph(P);
    EXPECT_EQ(std::get<MtoPolygraph>(parse_file(text).last().value), P) << text;
    if (round % 5 == 0) {
      auto X     = nerve(P, 3);
      auto xtext = print_oset(X);
      EXPECT_EQ(std::get<OpetopicSet>(parse_file(xtext).last().value), X) << xtext;
    }
  }
}
