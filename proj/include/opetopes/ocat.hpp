#pragma once

// Morphisms of the category of opetopes as words in face embeddings, up to
// the four families of relation squares.
//
// A word is stored outer-first: word[0] is a face of the codomain ω,
// word[1] a face of that face, and so on. Its text form reads the same way,
// "t.s[*]" being the source [*] of the target of ω. The empty word is "id".

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "address.hpp"
#include "error.hpp"
#include "opetope.hpp"

namespace opetopes {

  struct Face {
    enum class Kind { target, source };

    Kind    kind = Kind::target;
    Address address;

    static Face target() {
      return {};
    }
    static Face source(Address p) {
      return {Kind::source, std::move(p)};
    }

    bool is_target() const noexcept {
      return kind == Kind::target;
    }

    friend bool                 operator==(Face const&, Face const&) = default;
    friend std::strong_ordering operator<=>(Face const&, Face const&) = default;
  };

  using Word = std::vector<Face>;

  // A face of an n-opetope, whose addresses have level n - 1.
  inline std::string to_string(Face const& f, std::size_t codomain_dim) {
    if (f.is_target()) {
      return "t";
    }
    return "s" + to_string(f.address, codomain_dim == 0 ? 0 : codomain_dim - 1);
  }

  // A word into an n-opetope; its i-th face lands in dimension n - i.
  inline std::string to_string(Word const& w, std::size_t codomain_dim) {
    if (w.empty()) {
      return "id";
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0) {
        out += '.';
      }
      out += to_string(w[i], codomain_dim >= i ? codomain_dim - i : 0);
    }
    return out;
  }

  namespace detail {
    inline Face parse_face(lexer& lx) {
      if (lx.at_word("t")) {
        lx.next();
        return Face::target();
      }
      if (lx.at_word("s")) {
        lx.next();
        return Face::source(parse_address(lx));
      }
      lx.fail("expected 't' or 's[...]'");
    }
  }  // namespace detail

  inline Face parse_face(std::string_view text) {
    detail::lexer lx(text);
    Face          f = detail::parse_face(lx);
    if (!lx.at(detail::tok::end)) {
      lx.fail("expected end of face");
    }
    return f;
  }

  // Accepts "id" or faces separated by '.'; "t.s[*]" lexes as one name
  // followed by an address, so the separators are split here.
  inline Word parse_word(std::string_view text) {
    if (text == "id") {
      return {};
    }
    Word        w;
    std::size_t start = 0;
    int         depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i < text.size() && text[i] == '[') {
        ++depth;
      } else if (i < text.size() && text[i] == ']') {
        --depth;
      }
      if (i == text.size() || (text[i] == '.' && depth == 0)) {
        w.push_back(parse_face(text.substr(start, i - start)));
        start = i + 1;
      }
    }
    return w;
  }

  // Domain of a single face of ω.
  inline Opetope face_domain(Opetope const& w, Face const& f) {
    if (f.is_target()) {
      if (w.dim() == 0) {
        throw address_not_found("the point has no faces");
      }
      return w.target();
    }
    return w.source_at(f.address);
  }

  // Domain of a word into ω; throws address_not_found if some face is absent.
  inline Opetope word_domain(Opetope const& w, Word const& word) {
    Opetope cur = w;
    for (auto const& f : word) {
      cur = face_domain(cur, f);
    }
    return cur;
  }

  inline std::vector<Face> faces_of(Opetope const& w) {
    if (w.dim() == 0) {
      return {};
    }
    std::vector<Face> out{Face::target()};
    for (auto const& p : w.node_addresses()) {
      out.push_back(Face::source(p));
    }
    return out;
  }

  struct RelationInstance {
    enum class Family { inner, glob1, glob2, degen };

    Family family;
    Word   lhs;
    Word   rhs;
  };

  inline char const* family_name(RelationInstance::Family f) {
    switch (f) {
      case RelationInstance::Family::inner:
        return "Inner";
      case RelationInstance::Family::glob1:
        return "Glob1";
      case RelationInstance::Family::glob2:
        return "Glob2";
      case RelationInstance::Family::degen:
        return "Degen";
    }
    return "?";
  }

  // All relation squares whose outer faces land in ω. Throws coherence_error
  // if the two sides of one have different domains.
  inline std::vector<RelationInstance> relation_instances(Opetope const& w) {
    using F = RelationInstance::Family;
    std::vector<RelationInstance> out;
    if (w.dim() < 2) {
      return out;
    }
    auto const s = [](Address p) { return Face::source(std::move(p)); };
    auto const t = Face::target();
    if (w.is_degenerate()) {
      out.push_back({F::degen, {t, t}, {t, s(Address())}});
    } else {
      for (auto const& [k, op] : w.tree().nodes()) {
        if (!k.empty()) {
          out.push_back({F::inner, {s(k.parent()), s(k.back())}, {s(k), t}});
        }
      }
      out.push_back({F::glob1, {s(Address()), t}, {t, t}});
      for (auto const& l : w.leaf_addresses()) {
        out.push_back(
            {F::glob2, {s(l.parent()), s(l.back())}, {t, s(w.readdress().at(l))}});
      }
    }
    for (auto const& r : out) {
      auto a = word_domain(w, r.lhs);
      auto b = word_domain(w, r.rhs);
      if (!(a == b)) {
        throw coherence_error(std::string(family_name(r.family)) + " square on "
                              + w.str() + " has sides with domains " + a.str()
                              + " and " + b.str());
      }
    }
    return out;
  }

  namespace detail {
    // Relation instances, memoised per codomain.
    class relation_cache {
     public:
      std::vector<RelationInstance> const& at(Opetope const& w) {
        auto it = _m.find(w);
        if (it == _m.end()) {
          it = _m.emplace(w, relation_instances(w)).first;
        }
        return it->second;
      }

     private:
      std::map<Opetope, std::vector<RelationInstance>> _m;
    };

    // Words reachable from `word` in one rewrite.
    inline std::vector<Word> rewrites(relation_cache& rc,
                                      Opetope const&  w,
                                      Word const&     word) {
      std::vector<Word> out;
      Opetope           cur = w;
      for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        for (auto const& r : rc.at(cur)) {
          for (auto const* side : {&r.lhs, &r.rhs}) {
            auto const* other = side == &r.lhs ? &r.rhs : &r.lhs;
            if (word[i] == (*side)[0] && word[i + 1] == (*side)[1]) {
              Word next     = word;
              next[i]       = (*other)[0];
              next[i + 1]   = (*other)[1];
              out.push_back(std::move(next));
            }
          }
        }
        cur = face_domain(cur, word[i]);
      }
      return out;
    }
  }  // namespace detail

  // Every word equal to `word` (a word into ω), by breadth-first closure.
  inline std::set<Word> word_class(Opetope const& w, Word const& word) {
    word_domain(w, word);
    detail::relation_cache rc;
    std::set<Word>         seen{word};
    std::deque<Word>       todo{word};
    while (!todo.empty()) {
      Word cur = std::move(todo.front());
      todo.pop_front();
      for (auto& next : detail::rewrites(rc, w, cur)) {
        if (seen.insert(next).second) {
          todo.push_back(std::move(next));
        }
      }
    }
    return seen;
  }

  inline Word canonical_word(Opetope const& w, Word const& word) {
    return *word_class(w, word).begin();
  }

  inline bool equal_words(Opetope const& w, Word const& a, Word const& b) {
    if (a.size() != b.size() || !(word_domain(w, a) == word_domain(w, b))) {
      return false;
    }
    return word_class(w, a).contains(b);
  }

  struct MorphismClass {
    Opetope domain;
    Opetope codomain;
    Word    word;  // least member of the class

    friend bool operator==(MorphismClass const&, MorphismClass const&) = default;
    friend std::strong_ordering operator<=>(MorphismClass const& a,
                                            MorphismClass const& b) {
      if (auto c = a.codomain <=> b.codomain; c != 0) {
        return c;
      }
      if (auto c = a.domain <=> b.domain; c != 0) {
        return c;
      }
      return a.word <=> b.word;
    }
  };

  inline MorphismClass morphism(Opetope const& codomain, Word const& word) {
    return {word_domain(codomain, word), codomain, canonical_word(codomain, word)};
  }

  inline MorphismClass identity(Opetope const& w) {
    return {w, w, {}};
  }

  // f after g.
  inline MorphismClass compose(MorphismClass const& f, MorphismClass const& g) {
    if (!(g.codomain == f.domain)) {
      throw error("cannot compose: " + g.codomain.str() + " is not "
                  + f.domain.str());
    }
    Word w = f.word;
    w.insert(w.end(), g.word.begin(), g.word.end());
    return morphism(f.codomain, w);
  }

  // All words into ω, grouped into classes: the full slice over ω.
  class Slice {
   public:
    explicit Slice(Opetope const& w) : _codomain(w) {
      std::vector<std::pair<Word, Opetope>> layer{{Word{}, w}};
      std::vector<std::pair<Word, Opetope>> all = layer;
      while (!layer.empty()) {
        std::vector<std::pair<Word, Opetope>> next;
        for (auto const& [word, dom] : layer) {
          for (auto const& f : faces_of(dom)) {
            Word longer = word;
            longer.push_back(f);
            next.emplace_back(std::move(longer), face_domain(dom, f));
          }
        }
        all.insert(all.end(), next.begin(), next.end());
        layer = std::move(next);
      }
      std::sort(all.begin(), all.end(),
                [](auto const& a, auto const& b) { return a.first < b.first; });

      std::map<Word, std::size_t> index;
      for (std::size_t i = 0; i < all.size(); ++i) {
        index.emplace(all[i].first, i);
      }
      std::vector<std::size_t> parent(all.size());
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](std::size_t i) {
        while (parent[i] != i) {
          parent[i] = parent[parent[i]];
          i         = parent[i];
        }
        return i;
      };
      detail::relation_cache rc;
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (auto const& next : detail::rewrites(rc, w, all[i].first)) {
          std::size_t a = find(i);
          std::size_t b = find(index.at(next));
          // Keep the smaller index as root so roots are least words.
          if (a < b) {
            parent[b] = a;
          } else if (b < a) {
            parent[a] = b;
          }
        }
      }
      for (std::size_t i = 0; i < all.size(); ++i) {
        std::size_t root = find(i);
        _canon.emplace(all[i].first, all[root].first);
        if (root == i) {
          _classes.push_back({all[i].second, w, all[i].first});
        }
      }
      std::sort(_classes.begin(), _classes.end());
    }

    Opetope const& codomain() const noexcept {
      return _codomain;
    }

    // Every class, ordered by domain then least word.
    std::vector<MorphismClass> const& classes() const noexcept {
      return _classes;
    }

    std::vector<MorphismClass> hom(Opetope const& from) const {
      std::vector<MorphismClass> out;
      for (auto const& c : _classes) {
        if (c.domain == from) {
          out.push_back(c);
        }
      }
      return out;
    }

    std::vector<MorphismClass> of_dim(std::size_t d) const {
      std::vector<MorphismClass> out;
      for (auto const& c : _classes) {
        if (c.domain.dim() == d) {
          out.push_back(c);
        }
      }
      return out;
    }

    bool contains(Word const& word) const {
      return _canon.contains(word);
    }

    Word const& canonical(Word const& word) const {
      auto it = _canon.find(word);
      if (it == _canon.end()) {
        throw address_not_found("no word " + to_string(word, _codomain.dim()) + " into "
                                + _codomain.str());
      }
      return it->second;
    }

    MorphismClass class_of(Word const& word) const {
      return {word_domain(_codomain, word), _codomain, canonical(word)};
    }

   private:
    Opetope                    _codomain;
    std::vector<MorphismClass> _classes;
    std::map<Word, Word>       _canon;
  };

  // All morphisms φ -> ω, pairwise distinct, ordered by least word.
  inline std::vector<MorphismClass> hom(Opetope const& phi, Opetope const& w) {
    if (phi.dim() > w.dim()) {
      return {};
    }
    return Slice(w).hom(phi);
  }

}  // namespace opetopes
