#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "detail/lexer.hpp"
#include "error.hpp"

namespace opetopes {

  // A hereditary address: a finite sequence whose entries are themselves
  // addresses one dimension down. The empty address doubles as the unique
  // input `*` of the arrow.
  class Address {
   public:
    Address() = default;
    explicit Address(std::vector<Address> entries)
        : _entries(std::move(entries)) {}

    // [*...*] with n stars.
    static Address base(std::size_t n) {
      return Address(std::vector<Address>(n));
    }

    std::vector<Address> const& entries() const noexcept {
      return _entries;
    }
    std::size_t size() const noexcept {
      return _entries.size();
    }
    bool empty() const noexcept {
      return _entries.empty();
    }
    Address const& operator[](std::size_t i) const {
      return _entries[i];
    }
    Address const& back() const {
      return _entries.back();
    }

    std::size_t depth() const {
      std::size_t d = 0;
      for (auto const& e : _entries) {
        d = std::max(d, e.depth());
      }
      return _entries.empty() ? 0 : d + 1;
    }

    // this ++ [entry]
    Address extended(Address const& entry) const {
      Address r = *this;
      r._entries.push_back(entry);
      return r;
    }

    // All but the last entry.
    Address parent() const {
      Address r = *this;
      r._entries.pop_back();
      return r;
    }

    bool is_prefix_of(Address const& other) const {
      return _entries.size() <= other._entries.size()
             && std::equal(
                 _entries.begin(), _entries.end(), other._entries.begin());
    }

    // The entries after the first n.
    Address drop(std::size_t n) const {
      return Address(std::vector<Address>(_entries.begin() + n, _entries.end()));
    }

    friend Address concat(Address const& p, Address const& q) {
      Address r = p;
      r._entries.insert(r._entries.end(), q._entries.begin(), q._entries.end());
      return r;
    }

    friend bool operator==(Address const& a, Address const& b) {
      return a._entries == b._entries;
    }

    // Prefix-first lexicographic order, entries compared recursively.
    friend std::strong_ordering operator<=>(Address const& a,
                                            Address const& b) {
      std::size_t n = std::min(a._entries.size(), b._entries.size());
      for (std::size_t i = 0; i < n; ++i) {
        auto c = a._entries[i] <=> b._entries[i];
        if (c != 0) {
          return c;
        }
      }
      return a._entries.size() <=> b._entries.size();
    }

   private:
    std::vector<Address> _entries;
  };

  Address concat(Address const& p, Address const& q);

  namespace detail {
    inline void print_address(std::string& out, Address const& a) {
      bool base = std::all_of(a.entries().begin(),
                              a.entries().end(),
                              [](Address const& e) { return e.empty(); });
      out += '[';
      for (auto const& e : a.entries()) {
        if (e.empty() && base) {
          out += '*';
        } else {
          print_address(out, e);
        }
      }
      out += ']';
    }

    // Entries of an address at `level` are addresses at level - 1; an entry
    // at level 0 is the arrow's input and prints as `*`.
    inline void print_address_at(std::string& out, Address const& a, std::size_t level) {
      out += '[';
      for (auto const& e : a.entries()) {
        if (level > 1) {
          print_address_at(out, e, level - 1);
        } else if (e.empty()) {
          out += '*';
        } else {
          print_address(out, e);
        }
      }
      out += ']';
    }

    inline Address parse_address(lexer& lx) {
      lx.expect(tok::lbracket);
      std::vector<Address> entries;
      while (true) {
        if (lx.at(tok::star)) {
          lx.next();
          entries.emplace_back();
        } else if (lx.at(tok::lbracket)) {
          entries.push_back(parse_address(lx));
        } else if (lx.at(tok::rbracket)) {
          lx.next();
          return Address(std::move(entries));
        } else {
          lx.fail("expected '[', '*' or ']' in address");
        }
      }
    }
  }  // namespace detail

  // Text of an address of unknown level: `*` for the entries of a word of
  // empty entries, `[]` elsewhere.
  inline std::string to_string(Address const& a) {
    std::string out;
    detail::print_address(out, a);
    return out;
  }

  // Text of an address whose level is known: node addresses of an
  // n-opetope have level n - 1, so [[][]] and [**] are told apart.
  inline std::string to_string(Address const& a, std::size_t level) {
    std::string out;
    detail::print_address_at(out, a, level);
    return out;
  }

  inline std::ostream& operator<<(std::ostream& os, Address const& a) {
    return os << to_string(a);
  }

  inline Address parse_address(std::string_view text) {
    detail::lexer lx(text);
    Address       a = detail::parse_address(lx);
    if (!lx.at(detail::tok::end)) {
      lx.fail("expected end of address");
    }
    return a;
  }

}  // namespace opetopes
