#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "../error.hpp"

namespace opetopes::detail {

  enum class tok {
    end,
    lbracket,   // [
    rbracket,   // ]
    star,       // *
    lbrace,     // {
    rbrace,     // }
    comma,      // ,
    colon,      // :
    arrow,      // ->
    larrow,     // <-
    lshell,     // <<
    rshell,     // >>
    equals,     // =
    lparen,     // (
    rparen,     // )
    ident,      // bare word, possibly starting with a digit
    quoted      // "..."
  };

  inline char const* tok_name(tok t) {
    switch (t) {
      case tok::end:
        return "end of input";
      case tok::lbracket:
        return "'['";
      case tok::rbracket:
        return "']'";
      case tok::star:
        return "'*'";
      case tok::lbrace:
        return "'{'";
      case tok::rbrace:
        return "'}'";
      case tok::comma:
        return "','";
      case tok::colon:
        return "':'";
      case tok::arrow:
        return "'->'";
      case tok::larrow:
        return "'<-'";
      case tok::lshell:
        return "'<<'";
      case tok::rshell:
        return "'>>'";
      case tok::equals:
        return "'='";
      case tok::lparen:
        return "'('";
      case tok::rparen:
        return "')'";
      case tok::ident:
        return "name";
      case tok::quoted:
        return "quoted name";
    }
    return "?";
  }

  struct token {
    tok         kind = tok::end;
    std::string text;
    std::size_t line   = 1;
    std::size_t column = 1;
  };

  inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'
           || c == '\'';
  }

  // Hand-written tokenizer shared by every textual format. Whitespace and
  // '#' comments are skipped between tokens.
  class lexer {
   public:
    explicit lexer(std::string_view src) : _src(src) {
      advance();
    }

    token const& peek() const noexcept {
      return _cur;
    }

    token next() {
      token t = _cur;
      advance();
      return t;
    }

    bool at(tok k) const noexcept {
      return _cur.kind == k;
    }

    bool at_word(std::string_view w) const {
      return _cur.kind == tok::ident && _cur.text == w;
    }

    token expect(tok k) {
      if (_cur.kind != k) {
        fail(std::string("expected ") + tok_name(k));
      }
      return next();
    }

    void expect_word(std::string_view w) {
      if (!at_word(w)) {
        fail("expected '" + std::string(w) + "'");
      }
      next();
    }

    [[noreturn]] void fail(std::string const& what) const {
      std::string found = _cur.kind == tok::end
                              ? std::string("end of input")
                              : "'" + _cur.text + "'";
      throw parse_error(_cur.line, _cur.column, what + ", found " + found);
    }

   private:
    void skip_blank() {
      while (_pos < _src.size()) {
        char c = _src[_pos];
        if (c == '\n') {
          ++_line;
          _col = 1;
          ++_pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
          ++_col;
          ++_pos;
        } else if (c == '#') {
          while (_pos < _src.size() && _src[_pos] != '\n') {
            ++_pos;
          }
        } else {
          break;
        }
      }
    }

    void advance() {
      skip_blank();
      _cur        = token{};
      _cur.line   = _line;
      _cur.column = _col;
      if (_pos >= _src.size()) {
        _cur.kind = tok::end;
        return;
      }
      char c    = _src[_pos];
      auto two  = _src.substr(_pos, 2);
      auto take = [&](tok k, std::size_t n) {
        _cur.kind = k;
        _cur.text = std::string(_src.substr(_pos, n));
        _pos += n;
        _col += n;
      };
      if (two == "->") {
        take(tok::arrow, 2);
      } else if (two == "<-") {
        take(tok::larrow, 2);
      } else if (two == "<<") {
        take(tok::lshell, 2);
      } else if (two == ">>") {
        take(tok::rshell, 2);
      } else if (c == '[') {
        take(tok::lbracket, 1);
      } else if (c == ']') {
        take(tok::rbracket, 1);
      } else if (c == '*') {
        take(tok::star, 1);
      } else if (c == '{') {
        take(tok::lbrace, 1);
      } else if (c == '}') {
        take(tok::rbrace, 1);
      } else if (c == ',') {
        take(tok::comma, 1);
      } else if (c == ':') {
        take(tok::colon, 1);
      } else if (c == '=') {
        take(tok::equals, 1);
      } else if (c == '(') {
        take(tok::lparen, 1);
      } else if (c == ')') {
        take(tok::rparen, 1);
      } else if (c == '"') {
        std::size_t end = _pos + 1;
        while (end < _src.size() && _src[end] != '"' && _src[end] != '\n') {
          ++end;
        }
        if (end >= _src.size() || _src[end] != '"') {
          throw parse_error(_line, _col, "unterminated quoted name");
        }
        _cur.kind = tok::quoted;
        _cur.text = std::string(_src.substr(_pos + 1, end - _pos - 1));
        _col += end + 1 - _pos;
        _pos = end + 1;
      } else if (is_ident_char(c)) {
        std::size_t end = _pos;
        while (end < _src.size() && is_ident_char(_src[end])) {
          ++end;
        }
        take(tok::ident, end - _pos);
      } else {
        throw parse_error(
            _line, _col, std::string("unexpected character '") + c + "'");
      }
    }

    std::string_view _src;
    std::size_t      _pos  = 0;
    std::size_t      _line = 1;
    std::size_t      _col  = 1;
    token            _cur;
  };

  // Names print bare when they lex as a single identifier other than point
  // or arrow, quoted otherwise.
  inline std::string quote_name(std::string const& name) {
    bool bare = !name.empty() && name != "point" && name != "arrow";
    for (char c : name) {
      bare = bare && is_ident_char(c);
    }
    return bare ? name : "\"" + name + "\"";
  }

}  // namespace opetopes::detail
