#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opetopes {

  // Base class of everything thrown by the library.
  class error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  class parse_error : public error {
   public:
    parse_error(std::size_t line, std::size_t column, std::string const& what)
        : error("line " + std::to_string(line) + ", column "
                + std::to_string(column) + ": " + what),
          _line(line),
          _column(column) {}

    std::size_t line() const noexcept {
      return _line;
    }
    std::size_t column() const noexcept {
      return _column;
    }

   private:
    std::size_t _line;
    std::size_t _column;
  };

  class address_not_found : public error {
   public:
    using error::error;
  };

  // A tree or cell whose colours do not match along an edge.
  class coherence_error : public error {
   public:
    using error::error;
  };

  class resource_limit : public error {
   public:
    using error::error;
  };

  class unknown_generator : public error {
   public:
    using error::error;
  };

  // Result of a report-style check: empty problem list means pass.
  struct Report {
    std::vector<std::string> problems;
    std::size_t              checked = 0;

    bool ok() const noexcept {
      return problems.empty();
    }
    void fail(std::string msg) {
      problems.push_back(std::move(msg));
    }
    void merge(Report const& other) {
      problems.insert(
          problems.end(), other.problems.begin(), other.problems.end());
      checked += other.checked;
    }
  };

}  // namespace opetopes
