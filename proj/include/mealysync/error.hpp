#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mealysync {

  enum class error_kind {
    parse,
    unknown_state,
    unknown_symbol,
    alphabet_mismatch,
    not_invertible,
    not_bijective,
    not_synchronizing,
    no_unique_sink,
    not_an_ideal,
    not_reset,
    not_simple,
    theorem_violation,
    hypothesis_failed,
    resource_exceeded,
    nilpotent,
    no_sink,
    non_abelian,
    prefix_too_short,
    invalid_group,
    wrong_family,
    invalid_argument
  };

  inline char const* to_string(error_kind k) noexcept {
    switch (k) {
      case error_kind::parse: return "parse";
      case error_kind::unknown_state: return "unknown-state";
      case error_kind::unknown_symbol: return "unknown-symbol";
      case error_kind::alphabet_mismatch: return "alphabet-mismatch";
      case error_kind::not_invertible: return "not-invertible";
      case error_kind::not_bijective: return "not-bijective";
      case error_kind::not_synchronizing: return "not-synchronizing";
      case error_kind::no_unique_sink: return "no-unique-sink";
      case error_kind::not_an_ideal: return "not-an-ideal";
      case error_kind::not_reset: return "not-reset";
      case error_kind::not_simple: return "not-simple";
      case error_kind::theorem_violation: return "theorem-violation";
      case error_kind::hypothesis_failed: return "hypothesis-failed";
      case error_kind::resource_exceeded: return "resource-exceeded";
      case error_kind::nilpotent: return "nilpotent";
      case error_kind::no_sink: return "no-sink";
      case error_kind::non_abelian: return "non-abelian";
      case error_kind::prefix_too_short: return "prefix-too-short";
      case error_kind::invalid_group: return "invalid-group";
      case error_kind::wrong_family: return "wrong-family";
      case error_kind::invalid_argument: return "invalid-argument";
    }
    return "unknown";
  }

  class error : public std::runtime_error {
   public:
    error(error_kind kind, std::string const& what)
        : std::runtime_error(what), _kind(kind) {}

    error_kind kind() const noexcept {
      return _kind;
    }

   private:
    error_kind _kind;
  };

  // Raised by the text readers; line() is 1-based, 0 when the problem is not
  // tied to a single line (e.g. a missing transition).
  class parse_error : public error {
   public:
    parse_error(std::size_t line, std::string const& msg)
        : error(error_kind::parse,
                line == 0 ? msg : "line " + std::to_string(line) + ": " + msg),
          _line(line) {}

    std::size_t line() const noexcept {
      return _line;
    }

   private:
    std::size_t _line;
  };

}  // namespace mealysync
