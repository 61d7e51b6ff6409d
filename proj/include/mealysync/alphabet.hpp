#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace mealysync {

  using letter_type = std::uint32_t;
  using word_type   = std::vector<letter_type>;

  // Shortlex order: shorter first, then lexicographic on letter indices,
  // i.e. on the declared symbol order of the alphabet.
  inline bool shortlex_less(word_type const& x, word_type const& y) {
    if (x.size() != y.size()) {
      return x.size() < y.size();
    }
    return x < y;
  }

  inline word_type concat(word_type x, word_type const& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  }

  inline word_type repeat(word_type const& x, std::size_t n) {
    word_type out;
    out.reserve(x.size() * n);
    for (std::size_t i = 0; i < n; ++i) {
      out.insert(out.end(), x.begin(), x.end());
    }
    return out;
  }

  // Advances w to the next word of the same length in lexicographic order.
  // Returns false after the last word (all letters k - 1).
  inline bool next_word(word_type& w, std::size_t k) {
    for (std::size_t i = w.size(); i-- > 0;) {
      if (w[i] + 1 < k) {
        ++w[i];
        std::fill(w.begin() + i + 1, w.end(), 0);
        return true;
      }
    }
    return false;
  }

  // Calls f(w) for every word over k letters with min_len <= |w| <= max_len,
  // in shortlex order.
  template <typename F>
  void for_each_word(std::size_t k, std::size_t min_len, std::size_t max_len,
                     F&& f) {
    for (std::size_t n = min_len; n <= max_len; ++n) {
      word_type w(n, 0);
      do {
        f(static_cast<word_type const&>(w));
      } while (next_word(w, k));
    }
  }

  class alphabet {
   public:
    alphabet() = default;

    explicit alphabet(std::vector<std::string> symbols)
        : _symbols(std::move(symbols)) {
      if (_symbols.empty()) {
        throw error(error_kind::invalid_argument, "alphabet must be nonempty");
      }
      for (std::size_t i = 0; i < _symbols.size(); ++i) {
        auto const& s = _symbols[i];
        if (!valid_token(s)) {
          throw error(error_kind::invalid_argument,
                      "invalid symbol '" + s + "'");
        }
        if (!_index.emplace(s, static_cast<letter_type>(i)).second) {
          throw error(error_kind::invalid_argument,
                      "duplicate symbol '" + s + "'");
        }
        _single_char = _single_char && s.size() == 1;
      }
    }

    // The alphabet {0, 1, ..., n - 1}.
    static alphabet numeric(std::size_t n) {
      std::vector<std::string> syms;
      for (std::size_t i = 0; i < n; ++i) {
        syms.push_back(std::to_string(i));
      }
      return alphabet(std::move(syms));
    }

    static bool valid_token(std::string_view s) {
      if (s.empty()) {
        return false;
      }
      return std::none_of(s.begin(), s.end(), [](char c) {
        return c == '|' || c == '#' || c == ',' || c == ' ' || c == '\t'
               || c == '\n' || c == '\r';
      });
    }

    std::size_t size() const noexcept {
      return _symbols.size();
    }

    std::string const& symbol(letter_type a) const {
      return _symbols.at(a);
    }

    std::vector<std::string> const& symbols() const noexcept {
      return _symbols;
    }

    std::optional<letter_type> find(std::string_view s) const {
      auto it = _index.find(std::string(s));
      if (it == _index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    letter_type index(std::string_view s) const {
      auto a = find(s);
      if (!a) {
        throw error(error_kind::unknown_symbol,
                    "unknown symbol '" + std::string(s) + "'");
      }
      return *a;
    }

    // Words print as plain concatenation when every symbol is one character,
    // and comma separated otherwise. The empty word prints as "ε".
    std::string format(word_type const& w) const {
      if (w.empty()) {
        return "ε";
      }
      std::string out;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0 && !_single_char) {
          out += ',';
        }
        out += symbol(w[i]);
      }
      return out;
    }

    word_type parse_word(std::string_view text) const {
      word_type w;
      if (text.empty() || text == "ε") {
        return w;
      }
      if (text.find(',') != std::string_view::npos || !_single_char) {
        std::size_t start = 0;
        while (start <= text.size()) {
          auto end = text.find(',', start);
          if (end == std::string_view::npos) {
            end = text.size();
          }
          w.push_back(index(text.substr(start, end - start)));
          start = end + 1;
        }
        return w;
      }
      for (char c : text) {
        w.push_back(index(std::string_view(&c, 1)));
      }
      return w;
    }

    bool operator==(alphabet const& that) const {
      return _symbols == that._symbols;
    }

    bool operator!=(alphabet const& that) const {
      return !(*this == that);
    }

   private:
    std::vector<std::string>                     _symbols;
    std::unordered_map<std::string, letter_type> _index;
    bool                                         _single_char = true;
  };

  inline void check_same_alphabet(alphabet const& x, alphabet const& y) {
    if (x != y) {
      throw error(error_kind::alphabet_mismatch, "alphabets differ");
    }
  }

}  // namespace mealysync
