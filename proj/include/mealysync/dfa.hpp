#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"

namespace mealysync {

  using state_type = std::uint32_t;

  // A set of states kept as a sorted vector without repetitions.
  using state_set = std::vector<state_type>;

  struct state_set_hash {
    std::size_t operator()(state_set const& s) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (auto q : s) {
        h ^= q + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return h;
    }
  };

  inline void normalize(state_set& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  inline state_set all_states(std::size_t n) {
    state_set s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<state_type>(i);
    }
    return s;
  }

  // Complete deterministic automaton without initial or final states: the
  // triple (Q, A, delta). State and symbol names are opaque tokens; all
  // indexing follows declaration order.
  class dfa {
   public:
    dfa() = default;

    dfa(class alphabet             alph,
        std::vector<std::string>   names,
        std::vector<state_type>    delta)
        : _alphabet(std::move(alph)),
          _names(std::move(names)),
          _delta(std::move(delta)) {
      auto const n = _names.size();
      auto const k = _alphabet.size();
      if (n == 0) {
        throw error(error_kind::invalid_argument,
                    "a dfa needs at least one state");
      }
      if (_delta.size() != n * k) {
        throw error(error_kind::invalid_argument,
                    "transition table has the wrong size");
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!mealysync::alphabet::valid_token(_names[i])) {
          throw error(error_kind::invalid_argument,
                      "invalid state name '" + _names[i] + "'");
        }
        if (!_index.emplace(_names[i], static_cast<state_type>(i)).second) {
          throw error(error_kind::invalid_argument,
                      "duplicate state '" + _names[i] + "'");
        }
      }
      for (auto q : _delta) {
        if (q >= n) {
          throw error(error_kind::unknown_state, "transition target out of range");
        }
      }
    }

    // States named "0", ..., "n-1".
    static dfa with_numbered_states(class alphabet          alph,
                                    std::vector<state_type> delta) {
      auto const n = delta.size() / alph.size();
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
      }
      return dfa(std::move(alph), std::move(names), std::move(delta));
    }

    std::size_t size() const noexcept {
      return _names.size();
    }

    std::size_t alphabet_size() const noexcept {
      return _alphabet.size();
    }

    class alphabet const& alphabet() const noexcept {
      return _alphabet;
    }

    std::string const& name(state_type q) const {
      return _names.at(q);
    }

    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    std::optional<state_type> find(std::string const& name) const {
      auto it = _index.find(name);
      if (it == _index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    state_type index(std::string const& name) const {
      auto q = find(name);
      if (!q) {
        throw error(error_kind::unknown_state, "unknown state '" + name + "'");
      }
      return *q;
    }

    state_type next(state_type q, letter_type a) const {
      return _delta[q * _alphabet.size() + a];
    }

    state_type next(state_type q, word_type const& w) const {
      for (auto a : w) {
        q = next(q, a);
      }
      return q;
    }

    state_set image(state_set const& s, letter_type a) const {
      state_set out;
      out.reserve(s.size());
      for (auto q : s) {
        out.push_back(next(q, a));
      }
      normalize(out);
      return out;
    }

    state_set image(state_set s, word_type const& w) const {
      for (auto a : w) {
        s = image(s, a);
      }
      return s;
    }

    // |Q . w|
    std::size_t rank(word_type const& w) const {
      return image(all_states(size()), w).size();
    }

    std::span<state_type const> table() const noexcept {
      return _delta;
    }

    bool is_permutation_letter(letter_type a) const {
      std::vector<bool> hit(size(), false);
      for (state_type q = 0; q < size(); ++q) {
        hit[next(q, a)] = true;
      }
      return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    }

    bool operator==(dfa const& that) const {
      return _alphabet == that._alphabet && _names == that._names
             && _delta == that._delta;
    }

   private:
    class alphabet                              _alphabet;
    std::vector<std::string>                    _names;
    std::vector<state_type>                     _delta;
    std::unordered_map<std::string, state_type> _index;
  };

  // The part of the power automaton reachable from a start subset, explored
  // breadth first with letters in declared order. Node 0 is the start set,
  // parent/via give the shortlex-least word reaching every node.
  struct subset_graph {
    std::vector<state_set>  nodes;
    std::vector<state_type> next;    // nodes.size() * k
    std::vector<state_type> parent;  // parent[0] == 0
    std::vector<letter_type> via;
    std::size_t             k = 0;

    word_type word_to(state_type node) const {
      word_type w;
      while (node != 0) {
        w.push_back(via[node]);
        node = parent[node];
      }
      std::reverse(w.begin(), w.end());
      return w;
    }
  };

  inline subset_graph explore_subsets(dfa const& d, state_set start) {
    subset_graph g;
    g.k = d.alphabet_size();
    std::unordered_map<state_set, state_type, state_set_hash> seen;
    normalize(start);
    seen.emplace(start, 0);
    g.nodes.push_back(std::move(start));
    g.parent.push_back(0);
    g.via.push_back(0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      for (letter_type a = 0; a < g.k; ++a) {
        auto img = d.image(g.nodes[i], a);
        auto [it, inserted]
            = seen.emplace(img, static_cast<state_type>(g.nodes.size()));
        if (inserted) {
          g.nodes.push_back(std::move(img));
          g.parent.push_back(static_cast<state_type>(i));
          g.via.push_back(a);
        }
        g.next.push_back(it->second);
      }
    }
    return g;
  }

}  // namespace mealysync
