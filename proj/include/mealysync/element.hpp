#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "mealy.hpp"
#include "partition.hpp"

namespace mealysync {

  // Default bound on the reachable part of a product machine.
  inline constexpr std::size_t default_state_cap = 1'000'000;

  // A sequential function given by its minimal transducer, states numbered
  // breadth first from the initial state 0 with letters in declared order.
  // Two elements compute the same function iff they compare equal.
  class element {
   public:
    element() = default;

    static element identity(std::size_t k) {
      element e;
      e._k    = k;
      e._next = std::vector<state_type>(k, 0);
      e._out  = identity_permutation(k);
      return e;
    }

    // Canonical form of state `start` of the transducer (next, out).
    static element canonical(std::size_t k, std::span<state_type const> next,
                             std::span<letter_type const> out,
                             state_type                   start) {
      // restrict to the part reachable from start
      auto const              n = next.size() / k;
      std::vector<state_type> local(n, static_cast<state_type>(-1));
      std::vector<state_type> order{start};
      local[start] = 0;
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t a = 0; a < k; ++a) {
          auto r = next[order[i] * k + a];
          if (local[r] == static_cast<state_type>(-1)) {
            local[r] = static_cast<state_type>(order.size());
            order.push_back(r);
          }
        }
      }
      auto const                 m = order.size();
      std::vector<std::uint32_t> rnext(m * k);
      std::vector<letter_type>   rout(m * k);
      std::map<std::vector<letter_type>, std::uint64_t> rows;
      std::vector<std::uint64_t> initial(m);
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<letter_type> row(k);
        for (std::size_t a = 0; a < k; ++a) {
          rnext[i * k + a] = local[next[order[i] * k + a]];
          rout[i * k + a]  = out[order[i] * k + a];
          row[a]           = rout[i * k + a];
        }
        initial[i] = rows.emplace(row, rows.size()).first->second;
      }
      auto block = detail::refine_partition(m, k, rnext, initial);
      // renumber blocks breadth first from the block of state 0
      auto const              blocks = *std::max_element(block.begin(), block.end()) + 1;
      std::vector<state_type> rep(blocks, static_cast<state_type>(-1));
      for (std::size_t i = 0; i < m; ++i) {
        if (rep[block[i]] == static_cast<state_type>(-1)) {
          rep[block[i]] = static_cast<state_type>(i);
        }
      }
      std::vector<state_type> canon(blocks, static_cast<state_type>(-1));
      std::vector<std::uint32_t> bfs{block[0]};
      canon[block[0]] = 0;
      element e;
      e._k = k;
      for (std::size_t i = 0; i < bfs.size(); ++i) {
        auto r = rep[bfs[i]];
        for (std::size_t a = 0; a < k; ++a) {
          auto b = block[rnext[r * k + a]];
          if (canon[b] == static_cast<state_type>(-1)) {
            canon[b] = static_cast<state_type>(bfs.size());
            bfs.push_back(b);
          }
          e._next.push_back(canon[b]);
          e._out.push_back(rout[r * k + a]);
        }
      }
      return e;
    }

    std::size_t size() const noexcept {
      return _k == 0 ? 0 : _next.size() / _k;
    }

    std::size_t alphabet_size() const noexcept {
      return _k;
    }

    state_type next(state_type p, letter_type a) const {
      return _next[p * _k + a];
    }

    letter_type output(state_type p, letter_type a) const {
      return _out[p * _k + a];
    }

    std::span<state_type const> next_table() const noexcept {
      return _next;
    }

    std::span<letter_type const> output_table() const noexcept {
      return _out;
    }

    word_type apply(word_type const& w) const {
      word_type  out;
      state_type p = 0;
      out.reserve(w.size());
      for (auto a : w) {
        out.push_back(output(p, a));
        p = next(p, a);
      }
      return out;
    }

    bool is_identity() const {
      return *this == identity(_k);
    }

    bool is_invertible() const {
      for (state_type p = 0; p < size(); ++p) {
        permutation row(_out.begin() + p * _k, _out.begin() + (p + 1) * _k);
        if (!is_permutation(row, _k)) {
          return false;
        }
      }
      return true;
    }

    bool operator==(element const& that) const = default;

    bool operator<(element const& that) const {
      return std::tie(_k, _next, _out) < std::tie(that._k, that._next, that._out);
    }

    std::size_t hash() const noexcept {
      std::size_t h = _k;
      for (std::size_t i = 0; i < _next.size(); ++i) {
        h = h * 1000003u ^ (_next[i] * 31u + _out[i]);
      }
      return h;
    }

   private:
    std::size_t              _k = 0;
    std::vector<state_type>  _next;
    std::vector<letter_type> _out;
  };

  struct element_hash {
    std::size_t operator()(element const& e) const noexcept {
      return e.hash();
    }
  };

  inline element element_of(mealy_machine const& m, state_type q) {
    return element::canonical(m.alphabet_size(), m.automaton().table(),
                              m.outputs(), q);
  }

  inline element inverse(element const& e) {
    if (!e.is_invertible()) {
      throw error(error_kind::not_invertible, "element is not invertible");
    }
    auto const               k = e.alphabet_size();
    std::vector<state_type>  next(e.size() * k);
    std::vector<letter_type> out(e.size() * k);
    for (state_type p = 0; p < e.size(); ++p) {
      for (letter_type a = 0; a < k; ++a) {
        auto b          = e.output(p, a);
        next[p * k + b] = e.next(p, a);
        out[p * k + b]  = a;
      }
    }
    return element::canonical(k, next, out, 0);
  }

  // outer o inner: inner reads the input, outer reads inner's output.
  inline element compose(element const& outer, element const& inner,
                         std::size_t cap = default_state_cap) {
    if (outer.alphabet_size() != inner.alphabet_size()) {
      throw error(error_kind::alphabet_mismatch, "alphabets differ");
    }
    auto const k = inner.alphabet_size();
    auto const n = inner.size();
    std::unordered_map<std::uint64_t, state_type> seen;
    std::vector<std::pair<state_type, state_type>> states{{0, 0}};
    seen.emplace(0, 0);
    std::vector<state_type>  next;
    std::vector<letter_type> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
      auto [po, pi] = states[i];
      for (letter_type a = 0; a < k; ++a) {
        auto b  = inner.output(pi, a);
        auto c  = outer.output(po, b);
        auto ni = inner.next(pi, a);
        auto no = outer.next(po, b);
        auto key = static_cast<std::uint64_t>(no) * n + ni;
        auto [it, fresh]
            = seen.emplace(key, static_cast<state_type>(states.size()));
        if (fresh) {
          if (states.size() >= cap) {
            throw error(error_kind::resource_exceeded,
                        "product machine exceeds " + std::to_string(cap)
                            + " states");
          }
          states.emplace_back(no, ni);
        }
        next.push_back(it->second);
        out.push_back(c);
      }
    }
    return element::canonical(k, next, out, 0);
  }

  inline element power(element const& e, std::size_t n,
                       std::size_t cap = default_state_cap) {
    auto result = element::identity(e.alphabet_size());
    auto base   = e;
    while (n > 0) {
      if (n & 1) {
        result = compose(result, base, cap);
      }
      n >>= 1;
      if (n > 0) {
        base = compose(base, base, cap);
      }
    }
    return result;
  }

  // Canonical element of a group word, built right to left with a
  // minimization after every factor.
  inline element product(mealy_machine const& m, group_word const& g,
                         std::size_t cap = default_state_cap) {
    check_word_usable(m, g);
    auto              result = element::identity(m.alphabet_size());
    std::optional<mealy_machine> inv;
    for (auto const& f : g) {
      element factor_elem;
      if (f.exponent > 0) {
        factor_elem = element_of(m, f.state);
      } else {
        if (!inv) {
          inv = invert(m);
        }
        factor_elem = element_of(*inv, f.state);
      }
      result = compose(result, factor_elem, cap);
    }
    return result;
  }

  // The element as a named machine (states "0", "1", ...; state 0 computes
  // the element).
  inline std::pair<mealy_machine, state_type>
  to_machine(element const& e, class alphabet const& alph) {
    std::vector<state_type>  next(e.next_table().begin(), e.next_table().end());
    std::vector<letter_type> out(e.output_table().begin(), e.output_table().end());
    return {mealy_machine(dfa::with_numbered_states(alph, std::move(next)),
                          std::move(out)),
            0};
  }

  inline std::pair<mealy_machine, state_type>
  product_machine(mealy_machine const& m, group_word const& g,
                  std::size_t cap = default_state_cap) {
    return to_machine(product(m, g, cap), m.alphabet());
  }

  // m1 at q1 after m2 at q2.
  inline std::pair<mealy_machine, state_type>
  compose(mealy_machine const& m1, state_type q1, mealy_machine const& m2,
          state_type q2, std::size_t cap = default_state_cap) {
    check_same_alphabet(m1.alphabet(), m2.alphabet());
    return to_machine(compose(element_of(m1, q1), element_of(m2, q2), cap),
                      m1.alphabet());
  }

  ////////////////////////////////////////////////////////////////////////////
  // Identity tests
  ////////////////////////////////////////////////////////////////////////////

  // Words used to look for a cheap counterexample before any product is
  // built: every word of length <= 3, a.b^* and short periodic words, and a
  // few fixed pseudo-random words, all of length `len`.
  inline std::vector<word_type> probe_words(std::size_t k,
                                            std::size_t len = 256) {
    std::vector<word_type> out;
    for_each_word(k, 1, 3, [&](word_type const& w) {
      out.push_back(repeat(w, len / w.size() + 1));
      out.back().resize(len);
    });
    for (letter_type a = 0; a < k; ++a) {
      for (letter_type b = 0; b < k; ++b) {
        word_type w(len, b);
        w[0] = a;
        out.push_back(std::move(w));
      }
    }
    std::mt19937 rng(20130101u);
    for (int i = 0; i < 8; ++i) {
      word_type w(len);
      for (auto& x : w) {
        x = static_cast<letter_type>(rng() % k);
      }
      out.push_back(std::move(w));
    }
    return out;
  }

  // Exact: a counterexample when one exists among the probes, otherwise the
  // canonical product decides.
  inline bool is_identity(mealy_machine const& m, group_word const& g,
                          std::size_t cap = default_state_cap) {
    check_word_usable(m, g);
    for (auto const& w : probe_words(m.alphabet_size(), 64)) {
      if (apply_word(m, g, w) != w) {
        return false;
      }
    }
    return product(m, g, cap).is_identity();
  }

  inline bool equal_elements(mealy_machine const& m, group_word const& g1,
                             group_word const& g2,
                             std::size_t cap = default_state_cap) {
    for (auto const& w : probe_words(m.alphabet_size(), 64)) {
      if (apply_word(m, g1, w) != apply_word(m, g2, w)) {
        return false;
      }
    }
    return product(m, g1, cap) == product(m, g2, cap);
  }

}  // namespace mealysync
