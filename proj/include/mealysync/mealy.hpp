#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "alphabet.hpp"
#include "dfa.hpp"
#include "error.hpp"
#include "partition.hpp"

namespace mealysync {

  using permutation = std::vector<letter_type>;

  inline bool is_permutation(permutation const& p, std::size_t k) {
    if (p.size() != k) {
      return false;
    }
    std::vector<bool> hit(k, false);
    for (auto x : p) {
      if (x >= k || hit[x]) {
        return false;
      }
      hit[x] = true;
    }
    return true;
  }

  inline permutation identity_permutation(std::size_t k) {
    permutation p(k);
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = static_cast<letter_type>(i);
    }
    return p;
  }

  // (a b) when a != b, the identity otherwise.
  inline permutation transposition(std::size_t k, letter_type a,
                                   letter_type b) {
    auto p = identity_permutation(k);
    std::swap(p[a], p[b]);
    return p;
  }

  // Per-state output permutation; the input labelling is the one of the
  // host automaton.
  using group_coloring = std::vector<permutation>;

  // Deterministic letter-to-letter transducer (Q, A, delta, lambda).
  class mealy_machine {
   public:
    mealy_machine() = default;

    mealy_machine(class dfa d, std::vector<letter_type> lambda)
        : _dfa(std::move(d)), _lambda(std::move(lambda)) {
      auto const k = _dfa.alphabet_size();
      if (_lambda.size() != _dfa.size() * k) {
        throw error(error_kind::invalid_argument,
                    "output table has the wrong size");
      }
      for (auto b : _lambda) {
        if (b >= k) {
          throw error(error_kind::unknown_symbol, "output letter out of range");
        }
      }
      _invertible = true;
      for (state_type q = 0; q < _dfa.size() && _invertible; ++q) {
        _invertible = is_permutation(state_function(q), k);
      }
    }

    class dfa const& automaton() const noexcept {
      return _dfa;
    }

    std::size_t size() const noexcept {
      return _dfa.size();
    }

    std::size_t alphabet_size() const noexcept {
      return _dfa.alphabet_size();
    }

    class alphabet const& alphabet() const noexcept {
      return _dfa.alphabet();
    }

    std::string const& name(state_type q) const {
      return _dfa.name(q);
    }

    state_type index(std::string const& name) const {
      return _dfa.index(name);
    }

    state_type next(state_type q, letter_type a) const {
      return _dfa.next(q, a);
    }

    state_type next(state_type q, word_type const& w) const {
      return _dfa.next(q, w);
    }

    letter_type output(state_type q, letter_type a) const {
      return _lambda[q * alphabet_size() + a];
    }

    std::span<letter_type const> outputs() const noexcept {
      return _lambda;
    }

    permutation state_function(state_type q) const {
      auto const k = alphabet_size();
      return permutation(_lambda.begin() + q * k, _lambda.begin() + (q + 1) * k);
    }

    bool is_invertible() const noexcept {
      return _invertible;
    }

    // A_q(a_0 ... a_n) = lambda_q(a_0) A_{q.a_0}(a_1 ... a_n)
    word_type apply(state_type q, word_type const& w) const {
      word_type out;
      out.reserve(w.size());
      for (auto a : w) {
        out.push_back(output(q, a));
        q = next(q, a);
      }
      return out;
    }

    word_type apply_inverse(state_type q, word_type const& w) const {
      require_invertible();
      auto const k = alphabet_size();
      word_type  out;
      out.reserve(w.size());
      for (auto b : w) {
        letter_type a = 0;
        while (a < k && output(q, a) != b) {
          ++a;
        }
        out.push_back(a);
        q = next(q, a);
      }
      return out;
    }

    void require_invertible() const {
      if (!_invertible) {
        throw error(error_kind::not_invertible,
                    "some state function is not a permutation");
      }
    }

    bool operator==(mealy_machine const& that) const {
      return _dfa == that._dfa && _lambda == that._lambda;
    }

   private:
    class dfa                _dfa;
    std::vector<letter_type> _lambda;
    bool                     _invertible = false;
  };

  ////////////////////////////////////////////////////////////////////////////
  // Group words
  ////////////////////////////////////////////////////////////////////////////

  struct factor {
    state_type state;
    int        exponent;  // +1 or -1

    bool operator==(factor const&) const = default;
  };

  // A product of generators and inverses written as usual: the rightmost
  // factor acts first, so [p_n, ..., p_1] applied to u is
  // A_{p_n}(...A_{p_1}(u)).
  using group_word = std::vector<factor>;

  inline group_word generator(state_type q) {
    return {{q, 1}};
  }

  inline group_word inverse(group_word const& g) {
    group_word out(g.rbegin(), g.rend());
    for (auto& f : out) {
      f.exponent = -f.exponent;
    }
    return out;
  }

  inline group_word operator*(group_word x, group_word const& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  }

  inline group_word power(group_word const& g, long n) {
    auto       base = n < 0 ? inverse(g) : g;
    group_word out;
    for (long i = 0; i < (n < 0 ? -n : n); ++i) {
      out = out * base;
    }
    return out;
  }

  // Positive word p_1 ... p_n read as the semigroup element A_{p_1}...A_{p_n}.
  inline group_word positive_word(std::vector<state_type> const& states) {
    group_word g;
    for (auto q : states) {
      g.push_back({q, 1});
    }
    return g;
  }

  inline std::string format(mealy_machine const& m, group_word const& g) {
    if (g.empty()) {
      return "1";
    }
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i > 0) {
        out += ' ';
      }
      out += m.name(g[i].state);
      if (g[i].exponent < 0) {
        out += "^-1";
      }
    }
    return out;
  }

  // Factors separated by whitespace or '*'; "q^-1" is an inverse and "1"
  // alone (or an empty string) the identity.
  inline group_word parse_group_word(mealy_machine const& m,
                                     std::string const&   text) {
    std::string norm = text;
    std::replace(norm.begin(), norm.end(), '*', ' ');
    std::istringstream in(norm);
    group_word         g;
    std::string        tok;
    while (in >> tok) {
      if (tok == "1" && !m.automaton().find("1")) {
        continue;
      }
      int exponent = 1;
      if (tok.size() > 3 && tok.ends_with("^-1")) {
        exponent = -1;
        tok.resize(tok.size() - 3);
      }
      g.push_back({m.index(tok), exponent});
    }
    return g;
  }

  inline void check_word_usable(mealy_machine const& m, group_word const& g) {
    for (auto const& f : g) {
      if (f.state >= m.size()) {
        throw error(error_kind::unknown_state, "factor state out of range");
      }
      if (f.exponent != 1 && f.exponent != -1) {
        throw error(error_kind::invalid_argument, "exponents must be +1 or -1");
      }
      if (f.exponent < 0) {
        m.require_invertible();
      }
    }
  }

  inline word_type apply_word(mealy_machine const& m, group_word const& g,
                              word_type w) {
    check_word_usable(m, g);
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
      w = it->exponent > 0 ? m.apply(it->state, w)
                           : m.apply_inverse(it->state, w);
    }
    return w;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////////

  // M(A, chi): outputs given by a per-state permutation.
  inline mealy_machine color(dfa const& d, group_coloring const& chi) {
    auto const k = d.alphabet_size();
    if (chi.size() != d.size()) {
      throw error(error_kind::not_bijective, "coloring has the wrong size");
    }
    std::vector<letter_type> lambda;
    lambda.reserve(d.size() * k);
    for (state_type q = 0; q < d.size(); ++q) {
      if (!is_permutation(chi[q], k)) {
        throw error(error_kind::not_bijective,
                    "coloring at state " + d.name(q) + " is not a bijection");
      }
      lambda.insert(lambda.end(), chi[q].begin(), chi[q].end());
    }
    return mealy_machine(d, std::move(lambda));
  }

  inline group_coloring identity_coloring(dfa const& d) {
    return group_coloring(d.size(), identity_permutation(d.alphabet_size()));
  }

  // State q reads b = lambda_q(a), writes a and moves to q.a.
  inline mealy_machine invert(mealy_machine const& m) {
    m.require_invertible();
    auto const              k = m.alphabet_size();
    std::vector<state_type> delta(m.size() * k);
    std::vector<letter_type> lambda(m.size() * k);
    for (state_type q = 0; q < m.size(); ++q) {
      for (letter_type a = 0; a < k; ++a) {
        auto b              = m.output(q, a);
        delta[q * k + b]    = m.next(q, a);
        lambda[q * k + b]   = a;
      }
    }
    return mealy_machine(
        dfa(m.alphabet(), m.automaton().names(), std::move(delta)),
        std::move(lambda));
  }

  // Coarsest partition of the states by the sequential function they
  // compute: block ids numbered by first occurrence.
  inline std::vector<std::uint32_t> behaviour_classes(mealy_machine const& m) {
    auto const k = m.alphabet_size();
    std::map<permutation, std::uint64_t> rows;
    std::vector<std::uint64_t>           initial(m.size());
    for (state_type q = 0; q < m.size(); ++q) {
      initial[q] = rows.emplace(m.state_function(q), rows.size()).first->second;
    }
    return detail::refine_partition(m.size(), k, m.automaton().table(),
                                    initial);
  }

  // Quotient by behavioural equivalence; each block is named after its first
  // state. Every state of the input keeps computing the same function as its
  // block.
  inline mealy_machine minimize(mealy_machine const& m) {
    auto const k     = m.alphabet_size();
    auto       block = behaviour_classes(m);
    auto       count = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<std::string> names(count);
    std::vector<state_type>  rep(count, static_cast<state_type>(-1));
    for (state_type q = 0; q < m.size(); ++q) {
      if (rep[block[q]] == static_cast<state_type>(-1)) {
        rep[block[q]]   = q;
        names[block[q]] = m.name(q);
      }
    }
    std::vector<state_type>  delta(count * k);
    std::vector<letter_type> lambda(count * k);
    for (std::size_t b = 0; b < count; ++b) {
      for (letter_type a = 0; a < k; ++a) {
        delta[b * k + a]  = block[m.next(rep[b], a)];
        lambda[b * k + a] = m.output(rep[b], a);
      }
    }
    return mealy_machine(dfa(m.alphabet(), std::move(names), std::move(delta)),
                         std::move(lambda));
  }

  inline bool is_reduced(mealy_machine const& m) {
    auto block = behaviour_classes(m);
    return *std::max_element(block.begin(), block.end()) + 1 == m.size();
  }

  // For two states with different functions, a shortest word telling them
  // apart (shortlex-least), found by breadth-first search on pairs.
  inline std::optional<word_type> distinguishing_word(mealy_machine const& m,
                                                      state_type p,
                                                      state_type q) {
    auto const n = m.size();
    auto const k = m.alphabet_size();
    std::vector<std::int64_t> parent(n * n, -2);
    std::vector<letter_type>  via(n * n, 0);
    std::vector<std::size_t>  queue{p * n + q};
    parent[p * n + q] = -1;
    auto word_to      = [&](std::size_t x) {
      word_type w;
      while (parent[x] >= 0) {
        w.push_back(via[x]);
        x = static_cast<std::size_t>(parent[x]);
      }
      std::reverse(w.begin(), w.end());
      return w;
    };
    for (std::size_t i = 0; i < queue.size(); ++i) {
      auto x = queue[i];
      auto s = static_cast<state_type>(x / n), t = static_cast<state_type>(x % n);
      for (letter_type a = 0; a < k; ++a) {
        if (m.output(s, a) != m.output(t, a)) {
          auto w = word_to(x);
          w.push_back(a);
          return w;
        }
      }
      for (letter_type a = 0; a < k; ++a) {
        auto y = m.next(s, a) * n + m.next(t, a);
        if (parent[y] == -2) {
          parent[y] = static_cast<std::int64_t>(x);
          via[y]    = a;
          queue.push_back(y);
        }
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Wreath recursion
  ////////////////////////////////////////////////////////////////////////////

  // g = (g_0, ..., g_{|A|-1}) sigma_g
  struct wreath_recursion_result {
    permutation             root;      // sigma_g(a) = g o a
    std::vector<group_word> sections;  // g_a
  };

  inline wreath_recursion_result wreath_recursion(mealy_machine const& m,
                                                  group_word const&    g) {
    check_word_usable(m, g);
    auto const              k = m.alphabet_size();
    wreath_recursion_result r;
    for (letter_type a = 0; a < k; ++a) {
      auto       c = a;
      group_word section(g.size());
      for (std::size_t i = g.size(); i-- > 0;) {
        auto q = g[i].state;
        if (g[i].exponent > 0) {
          section[i] = {m.next(q, c), 1};
          c          = m.output(q, c);
        } else {
          letter_type x = 0;
          while (m.output(q, x) != c) {
            ++x;
          }
          section[i] = {m.next(q, x), -1};
          c          = x;
        }
      }
      r.root.push_back(c);
      r.sections.push_back(std::move(section));
    }
    return r;
  }

  // Reads a block (a word of length k seen as a single letter of A^k) from
  // state q: the output block and the state reached.
  inline std::pair<word_type, state_type>
  apply_block(mealy_machine const& m, state_type q, word_type const& block) {
    return {m.apply(q, block), m.next(q, block)};
  }

}  // namespace mealysync
