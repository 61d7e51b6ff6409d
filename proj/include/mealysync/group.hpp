#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "classify.hpp"
#include "dfa.hpp"
#include "element.hpp"
#include "error.hpp"
#include "mealy.hpp"

namespace mealysync {

  ////////////////////////////////////////////////////////////////////////////
  // Group enumeration
  ////////////////////////////////////////////////////////////////////////////

  struct element_table {
    enum class status { closed, cap_exceeded };
    status                  state = status::closed;
    std::vector<element>    elements;  // breadth first, identity first
    std::vector<group_word> words;     // one shortest word per element
    std::vector<std::size_t> count_by_length;

    bool closed() const noexcept {
      return state == status::closed;
    }

    std::size_t order() const noexcept {
      return elements.size();
    }
  };

  // Breadth-first closure of {1} under left multiplication by generators
  // and their inverses. Elements are canonical transducers, so membership is
  // exact.
  inline element_table enumerate_group(mealy_machine const& m,
                                       std::size_t          element_cap,
                                       std::size_t state_cap = default_state_cap) {
    m.require_invertible();
    auto const           inv = invert(m);
    std::vector<element> gens;
    std::vector<factor>  gen_factor;
    for (state_type q = 0; q < m.size(); ++q) {
      gens.push_back(element_of(m, q));
      gen_factor.push_back({q, 1});
      gens.push_back(element_of(inv, q));
      gen_factor.push_back({q, -1});
    }
    element_table t;
    std::unordered_map<element, std::size_t, element_hash> seen;
    std::vector<std::size_t>                               length{0};
    t.elements.push_back(element::identity(m.alphabet_size()));
    t.words.emplace_back();
    t.count_by_length.push_back(1);
    seen.emplace(t.elements[0], 0);
    for (std::size_t i = 0; i < t.elements.size(); ++i) {
      for (std::size_t j = 0; j < gens.size(); ++j) {
        auto x = compose(gens[j], t.elements[i], state_cap);
        if (seen.contains(x)) {
          continue;
        }
        if (t.elements.size() >= element_cap) {
          t.state = element_table::status::cap_exceeded;
          return t;
        }
        group_word w{gen_factor[j]};
        w.insert(w.end(), t.words[i].begin(), t.words[i].end());
        seen.emplace(x, t.elements.size());
        t.elements.push_back(std::move(x));
        t.words.push_back(std::move(w));
        length.push_back(length[i] + 1);
        if (t.count_by_length.size() <= length.back()) {
          t.count_by_length.push_back(0);
        }
        ++t.count_by_length[length.back()];
      }
    }
    return t;
  }

  // Number of distinct elements of S(A) given by positive words of each
  // length 1..max_len.
  inline std::vector<std::size_t>
  semigroup_counts_by_length(mealy_machine const& m, std::size_t max_len,
                             std::size_t state_cap = default_state_cap) {
    std::vector<element> gens;
    for (state_type q = 0; q < m.size(); ++q) {
      gens.push_back(element_of(m, q));
    }
    std::vector<std::size_t> out;
    std::vector<element>     level{element::identity(m.alphabet_size())};
    for (std::size_t n = 1; n <= max_len; ++n) {
      std::unordered_map<element, char, element_hash> seen;
      std::vector<element>                            next;
      for (auto const& x : level) {
        for (auto const& g : gens) {
          auto y = compose(g, x, state_cap);
          if (seen.emplace(y, 0).second) {
            next.push_back(std::move(y));
          }
        }
      }
      out.push_back(next.size());
      level = std::move(next);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Element orders
  ////////////////////////////////////////////////////////////////////////////

  struct order_result {
    bool        finite = false;  // false: order exceeds the cap
    std::size_t order  = 0;
  };

  // Least n <= cap with g^n = 1. Orbits of probe words give exact lower
  // bounds (the order is a multiple of every orbit length); the candidate
  // is then confirmed on the canonical transducer.
  inline order_result element_order(mealy_machine const& m, group_word const& g,
                                    std::size_t                   cap,
                                    std::vector<word_type> const& extra_probes = {},
                                    std::size_t state_cap = default_state_cap) {
    m.require_invertible();
    check_word_usable(m, g);
    auto probes = probe_words(m.alphabet_size());
    probes.insert(probes.end(), extra_probes.begin(), extra_probes.end());
    std::size_t base = 1;
    for (auto const& w : probes) {
      auto        x      = apply_word(m, g, w);
      std::size_t period = 1;
      while (x != w) {
        if (++period > cap) {
          return {false, 0};
        }
        x = apply_word(m, g, x);
      }
      base = std::lcm(base, period);
      if (base > cap) {
        return {false, 0};
      }
    }
    auto const e = product(m, g, state_cap);
    auto const h = power(e, base, state_cap);
    if (h.is_identity()) {
      return {true, base};
    }
    auto x = h;
    for (std::size_t n = 2; n * base <= cap; ++n) {
      x = compose(h, x, state_cap);
      if (x.is_identity()) {
        return {true, n * base};
      }
    }
    return {false, 0};
  }

  ////////////////////////////////////////////////////////////////////////////
  // Relations among positive words
  ////////////////////////////////////////////////////////////////////////////

  // All pairs (w1, w2), w1 shortlex-before w2, of positive words of length
  // 1..max_len defining the same element.
  inline std::vector<std::pair<group_word, group_word>>
  relation_search(mealy_machine const& m, std::size_t max_len,
                  std::size_t state_cap = default_state_cap) {
    std::vector<element> gens;
    for (state_type q = 0; q < m.size(); ++q) {
      gens.push_back(element_of(m, q));
    }
    std::vector<group_word> words;
    std::vector<element>    elems;
    std::vector<group_word> level_words{{}};
    std::vector<element>    level_elems{element::identity(m.alphabet_size())};
    for (std::size_t n = 1; n <= max_len; ++n) {
      std::vector<group_word> nw;
      std::vector<element>    ne;
      for (state_type q = 0; q < m.size(); ++q) {
        for (std::size_t i = 0; i < level_words.size(); ++i) {
          group_word w{{q, 1}};
          w.insert(w.end(), level_words[i].begin(), level_words[i].end());
          nw.push_back(std::move(w));
          ne.push_back(compose(gens[q], level_elems[i], state_cap));
        }
      }
      words.insert(words.end(), nw.begin(), nw.end());
      elems.insert(elems.end(), ne.begin(), ne.end());
      level_words = std::move(nw);
      level_elems = std::move(ne);
    }
    std::unordered_map<element, std::vector<std::size_t>, element_hash> groups;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      groups[elems[i]].push_back(i);
    }
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (auto const& [e, members] : groups) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          idx.emplace_back(members[i], members[j]);
        }
      }
    }
    // words were generated in shortlex order of their state sequences
    std::sort(idx.begin(), idx.end());
    std::vector<std::pair<group_word, group_word>> out;
    out.reserve(idx.size());
    for (auto [i, j] : idx) {
      out.emplace_back(words[i], words[j]);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // All group colorings of a DFA
  ////////////////////////////////////////////////////////////////////////////

  // Odometer over per-state permutations in lexicographic order; yields
  // (|A|!)^|Q| colorings.
  class coloring_enumerator {
   public:
    explicit coloring_enumerator(dfa const& d)
        : _current(identity_coloring(d)), _k(d.alphabet_size()) {}

    group_coloring const& current() const noexcept {
      return _current;
    }

    // Moves to the next coloring; false after the last one.
    bool advance() {
      for (std::size_t q = _current.size(); q-- > 0;) {
        if (std::next_permutation(_current[q].begin(), _current[q].end())) {
          return true;
        }
        // wrapped around to the identity; carry into the previous state
      }
      return false;
    }

    // (|A|!)^|Q|, saturating at SIZE_MAX
    std::size_t total() const noexcept {
      std::size_t f = 1;
      for (std::size_t i = 2; i <= _k; ++i) {
        f *= i;
      }
      std::size_t t = 1;
      for (std::size_t q = 0; q < _current.size(); ++q) {
        if (t > SIZE_MAX / f) {
          return SIZE_MAX;
        }
        t *= f;
      }
      return t;
    }

   private:
    group_coloring _current;
    std::size_t    _k;
  };

  ////////////////////////////////////////////////////////////////////////////
  // Colorings containing an infinite cyclic subgroup
  ////////////////////////////////////////////////////////////////////////////

  struct adding_coloring_result {
    group_coloring coloring;
    state_type     q0 = 0;
    std::size_t    k  = 0;  // cycle length
    std::size_t    d  = 0;  // length of the path to the sink
    word_type      cycle;   // x_0 ... x_{k-1}, q0 . cycle = q0
    word_type      path;    // y_0 ... y_{d-1}, q0 . path = sink
    // the two blocks of length k on which q0 acts as the adding machine:
    // q0 o block0 = block1 with q0 . block0 = q0, q0 o block1 = block0
    word_type block0, block1;
    bool      short_path = true;  // d <= k
  };

  namespace detail {
    // shortest (shortlex) word from `from` to `to` using only states with
    // allowed[state]; nullopt if none. With from == to a nonempty cycle is
    // sought.
    inline std::optional<word_type> shortest_path(dfa const& d, state_type from,
                                                  state_type               to,
                                                  std::vector<char> const& allowed) {
      auto const              n = d.size();
      std::vector<state_type> parent(n, static_cast<state_type>(-1));
      std::vector<letter_type> via(n, 0);
      std::vector<state_type>  queue;
      for (letter_type a = 0; a < d.alphabet_size(); ++a) {
        auto r = d.next(from, a);
        if (r == to) {
          return word_type{a};
        }
        if (allowed[r] && parent[r] == static_cast<state_type>(-1)) {
          parent[r] = from;
          via[r]    = a;
          queue.push_back(r);
        }
      }
      for (std::size_t i = 0; i < queue.size(); ++i) {
        auto p = queue[i];
        for (letter_type a = 0; a < d.alphabet_size(); ++a) {
          auto r = d.next(p, a);
          if (r == to) {
            word_type w{a};
            for (auto x = p;; x = parent[x]) {
              w.push_back(via[x]);
              if (parent[x] == from) {
                break;
              }
            }
            std::reverse(w.begin(), w.end());
            return w;
          }
          if (allowed[r] && parent[r] == static_cast<state_type>(-1)
              && r != from) {
            parent[r] = p;
            via[r]    = a;
            queue.push_back(r);
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace detail

  // q0 lies on a sink-avoiding cycle (labelled x) and leaves it along a
  // path (labelled y) to the sink none of whose later states lies on a
  // sink-avoiding cycle. Candidates minimize (k, d, q0), words shortlex.
  inline adding_coloring_result adding_machine_coloring(dfa const& d) {
    if (d.alphabet_size() < 2) {
      throw error(error_kind::invalid_argument, "need at least two letters");
    }
    auto sk = sink_state(d);
    if (!sk.unique()) {
      throw error(error_kind::no_sink, "no unique sink state");
    }
    if (!pairs_synchronizable(d)) {
      throw error(error_kind::not_synchronizing, "automaton is not synchronizing");
    }
    if (is_nilpotent(d)) {
      throw error(error_kind::nilpotent, "automaton is nilpotent");
    }
    auto const s    = sk.state;
    auto const n    = d.size();
    auto       keep = detail::all_but(n, s);
    auto       info = detail::sccs(d, keep);
    // states on some sink-avoiding cycle
    std::vector<char> cyclic(n, 0);
    for (state_type q = 0; q < n; ++q) {
      cyclic[q] = keep[q] && info.nontrivial[info.comp[q]];
    }
    std::vector<char> acyclic(n, 0);
    for (state_type q = 0; q < n; ++q) {
      acyclic[q] = !cyclic[q];
    }
    std::optional<adding_coloring_result> best;
    for (state_type q0 = 0; q0 < n; ++q0) {
      if (!cyclic[q0]) {
        continue;
      }
      std::vector<char> same(n, 0);
      for (state_type r = 0; r < n; ++r) {
        same[r] = cyclic[r] && info.comp[r] == info.comp[q0];
      }
      auto cyc = detail::shortest_path(d, q0, q0, same);
      // path: first letter to a non-cyclic state, then inside non-cyclic
      // states to the sink
      std::optional<word_type> path;
      for (letter_type a = 0; a < d.alphabet_size(); ++a) {
        auto p1 = d.next(q0, a);
        if (cyclic[p1]) {
          continue;
        }
        word_type w{a};
        if (p1 != s) {
          auto rest = detail::shortest_path(d, p1, s, acyclic);
          if (!rest) {
            continue;
          }
          w.insert(w.end(), rest->begin(), rest->end());
        }
        if (!path || shortlex_less(w, *path)) {
          path = std::move(w);
        }
      }
      if (!cyc || !path) {
        continue;
      }
      if (best
          && std::make_pair(best->k, best->d)
                 <= std::make_pair(cyc->size(), path->size())) {
        continue;
      }
      adding_coloring_result r;
      r.q0    = q0;
      r.k     = cyc->size();
      r.d     = path->size();
      r.cycle = *cyc;
      r.path  = *path;
      best    = std::move(r);
    }
    if (!best) {
      throw error(error_kind::hypothesis_failed,
                  "no sink-avoiding cycle with a path to the sink");
    }
    auto&      r = *best;
    auto const k = d.alphabet_size();
    r.coloring   = identity_coloring(d);
    r.short_path = r.d <= r.k;
    r.block0     = r.cycle;
    if (r.short_path) {
      // cycle edges x_i | y_i for i < d, path edges y_i | x_i
      state_type q = r.q0, p = r.q0;
      for (std::size_t i = 0; i < r.d; ++i) {
        r.coloring[q] = transposition(k, r.cycle[i], r.path[i]);
        r.coloring[p] = transposition(k, r.cycle[i], r.path[i]);
        q             = d.next(q, r.cycle[i]);
        p             = d.next(p, r.path[i]);
      }
      r.block1 = r.path;
      r.block1.insert(r.block1.end(), r.cycle.begin() + r.d, r.cycle.end());
    } else {
      // swap x_0 and y_0 at q0 only; q0 . y_0 never returns to q0
      r.coloring[r.q0] = transposition(k, r.cycle[0], r.path[0]);
      r.block1         = r.cycle;
      r.block1[0]      = r.path[0];
    }
    return r;
  }

  // The adding-machine recursion of q0 on the blocks: q0 o b0 = b1 staying
  // at q0, q0 o b1 = b0 leaving to a state acting as the identity on blocks
  // (the sink when d <= k).
  inline bool verify_block_recursion(mealy_machine const&          m,
                                     adding_coloring_result const& r) {
    auto [o0, n0] = apply_block(m, r.q0, r.block0);
    auto [o1, n1] = apply_block(m, r.q0, r.block1);
    if (o0 != r.block1 || n0 != r.q0 || o1 != r.block0) {
      return false;
    }
    if (r.short_path) {
      auto s = sink_state(m.automaton());
      return s.unique() && n1 == s.state;
    }
    return true;
  }

  // Writes a word over the blocks {b0, b1} given by bits (false -> b0).
  inline word_type block_word(adding_coloring_result const& r,
                              std::vector<bool> const&      bits) {
    word_type w;
    for (bool b : bits) {
      auto const& blk = b ? r.block1 : r.block0;
      w.insert(w.end(), blk.begin(), blk.end());
    }
    return w;
  }

  // q0^{1 + 2^n} applied to b0^{n+2} equals b1^n b0 b1^2, for n = 0..max_n.
  inline bool verify_prefix_law(mealy_machine const&          m,
                                adding_coloring_result const& r,
                                std::size_t                   max_n) {
    for (std::size_t n = 0; n <= max_n; ++n) {
      auto w = block_word(r, std::vector<bool>(n + 2, false));
      for (std::size_t i = 0; i < 1 + (std::size_t{1} << n); ++i) {
        w = m.apply(r.q0, w);
      }
      std::vector<bool> bits(n + 2, true);
      bits[n] = false;
      if (w != block_word(r, bits)) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Finite groups versus nilpotency
  ////////////////////////////////////////////////////////////////////////////

  // Least n with Q.w = {s} for every word of length n (nilpotent automata).
  inline std::size_t nilpotency_index(dfa const& d) {
    if (!is_nilpotent(d)) {
      throw error(error_kind::invalid_argument, "automaton is not nilpotent");
    }
    auto s = sink_state(d).state;
    // longest path avoiding the sink, counted in edges, plus one
    std::vector<std::size_t> depth(d.size(), 0);
    bool                     changed = true;
    while (changed) {
      changed = false;
      for (state_type q = 0; q < d.size(); ++q) {
        if (q == s) {
          continue;
        }
        for (letter_type a = 0; a < d.alphabet_size(); ++a) {
          auto r = d.next(q, a);
          if (r != s && depth[r] + 1 > depth[q]) {
            depth[q] = depth[r] + 1;
            changed  = true;
          }
        }
      }
    }
    std::size_t longest = 0;
    for (state_type q = 0; q < d.size(); ++q) {
      if (q != s) {
        longest = std::max(longest, depth[q] + 1);
      }
    }
    return longest;
  }

  struct finiteness_report {
    bool        nilpotent = false;
    std::size_t colorings_total   = 0;
    std::size_t colorings_checked = 0;
    bool        partial = false;  // budget smaller than the number of colorings
    // nilpotent case
    bool                     all_closed = true;
    std::vector<std::size_t> orders;  // per checked coloring, 0 if not closed
    // non-nilpotent case
    std::optional<adding_coloring_result> witness;
    bool                                  witness_infinite = false;
  };

  inline finiteness_report finite_iff_nilpotent_experiment(dfa const&  d,
                                                           std::size_t element_cap,
                                                           std::size_t coloring_budget = 5000,
                                                           std::size_t order_cap = 64) {
    if (d.alphabet_size() < 2) {
      throw error(error_kind::invalid_argument, "need at least two letters");
    }
    if (!sink_state(d).unique()) {
      throw error(error_kind::no_sink, "no unique sink state");
    }
    if (!pairs_synchronizable(d)) {
      throw error(error_kind::not_synchronizing, "automaton is not synchronizing");
    }
    finiteness_report rep;
    rep.nilpotent = is_nilpotent(d);
    coloring_enumerator it(d);
    rep.colorings_total = it.total();
    if (rep.nilpotent) {
      do {
        if (rep.colorings_checked >= coloring_budget) {
          rep.partial = true;
          break;
        }
        auto t = enumerate_group(color(d, it.current()), element_cap);
        rep.orders.push_back(t.closed() ? t.order() : 0);
        rep.all_closed = rep.all_closed && t.closed();
        ++rep.colorings_checked;
      } while (it.advance());
    } else {
      auto r  = adding_machine_coloring(d);
      auto m  = color(d, r.coloring);
      auto o  = element_order(m, generator(r.q0), order_cap,
                              {repeat(r.block0, 256 / r.k + 1)});
      rep.witness_infinite = !o.finite && verify_prefix_law(m, r, 10);
      rep.witness          = std::move(r);
    }
    return rep;
  }

}  // namespace mealysync
