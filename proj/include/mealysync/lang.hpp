#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "classify.hpp"
#include "dfa.hpp"
#include "error.hpp"
#include "partition.hpp"

namespace mealysync {

  namespace detail {
    // Complete deterministic acceptor with start state 0; every state is
    // reachable from the start.
    struct det_table {
      std::size_t             k = 0;
      std::vector<state_type> next;
      std::vector<char>       final;

      std::size_t size() const noexcept {
        return final.size();
      }

      state_type step(state_type p, letter_type a) const {
        return next[p * k + a];
      }
    };

    struct det_cache {
      std::once_flag flag;
      det_table      table;
    };
  }  // namespace detail

  // Finite acceptor, possibly nondeterministic, over a fixed alphabet. The
  // subset construction is computed at most once per value and shared by
  // copies.
  class lang_acceptor {
   public:
    lang_acceptor(class alphabet                        alph,
                  std::vector<std::vector<state_type>>  succ,
                  state_set                             initial,
                  std::vector<char>                     final)
        : _alphabet(std::move(alph)),
          _succ(std::move(succ)),
          _initial(std::move(initial)),
          _final(std::move(final)),
          _cache(std::make_shared<detail::det_cache>()) {
      auto const n = _final.size();
      if (_succ.size() != n * _alphabet.size()) {
        throw error(error_kind::invalid_argument,
                    "acceptor transition table has the wrong size");
      }
      normalize(_initial);
      for (auto& row : _succ) {
        normalize(row);
        if (!row.empty() && row.back() >= n) {
          throw error(error_kind::invalid_argument,
                      "acceptor transition out of range");
        }
      }
      if (!_initial.empty() && _initial.back() >= n) {
        throw error(error_kind::invalid_argument,
                    "acceptor initial state out of range");
      }
    }

    static lang_acceptor deterministic(class alphabet           alph,
                                       std::vector<state_type>  next,
                                       std::vector<char>        final,
                                       state_type               start = 0) {
      std::vector<std::vector<state_type>> succ;
      succ.reserve(next.size());
      for (auto r : next) {
        succ.push_back({r});
      }
      return lang_acceptor(std::move(alph), std::move(succ), {start},
                           std::move(final));
    }

    class alphabet const& alphabet() const noexcept {
      return _alphabet;
    }

    std::size_t alphabet_size() const noexcept {
      return _alphabet.size();
    }

    std::size_t size() const noexcept {
      return _final.size();
    }

    std::vector<state_type> const& successors(state_type p,
                                              letter_type a) const {
      return _succ[p * _alphabet.size() + a];
    }

    state_set const& initial() const noexcept {
      return _initial;
    }

    bool is_final(state_type p) const {
      return _final[p];
    }

    bool accepts(word_type const& w) const {
      auto const& d = det();
      state_type  p = 0;
      for (auto a : w) {
        p = d.step(p, a);
      }
      return d.final[p];
    }

    // The reachable part of the subset construction (the empty subset is
    // kept as an explicit dead state when it occurs).
    detail::det_table const& det() const {
      std::call_once(_cache->flag, [this] { _cache->table = build_det(); });
      return _cache->table;
    }

   private:
    detail::det_table build_det() const {
      auto const        k = _alphabet.size();
      detail::det_table t;
      t.k = k;
      bool const simple
          = _initial.size() == 1
            && std::all_of(_succ.begin(), _succ.end(),
                           [](auto const& row) { return row.size() == 1; });
      if (simple) {
        // already complete and deterministic: renumber the reachable part
        std::vector<state_type> local(size(), static_cast<state_type>(-1));
        std::vector<state_type> order{_initial[0]};
        local[_initial[0]] = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
          t.final.push_back(_final[order[i]]);
          for (letter_type a = 0; a < k; ++a) {
            auto r = successors(order[i], a)[0];
            if (local[r] == static_cast<state_type>(-1)) {
              local[r] = static_cast<state_type>(order.size());
              order.push_back(r);
            }
            t.next.push_back(local[r]);
          }
        }
        return t;
      }
      std::unordered_map<state_set, state_type, state_set_hash> seen;
      std::vector<state_set>                                    nodes{_initial};
      seen.emplace(_initial, 0);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        bool fin = false;
        for (auto p : nodes[i]) {
          fin = fin || _final[p];
        }
        t.final.push_back(fin);
        for (letter_type a = 0; a < k; ++a) {
          state_set img;
          for (auto p : nodes[i]) {
            auto const& row = successors(p, a);
            img.insert(img.end(), row.begin(), row.end());
          }
          normalize(img);
          auto [it, fresh]
              = seen.emplace(img, static_cast<state_type>(nodes.size()));
          if (fresh) {
            nodes.push_back(std::move(img));
          }
          t.next.push_back(it->second);
        }
      }
      return t;
    }

    class alphabet                       _alphabet;
    std::vector<std::vector<state_type>> _succ;
    state_set                            _initial;
    std::vector<char>                    _final;
    std::shared_ptr<detail::det_cache>   _cache;
  };

  namespace detail {
    inline lang_acceptor from_table(class alphabet const& alph,
                                    det_table const&      t) {
      return lang_acceptor::deterministic(alph, t.next, t.final, 0);
    }

    inline void check_alphabets(lang_acceptor const& x,
                                lang_acceptor const& y) {
      check_same_alphabet(x.alphabet(), y.alphabet());
    }

    // Product of the deterministic tables, final iff op(final1, final2).
    template <typename Op>
    lang_acceptor product(lang_acceptor const& x, lang_acceptor const& y,
                          Op op) {
      check_alphabets(x, y);
      auto const& dx = x.det();
      auto const& dy = y.det();
      auto const  k  = x.alphabet_size();
      std::unordered_map<std::uint64_t, state_type> seen;
      std::vector<std::pair<state_type, state_type>> nodes{{0, 0}};
      seen.emplace(0, 0);
      std::vector<state_type> next;
      std::vector<char>       final;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [p, q] = nodes[i];
        final.push_back(op(dx.final[p] != 0, dy.final[q] != 0));
        for (letter_type a = 0; a < k; ++a) {
          auto p2  = dx.step(p, a);
          auto q2  = dy.step(q, a);
          auto key = static_cast<std::uint64_t>(p2) * dy.size() + q2;
          auto [it, fresh]
              = seen.emplace(key, static_cast<state_type>(nodes.size()));
          if (fresh) {
            nodes.emplace_back(p2, q2);
          }
          next.push_back(it->second);
        }
      }
      return lang_acceptor::deterministic(x.alphabet(), std::move(next),
                                          std::move(final));
    }
  }  // namespace detail

  ////////////////////////////////////////////////////////////////////////////
  // Boolean algebra and decision procedures
  ////////////////////////////////////////////////////////////////////////////

  inline lang_acceptor determinize(lang_acceptor const& x) {
    return detail::from_table(x.alphabet(), x.det());
  }

  inline lang_acceptor complement(lang_acceptor const& x) {
    auto t = x.det();
    for (auto& f : t.final) {
      f = !f;
    }
    return detail::from_table(x.alphabet(), t);
  }

  inline lang_acceptor intersect(lang_acceptor const& x,
                                 lang_acceptor const& y) {
    return detail::product(x, y, [](bool a, bool b) { return a && b; });
  }

  inline lang_acceptor unite(lang_acceptor const& x, lang_acceptor const& y) {
    return detail::product(x, y, [](bool a, bool b) { return a || b; });
  }

  inline lang_acceptor difference(lang_acceptor const& x,
                                  lang_acceptor const& y) {
    return detail::product(x, y, [](bool a, bool b) { return a && !b; });
  }

  inline lang_acceptor symmetric_difference(lang_acceptor const& x,
                                            lang_acceptor const& y) {
    return detail::product(x, y, [](bool a, bool b) { return a != b; });
  }

  // Shortlex-least accepted word.
  inline std::optional<word_type> shortest_member(lang_acceptor const& x) {
    auto const&                 t = x.det();
    std::vector<state_type>     parent(t.size(), static_cast<state_type>(-1));
    std::vector<letter_type>    via(t.size(), 0);
    std::vector<state_type>     queue{0};
    parent[0] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      auto p = queue[i];
      if (t.final[p]) {
        word_type w;
        while (p != 0) {
          w.push_back(via[p]);
          p = parent[p];
        }
        std::reverse(w.begin(), w.end());
        return w;
      }
      for (letter_type a = 0; a < t.k; ++a) {
        auto r = t.step(p, a);
        if (parent[r] == static_cast<state_type>(-1)) {
          parent[r] = p;
          via[r]    = a;
          queue.push_back(r);
        }
      }
    }
    return std::nullopt;
  }

  inline bool is_empty(lang_acceptor const& x) {
    // plain reachability on the acceptor as given
    std::vector<char>       seen(x.size(), 0);
    std::vector<state_type> queue(x.initial().begin(), x.initial().end());
    for (auto p : queue) {
      seen[p] = 1;
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
      auto p = queue[i];
      if (x.is_final(p)) {
        return false;
      }
      for (letter_type a = 0; a < x.alphabet_size(); ++a) {
        for (auto r : x.successors(p, a)) {
          if (!seen[r]) {
            seen[r] = 1;
            queue.push_back(r);
          }
        }
      }
    }
    return true;
  }

  // x is contained in y
  inline bool includes(lang_acceptor const& y, lang_acceptor const& x) {
    return is_empty(difference(x, y));
  }

  // Shortlex-least word in exactly one of the two languages.
  inline std::optional<word_type> difference_witness(lang_acceptor const& x,
                                                     lang_acceptor const& y) {
    return shortest_member(symmetric_difference(x, y));
  }

  inline bool equivalent(lang_acceptor const& x, lang_acceptor const& y) {
    return !difference_witness(x, y).has_value();
  }

  // Minimal complete deterministic acceptor, states numbered breadth first.
  inline lang_acceptor minimize(lang_acceptor const& x) {
    auto const&                t = x.det();
    std::vector<std::uint64_t> initial(t.final.begin(), t.final.end());
    auto block = detail::refine_partition(t.size(), t.k, t.next, initial);
    std::size_t blocks = 0;
    for (auto b : block) {
      blocks = std::max<std::size_t>(blocks, b + 1);
    }
    std::vector<state_type> rep(blocks, static_cast<state_type>(-1));
    for (state_type p = 0; p < t.size(); ++p) {
      if (rep[block[p]] == static_cast<state_type>(-1)) {
        rep[block[p]] = p;
      }
    }
    std::vector<state_type> canon(blocks, static_cast<state_type>(-1));
    std::vector<std::uint32_t> order{block[0]};
    canon[block[0]] = 0;
    std::vector<state_type> next;
    std::vector<char>       final;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto p = rep[order[i]];
      final.push_back(t.final[p]);
      for (letter_type a = 0; a < t.k; ++a) {
        auto b = block[t.step(p, a)];
        if (canon[b] == static_cast<state_type>(-1)) {
          canon[b] = static_cast<state_type>(order.size());
          order.push_back(b);
        }
        next.push_back(canon[b]);
      }
    }
    return lang_acceptor::deterministic(x.alphabet(), std::move(next),
                                        std::move(final));
  }

  ////////////////////////////////////////////////////////////////////////////
  // Basic languages
  ////////////////////////////////////////////////////////////////////////////

  inline lang_acceptor empty_language(class alphabet const& alph) {
    return lang_acceptor::deterministic(
        alph, std::vector<state_type>(alph.size(), 0), {0});
  }

  inline lang_acceptor universal_language(class alphabet const& alph) {
    return lang_acceptor::deterministic(
        alph, std::vector<state_type>(alph.size(), 0), {1});
  }

  // A^{>= n}
  inline lang_acceptor at_least_language(class alphabet const& alph,
                                         std::size_t           n) {
    std::vector<state_type> next;
    std::vector<char>       final;
    for (std::size_t i = 0; i <= n; ++i) {
      final.push_back(i == n);
      for (std::size_t a = 0; a < alph.size(); ++a) {
        next.push_back(static_cast<state_type>(std::min(i + 1, n)));
      }
    }
    return lang_acceptor::deterministic(alph, std::move(next),
                                        std::move(final));
  }

  // A finite language given by its words (a trie).
  inline lang_acceptor words_language(class alphabet const&         alph,
                                      std::vector<word_type> const& words) {
    auto const                           k = alph.size();
    std::vector<std::vector<state_type>> succ(k);
    std::vector<char>                    final{0};
    for (auto const& w : words) {
      state_type p = 0;
      for (auto a : w) {
        if (a >= k) {
          throw error(error_kind::unknown_symbol, "letter out of range");
        }
        if (succ[p * k + a].empty()) {
          succ[p * k + a].push_back(static_cast<state_type>(final.size()));
          final.push_back(0);
          succ.resize(final.size() * k);
        }
        p = succ[p * k + a].front();
      }
      final[p] = 1;
    }
    return lang_acceptor(alph, std::move(succ), {0}, std::move(final));
  }

  // A* L A*
  inline lang_acceptor two_sided_closure(lang_acceptor const& x) {
    auto const& alph = x.alphabet();
    auto const  k    = alph.size();
    auto const  n    = x.size();
    for (auto i : x.initial()) {
      if (x.is_final(i)) {
        return universal_language(alph);
      }
    }
    // states: original 0..n-1, start n, accept n+1
    state_type const                     start = static_cast<state_type>(n);
    state_type const                     acc   = start + 1;
    std::vector<std::vector<state_type>> succ((n + 2) * k);
    std::vector<char>                    final(n + 2, 0);
    final[acc] = 1;
    for (state_type p = 0; p < n; ++p) {
      for (letter_type a = 0; a < k; ++a) {
        for (auto r : x.successors(p, a)) {
          succ[p * k + a].push_back(r);
          if (x.is_final(r)) {
            succ[p * k + a].push_back(acc);
          }
        }
      }
    }
    for (letter_type a = 0; a < k; ++a) {
      succ[start * k + a].push_back(start);
      succ[acc * k + a].push_back(acc);
      for (auto i : x.initial()) {
        auto const& row = succ[i * k + a];
        succ[start * k + a].insert(succ[start * k + a].end(), row.begin(),
                                   row.end());
      }
    }
    return lang_acceptor(alph, std::move(succ), {start}, std::move(final));
  }

  // A* U A*
  inline lang_acceptor ideal_language(class alphabet const&         alph,
                                      std::vector<word_type> const& gens) {
    if (gens.empty()) {
      throw error(error_kind::invalid_argument,
                  "an ideal needs at least one generator");
    }
    return two_sided_closure(words_language(alph, gens));
  }

  inline bool is_ideal(lang_acceptor const& x) {
    return includes(x, two_sided_closure(x));
  }

  // Words of length <= max_len in the ideal none of whose proper factors
  // lie in it, in shortlex order.
  inline std::vector<word_type> minimal_ideal_words(lang_acceptor const& x,
                                                    std::size_t max_len) {
    if (!is_ideal(x)) {
      throw error(error_kind::not_an_ideal,
                  "language is not a two-sided ideal");
    }
    std::vector<word_type> out;
    auto const&            t = x.det();
    for (std::size_t len = 0; len <= max_len; ++len) {
      // depth first over words of this length, pruning prefixes already in
      // the ideal (their extensions have a proper factor in it)
      word_type               w;
      std::vector<state_type> path{0};
      std::function<void()>   rec = [&] {
        auto p = path.back();
        if (w.size() == len) {
          if (!t.final[p]) {
            return;
          }
          if (!w.empty()) {
            word_type tail(w.begin() + 1, w.end());
            if (x.accepts(tail)) {
              return;
            }
          }
          out.push_back(w);
          return;
        }
        if (t.final[p]) {
          return;
        }
        for (letter_type a = 0; a < t.k; ++a) {
          w.push_back(a);
          path.push_back(t.step(p, a));
          rec();
          path.pop_back();
          w.pop_back();
        }
      };
      rec();
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Languages of a DFA
  ////////////////////////////////////////////////////////////////////////////

  namespace detail {
    template <typename Final>
    lang_acceptor subset_language(dfa const& d, state_set start, Final fin) {
      if (start.empty()) {
        throw error(error_kind::invalid_argument, "empty subset");
      }
      for (auto q : start) {
        if (q >= d.size()) {
          throw error(error_kind::unknown_state, "state out of range");
        }
      }
      auto              g = explore_subsets(d, std::move(start));
      std::vector<char> final;
      for (auto const& s : g.nodes) {
        final.push_back(fin(s));
      }
      return lang_acceptor::deterministic(d.alphabet(), std::move(g.next),
                                          std::move(final));
    }
  }  // namespace detail

  // Syn(A) = {u : |Q.u| = 1}
  inline lang_acceptor syn_language(dfa const& d) {
    return detail::subset_language(d, all_states(d.size()), [](auto const& s) {
      return s.size() == 1;
    });
  }

  // R(s) = {u : Q.u = {s}}
  inline lang_acceptor r_language(dfa const& d, state_type s) {
    if (s >= d.size()) {
      throw error(error_kind::unknown_state, "state out of range");
    }
    return detail::subset_language(
        d, all_states(d.size()),
        [s](auto const& x) { return x.size() == 1 && x[0] == s; });
  }

  // Syn(S) = {u : |S.u| = 1}
  inline lang_acceptor syn_from(dfa const& d, state_set const& s) {
    return detail::subset_language(d, s, [](auto const& x) {
      return x.size() == 1;
    });
  }

  // Fix(S) = {u in A+ : S.u = S}
  inline lang_acceptor fix_language(dfa const& d, state_set s) {
    normalize(s);
    auto inner = detail::subset_language(
        d, s, [&s](auto const& x) { return x == s; });
    // fresh non-final start state copying the out-edges of S
    auto const&             t = inner.det();
    auto const              k = t.k;
    std::vector<state_type> next(k);
    std::vector<char>       final{0};
    for (letter_type a = 0; a < k; ++a) {
      next[a] = t.step(0, a) + 1;
    }
    for (state_type p = 0; p < t.size(); ++p) {
      final.push_back(t.final[p]);
      for (letter_type a = 0; a < k; ++a) {
        next.push_back(t.step(p, a) + 1);
      }
    }
    return lang_acceptor::deterministic(d.alphabet(), std::move(next),
                                        std::move(final));
  }

}  // namespace mealysync
