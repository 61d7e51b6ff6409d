#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dfa.hpp"
#include "error.hpp"

namespace mealysync {

  ////////////////////////////////////////////////////////////////////////////
  // Synchronization
  ////////////////////////////////////////////////////////////////////////////

  struct sync_result {
    bool                     synchronizing = false;
    std::optional<word_type> reset_word;  // shortlex-least shortest
  };

  // Breadth-first search over the subsets Q.u. The first singleton found is
  // the shortlex-least shortest reset word.
  inline sync_result is_synchronizing(dfa const& d) {
    auto g = explore_subsets(d, all_states(d.size()));
    for (state_type i = 0; i < g.nodes.size(); ++i) {
      if (g.nodes[i].size() == 1) {
        return {true, g.word_to(i)};
      }
    }
    return {false, std::nullopt};
  }

  // Pair-merging criterion: synchronizing iff every pair of states can be
  // sent to a common state. Quadratic, no witness.
  inline bool pairs_synchronizable(dfa const& d) {
    auto const n = d.size();
    auto const k = d.alphabet_size();
    auto id      = [n](state_type p, state_type q) {
      if (p > q) {
        std::swap(p, q);
      }
      return static_cast<std::size_t>(p) * n + q;
    };
    // reverse edges of the pair graph
    std::vector<std::vector<std::size_t>> preds(n * n);
    for (state_type p = 0; p < n; ++p) {
      for (state_type q = p; q < n; ++q) {
        for (letter_type a = 0; a < k; ++a) {
          preds[id(d.next(p, a), d.next(q, a))].push_back(id(p, q));
        }
      }
    }
    std::vector<bool>        ok(n * n, false);
    std::vector<std::size_t> queue;
    for (state_type p = 0; p < n; ++p) {
      ok[id(p, p)] = true;
      queue.push_back(id(p, p));
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (auto x : preds[queue[i]]) {
        if (!ok[x]) {
          ok[x] = true;
          queue.push_back(x);
        }
      }
    }
    for (state_type p = 0; p < n; ++p) {
      for (state_type q = p + 1; q < n; ++q) {
        if (!ok[id(p, q)]) {
          return false;
        }
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Sinks, nilpotency, boundedness
  ////////////////////////////////////////////////////////////////////////////

  struct sink_result {
    enum class kind { none, unique, multiple };
    kind        status = kind::none;
    state_type  state  = 0;  // valid when status == unique
    std::size_t count  = 0;

    bool unique() const noexcept {
      return status == kind::unique;
    }
  };

  inline std::vector<state_type> sinks(dfa const& d) {
    std::vector<state_type> out;
    for (state_type q = 0; q < d.size(); ++q) {
      bool fixed = true;
      for (letter_type a = 0; a < d.alphabet_size() && fixed; ++a) {
        fixed = d.next(q, a) == q;
      }
      if (fixed) {
        out.push_back(q);
      }
    }
    return out;
  }

  // Several sinks are reported, not thrown: a non-synchronizing automaton may
  // legitimately have many.
  inline sink_result sink_state(dfa const& d) {
    auto s = sinks(d);
    sink_result r;
    r.count = s.size();
    if (s.size() == 1) {
      r.status = sink_result::kind::unique;
      r.state  = s[0];
    } else if (s.size() > 1) {
      r.status = sink_result::kind::multiple;
    }
    return r;
  }

  namespace detail {

    // Strongly connected components of the digraph of d restricted to the
    // states with keep[q] == true. Edges are (state, letter) pairs, so
    // parallel edges are counted separately.
    struct scc_info {
      std::vector<std::size_t> comp;  // SIZE_MAX for removed states
      std::size_t              count = 0;
      std::vector<bool>        nontrivial;
    };

    inline scc_info sccs(dfa const& d, std::vector<bool> const& keep) {
      auto const          n = d.size();
      auto const          k = d.alphabet_size();
      constexpr auto      none = static_cast<std::size_t>(-1);
      scc_info            info;
      info.comp.assign(n, none);
      std::vector<std::size_t> index(n, none), low(n, 0);
      std::vector<bool>        on_stack(n, false);
      std::vector<state_type>  stack;
      std::size_t              counter = 0;

      // iterative Tarjan
      struct frame {
        state_type  q;
        letter_type a;
      };
      for (state_type root = 0; root < n; ++root) {
        if (!keep[root] || index[root] != none) {
          continue;
        }
        std::vector<frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
          auto& f = call.back();
          if (f.a < k) {
            auto r = d.next(f.q, f.a++);
            if (!keep[r]) {
              continue;
            }
            if (index[r] == none) {
              index[r] = low[r] = counter++;
              stack.push_back(r);
              on_stack[r] = true;
              call.push_back({r, 0});
            } else if (on_stack[r]) {
              low[f.q] = std::min(low[f.q], index[r]);
            }
            continue;
          }
          auto q = f.q;
          call.pop_back();
          if (!call.empty()) {
            low[call.back().q] = std::min(low[call.back().q], low[q]);
          }
          if (low[q] == index[q]) {
            state_type r;
            do {
              r = stack.back();
              stack.pop_back();
              on_stack[r]  = false;
              info.comp[r] = info.count;
            } while (r != q);
            ++info.count;
          }
        }
      }
      info.nontrivial.assign(info.count, false);
      std::vector<std::size_t> sizes(info.count, 0);
      for (state_type q = 0; q < n; ++q) {
        if (keep[q]) {
          ++sizes[info.comp[q]];
        }
      }
      for (state_type q = 0; q < n; ++q) {
        if (!keep[q]) {
          continue;
        }
        auto c = info.comp[q];
        if (sizes[c] > 1) {
          info.nontrivial[c] = true;
        }
        for (letter_type a = 0; a < k; ++a) {
          if (d.next(q, a) == q) {
            info.nontrivial[c] = true;
          }
        }
      }
      return info;
    }

    inline std::vector<bool> all_but(std::size_t n, state_type s) {
      std::vector<bool> keep(n, true);
      keep[s] = false;
      return keep;
    }

  }  // namespace detail

  inline bool is_strongly_connected(dfa const& d) {
    return detail::sccs(d, std::vector<bool>(d.size(), true)).count == 1;
  }

  // Unique sink and no cycle or loop through a non-sink state.
  inline bool is_nilpotent(dfa const& d) {
    auto s = sink_state(d);
    if (!s.unique()) {
      return false;
    }
    auto info = detail::sccs(d, detail::all_but(d.size(), s.state));
    return std::none_of(info.nontrivial.begin(), info.nontrivial.end(),
                        [](bool b) { return b; });
  }

  // Finitely many right-infinite paths avoid the sink iff, in the digraph
  // with the sink removed, every nontrivial component is a simple cycle
  // (each of its vertices has exactly one edge staying inside) and no
  // nontrivial component reaches a different nontrivial component.
  inline bool is_bounded(dfa const& d) {
    auto s = sink_state(d);
    if (!s.unique()) {
      throw error(error_kind::no_unique_sink,
                  "boundedness needs a unique sink state");
    }
    auto const n    = d.size();
    auto const k    = d.alphabet_size();
    auto       keep = detail::all_but(n, s.state);
    auto       info = detail::sccs(d, keep);

    for (state_type q = 0; q < n; ++q) {
      if (!keep[q] || !info.nontrivial[info.comp[q]]) {
        continue;
      }
      std::size_t inside = 0;
      for (letter_type a = 0; a < k; ++a) {
        auto r = d.next(q, a);
        if (keep[r] && info.comp[r] == info.comp[q]) {
          ++inside;
        }
      }
      if (inside != 1) {
        return false;
      }
    }
    // reachability between nontrivial components
    for (std::size_t c = 0; c < info.count; ++c) {
      if (!info.nontrivial[c]) {
        continue;
      }
      std::vector<bool>       seen(n, false);
      std::vector<state_type> queue;
      for (state_type q = 0; q < n; ++q) {
        if (keep[q] && info.comp[q] == c) {
          seen[q] = true;
          queue.push_back(q);
        }
      }
      for (std::size_t i = 0; i < queue.size(); ++i) {
        for (letter_type a = 0; a < k; ++a) {
          auto r = d.next(queue[i], a);
          if (!keep[r] || seen[r]) {
            continue;
          }
          if (info.comp[r] != c && info.nontrivial[info.comp[r]]) {
            return false;
          }
          seen[r] = true;
          queue.push_back(r);
        }
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Congruences
  ////////////////////////////////////////////////////////////////////////////

  // Partition of the states; block ids are numbered in order of first
  // occurrence.
  class congruence {
   public:
    explicit congruence(std::vector<std::size_t> block_of)
        : _block_of(std::move(block_of)) {
      std::unordered_map<std::size_t, std::size_t> renum;
      for (auto& b : _block_of) {
        auto it = renum.emplace(b, renum.size()).first;
        b       = it->second;
      }
      _count = renum.size();
    }

    std::size_t block(state_type q) const {
      return _block_of.at(q);
    }

    std::size_t count() const noexcept {
      return _count;
    }

    std::vector<state_set> blocks() const {
      std::vector<state_set> out(_count);
      for (state_type q = 0; q < _block_of.size(); ++q) {
        out[_block_of[q]].push_back(q);
      }
      return out;
    }

    bool is_universal() const noexcept {
      return _count == 1;
    }

    bool is_identity() const noexcept {
      return _count == _block_of.size();
    }

    // p ~ q implies p.a ~ q.a for every letter a
    bool compatible_with(dfa const& d) const {
      for (auto const& blk : blocks()) {
        for (letter_type a = 0; a < d.alphabet_size(); ++a) {
          auto b = block(d.next(blk[0], a));
          for (auto q : blk) {
            if (block(d.next(q, a)) != b) {
              return false;
            }
          }
        }
      }
      return true;
    }

   private:
    std::vector<std::size_t> _block_of;
    std::size_t              _count = 0;
  };

  // Smallest congruence containing (p, q): union-find closed under the
  // transitions.
  inline congruence principal_congruence(dfa const& d, state_type p,
                                         state_type q) {
    std::vector<std::size_t> parent(d.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x         = parent[x];
      }
      return x;
    };
    std::vector<std::pair<state_type, state_type>> todo{{p, q}};
    while (!todo.empty()) {
      auto [x, y] = todo.back();
      todo.pop_back();
      auto rx = find(x), ry = find(y);
      if (rx == ry) {
        continue;
      }
      parent[std::max(rx, ry)] = std::min(rx, ry);
      for (letter_type a = 0; a < d.alphabet_size(); ++a) {
        todo.emplace_back(d.next(x, a), d.next(y, a));
      }
    }
    std::vector<std::size_t> block(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      block[i] = find(i);
    }
    return congruence(std::move(block));
  }

  inline bool is_simple(dfa const& d) {
    for (state_type p = 0; p < d.size(); ++p) {
      for (state_type q = p + 1; q < d.size(); ++q) {
        if (!principal_congruence(d, p, q).is_universal()) {
          return false;
        }
      }
    }
    return true;
  }

  inline bool is_prime(std::size_t n) {
    if (n < 2) {
      return false;
    }
    for (std::size_t i = 2; i * i <= n; ++i) {
      if (n % i == 0) {
        return false;
      }
    }
    return true;
  }

  // Letters acting as permutations of Q.
  inline std::vector<letter_type> permutation_letters(dfa const& d) {
    std::vector<letter_type> out;
    for (letter_type a = 0; a < d.alphabet_size(); ++a) {
      if (d.is_permutation_letter(a)) {
        out.push_back(a);
      }
    }
    return out;
  }

  // |Q| prime and the permutation letters act transitively. Taking all
  // permutation letters is enough: any transitive subset stays transitive
  // when letters are added.
  inline bool lemma_simple_sufficient(dfa const& d) {
    if (!is_prime(d.size())) {
      return false;
    }
    auto perms = permutation_letters(d);
    if (perms.empty()) {
      return false;
    }
    std::vector<bool>       seen(d.size(), false);
    std::vector<state_type> queue{0};
    seen[0] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (auto a : perms) {
        auto r = d.next(queue[i], a);
        if (!seen[r]) {
          seen[r] = true;
          queue.push_back(r);
        }
      }
    }
    return queue.size() == d.size();
  }

  ////////////////////////////////////////////////////////////////////////////
  // Reachable subsets and finitely generated ideals
  ////////////////////////////////////////////////////////////////////////////

  // All subsets Q.u, in breadth-first discovery order from Q.
  inline std::vector<state_set> reachable_subsets(dfa const& d) {
    return explore_subsets(d, all_states(d.size())).nodes;
  }

  // Decides Syn(S) == Syn(T) by exploring the pairs (S.u, T.u).
  inline bool same_syn(dfa const& d, state_set const& s, state_set const& t) {
    std::set<std::pair<state_set, state_set>> seen;
    std::vector<std::pair<state_set, state_set>> queue{{s, t}};
    seen.insert(queue.front());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      auto const& [x, y] = queue[i];
      if ((x.size() == 1) != (y.size() == 1)) {
        return false;
      }
      if (x.size() == 1) {
        continue;  // both stay singletons from here on
      }
      for (letter_type a = 0; a < d.alphabet_size(); ++a) {
        std::pair<state_set, state_set> nxt{d.image(queue[i].first, a),
                                            d.image(queue[i].second, a)};
        if (seen.insert(nxt).second) {
          queue.push_back(std::move(nxt));
        }
      }
    }
    return true;
  }

  using transformation = std::vector<state_type>;

  // Largest subset fixed by f: the image of Q under f^m once it stops
  // shrinking.
  inline state_set stable_image(transformation const& f) {
    auto img = all_states(f.size());
    while (true) {
      state_set nxt;
      for (auto q : img) {
        nxt.push_back(f[q]);
      }
      normalize(nxt);
      if (nxt.size() == img.size()) {
        return nxt;
      }
      img = std::move(nxt);
    }
  }

  struct transition_monoid {
    std::vector<transformation> elements;  // words of length >= 1
    std::vector<word_type>      words;     // shortlex-least representative
    bool                        complete = false;
  };

  inline transition_monoid enumerate_transition_semigroup(dfa const& d,
                                                          std::size_t cap) {
    transition_monoid m;
    std::map<transformation, std::size_t> seen;
    auto const n = d.size();
    auto const k = d.alphabet_size();
    for (letter_type a = 0; a < k; ++a) {
      transformation f(n);
      for (state_type q = 0; q < n; ++q) {
        f[q] = d.next(q, a);
      }
      if (seen.emplace(f, m.elements.size()).second) {
        m.elements.push_back(std::move(f));
        m.words.push_back({a});
      }
    }
    for (std::size_t i = 0; i < m.elements.size(); ++i) {
      if (m.elements.size() > cap) {
        return m;
      }
      for (letter_type a = 0; a < k; ++a) {
        transformation f(n);
        for (state_type q = 0; q < n; ++q) {
          f[q] = d.next(m.elements[i][q], a);
        }
        if (seen.emplace(f, m.elements.size()).second) {
          m.elements.push_back(std::move(f));
          m.words.push_back(concat(m.words[i], word_type{a}));
        }
      }
    }
    m.complete = m.elements.size() <= cap;
    return m;
  }

  struct fg_result {
    enum class verdict { yes, no, unknown };
    verdict   status = verdict::unknown;
    state_set subset;   // for no: a reachable S
    word_type fix_word; // for no: u in Fix(S) with Syn(S) != Syn(m(u))
  };

  // Finitely generated iff for every reachable S with 1 < |S| < |Q| and every
  // u in Fix(S), Syn(S) == Syn(m(u)).
  inline fg_result is_finitely_generated_syn(dfa const& d,
                                             std::size_t monoid_cap = 100000) {
    if (!is_synchronizing(d).synchronizing) {
      throw error(error_kind::not_synchronizing,
                  "finite generation is defined for synchronizing automata");
    }
    auto monoid = enumerate_transition_semigroup(d, monoid_cap);
    if (!monoid.complete) {
      return {fg_result::verdict::unknown, {}, {}};
    }
    std::vector<state_set> stable;
    stable.reserve(monoid.elements.size());
    for (auto const& f : monoid.elements) {
      stable.push_back(stable_image(f));
    }
    std::map<std::pair<state_set, state_set>, bool> memo;
    for (auto const& s : reachable_subsets(d)) {
      if (s.size() <= 1 || s.size() >= d.size()) {
        continue;
      }
      for (std::size_t i = 0; i < monoid.elements.size(); ++i) {
        auto const& f = monoid.elements[i];
        state_set   img;
        for (auto q : s) {
          img.push_back(f[q]);
        }
        normalize(img);
        if (img != s) {
          continue;
        }
        auto key = std::make_pair(s, stable[i]);
        auto it  = memo.find(key);
        if (it == memo.end()) {
          it = memo.emplace(key, same_syn(d, s, stable[i])).first;
        }
        if (!it->second) {
          return {fg_result::verdict::no, s, monoid.words[i]};
        }
      }
    }
    return {fg_result::verdict::yes, {}, {}};
  }

  ////////////////////////////////////////////////////////////////////////////
  // Aggregate
  ////////////////////////////////////////////////////////////////////////////

  struct dfa_classification {
    bool                       synchronizing = false;
    std::optional<std::size_t> shortest_reset_length;
    std::optional<word_type>   shortest_reset_word;
    sink_result                sink;
    bool                       nilpotent = false;
    std::optional<bool>        bounded;  // only with a unique sink
    bool                       simple             = false;
    bool                       strongly_connected = false;
  };

  inline dfa_classification classify(dfa const& d) {
    dfa_classification c;
    auto s          = is_synchronizing(d);
    c.synchronizing = s.synchronizing;
    if (s.reset_word) {
      c.shortest_reset_length = s.reset_word->size();
      c.shortest_reset_word   = s.reset_word;
    }
    c.sink      = sink_state(d);
    c.nilpotent = is_nilpotent(d);
    if (c.sink.unique()) {
      c.bounded = is_bounded(d);
    }
    c.simple             = is_simple(d);
    c.strongly_connected = is_strongly_connected(d);
    return c;
  }

}  // namespace mealysync
