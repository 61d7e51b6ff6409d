#pragma once

// Brute-force reference computations used by the tests. These work on raw
// transition tables and enumerate words directly, so they share no search
// code with the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "mealysync/mealysync.hpp"

namespace oracle {

  using table = std::vector<std::vector<std::uint32_t>>;  // t[q][a]
  using word  = std::vector<std::uint32_t>;

  inline table of(mealysync::dfa const& d) {
    table t(d.size(), std::vector<std::uint32_t>(d.alphabet_size()));
    for (std::uint32_t q = 0; q < d.size(); ++q) {
      for (std::uint32_t a = 0; a < d.alphabet_size(); ++a) {
        t[q][a] = d.next(q, a);
      }
    }
    return t;
  }

  inline std::uint32_t run(table const& t, std::uint32_t q, word const& w) {
    for (auto a : w) {
      q = t[q][a];
    }
    return q;
  }

  inline std::set<std::uint32_t> image(table const& t, word const& w) {
    std::set<std::uint32_t> s;
    for (std::uint32_t q = 0; q < t.size(); ++q) {
      s.insert(run(t, q, w));
    }
    return s;
  }

  inline bool resets(table const& t, word const& w) {
    return image(t, w).size() == 1;
  }

  // calls f on every word of length len over k letters, lexicographically
  inline void words_of_length(std::size_t k, std::size_t len,
                              std::function<void(word const&)> const& f) {
    word w(len, 0);
    while (true) {
      f(w);
      std::size_t i = len;
      while (i > 0 && w[i - 1] + 1 == k) {
        w[--i] = 0;
      }
      if (i == 0) {
        return;
      }
      ++w[i - 1];
    }
  }

  // shortest reset length by plain enumeration, up to max_len
  inline std::optional<std::size_t> shortest_reset(table const& t,
                                                   std::size_t  max_len) {
    auto const k = t.empty() ? 0 : t[0].size();
    for (std::size_t len = 0; len <= max_len; ++len) {
      bool found = false;
      words_of_length(k, len, [&](word const& w) {
        found = found || resets(t, w);
      });
      if (found) {
        return len;
      }
    }
    return std::nullopt;
  }

  inline std::vector<std::uint32_t> sinks(table const& t) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t q = 0; q < t.size(); ++q) {
      if (std::all_of(t[q].begin(), t[q].end(),
                      [q](std::uint32_t r) { return r == q; })) {
        out.push_back(q);
      }
    }
    return out;
  }

  // every word of length |Q| sends Q to the unique sink
  inline bool nilpotent_by_words(table const& t) {
    auto s = sinks(t);
    if (s.size() != 1) {
      return false;
    }
    bool ok = true;
    words_of_length(t[0].size(), t.size(), [&](word const& w) {
      auto im = image(t, w);
      ok      = ok && im.size() == 1 && *im.begin() == s[0];
    });
    return ok;
  }

  // number of sink-avoiding words of length len (from any state) that
  // extend to an infinite sink-avoiding path
  inline std::uint64_t extendable_paths(table const& t, std::uint32_t sink,
                                        std::size_t len) {
    auto const n = t.size();
    // a state starts an infinite sink-avoiding path iff it starts one of
    // length n
    std::vector<char> alive(n, 1);
    alive[sink] = 0;
    for (std::size_t step = 0; step < n; ++step) {
      std::vector<char> nxt(n, 0);
      for (std::uint32_t q = 0; q < n; ++q) {
        if (!alive[q]) {
          continue;
        }
        for (auto r : t[q]) {
          nxt[q] = nxt[q] || alive[r];
        }
      }
      alive = nxt;
    }
    std::vector<std::uint64_t> count(n, 0);
    for (std::uint32_t q = 0; q < n; ++q) {
      count[q] = alive[q] ? 1 : 0;
    }
    for (std::size_t step = 0; step < len; ++step) {
      std::vector<std::uint64_t> nxt(n, 0);
      for (std::uint32_t q = 0; q < n; ++q) {
        if (!alive[q]) {
          continue;
        }
        for (auto r : t[q]) {
          if (alive[r]) {
            nxt[q] += count[r];
          }
        }
      }
      count = nxt;
    }
    std::uint64_t total = 0;
    for (auto c : count) {
      total += c;
    }
    return total;
  }

  // bounded iff the number of infinite sink-avoiding paths is finite: the
  // prefix counts then stop growing
  inline bool bounded_by_counting(table const& t, std::uint32_t sink) {
    auto const n = t.size();
    return extendable_paths(t, sink, 2 * n) == extendable_paths(t, sink, 4 * n);
  }

  // all set partitions of {0..n-1} as block labels
  inline void partitions(std::size_t n,
                         std::function<void(std::vector<std::uint32_t> const&)> const& f) {
    std::vector<std::uint32_t> lab(n, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i,
                                                              std::uint32_t used) {
      if (i == n) {
        f(lab);
        return;
      }
      for (std::uint32_t b = 0; b <= used; ++b) {
        lab[i] = b;
        rec(i + 1, std::max(used, b + 1));
      }
    };
    if (n == 0) {
      f(lab);
      return;
    }
    lab[0] = 0;
    rec(1, 1);
  }

  inline bool compatible(table const& t, std::vector<std::uint32_t> const& lab) {
    for (std::uint32_t p = 0; p < t.size(); ++p) {
      for (std::uint32_t q = 0; q < t.size(); ++q) {
        if (lab[p] != lab[q]) {
          continue;
        }
        for (std::size_t a = 0; a < t[p].size(); ++a) {
          if (lab[t[p][a]] != lab[t[q][a]]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  // no congruence besides equality and the universal one
  inline bool simple_by_partitions(table const& t) {
    bool simple = true;
    partitions(t.size(), [&](std::vector<std::uint32_t> const& lab) {
      auto blocks = *std::max_element(lab.begin(), lab.end()) + 1;
      if (blocks == 1 || blocks == t.size()) {
        return;
      }
      simple = simple && !compatible(t, lab);
    });
    return simple;
  }

  // minimal synchronizing words of one length: w resets, but neither the
  // word without its first letter nor without its last letter does
  inline std::size_t minimal_reset_words(table const& t, std::size_t len) {
    std::size_t count = 0;
    words_of_length(t[0].size(), len, [&](word const& w) {
      if (!resets(t, w)) {
        return;
      }
      word head(w.begin(), w.end() - 1), tail(w.begin() + 1, w.end());
      count += (!resets(t, head) && !resets(t, tail)) ? 1 : 0;
    });
    return count;
  }

  // random complete DFA
  inline mealysync::dfa random_dfa(std::mt19937& rng, std::size_t n,
                                   std::size_t k) {
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    std::vector<std::uint32_t>                   delta(n * k);
    for (auto& x : delta) {
      x = pick(rng);
    }
    return mealysync::dfa::with_numbered_states(mealysync::alphabet::numeric(k),
                                                std::move(delta));
  }

  // random DFA whose state n-1 is a sink reachable from every state
  inline mealysync::dfa random_sink_dfa(std::mt19937& rng, std::size_t n,
                                        std::size_t k) {
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    std::vector<std::uint32_t>                   delta(n * k);
    for (std::size_t q = 0; q + 1 < n; ++q) {
      for (std::size_t a = 0; a < k; ++a) {
        delta[q * k + a] = pick(rng);
      }
      // an edge to a later state keeps the sink co-accessible
      std::uniform_int_distribution<std::uint32_t> later(q + 1, n - 1);
      delta[q * k + pick(rng) % k] = later(rng);
    }
    for (std::size_t a = 0; a < k; ++a) {
      delta[(n - 1) * k + a] = n - 1;
    }
    return mealysync::dfa::with_numbered_states(mealysync::alphabet::numeric(k),
                                                std::move(delta));
  }

  // random nilpotent DFA: edges only go to strictly larger states, the last
  // state is the sink
  inline mealysync::dfa random_nilpotent_dfa(std::mt19937& rng, std::size_t n,
                                             std::size_t k) {
    std::vector<std::uint32_t> delta(n * k);
    for (std::size_t q = 0; q + 1 < n; ++q) {
      std::uniform_int_distribution<std::uint32_t> later(q + 1, n - 1);
      for (std::size_t a = 0; a < k; ++a) {
        delta[q * k + a] = later(rng);
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      delta[(n - 1) * k + a] = n - 1;
    }
    return mealysync::dfa::with_numbered_states(mealysync::alphabet::numeric(k),
                                                std::move(delta));
  }

  inline mealysync::dfa adding_machine_dfa() {
    return mealysync::parse_dfa("type: dfa\nalphabet: 0 1\nstates: q s\n"
                                "trans: q 0 s\ntrans: q 1 q\n"
                                "trans: s 0 s\ntrans: s 1 s\n");
  }

}  // namespace oracle
