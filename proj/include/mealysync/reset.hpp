#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "classify.hpp"
#include "dfa.hpp"
#include "error.hpp"
#include "lang.hpp"
#include "mealy.hpp"

namespace mealysync {

  ////////////////////////////////////////////////////////////////////////////
  // Images and preimages of languages under A_q
  ////////////////////////////////////////////////////////////////////////////

  // A_q(L): product of the machine with a deterministic acceptor for L,
  // reading the output letter and guessing the input letter.
  inline lang_acceptor image_language(mealy_machine const& m, state_type q,
                                      lang_acceptor const& x) {
    check_same_alphabet(m.alphabet(), x.alphabet());
    if (q >= m.size()) {
      throw error(error_kind::unknown_state, "state out of range");
    }
    auto const& t = x.det();
    auto const  k = m.alphabet_size();
    std::unordered_map<std::uint64_t, state_type>  seen;
    std::vector<std::pair<state_type, state_type>> nodes{{q, 0}};
    seen.emplace(static_cast<std::uint64_t>(q) * t.size(), 0);
    std::vector<std::vector<state_type>> succ;
    std::vector<char>                    final;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto [r, p] = nodes[i];
      final.push_back(t.final[p]);
      succ.resize(nodes.size() * k);
      for (letter_type b = 0; b < k; ++b) {
        auto a   = m.output(r, b);
        auto r2  = m.next(r, b);
        auto p2  = t.step(p, b);
        auto key = static_cast<std::uint64_t>(r2) * t.size() + p2;
        auto [it, fresh]
            = seen.emplace(key, static_cast<state_type>(nodes.size()));
        if (fresh) {
          nodes.emplace_back(r2, p2);
          succ.resize(nodes.size() * k);
        }
        succ[i * k + a].push_back(it->second);
      }
    }
    succ.resize(nodes.size() * k);
    return lang_acceptor(m.alphabet(), std::move(succ), {0}, std::move(final));
  }

  namespace detail {
    // {u : A_q(u) in L}, deterministic for any machine.
    inline lang_acceptor preimage(mealy_machine const& m, state_type q,
                                  lang_acceptor const& x) {
      check_same_alphabet(m.alphabet(), x.alphabet());
      if (q >= m.size()) {
        throw error(error_kind::unknown_state, "state out of range");
      }
      auto const& t = x.det();
      auto const  k = m.alphabet_size();
      std::unordered_map<std::uint64_t, state_type>  seen;
      std::vector<std::pair<state_type, state_type>> nodes{{q, 0}};
      seen.emplace(static_cast<std::uint64_t>(q) * t.size(), 0);
      std::vector<state_type> next;
      std::vector<char>       final;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [r, p] = nodes[i];
        final.push_back(t.final[p]);
        for (letter_type a = 0; a < k; ++a) {
          auto r2  = m.next(r, a);
          auto p2  = t.step(p, m.output(r, a));
          auto key = static_cast<std::uint64_t>(r2) * t.size() + p2;
          auto [it, fresh]
              = seen.emplace(key, static_cast<state_type>(nodes.size()));
          if (fresh) {
            nodes.emplace_back(r2, p2);
          }
          next.push_back(it->second);
        }
      }
      return lang_acceptor::deterministic(m.alphabet(), std::move(next),
                                          std::move(final));
    }
  }  // namespace detail

  // A_q^{-1}(L)
  inline lang_acceptor preimage_language(mealy_machine const& m, state_type q,
                                         lang_acceptor const& x) {
    m.require_invertible();
    return detail::preimage(m, q, x);
  }

  ////////////////////////////////////////////////////////////////////////////
  // Reset and weakly reset machines
  ////////////////////////////////////////////////////////////////////////////

  struct reset_result {
    bool synchronizing = false;
    bool reset         = false;
    // per state: A_q(Syn) is contained in Syn, and otherwise the shortlex
    // least u in Syn with A_q(u) outside Syn
    std::vector<char>                     stable;
    std::vector<std::optional<word_type>> witness;
  };

  inline reset_result is_reset(mealy_machine const& m) {
    reset_result r;
    auto const&  d  = m.automaton();
    r.synchronizing = pairs_synchronizable(d);
    auto syn        = syn_language(d);
    for (state_type q = 0; q < m.size(); ++q) {
      bool ok = includes(syn, image_language(m, q, syn));
      r.stable.push_back(ok);
      if (ok) {
        r.witness.emplace_back();
      } else {
        r.witness.push_back(
            shortest_member(difference(syn, detail::preimage(m, q, syn))));
      }
    }
    r.reset = r.synchronizing
              && std::all_of(r.stable.begin(), r.stable.end(),
                             [](char c) { return c != 0; });
    return r;
  }

  struct weakly_reset_result {
    bool                      weakly_reset = false;
    std::string               reason;  // empty when weakly reset
    std::optional<state_type> state;   // state whose image leaves H
    std::optional<word_type>  witness; // u in H with A_q(u) outside H
  };

  inline weakly_reset_result is_weakly_reset(mealy_machine const& m,
                                             lang_acceptor const& h) {
    check_same_alphabet(m.alphabet(), h.alphabet());
    weakly_reset_result r;
    auto const&         d = m.automaton();
    if (!pairs_synchronizable(d)) {
      r.reason = "not synchronizing";
      return r;
    }
    if (is_empty(h)) {
      r.reason = "ideal is empty";
      return r;
    }
    auto syn = syn_language(d);
    if (!includes(syn, h)) {
      r.reason  = "ideal not contained in Syn";
      r.witness = shortest_member(difference(h, syn));
      return r;
    }
    for (state_type q = 0; q < m.size(); ++q) {
      if (!includes(h, image_language(m, q, h))) {
        r.reason  = "ideal not stable under state " + m.name(q);
        r.state   = q;
        r.witness = shortest_member(difference(h, detail::preimage(m, q, h)));
        return r;
      }
    }
    r.weakly_reset = true;
    return r;
  }

  inline weakly_reset_result
  is_weakly_reset(mealy_machine const&          m,
                  std::vector<word_type> const& generators) {
    return is_weakly_reset(m, ideal_language(m.alphabet(), generators));
  }

  struct maximal_ideal_result {
    bool stabilized = false;
    // number of refinement steps performed; 0 means Syn was already stable
    std::size_t                  iterations = 0;
    std::optional<lang_acceptor> language;  // set when stabilized
    lang_acceptor                last;      // the last iterate computed
  };

  // Greatest fixpoint of L -> L n (n_q A_q^{-1}(L)) starting from Syn: the
  // words u with g(u) in Syn for every g in S(A) and g = 1.
  inline maximal_ideal_result maximal_ideal(mealy_machine const& m,
                                            std::size_t iteration_cap = 50) {
    auto const& d = m.automaton();
    if (!pairs_synchronizable(d)) {
      throw error(error_kind::not_synchronizing,
                  "the maximal ideal is defined for synchronizing machines");
    }
    auto current = minimize(syn_language(d));
    for (std::size_t i = 0;; ++i) {
      auto next = current;
      for (state_type q = 0; q < m.size(); ++q) {
        next = intersect(next, detail::preimage(m, q, current));
      }
      next = minimize(next);
      if (equivalent(next, current)) {
        return {true, i, current, current};
      }
      if (i + 1 >= iteration_cap) {
        return {false, i + 1, std::nullopt, next};
      }
      current = std::move(next);
    }
  }

  ////////////////////////////////////////////////////////////////////////////
  // Modified state functions
  ////////////////////////////////////////////////////////////////////////////

  // The unique state of Q.(q o u), if Q.(q o u) is a singleton.
  inline std::optional<state_type>
  modified_state(mealy_machine const& m, state_type q, word_type const& u) {
    auto s = m.automaton().image(all_states(m.size()), m.apply(q, u));
    if (s.size() != 1) {
      return std::nullopt;
    }
    return s[0];
  }

  enum class ideal_source { syn, generated, maximal };

  // The domain on which modified state functions are compared.
  struct analysis_ideal {
    ideal_source           source = ideal_source::syn;
    std::vector<word_type> generators;  // for generated
    lang_acceptor          language;

    std::string describe(class alphabet const& alph) const {
      switch (source) {
        case ideal_source::syn: return "Syn";
        case ideal_source::maximal: return "maximal-ideal";
        case ideal_source::generated: {
          std::string out = "generated:";
          for (auto const& w : generators) {
            out += ' ' + alph.format(w);
          }
          return out;
        }
      }
      return "";
    }
  };

  inline analysis_ideal syn_ideal(mealy_machine const& m) {
    return {ideal_source::syn, {}, syn_language(m.automaton())};
  }

  inline analysis_ideal generated_ideal(mealy_machine const&   m,
                                        std::vector<word_type> gens) {
    auto lang = ideal_language(m.alphabet(), gens);
    return {ideal_source::generated, std::move(gens), std::move(lang)};
  }

  namespace detail {
    // Throws not_reset unless the machine is (weakly) reset on the ideal.
    inline void require_reset_on(mealy_machine const&  m,
                                 analysis_ideal const& h) {
      if (h.source == ideal_source::syn) {
        auto r = is_reset(m);
        if (!r.reset) {
          throw error(error_kind::not_reset,
                      r.synchronizing ? "machine is not reset"
                                      : "machine is not synchronizing");
        }
      } else {
        auto r = is_weakly_reset(m, h.language);
        if (!r.weakly_reset) {
          throw error(error_kind::not_reset,
                      "machine is not weakly reset on the ideal: " + r.reason);
        }
      }
    }

    // L(q, s) = A_q^{-1}(R(s)) n H for every state q and target s.
    struct level_sets {
      std::vector<std::vector<lang_acceptor>> sets;  // [q][s]
    };

    inline level_sets compute_level_sets(mealy_machine const& m,
                                         lang_acceptor const& h) {
      level_sets              out;
      std::vector<lang_acceptor> targets;
      for (state_type s = 0; s < m.size(); ++s) {
        targets.push_back(r_language(m.automaton(), s));
      }
      for (state_type q = 0; q < m.size(); ++q) {
        out.sets.emplace_back();
        for (state_type s = 0; s < m.size(); ++s) {
          out.sets.back().push_back(
              minimize(intersect(preimage(m, q, targets[s]), h)));
        }
      }
      return out;
    }

    inline std::optional<word_type> level_witness(level_sets const& ls,
                                                  state_type p, state_type q) {
      std::optional<word_type> best;
      for (std::size_t s = 0; s < ls.sets[p].size(); ++s) {
        auto w = difference_witness(ls.sets[p][s], ls.sets[q][s]);
        if (w && (!best || shortlex_less(*w, *best))) {
          best = std::move(w);
        }
      }
      return best;
    }
  }  // namespace detail

  struct msf_comparison {
    bool                      equal = true;
    std::optional<word_type>  witness;  // shortest, shortlex least
    std::optional<state_type> value_p;  // modified states at the witness
    std::optional<state_type> value_q;
  };

  inline msf_comparison
  modified_state_functions_equal(mealy_machine const&  m, state_type p,
                                 state_type q, analysis_ideal const& h) {
    m.require_invertible();
    if (p >= m.size() || q >= m.size()) {
      throw error(error_kind::unknown_state, "state out of range");
    }
    detail::require_reset_on(m, h);
    msf_comparison r;
    if (p == q) {
      return r;
    }
    std::optional<word_type>   best;
    for (state_type s = 0; s < m.size(); ++s) {
      auto rs = r_language(m.automaton(), s);
      auto lp = intersect(detail::preimage(m, p, rs), h.language);
      auto lq = intersect(detail::preimage(m, q, rs), h.language);
      auto w  = difference_witness(lp, lq);
      if (w && (!best || shortlex_less(*w, *best))) {
        best = std::move(w);
      }
    }
    if (best) {
      r.equal   = false;
      r.value_p = modified_state(m, p, *best);
      r.value_q = modified_state(m, q, *best);
      r.witness = std::move(best);
    }
    return r;
  }

  inline msf_comparison modified_state_functions_equal(mealy_machine const& m,
                                                       state_type p,
                                                       state_type q) {
    return modified_state_functions_equal(m, p, q, syn_ideal(m));
  }

  ////////////////////////////////////////////////////////////////////////////
  // Certificates
  ////////////////////////////////////////////////////////////////////////////

  enum class freeness_verdict { free, singular, not_applicable };

  inline char const* to_string(freeness_verdict v) noexcept {
    switch (v) {
      case freeness_verdict::free: return "free";
      case freeness_verdict::singular: return "singular";
      case freeness_verdict::not_applicable: return "not-applicable";
    }
    return "";
  }

  struct pair_entry {
    state_type                p = 0, q = 0;
    bool                      equal = true;
    std::optional<word_type>  witness;
    std::optional<state_type> value_p, value_q;
  };

  // one language-equivalence check A_p^{-1}(R(s)) n H == A_q^{-1}(R(s)) n H
  struct equality_check {
    state_type p = 0, q = 0, s = 0;
    bool       equal = true;
  };

  struct freeness_certificate {
    freeness_verdict              verdict = freeness_verdict::not_applicable;
    std::string                   reason;
    std::optional<analysis_ideal> ideal;
    std::vector<pair_entry>       pairs;       // all p < q
    std::vector<equality_check>   transcript;  // for singular verdicts
  };

  inline freeness_certificate certify_freeness(mealy_machine const&  m,
                                               analysis_ideal const& h) {
    freeness_certificate c;
    c.ideal = h;
    if (!m.is_invertible()) {
      c.reason = "not invertible";
      return c;
    }
    if (!pairs_synchronizable(m.automaton())) {
      c.reason = "not synchronizing";
      return c;
    }
    if (h.source == ideal_source::syn) {
      if (!is_reset(m).reset) {
        c.reason = "not reset";
        return c;
      }
    } else {
      auto r = is_weakly_reset(m, h.language);
      if (!r.weakly_reset) {
        c.reason = "not weakly reset: " + r.reason;
        return c;
      }
    }
    auto   ls        = detail::compute_level_sets(m, h.language);
    bool   all_equal = true, all_distinct = true;
    for (state_type p = 0; p < m.size(); ++p) {
      for (state_type q = p + 1; q < m.size(); ++q) {
        pair_entry e{p, q, true, {}, {}, {}};
        e.witness = detail::level_witness(ls, p, q);
        if (e.witness) {
          e.equal   = false;
          e.value_p = modified_state(m, p, *e.witness);
          e.value_q = modified_state(m, q, *e.witness);
        }
        all_equal    = all_equal && e.equal;
        all_distinct = all_distinct && !e.equal;
        c.pairs.push_back(std::move(e));
      }
    }
    if (all_equal) {
      c.verdict = freeness_verdict::singular;
      c.reason  = "all modified state functions are equal";
      for (state_type q = 1; q < m.size(); ++q) {
        for (state_type s = 0; s < m.size(); ++s) {
          c.transcript.push_back(
              {0, q, s, equivalent(ls.sets[0][s], ls.sets[q][s])});
        }
      }
    } else if (all_distinct) {
      c.verdict = freeness_verdict::free;
      c.reason  = "pairwise distinct modified state functions";
    } else {
      c.reason = "modified state functions neither all equal nor all distinct";
    }
    return c;
  }

  inline freeness_certificate certify_freeness(mealy_machine const& m) {
    return certify_freeness(m, syn_ideal(m));
  }

  // Text form: one "key: value" per line, witnesses one per pair.
  inline std::string to_text(mealy_machine const&        m,
                             freeness_certificate const& c) {
    auto const& alph = m.alphabet();
    std::string out  = "verdict: " + std::string(to_string(c.verdict));
    if (c.verdict == freeness_verdict::not_applicable) {
      out += " (" + c.reason + ")";
    }
    out += '\n';
    if (c.ideal) {
      out += "ideal: " + c.ideal->describe(alph) + '\n';
    }
    if (c.verdict == freeness_verdict::not_applicable && c.pairs.empty()) {
      return out;
    }
    out += "reason: " + c.reason + '\n';
    for (auto const& e : c.pairs) {
      out += "pair: " + m.name(e.p) + ' ' + m.name(e.q) + ' ';
      if (e.equal) {
        out += "equal\n";
      } else {
        out += "witness " + alph.format(*e.witness) + " -> "
               + (e.value_p ? m.name(*e.value_p) : "?") + ' '
               + (e.value_q ? m.name(*e.value_q) : "?") + '\n';
      }
    }
    for (auto const& t : c.transcript) {
      out += "check: " + m.name(t.p) + ' ' + m.name(t.q) + " target "
             + m.name(t.s) + (t.equal ? " equal" : " differ") + '\n';
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Gap classification for simple automata
  ////////////////////////////////////////////////////////////////////////////

  // Free or singular; anything else contradicts the dichotomy for simple
  // synchronizing automata and is reported as theorem_violation.
  inline freeness_certificate gap_classify(mealy_machine const&  m,
                                           analysis_ideal const& h) {
    if (!is_simple(m.automaton())) {
      throw error(error_kind::not_simple, "underlying automaton is not simple");
    }
    m.require_invertible();
    detail::require_reset_on(m, h);
    auto c = certify_freeness(m, h);
    if (c.verdict == freeness_verdict::not_applicable) {
      throw error(error_kind::theorem_violation,
                  "simple automaton with mixed modified state functions");
    }
    return c;
  }

  inline freeness_certificate gap_classify(mealy_machine const& m) {
    return gap_classify(m, syn_ideal(m));
  }

  ////////////////////////////////////////////////////////////////////////////
  // Weakly reset coloring with a free semigroup
  ////////////////////////////////////////////////////////////////////////////

  struct prop_example_result {
    group_coloring         coloring;
    std::vector<word_type> ideal_generators;  // {a}, {b}
  };

  // At q swap a and b, identity everywhere else; the ideal is A*{a,b}A*.
  inline prop_example_result prop_example_coloring(dfa const& d, state_type q,
                                                   letter_type a,
                                                   letter_type b) {
    auto fail = [](std::string const& what) {
      throw error(error_kind::hypothesis_failed, "hypothesis failed: " + what);
    };
    auto const n = d.size();
    auto const k = d.alphabet_size();
    if (q >= n) {
      throw error(error_kind::unknown_state, "state out of range");
    }
    if (a >= k || b >= k) {
      throw error(error_kind::unknown_symbol, "letter out of range");
    }
    if (n < 2 || !is_prime(n)) {
      fail("prime (|Q| = " + std::to_string(n) + " is not a prime > 1)");
    }
    if (!pairs_synchronizable(d)) {
      fail("synchronizing");
    }
    if (!lemma_simple_sufficient(d)) {
      fail("transitive (no set of permutation letters acts transitively)");
    }
    if (a == b) {
      fail("distinct letters");
    }
    auto qa = d.image(all_states(n), word_type{a});
    auto qb = d.image(all_states(n), word_type{b});
    if (qa.size() != 1) {
      fail("synchronizing letter (" + d.alphabet().symbol(a) + ")");
    }
    if (qb.size() != 1) {
      fail("synchronizing letter (" + d.alphabet().symbol(b) + ")");
    }
    if (qa == qb) {
      fail("distinct targets (Q.a = Q.b)");
    }
    prop_example_result r;
    r.coloring    = identity_coloring(d);
    r.coloring[q] = transposition(k, a, b);
    r.ideal_generators = {word_type{a}, word_type{b}};
    return r;
  }

}  // namespace mealysync
