#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "alphabet.hpp"
#include "classify.hpp"
#include "dfa.hpp"
#include "element.hpp"
#include "error.hpp"
#include "group.hpp"
#include "io.hpp"
#include "mealy.hpp"

namespace mealysync {

  ////////////////////////////////////////////////////////////////////////////
  // Finite groups given by their Cayley table
  ////////////////////////////////////////////////////////////////////////////

  class finite_group {
   public:
    finite_group() = default;

    // product[x * n + y] = x * y; checks the group axioms exhaustively
    finite_group(std::vector<std::string> elements,
                 std::vector<std::uint32_t> product)
        : _elements(std::move(elements)), _product(std::move(product)) {
      auto const n = _elements.size();
      if (n == 0 || _product.size() != n * n) {
        throw error(error_kind::invalid_group, "table has the wrong size");
      }
      for (auto x : _product) {
        if (x >= n) {
          throw error(error_kind::invalid_group, "product out of range");
        }
      }
      std::optional<std::uint32_t> id;
      for (std::uint32_t e = 0; e < n && !id; ++e) {
        bool ok = true;
        for (std::uint32_t x = 0; x < n && ok; ++x) {
          ok = mul(e, x) == x && mul(x, e) == x;
        }
        if (ok) {
          id = e;
        }
      }
      if (!id) {
        throw error(error_kind::invalid_group, "no identity element");
      }
      _identity = *id;
      for (std::uint32_t x = 0; x < n; ++x) {
        for (std::uint32_t y = 0; y < n; ++y) {
          for (std::uint32_t z = 0; z < n; ++z) {
            if (mul(mul(x, y), z) != mul(x, mul(y, z))) {
              throw error(error_kind::invalid_group, "product is not associative");
            }
          }
        }
      }
      _inverse.assign(n, 0);
      for (std::uint32_t x = 0; x < n; ++x) {
        bool found = false;
        for (std::uint32_t y = 0; y < n && !found; ++y) {
          if (mul(x, y) == _identity && mul(y, x) == _identity) {
            _inverse[x] = y;
            found       = true;
          }
        }
        if (!found) {
          throw error(error_kind::invalid_group,
                      "element '" + _elements[x] + "' has no inverse");
        }
      }
      _abelian = true;
      for (std::uint32_t x = 0; x < n; ++x) {
        for (std::uint32_t y = 0; y < n; ++y) {
          _abelian = _abelian && mul(x, y) == mul(y, x);
        }
      }
    }

    // Z/mZ with elements "0", ..., "m-1"
    static finite_group cyclic(std::size_t m) {
      if (m == 0) {
        throw error(error_kind::invalid_group, "cyclic group of order 0");
      }
      std::vector<std::string>   el;
      std::vector<std::uint32_t> prod;
      for (std::size_t i = 0; i < m; ++i) {
        el.push_back(std::to_string(i));
        for (std::size_t j = 0; j < m; ++j) {
          prod.push_back(static_cast<std::uint32_t>((i + j) % m));
        }
      }
      return finite_group(std::move(el), std::move(prod));
    }

    std::size_t size() const noexcept {
      return _elements.size();
    }

    std::vector<std::string> const& elements() const noexcept {
      return _elements;
    }

    std::uint32_t mul(std::uint32_t x, std::uint32_t y) const {
      return _product[x * _elements.size() + y];
    }

    std::uint32_t inverse(std::uint32_t x) const {
      return _inverse[x];
    }

    std::uint32_t identity() const noexcept {
      return _identity;
    }

    bool is_abelian() const noexcept {
      return _abelian;
    }

    // c * x in additive notation, c any integer
    std::uint32_t times(long long c, std::uint32_t x) const {
      auto const n = static_cast<long long>(size());
      c            = ((c % n) + n) % n;
      std::uint32_t r = _identity;
      for (long long i = 0; i < c; ++i) {
        r = mul(r, x);
      }
      return r;
    }

    std::size_t order_of(std::uint32_t x) const {
      std::size_t   n = 1;
      std::uint32_t y = x;
      while (y != _identity) {
        y = mul(y, x);
        ++n;
      }
      return n;
    }

    class alphabet alphabet() const {
      return mealysync::alphabet(_elements);
    }

   private:
    std::vector<std::string>   _elements;
    std::vector<std::uint32_t> _product;
    std::vector<std::uint32_t> _inverse;
    std::uint32_t              _identity = 0;
    bool                       _abelian  = true;
  };

  // Cayley table text: a header line with the element tokens (optionally
  // preceded by a corner token "*"), then one line per element: its token
  // followed by its products with the header elements. '#' comments.
  inline finite_group parse_cayley(std::istream& in) {
    std::string                          line;
    std::size_t                          lineno = 0;
    std::vector<std::string>             header;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::int64_t>            prod;
    std::size_t                          rows = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) {
        line.erase(hash);
      }
      auto tok = detail::split_ws(line);
      if (tok.empty()) {
        continue;
      }
      if (header.empty()) {
        if (tok[0] == "*") {
          tok.erase(tok.begin());
        }
        if (tok.empty()) {
          throw parse_error(lineno, "empty header");
        }
        for (auto const& t : tok) {
          if (!alphabet::valid_token(t)) {
            throw parse_error(lineno, "invalid element token '" + t + "'");
          }
          if (!index.emplace(t, static_cast<std::uint32_t>(header.size())).second) {
            throw parse_error(lineno, "duplicate element '" + t + "'");
          }
          header.push_back(t);
        }
        prod.assign(header.size() * header.size(), -1);
        continue;
      }
      auto const n = header.size();
      if (tok.size() != n + 1) {
        throw parse_error(lineno, "expected " + std::to_string(n + 1)
                                      + " tokens, found "
                                      + std::to_string(tok.size()));
      }
      auto row = index.find(tok[0]);
      if (row == index.end()) {
        throw parse_error(lineno, "unknown element '" + tok[0] + "'");
      }
      if (prod[row->second * n] >= 0) {
        throw parse_error(lineno, "duplicate row '" + tok[0] + "'");
      }
      for (std::size_t j = 0; j < n; ++j) {
        auto it = index.find(tok[j + 1]);
        if (it == index.end()) {
          throw parse_error(lineno, "unknown element '" + tok[j + 1] + "'");
        }
        prod[row->second * n + j] = it->second;
      }
      ++rows;
    }
    if (header.empty()) {
      throw parse_error(lineno, "empty table");
    }
    if (rows != header.size()) {
      throw parse_error(0, "table needs one row per element");
    }
    return finite_group(header,
                        std::vector<std::uint32_t>(prod.begin(), prod.end()));
  }

  inline finite_group parse_cayley(std::string const& text) {
    std::istringstream in(text);
    return parse_cayley(in);
  }

  ////////////////////////////////////////////////////////////////////////////
  // Cerny automata
  ////////////////////////////////////////////////////////////////////////////

  // States 0..n-1 over {0, 1}: 0 rotates i -> i+1 mod n, 1 fixes every
  // state except 0 -> 1.
  inline dfa cerny(std::size_t n) {
    if (n < 2) {
      throw error(error_kind::invalid_argument, "cerny automaton needs n >= 2");
    }
    std::vector<state_type> delta;
    for (std::size_t i = 0; i < n; ++i) {
      delta.push_back(static_cast<state_type>((i + 1) % n));
      delta.push_back(static_cast<state_type>(i == 0 ? 1 : i));
    }
    return dfa::with_numbered_states(alphabet::numeric(2), std::move(delta));
  }

  // x | 1 - x on every edge
  inline group_coloring flip_coloring(dfa const& d) {
    if (d.alphabet_size() != 2) {
      throw error(error_kind::invalid_argument,
                  "the flip coloring needs a two-letter alphabet");
    }
    return group_coloring(d.size(), permutation{1, 0});
  }

  inline group_coloring cerny_coloring(std::size_t n) {
    return flip_coloring(cerny(n));
  }

  struct cerny_ideal_result {
    std::vector<word_type> generators;  // w1, w2
    bool                   letters_swapped = false;
  };

  // w1 = 1^{n-1} (0^{n-1} 1^{n-1})^{n-2} 0^{n-1} and its complement w2,
  // checked to be reset words of C_n (letter roles swapped otherwise).
  inline cerny_ideal_result cerny_ideal(std::size_t n) {
    auto const d = cerny(n);
    auto       build = [n](letter_type one, letter_type zero) {
      word_type ones(n - 1, one), zeros(n - 1, zero);
      word_type w = ones;
      for (std::size_t i = 0; i + 2 < n; ++i) {
        w.insert(w.end(), zeros.begin(), zeros.end());
        w.insert(w.end(), ones.begin(), ones.end());
      }
      w.insert(w.end(), zeros.begin(), zeros.end());
      return w;
    };
    auto const all = all_states(n);
    for (bool swapped : {false, true}) {
      letter_type one = swapped ? 0 : 1, zero = swapped ? 1 : 0;
      auto        w1 = build(one, zero);
      auto        w2 = build(zero, one);
      if (d.image(all, w1).size() == 1 && d.image(all, w2).size() == 1) {
        return {{w1, w2}, swapped};
      }
    }
    throw error(error_kind::invalid_argument,
                "ideal generators are not reset words");
  }

  ////////////////////////////////////////////////////////////////////////////
  // De Bruijn automata
  ////////////////////////////////////////////////////////////////////////////

  // States A^k in lexicographic order (first letter most significant);
  // u = y s reads x and moves to s x, with output x * y^{-1}.
  struct debruijn_family {
    std::size_t   k = 0;
    finite_group  group;
    dfa           automaton;
    mealy_machine machine;

    // the word of a state
    word_type state_word(state_type q) const {
      word_type  w(k);
      auto const m = group.size();
      for (std::size_t i = k; i-- > 0;) {
        w[i] = static_cast<letter_type>(q % m);
        q /= static_cast<state_type>(m);
      }
      return w;
    }

    state_type state_of(word_type const& w) const {
      if (w.size() != k) {
        throw error(error_kind::invalid_argument, "state words have length k");
      }
      state_type q = 0;
      for (auto a : w) {
        q = q * static_cast<state_type>(group.size()) + a;
      }
      return q;
    }

    state_type identity_state() const {
      return state_of(word_type(k, group.identity()));
    }
  };

  namespace detail {
    inline std::string join_tokens(finite_group const& g, word_type const& w) {
      bool single = true;
      for (auto const& e : g.elements()) {
        single = single && e.size() == 1;
      }
      std::string out;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0 && !single) {
          out += '.';
        }
        out += g.elements()[w[i]];
      }
      return out;
    }
  }  // namespace detail

  inline debruijn_family make_debruijn(std::size_t k, finite_group const& g) {
    if (k == 0) {
      throw error(error_kind::invalid_argument, "k must be at least 1");
    }
    auto const m = g.size();
    std::size_t n = 1;
    for (std::size_t i = 0; i < k; ++i) {
      n *= m;
    }
    debruijn_family f{k, g, {}, mealy_machine()};
    std::vector<std::string> names;
    std::vector<state_type>  delta;
    std::vector<letter_type> lambda;
    for (state_type q = 0; q < n; ++q) {
      auto u = f.state_word(q);
      names.push_back(detail::join_tokens(g, u));
      for (letter_type x = 0; x < m; ++x) {
        word_type v(u.begin() + 1, u.end());
        v.push_back(x);
        delta.push_back(f.state_of(v));
        lambda.push_back(g.mul(x, g.inverse(u[0])));
      }
    }
    f.automaton = dfa(g.alphabet(), std::move(names), std::move(delta));
    f.machine   = mealy_machine(f.automaton, std::move(lambda));
    return f;
  }

  inline dfa debruijn(std::size_t k, finite_group const& g) {
    return make_debruijn(k, g).automaton;
  }

  inline group_coloring chi_coloring(std::size_t k, finite_group const& g) {
    auto           f = make_debruijn(k, g);
    group_coloring chi;
    for (state_type q = 0; q < f.machine.size(); ++q) {
      chi.push_back(f.machine.state_function(q));
    }
    return chi;
  }

  // zeta(q, v)_i = first letter of q . v[0, i-1]
  inline word_type zeta(debruijn_family const& f, state_type q,
                        word_type const& v) {
    if (v.empty()) {
      throw error(error_kind::invalid_argument, "zeta needs a nonempty word");
    }
    word_type out;
    for (auto a : v) {
      out.push_back(f.state_word(q)[0]);
      q = f.automaton.next(q, a);
    }
    return out;
  }

  // As above, for a machine claimed to be M(B_k(G), chi_k(G)).
  inline word_type zeta(mealy_machine const& m, std::size_t k,
                        finite_group const& g, state_type q,
                        word_type const& v) {
    auto f = make_debruijn(k, g);
    if (!(f.machine == m)) {
      throw error(error_kind::wrong_family,
                  "machine is not the De Bruijn machine for these parameters");
    }
    return zeta(f, q, v);
  }

  // v * w^{-1} letterwise
  inline word_type divide(finite_group const& g, word_type const& v,
                          word_type const& w) {
    word_type out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = g.mul(v[i], g.inverse(w[i]));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Truncated power series over an abelian group
  ////////////////////////////////////////////////////////////////////////////

  using series_prefix = std::vector<std::uint32_t>;

  namespace series_kind {
    struct generator {  // B_q
      state_type q;
    };
    struct inverse {  // B_q^{-1}
      state_type q;
    };
    // B_e^l (B_q B_e^{-1}) B_e^{-l}: translation by -(1 - t^k)^l F_q
    struct conjugate {
      state_type q;
      long       l;
    };
  }  // namespace series_kind

  using series_op = std::variant<series_kind::generator, series_kind::inverse,
                                 series_kind::conjugate>;

  namespace detail {
    inline void require_abelian(finite_group const& g) {
      if (!g.is_abelian()) {
        throw error(error_kind::non_abelian, "the group is not abelian");
      }
    }

    // coefficients mod |G| of (1 - t^k)^l up to t^{n-1}, l any integer
    inline std::vector<long long> binomial_series(std::size_t k, long l,
                                                  std::size_t n,
                                                  long long   mod) {
      std::vector<long long> out(n, 0);
      // c_j = coefficient of t^{kj}
      std::size_t const terms = (n + k - 1) / k;
      if (l >= 0) {
        // C(l, j) (-1)^j via Pascal's rule
        std::vector<long long> row{1};
        for (long i = 0; i < l; ++i) {
          std::vector<long long> nxt(row.size() + 1, 0);
          for (std::size_t j = 0; j < row.size(); ++j) {
            nxt[j]     = (nxt[j] + row[j]) % mod;
            nxt[j + 1] = (nxt[j + 1] + row[j]) % mod;
          }
          row = std::move(nxt);
        }
        for (std::size_t j = 0; j < row.size() && j < terms; ++j) {
          out[j * k] = (j % 2 == 0 ? row[j] : mod - row[j]) % mod;
        }
      } else {
        // (1 - x)^{-r} = sum_j C(r + j - 1, j) x^j
        auto const             r = static_cast<std::size_t>(-l);
        std::vector<long long> c(terms, 1);  // r = 0 would be 1, 0, 0, ...
        // iterate prefix sums r times starting from (1, 0, 0, ...)
        std::fill(c.begin(), c.end(), 0);
        c[0] = 1;
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 1; j < terms; ++j) {
            c[j] = (c[j] + c[j - 1]) % mod;
          }
        }
        for (std::size_t j = 0; j < terms; ++j) {
          out[j * k] = c[j];
        }
      }
      return out;
    }

    // (p * f) truncated, p integer coefficients
    inline series_prefix multiply(finite_group const& g,
                                  std::vector<long long> const& p,
                                  series_prefix const& f) {
      series_prefix out(f.size(), g.identity());
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) {
          continue;
        }
        for (std::size_t j = 0; i + j < f.size(); ++j) {
          out[i + j] = g.mul(out[i + j], g.times(p[i], f[j]));
        }
      }
      return out;
    }

    inline series_prefix add(finite_group const& g, series_prefix x,
                             series_prefix const& y, bool subtract) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = g.mul(x[i], subtract ? g.inverse(y[i]) : y[i]);
      }
      return x;
    }
  }  // namespace detail

  // Evaluates the power-series form of the action on a prefix whose length
  // is a positive multiple of k.
  inline series_prefix series_apply(debruijn_family const& f,
                                    series_op const&       op,
                                    series_prefix const&   g) {
    auto const& grp = f.group;
    detail::require_abelian(grp);
    auto const k = f.k;
    auto const n = g.size();
    if (n < k || n % k != 0) {
      throw error(error_kind::prefix_too_short,
                  "prefix length must be a positive multiple of k");
    }
    auto const mod = static_cast<long long>(grp.size());
    auto       fq  = [&](state_type q) {
      series_prefix out(n, grp.identity());
      auto          w = f.state_word(q);
      std::copy(w.begin(), w.end(), out.begin());
      return out;
    };
    return std::visit(
        [&](auto const& o) -> series_prefix {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, series_kind::generator>) {
            // (1 - t^k) F_g - F_q
            auto p = detail::binomial_series(k, 1, n, mod);
            return detail::add(grp, detail::multiply(grp, p, g), fq(o.q), true);
          } else if constexpr (std::is_same_v<T, series_kind::inverse>) {
            // (F_g + F_q) / (1 - t^k)
            auto p = detail::binomial_series(k, -1, n, mod);
            return detail::multiply(grp, p, detail::add(grp, g, fq(o.q), false));
          } else {
            // F_g - (1 - t^k)^l F_q
            auto p = detail::binomial_series(k, o.l, n, mod);
            return detail::add(grp, g, detail::multiply(grp, p, fq(o.q)), true);
          }
        },
        op);
  }

  // The group word realising a series operation on the machine.
  inline group_word series_word(debruijn_family const& f, series_op const& op) {
    auto const e = f.identity_state();
    return std::visit(
        [&](auto const& o) -> group_word {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, series_kind::generator>) {
            return generator(o.q);
          } else if constexpr (std::is_same_v<T, series_kind::inverse>) {
            return inverse(generator(o.q));
          } else {
            auto be = power(generator(e), o.l);
            return be * generator(o.q) * inverse(generator(e)) * inverse(be);
          }
        },
        op);
  }

  ////////////////////////////////////////////////////////////////////////////
  // Wreath-product relations
  ////////////////////////////////////////////////////////////////////////////

  struct lamplighter_report {
    std::size_t k = 0;
    // t_h = B_h B_e^{-1} has the order of h in A^k, for every h
    bool translation_orders = true;
    // a^i t_h a^{-i} and a^j t_h' a^{-j} commute for |i|, |j| <= max_shift
    bool conjugates_commute = true;
    // a = B_e^{-1} has order exceeding the cap
    bool a_infinite = true;
    // h -> t_h injective
    bool injective = true;
    // t_e is the identity
    bool te_identity = true;
    std::size_t commutation_checks = 0;

    bool ok() const noexcept {
      return translation_orders && conjugates_commute && a_infinite && injective
             && te_identity;
    }
  };

  inline lamplighter_report lamplighter_suite(std::size_t k, finite_group const& g,
                                              long        max_shift = 3,
                                              std::size_t order_cap = 64) {
    detail::require_abelian(g);
    auto const f = make_debruijn(k, g);
    auto const& m = f.machine;
    auto const e = f.identity_state();
    lamplighter_report rep;
    rep.k          = k;
    auto translate = [&](state_type h) {
      return generator(h) * inverse(generator(e));
    };
    auto const a = inverse(generator(e));
    std::vector<element> ts;
    for (state_type h = 0; h < m.size(); ++h) {
      auto        w     = f.state_word(h);
      std::size_t order = 1;
      for (auto x : w) {
        order = std::lcm(order, g.order_of(x));
      }
      auto o = element_order(m, translate(h), order_cap);
      rep.translation_orders = rep.translation_orders && o.finite && o.order == order;
      ts.push_back(product(m, translate(h)));
    }
    rep.te_identity = ts[e].is_identity();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        rep.injective = rep.injective && !(ts[i] == ts[j]);
      }
    }
    std::vector<element> conj;
    for (state_type h = 0; h < m.size(); ++h) {
      for (long i = -max_shift; i <= max_shift; ++i) {
        conj.push_back(product(m, power(a, i) * translate(h) * power(a, -i)));
      }
    }
    for (std::size_t x = 0; x < conj.size(); ++x) {
      for (std::size_t y = x + 1; y < conj.size(); ++y) {
        ++rep.commutation_checks;
        if (!(compose(conj[x], conj[y]) == compose(conj[y], conj[x]))) {
          rep.conjugates_commute = false;
        }
      }
    }
    rep.a_infinite = !element_order(m, a, order_cap).finite;
    return rep;
  }

}  // namespace mealysync
