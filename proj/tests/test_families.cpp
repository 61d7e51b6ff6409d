#include "catch_amalgamated.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

using namespace mealysync;

namespace {

  // S3 as permutations of {0, 1, 2}, product (x * y)(i) = x(y(i))
  std::string s3_table() {
    std::vector<std::array<int, 3>> p{{0, 1, 2}, {1, 0, 2}, {0, 2, 1},
                                      {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
    std::vector<std::string> name{"e", "a", "b", "c", "r", "s"};
    std::ostringstream       out;
    out << "*";
    for (auto const& n : name) {
      out << ' ' << n;
    }
    out << '\n';
    for (std::size_t x = 0; x < p.size(); ++x) {
      out << name[x];
      for (std::size_t y = 0; y < p.size(); ++y) {
        std::array<int, 3> c{p[x][p[y][0]], p[x][p[y][1]], p[x][p[y][2]]};
        auto it = std::find(p.begin(), p.end(), c);
        out << ' ' << name[it - p.begin()];
      }
      out << '\n';
    }
    return out.str();
  }

  std::string slurp(std::string const& path) {
    std::ifstream      in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  error_kind kind_of(auto&& f) {
    try {
      f();
    } catch (error const& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return error_kind::invalid_argument;
  }

  template <typename F>
  void for_words(std::size_t k, std::size_t max_len, F&& f) {
    for (std::size_t len = 1; len <= max_len; ++len) {
      oracle::words_of_length(k, len, f);
    }
  }

}  // namespace

TEST_CASE("group tables", "[families]") {
  for (std::size_t m = 1; m <= 6; ++m) {
    auto g = finite_group::cyclic(m);
    REQUIRE(g.size() == m);
    REQUIRE(g.is_abelian());
    REQUIRE(g.identity() == 0);
    for (std::uint32_t x = 0; x < m; ++x) {
      REQUIRE(g.mul(x, g.inverse(x)) == 0);
      REQUIRE(m % g.order_of(x) == 0);
      REQUIRE(g.times(static_cast<long long>(m) + 1, x) == x);
      REQUIRE(g.times(-1, x) == g.inverse(x));
    }
  }
  auto s3 = parse_cayley(s3_table());
  REQUIRE(s3.size() == 6);
  REQUIRE_FALSE(s3.is_abelian());
  REQUIRE(s3.elements()[s3.identity()] == "e");
  REQUIRE(s3.order_of(4) == 3);
  REQUIRE(s3.order_of(1) == 2);
  auto z2 = parse_cayley("# Z2\n0 1\n0 0 1\n1 1 0\n");
  REQUIRE(z2.size() == 2);
  REQUIRE(z2.mul(1, 1) == 0);

  auto bad = [](std::string const& text) {
    return kind_of([&] { (void) parse_cayley(text); });
  };
  REQUIRE(bad("") == error_kind::parse);
  REQUIRE(bad("a a\n") == error_kind::parse);
  REQUIRE(bad("a b\na a b\nb b\n") == error_kind::parse);
  REQUIRE(bad("a b\na a b\nc b a\n") == error_kind::parse);
  REQUIRE(bad("a b\na a b\na b a\n") == error_kind::parse);
  REQUIRE(bad("a b\na a z\nb b a\n") == error_kind::parse);
  REQUIRE(bad("a b\na a b\n") == error_kind::parse);
  // no identity
  REQUIRE(bad("a b\na b a\nb a a\n") == error_kind::invalid_group);
  // identity a, but b has no inverse
  REQUIRE(bad("a b\na a b\nb b b\n") == error_kind::invalid_group);
  // identity e with inverses, not associative
  REQUIRE(bad("e x y\ne e x y\nx x e e\ny y e e\n") == error_kind::invalid_group);
  REQUIRE(kind_of([] { (void) finite_group::cyclic(0); })
          == error_kind::invalid_group);
  try {
    (void) parse_cayley("a b\na a b\nb b b b\n");
    FAIL("expected a parse error");
  } catch (parse_error const& e) {
    REQUIRE(e.line() == 3);
  }
}

TEST_CASE("Cerny automata", "[families]") {
  REQUIRE(kind_of([] { (void) cerny(1); }) == error_kind::invalid_argument);
  for (std::size_t n = 2; n <= 6; ++n) {
    auto d = cerny(n);
    REQUIRE(d.size() == n);
    if (n <= 5) {
      REQUIRE(oracle::shortest_reset(oracle::of(d), (n - 1) * (n - 1))
              == (n - 1) * (n - 1));
    }
    REQUIRE(is_synchronizing(d).reset_word->size() == (n - 1) * (n - 1));
    auto c = cerny_coloring(n);
    REQUIRE(c.size() == n);
    for (auto const& p : c) {
      REQUIRE(p == permutation{1, 0});
    }
  }
  REQUIRE(kind_of([] { (void) flip_coloring(debruijn(1, finite_group::cyclic(3))); })
          == error_kind::invalid_argument);
}

TEST_CASE("Cerny ideal generators", "[families]") {
  for (std::size_t n = 2; n <= 6; ++n) {
    auto r = cerny_ideal(n);
    REQUIRE_FALSE(r.letters_swapped);
    REQUIRE(r.generators.size() == 2);
    auto const& w1 = r.generators[0];
    auto const& w2 = r.generators[1];
    REQUIRE(w1.size() == (n - 1) * (2 * (n - 2) + 2));
    // shape 1^{n-1} (0^{n-1} 1^{n-1})^{n-2} 0^{n-1}
    for (std::size_t i = 0; i < w1.size(); ++i) {
      REQUIRE(w1[i] == ((i / (n - 1)) % 2 == 0 ? 1u : 0u));
      REQUIRE(w2[i] == 1 - w1[i]);
    }
    auto t = oracle::of(cerny(n));
    REQUIRE(oracle::resets(t, w1));
    REQUIRE(oracle::resets(t, w2));
    // every generator of the flip coloring exchanges w1 and w2
    auto m = color(cerny(n), cerny_coloring(n));
    for (state_type q = 0; q < n; ++q) {
      REQUIRE(m.apply(q, w1) == w2);
      REQUIRE(m.apply(q, w2) == w1);
    }
  }
}

TEST_CASE("De Bruijn automata", "[families]") {
  for (std::size_t m = 2; m <= 3; ++m) {
    for (std::size_t k = 1; k <= 3; ++k) {
      auto g = finite_group::cyclic(m);
      auto f = make_debruijn(k, g);
      auto t = oracle::of(f.automaton);
      std::size_t n = 1;
      for (std::size_t i = 0; i < k; ++i) {
        n *= m;
      }
      REQUIRE(f.automaton.size() == n);
      REQUIRE(f.machine.is_invertible());
      REQUIRE(f.state_word(f.identity_state()) == word_type(k, 0));
      for (state_type q = 0; q < n; ++q) {
        REQUIRE(f.state_of(f.state_word(q)) == q);
      }
      // Q . u = {u} for u of length k, and no shorter word resets
      oracle::words_of_length(m, k, [&](oracle::word const& u) {
        REQUIRE(oracle::image(t, u) == std::set<std::uint32_t>{f.state_of(u)});
      });
      REQUIRE(oracle::shortest_reset(t, k) == k);
      // output x - y on u = y s --x--> s x
      for (state_type q = 0; q < n; ++q) {
        auto y = f.state_word(q)[0];
        for (letter_type x = 0; x < m; ++x) {
          REQUIRE(f.machine.output(q, x) == (x + m - y) % m);
        }
      }
      auto chi = chi_coloring(k, g);
      REQUIRE(color(f.automaton, chi) == f.machine);
    }
  }
  auto s3 = parse_cayley(s3_table());
  auto f  = make_debruijn(2, s3);
  REQUIRE(f.automaton.size() == 36);
  REQUIRE(f.machine.is_invertible());
  // single-character tokens are concatenated, longer ones joined with '.'
  REQUIRE(f.automaton.name(f.state_of({1, 4})) == "ar");
  auto z12 = make_debruijn(2, finite_group::cyclic(12));
  REQUIRE(z12.automaton.name(z12.state_of({1, 11})) == "1.11");
  REQUIRE(kind_of([] { (void) make_debruijn(0, finite_group::cyclic(2)); })
          == error_kind::invalid_argument);
}

TEST_CASE("golden De Bruijn machine", "[families]") {
  std::string const dir = MEALYSYNC_FIXTURES;
  std::map<std::string, std::string> manifest;
  std::istringstream                 in(slurp(dir + "/MANIFEST"));
  std::string                        line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream ls(line);
    std::string        hash, file;
    ls >> hash >> file;
    manifest[file] = hash;
  }
  REQUIRE(manifest.count("debruijn_3_z2.mealy") == 1);
  auto const text = slurp(dir + "/debruijn_3_z2.mealy");
  REQUIRE(cli::hex64(cli::fnv1a64(text)) == manifest["debruijn_3_z2.mealy"]);

  auto golden = parse_mealy(text);
  auto built  = make_debruijn(3, finite_group::cyclic(2)).machine;
  REQUIRE(golden.size() == built.size());
  REQUIRE(golden.alphabet() == built.alphabet());
  for (state_type p = 0; p < golden.size(); ++p) {
    auto q = built.index(golden.name(p));
    for (letter_type a = 0; a < 2; ++a) {
      CAPTURE(golden.name(p), a);
      REQUIRE(golden.output(p, a) == built.output(q, a));
      REQUIRE(golden.name(golden.next(p, a)) == built.name(built.next(q, a)));
    }
  }
  // the rendered machine parses back to the same transitions
  REQUIRE(parse_mealy(render_mealy(built)) == built);
}

TEST_CASE("zeta identities", "[families]") {
  std::vector<finite_group> groups{finite_group::cyclic(1), finite_group::cyclic(2),
                                   finite_group::cyclic(3)};
  for (auto const& g : groups) {
    auto const m = g.size();
    for (std::size_t k = 1; k <= 3; ++k) {
      auto f = make_debruijn(k, g);
      for (state_type q = 0; q < f.machine.size(); ++q) {
        auto const u = f.state_word(q);
        for_words(m, 2 * k, [&](oracle::word const& v) {
          auto z = zeta(f, q, v);
          REQUIRE(z.size() == v.size());
          REQUIRE(f.machine.apply(q, v) == divide(g, v, z));
          if (v.size() == k) {
            REQUIRE(z == u);
          }
          if (v.size() == 1) {
            REQUIRE(z == word_type{u[0]});
          }
        });
      }
    }
  }
  // the first identity needs only a group
  auto s3 = parse_cayley(s3_table());
  auto f  = make_debruijn(2, s3);
  for (state_type q = 0; q < f.machine.size(); ++q) {
    for_words(6, 2, [&](oracle::word const& v) {
      auto z = zeta(f, q, v);
      REQUIRE(f.machine.apply(q, v) == divide(s3, v, z));
      if (v.size() == 2) {
        REQUIRE(z == f.state_word(q));
      }
    });
  }
}

TEST_CASE("zeta examples", "[families]") {
  auto g = finite_group::cyclic(2);
  auto f = make_debruijn(2, g);
  auto q00 = f.state_of({0, 0});
  oracle::words_of_length(2, 2, [&](oracle::word const& v) {
    REQUIRE(zeta(f, q00, v) == word_type{0, 0});
  });
  auto q01 = f.state_of({0, 1});
  REQUIRE(f.machine.apply(q01, {1, 1}) == word_type{1, 0});
  REQUIRE(zeta(f.machine, 2, g, q01, {1, 1}) == word_type{0, 1});
  REQUIRE(kind_of([&] { (void) zeta(f.machine, 3, g, 0, {1}); })
          == error_kind::wrong_family);
  REQUIRE(kind_of([&] { (void) zeta(f, 0, {}); }) == error_kind::invalid_argument);
}

TEST_CASE("modified state functions of De Bruijn machines", "[families]") {
  for (auto [k, m] : {std::pair{1, 2}, {2, 2}, {1, 3}, {2, 3}}) {
    auto f = make_debruijn(k, finite_group::cyclic(m));
    auto n = f.machine.size();
    // direct argument: the images q o u of one u of length k are distinct
    oracle::words_of_length(m, k, [&](oracle::word const& u) {
      std::set<word_type> outs;
      for (state_type q = 0; q < n; ++q) {
        outs.insert(f.machine.apply(q, u));
      }
      REQUIRE(outs.size() == n);
    });
    REQUIRE(is_reset(f.machine).reset);
    auto c = certify_freeness(f.machine);
    REQUIRE(c.verdict == freeness_verdict::free);
    for (auto const& e : c.pairs) {
      REQUIRE_FALSE(e.equal);
      REQUIRE(e.witness->size() == static_cast<std::size_t>(k));
    }
  }
}

TEST_CASE("series action agrees with the machine", "[families]") {
  std::mt19937 rng(5);
  for (auto [k, m] : {std::pair{1, 2}, {2, 2}, {1, 3}, {2, 3}}) {
    auto f = make_debruijn(k, finite_group::cyclic(m));
    std::vector<series_op> ops;
    for (state_type q = 0; q < f.machine.size(); ++q) {
      ops.push_back(series_kind::generator{q});
      ops.push_back(series_kind::inverse{q});
      for (long l = -3; l <= 3; ++l) {
        ops.push_back(series_kind::conjugate{q, l});
      }
    }
    std::uniform_int_distribution<std::uint32_t> letter(0, m - 1);
    for (int t = 0; t < 100; ++t) {
      series_prefix g(8 * k);
      for (auto& x : g) {
        x = letter(rng);
      }
      for (auto const& op : ops) {
        REQUIRE(series_apply(f, op, g) == apply_word(f.machine, series_word(f, op), g));
      }
    }
  }
}

TEST_CASE("series examples and errors", "[families]") {
  auto f = make_debruijn(1, finite_group::cyclic(2));
  series_prefix const zero(6, 0);
  REQUIRE(series_apply(f, series_kind::generator{1}, zero)
          == series_prefix{1, 0, 0, 0, 0, 0});
  REQUIRE(f.machine.apply(1, zero) == word_type{1, 0, 0, 0, 0, 0});
  REQUIRE(series_apply(f, series_kind::inverse{1}, zero)
          == series_prefix{1, 1, 1, 1, 1, 1});
  REQUIRE(f.machine.apply_inverse(1, zero) == word_type{1, 1, 1, 1, 1, 1});
  for (std::size_t k = 1; k <= 3; ++k) {
    auto fk = make_debruijn(k, finite_group::cyclic(3));
    series_prefix z(4 * k, 0);
    REQUIRE(series_apply(fk, series_kind::generator{fk.identity_state()}, z) == z);
  }
  auto f2 = make_debruijn(2, finite_group::cyclic(2));
  REQUIRE(kind_of([&] { (void) series_apply(f2, series_kind::generator{0}, {0}); })
          == error_kind::prefix_too_short);
  REQUIRE(kind_of([&] {
            (void) series_apply(f2, series_kind::generator{0}, {0, 0, 0});
          })
          == error_kind::prefix_too_short);
  auto s = make_debruijn(1, parse_cayley(s3_table()));
  REQUIRE(kind_of([&] { (void) series_apply(s, series_kind::generator{0}, {0}); })
          == error_kind::non_abelian);
}

TEST_CASE("lamplighter relations", "[families]") {
  for (auto [k, m] : {std::pair{1, 2}, {2, 2}, {1, 3}}) {
    auto r = lamplighter_suite(k, finite_group::cyclic(m));
    CAPTURE(k, m);
    REQUIRE(r.translation_orders);
    REQUIRE(r.conjugates_commute);
    REQUIRE(r.a_infinite);
    REQUIRE(r.injective);
    REQUIRE(r.te_identity);
    REQUIRE(r.ok());
    std::size_t n = 7;
    for (int i = 0; i < k; ++i) {
      n *= m;
    }
    REQUIRE(r.commutation_checks == n * (n - 1) / 2);
  }
  // t_1 = B_1 B_0^{-1} squares to the identity for k = 1 over Z2
  auto f  = make_debruijn(1, finite_group::cyclic(2));
  auto t1 = generator(1) * inverse(generator(0));
  REQUIRE(product(f.machine, power(t1, 2)).is_identity());
  REQUIRE_FALSE(product(f.machine, t1).is_identity());
  REQUIRE(kind_of([] { (void) lamplighter_suite(1, parse_cayley(s3_table())); })
          == error_kind::non_abelian);
}
