#pragma once

// Command-line front end. Kept in a header so the tests can drive it
// in-process with string streams.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mealysync/mealysync.hpp"

namespace mealysync::cli {

  inline constexpr char const* version = "0.1.0";

  enum exit_code : int { ok = 0, exhausted = 1, bad_input = 2 };

  inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  inline std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
  }

  // Ordered key: value lines, headed by the tool version and input digest.
  class report {
   public:
    report(std::string command, std::string const& input) {
      add("tool", std::string("mealysync ") + version);
      add("input", "fnv1a64:" + hex64(fnv1a64(input)));
      add("command", std::move(command));
    }

    void add(std::string key, std::string value) {
      _lines.emplace_back(std::move(key), std::move(value));
    }

    void add(std::string key, bool value) {
      add(std::move(key), std::string(value ? "true" : "false"));
    }

    void add(std::string key, std::size_t value) {
      add(std::move(key), std::to_string(value));
    }

    void add(std::string key, char const* value) {
      add(std::move(key), std::string(value));
    }

    // raw lines already in key: value form
    void append(std::string const& text) {
      std::istringstream in(text);
      std::string        line;
      while (std::getline(in, line)) {
        auto c = line.find(": ");
        if (c == std::string::npos) {
          add(line, std::string());
        } else {
          add(line.substr(0, c), line.substr(c + 2));
        }
      }
    }

    std::string str() const {
      std::string out;
      for (auto const& [k, v] : _lines) {
        out += k + ": " + v + '\n';
      }
      return out;
    }

   private:
    std::vector<std::pair<std::string, std::string>> _lines;
  };

  namespace detail {
    inline std::string slurp(std::string const& path, std::istream& in) {
      if (path == "-") {
        return {std::istreambuf_iterator<char>(in), {}};
      }
      std::ifstream f(path, std::ios::binary);
      if (!f) {
        throw parse_error(0, "cannot open '" + path + "'");
      }
      return {std::istreambuf_iterator<char>(f), {}};
    }

    inline mealy_machine require_mealy(parsed_automaton const& p) {
      if (!p.is_mealy) {
        throw parse_error(0, "expected 'type: mealy'");
      }
      return *p.machine;
    }

    inline std::string state_list(dfa const& d, state_set const& s) {
      std::string out;
      for (auto q : s) {
        out += (out.empty() ? "" : " ") + d.name(q);
      }
      return out;
    }

    inline std::vector<word_type> parse_words(class alphabet const&          alph,
                                              std::vector<std::string> const& text) {
      std::vector<word_type> out;
      for (auto const& t : text) {
        out.push_back(alph.parse_word(t));
      }
      return out;
    }

    inline std::string format_words(class alphabet const&         alph,
                                    std::vector<word_type> const& ws) {
      std::string out;
      for (auto const& w : ws) {
        out += (out.empty() ? "" : " ") + alph.format(w);
      }
      return out;
    }
  }  // namespace detail

  struct options {
    std::string input = "-";
    // analyze
    std::size_t monoid_cap = 100000;
    // check-reset, certify
    std::vector<std::string> ideal;
    bool                     maximal_ideal  = false;
    std::size_t              max_iterations = 50;
    // group
    std::size_t order_cap     = 1000;
    std::size_t element_cap   = 64;
    std::size_t max_length    = 4;
    std::size_t state_cap     = default_state_cap;
    std::string element_word;
    // gen
    std::size_t n = 0;
    std::size_t k = 0;
    std::string group = "z2";
    std::string cayley;
    // color
    bool                     identity = false, flip = false, adding = false;
    std::vector<std::string> prop_example;
  };

  inline std::string cmd_analyze(options const& o, std::string const& text) {
    auto   p = parse_automaton(text);
    report r("analyze", text);
    auto const& d = p.automaton;
    r.add("type", p.is_mealy ? "mealy" : "dfa");
    r.add("states", d.size());
    r.add("alphabet_size", d.alphabet_size());
    auto c = classify(d);
    r.add("synchronizing", c.synchronizing);
    if (c.shortest_reset_word) {
      r.add("shortest_reset_length", *c.shortest_reset_length);
      r.add("shortest_reset_word", d.alphabet().format(*c.shortest_reset_word));
    }
    switch (c.sink.status) {
      case sink_result::kind::none: r.add("sink", "none"); break;
      case sink_result::kind::unique: r.add("sink", d.name(c.sink.state)); break;
      case sink_result::kind::multiple:
        r.add("sink", "multiple (" + std::to_string(c.sink.count) + ")");
        break;
    }
    r.add("nilpotent", c.nilpotent);
    r.add("bounded", c.bounded ? std::string(*c.bounded ? "true" : "false")
                               : std::string("n/a"));
    r.add("simple", c.simple);
    r.add("strongly_connected", c.strongly_connected);
    if (c.synchronizing) {
      auto fg = is_finitely_generated_syn(d, o.monoid_cap);
      switch (fg.status) {
        case fg_result::verdict::yes: r.add("finitely_generated", "yes"); break;
        case fg_result::verdict::no:
          r.add("finitely_generated", "no");
          r.add("finitely_generated_subset", detail::state_list(d, fg.subset));
          r.add("finitely_generated_fix_word", d.alphabet().format(fg.fix_word));
          break;
        case fg_result::verdict::unknown:
          r.add("finitely_generated", "unknown (monoid cap "
                                          + std::to_string(o.monoid_cap) + ")");
          break;
      }
    } else {
      r.add("finitely_generated", "n/a");
    }
    if (p.is_mealy) {
      auto const& m = *p.machine;
      r.add("invertible", m.is_invertible());
      r.add("reduced", is_reduced(m));
      if (m.is_invertible() && c.synchronizing) {
        r.add("reset", is_reset(m).reset);
      } else {
        r.add("reset", "n/a");
      }
    }
    return r.str();
  }

  inline std::string cmd_check_reset(options const& o, std::string const& text) {
    auto   m = detail::require_mealy(parse_automaton(text));
    report r("check-reset", text);
    auto const& alph = m.alphabet();
    if (o.ideal.empty()) {
      auto res = is_reset(m);
      r.add("synchronizing", res.synchronizing);
      for (state_type q = 0; q < m.size(); ++q) {
        r.add("state " + m.name(q),
              res.stable[q] ? std::string("stable")
                            : "unstable witness " + alph.format(*res.witness[q]));
      }
      r.add("verdict", res.reset ? "reset" : "not-reset");
    } else {
      auto gens = detail::parse_words(alph, o.ideal);
      r.add("ideal", "generated: " + detail::format_words(alph, gens));
      auto res = is_weakly_reset(m, gens);
      if (!res.weakly_reset) {
        r.add("reason", res.reason);
        if (res.witness) {
          r.add("witness", alph.format(*res.witness));
        }
      }
      r.add("verdict", res.weakly_reset ? "weakly-reset" : "not-weakly-reset");
    }
    return r.str();
  }

  inline std::string cmd_certify(options const& o, std::string const& text) {
    auto   m = detail::require_mealy(parse_automaton(text));
    report r("certify", text);
    auto const& alph = m.alphabet();
    freeness_certificate cert;
    if (o.maximal_ideal) {
      if (!pairs_synchronizable(m.automaton())) {
        r.add("verdict", "not-applicable (not synchronizing)");
        return r.str();
      }
      auto mi = maximal_ideal(m, o.max_iterations);
      if (!mi.stabilized) {
        r.add("ideal", "maximal-ideal");
        r.add("iterations", mi.iterations);
        r.add("verdict", "unknown");
        return r.str();
      }
      analysis_ideal h{ideal_source::maximal, {}, *mi.language};
      cert = certify_freeness(m, h);
    } else if (!o.ideal.empty()) {
      cert = certify_freeness(
          m, generated_ideal(m, detail::parse_words(alph, o.ideal)));
    } else {
      cert = certify_freeness(m);
    }
    r.append(to_text(m, cert));
    return r.str();
  }

  inline std::string cmd_group_order(options const& o, std::string const& text) {
    auto   m = detail::require_mealy(parse_automaton(text));
    report r("group order", text);
    auto   t = enumerate_group(m, o.order_cap, o.state_cap);
    r.add("cap", o.order_cap);
    if (t.closed()) {
      r.add("order", t.order());
      std::string by_len;
      for (auto c : t.count_by_length) {
        by_len += (by_len.empty() ? "" : " ") + std::to_string(c);
      }
      r.add("count_by_length", by_len);
      r.add("verdict", "finite");
    } else {
      r.add("elements_found", t.order());
      r.add("verdict", "unknown");
    }
    return r.str();
  }

  inline std::string cmd_group_relations(options const& o,
                                         std::string const& text) {
    auto   m = detail::require_mealy(parse_automaton(text));
    report r("group relations", text);
    auto   rel = relation_search(m, o.max_length);
    r.add("max_length", o.max_length);
    r.add("relations", rel.size());
    for (auto const& [x, y] : rel) {
      r.add("relation", format(m, x) + " = " + format(m, y));
    }
    return r.str();
  }

  inline std::string cmd_group_element_order(options const&     o,
                                             std::string const& text) {
    auto   m = detail::require_mealy(parse_automaton(text));
    report r("group element-order", text);
    auto   g = parse_group_word(m, o.element_word);
    r.add("element", format(m, g));
    r.add("cap", o.element_cap);
    auto res = element_order(m, g, o.element_cap, {}, o.state_cap);
    if (res.finite) {
      r.add("order", res.order);
      r.add("verdict", "finite");
    } else {
      r.add("order", "exceeds-cap");
      r.add("verdict", "unknown");
    }
    return r.str();
  }

  inline std::string cmd_gen_cerny(options const& o) {
    auto        d   = cerny(o.n);
    auto        h   = cerny_ideal(o.n);
    std::string out = "# cerny automaton C_" + std::to_string(o.n) + '\n';
    out += "# ideal generators: " + detail::format_words(d.alphabet(), h.generators)
           + '\n';
    out += std::string("# letters swapped: ")
           + (h.letters_swapped ? "true" : "false") + '\n';
    return out + render_dfa(d);
  }

  inline finite_group gen_group(options const& o, std::istream& in) {
    if (!o.cayley.empty()) {
      return parse_cayley(detail::slurp(o.cayley, in));
    }
    auto const& g = o.group;
    if (g.size() < 2 || (g[0] != 'z' && g[0] != 'Z')
        || !std::all_of(g.begin() + 1, g.end(),
                        [](char c) { return c >= '0' && c <= '9'; })) {
      throw error(error_kind::invalid_group,
                  "expected --group zM, for example z2");
    }
    return finite_group::cyclic(std::stoul(g.substr(1)));
  }

  inline std::string cmd_gen_debruijn(options const& o, std::istream& in) {
    auto f = make_debruijn(o.k, gen_group(o, in));
    return "# de bruijn machine k=" + std::to_string(o.k)
           + " group order " + std::to_string(f.group.size()) + '\n'
           + render_mealy(f.machine);
  }

  inline std::string cmd_color(options const& o, std::string const& text) {
    auto        p   = parse_automaton(text);
    auto const& d   = p.automaton;
    int         chosen = int(o.identity) + int(o.flip) + int(o.adding)
                 + int(!o.prop_example.empty());
    if (chosen != 1) {
      throw error(error_kind::invalid_argument,
                  "choose exactly one of --identity, --flip, --adding-machine, "
                  "--prop-example");
    }
    std::string out;
    if (o.identity) {
      return render_mealy(color(d, identity_coloring(d)));
    }
    if (o.flip) {
      return render_mealy(color(d, flip_coloring(d)));
    }
    if (o.adding) {
      auto r = adding_machine_coloring(d);
      auto const& alph = d.alphabet();
      out += "# q0: " + d.name(r.q0) + '\n';
      out += "# cycle: " + alph.format(r.cycle) + '\n';
      out += "# path: " + alph.format(r.path) + '\n';
      out += "# blocks: " + alph.format(r.block0) + ' ' + alph.format(r.block1)
             + '\n';
      return out + render_mealy(color(d, r.coloring));
    }
    if (o.prop_example.size() != 3) {
      throw error(error_kind::invalid_argument,
                  "--prop-example takes a state and two letters");
    }
    auto const& alph = d.alphabet();
    auto        q    = d.index(o.prop_example[0]);
    auto        a    = alph.index(o.prop_example[1]);
    auto        b    = alph.index(o.prop_example[2]);
    auto        r    = prop_example_coloring(d, q, a, b);
    out += "# ideal generators: " + detail::format_words(alph, r.ideal_generators)
           + '\n';
    return out + render_mealy(color(d, r.coloring));
  }

  // Runs one command line (without the program name). Output goes to `out`,
  // diagnostics to `err`; returns the exit status.
  inline int run(std::vector<std::string> args, std::istream& in,
                 std::ostream& out, std::ostream& err) {
    options  o;
    CLI::App app{"Synchronizing automata and Mealy automaton groups",
                 "mealysync"};
    app.set_version_flag("--version", std::string("mealysync ") + version);
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "classify a dfa or mealy file");
    analyze->add_option("file", o.input, "input file, '-' for stdin");
    analyze->add_option("--monoid-cap", o.monoid_cap,
                        "transition monoid size cap")
        ->capture_default_str();

    auto* check = app.add_subcommand("check-reset",
                                     "reset or weakly reset test");
    check->add_option("file", o.input, "input file, '-' for stdin");
    check->add_option("--ideal", o.ideal, "generators of a two-sided ideal");

    auto* certify = app.add_subcommand("certify", "freeness certificate");
    certify->add_option("file", o.input, "input file, '-' for stdin");
    auto* ideal_opt = certify->add_option("--ideal", o.ideal,
                                          "generators of a two-sided ideal");
    certify->add_flag("--maximal-ideal", o.maximal_ideal,
                      "use the maximal stable ideal")
        ->excludes(ideal_opt);
    certify->add_option("--max-iterations", o.max_iterations,
                        "fixpoint iteration cap for --maximal-ideal")
        ->capture_default_str();

    auto* group = app.add_subcommand("group", "group computations");
    group->require_subcommand(1);
    group->add_option("--state-cap", o.state_cap,
                      "state cap for products of transducers")
        ->capture_default_str();
    auto* order = group->add_subcommand("order", "enumerate the group");
    order->add_option("file", o.input, "input file, '-' for stdin");
    order->add_option("--cap", o.order_cap, "element cap")->capture_default_str();
    auto* rel = group->add_subcommand("relations", "relations between positive words");
    rel->add_option("file", o.input, "input file, '-' for stdin");
    rel->add_option("--maxlen", o.max_length, "maximal word length")
        ->capture_default_str();
    auto* eord = group->add_subcommand("element-order", "order of one element");
    eord->add_option("word", o.element_word, "group word, e.g. 'a b^-1'")
        ->required();
    eord->add_option("file", o.input, "input file, '-' for stdin");
    eord->add_option("--cap", o.element_cap, "order cap")->capture_default_str();

    auto* gen = app.add_subcommand("gen", "generate a family member");
    gen->require_subcommand(1);
    auto* gc = gen->add_subcommand("cerny", "cerny automaton C_N");
    gc->add_option("N", o.n, "number of states")->required();
    auto* gd = gen->add_subcommand("debruijn", "de bruijn machine over a group");
    gd->add_option("K", o.k, "word length")->required();
    auto* grp = gd->add_option("--group", o.group, "cyclic group zM")
                    ->capture_default_str();
    gd->add_option("--cayley", o.cayley, "Cayley table file")->excludes(grp);

    auto* col = app.add_subcommand("color", "color a dfa");
    col->add_option("file", o.input, "input file, '-' for stdin");
    col->add_flag("--identity", o.identity, "identity on every state");
    col->add_flag("--flip", o.flip, "swap the two letters everywhere");
    col->add_flag("--adding-machine", o.adding,
                  "coloring with an element of infinite order");
    col->add_option("--prop-example", o.prop_example,
                    "STATE A B: swap A and B at STATE")
        ->expected(3);

    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (CLI::CallForHelp const&) {
      out << app.help();
      return ok;
    } catch (CLI::CallForAllHelp const&) {
      out << app.help("", CLI::AppFormatMode::All);
      return ok;
    } catch (CLI::CallForVersion const&) {
      out << "mealysync " << version << '\n';
      return ok;
    } catch (CLI::ParseError const& e) {
      err << "error: usage: " << e.what() << '\n';
      return bad_input;
    }

    try {
      std::string result;
      if (analyze->parsed()) {
        result = cmd_analyze(o, detail::slurp(o.input, in));
      } else if (check->parsed()) {
        result = cmd_check_reset(o, detail::slurp(o.input, in));
      } else if (certify->parsed()) {
        result = cmd_certify(o, detail::slurp(o.input, in));
      } else if (order->parsed()) {
        result = cmd_group_order(o, detail::slurp(o.input, in));
      } else if (rel->parsed()) {
        result = cmd_group_relations(o, detail::slurp(o.input, in));
      } else if (eord->parsed()) {
        result = cmd_group_element_order(o, detail::slurp(o.input, in));
      } else if (gc->parsed()) {
        result = cmd_gen_cerny(o);
      } else if (gd->parsed()) {
        result = cmd_gen_debruijn(o, in);
      } else if (col->parsed()) {
        result = cmd_color(o, detail::slurp(o.input, in));
      }
      out << result;
      return ok;
    } catch (error const& e) {
      err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
      return e.kind() == error_kind::resource_exceeded ? exhausted : bad_input;
    }
  }

  inline int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), std::cin, std::cout, std::cerr);
  }

}  // namespace mealysync::cli
