#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alphabet.hpp"
#include "dfa.hpp"
#include "error.hpp"
#include "mealy.hpp"

namespace mealysync {

  // Line-oriented text format:
  //
  //   type: dfa | mealy
  //   alphabet: <sym> ...
  //   states: <name> ...
  //   trans: <state> <sym> <state>          (dfa)
  //   trans: <state> <in>|<out> <state>     (mealy)
  //
  // '#' starts a comment; every (state, symbol) pair occurs exactly once.
  struct parsed_automaton {
    bool                         is_mealy = false;
    dfa                          automaton;
    std::optional<mealy_machine> machine;
  };

  namespace detail {
    inline std::vector<std::string> split_ws(std::string_view s) {
      std::vector<std::string> out;
      std::istringstream       in{std::string(s)};
      std::string              tok;
      while (in >> tok) {
        out.push_back(tok);
      }
      return out;
    }

    inline std::string_view trim(std::string_view s) {
      auto const ws = " \t\r\n";
      auto       b  = s.find_first_not_of(ws);
      if (b == std::string_view::npos) {
        return {};
      }
      auto e = s.find_last_not_of(ws);
      return s.substr(b, e - b + 1);
    }
  }  // namespace detail

  inline parsed_automaton parse_automaton(std::istream& in) {
    std::string                           line;
    std::size_t                           lineno = 0;
    std::optional<std::string>            type;
    std::optional<class alphabet>         alph;
    std::vector<std::string>              names;
    std::map<std::string, state_type>     index;
    bool                                  have_states = false;
    std::vector<std::int64_t>             delta;
    std::vector<std::int64_t>             lambda;
    std::vector<std::size_t>              first_line;

    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) {
        line.erase(hash);
      }
      auto body = detail::trim(line);
      if (body.empty()) {
        continue;
      }
      auto colon = body.find(':');
      if (colon == std::string_view::npos) {
        throw parse_error(lineno, "expected '<key>: <value>'");
      }
      auto key  = detail::trim(body.substr(0, colon));
      auto rest = detail::split_ws(body.substr(colon + 1));
      if (!type) {
        if (key != "type") {
          throw parse_error(lineno, "the first entry must be 'type:'");
        }
        if (rest.size() != 1 || (rest[0] != "dfa" && rest[0] != "mealy")) {
          throw parse_error(lineno, "type must be 'dfa' or 'mealy'");
        }
        type = rest[0];
        continue;
      }
      bool const mealy = *type == "mealy";
      if (key == "type") {
        throw parse_error(lineno, "duplicate 'type:'");
      } else if (key == "alphabet") {
        if (alph) {
          throw parse_error(lineno, "duplicate 'alphabet:'");
        }
        if (rest.empty()) {
          throw parse_error(lineno, "empty alphabet");
        }
        try {
          alph.emplace(rest);
        } catch (error const& e) {
          throw parse_error(lineno, e.what());
        }
      } else if (key == "states") {
        if (have_states) {
          throw parse_error(lineno, "duplicate 'states:'");
        }
        if (rest.empty()) {
          throw parse_error(lineno, "empty state list");
        }
        for (auto const& s : rest) {
          if (!mealysync::alphabet::valid_token(s)) {
            throw parse_error(lineno, "invalid state name '" + s + "'");
          }
          if (!index.emplace(s, static_cast<state_type>(names.size())).second) {
            throw parse_error(lineno, "duplicate state '" + s + "'");
          }
          names.push_back(s);
        }
        have_states = true;
      } else if (key == "trans") {
        if (!alph || !have_states) {
          throw parse_error(lineno,
                            "'alphabet:' and 'states:' must precede 'trans:'");
        }
        auto const k = alph->size();
        if (delta.empty()) {
          delta.assign(names.size() * k, -1);
          lambda.assign(names.size() * k, -1);
          first_line.assign(names.size() * k, 0);
        }
        if (rest.size() != 3) {
          throw parse_error(lineno,
                            mealy ? "expected 'trans: <state> <in>|<out> <state>'"
                                  : "expected 'trans: <state> <sym> <state>'");
        }
        auto from = index.find(rest[0]);
        if (from == index.end()) {
          throw parse_error(lineno, "unknown state '" + rest[0] + "'");
        }
        auto to = index.find(rest[2]);
        if (to == index.end()) {
          throw parse_error(lineno, "unknown state '" + rest[2] + "'");
        }
        std::string in_sym = rest[1], out_sym;
        auto        bar    = in_sym.find('|');
        if (mealy) {
          if (bar == std::string::npos) {
            throw parse_error(lineno, "expected '<in>|<out>'");
          }
          out_sym = in_sym.substr(bar + 1);
          in_sym.erase(bar);
        } else if (bar != std::string::npos) {
          throw parse_error(lineno, "output labels are only allowed for mealy");
        }
        auto a = alph->find(in_sym);
        if (!a) {
          throw parse_error(lineno, "unknown symbol '" + in_sym + "'");
        }
        auto slot = from->second * k + *a;
        if (delta[slot] >= 0) {
          throw parse_error(lineno, "duplicate transition for (" + rest[0] + ", "
                                        + in_sym + "), first given on line "
                                        + std::to_string(first_line[slot]));
        }
        delta[slot]      = to->second;
        first_line[slot] = lineno;
        if (mealy) {
          auto b = alph->find(out_sym);
          if (!b) {
            throw parse_error(lineno, "unknown symbol '" + out_sym + "'");
          }
          lambda[slot] = *b;
        }
      } else {
        throw parse_error(lineno, "unknown key '" + std::string(key) + "'");
      }
    }
    if (!type) {
      throw parse_error(lineno, "missing 'type:'");
    }
    if (!alph) {
      throw parse_error(lineno, "missing 'alphabet:'");
    }
    if (!have_states) {
      throw parse_error(lineno, "missing 'states:'");
    }
    auto const k = alph->size();
    if (delta.empty()) {
      delta.assign(names.size() * k, -1);
      lambda.assign(names.size() * k, -1);
    }
    std::vector<state_type> table;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (delta[i] < 0) {
        throw parse_error(0, "missing transition for (" + names[i / k] + ", "
                                 + alph->symbol(static_cast<letter_type>(i % k))
                                 + ")");
      }
      table.push_back(static_cast<state_type>(delta[i]));
    }
    parsed_automaton r;
    r.is_mealy  = *type == "mealy";
    r.automaton = dfa(*alph, names, std::move(table));
    if (r.is_mealy) {
      std::vector<letter_type> out(lambda.begin(), lambda.end());
      r.machine.emplace(r.automaton, std::move(out));
    }
    return r;
  }

  inline parsed_automaton parse_automaton(std::string const& text) {
    std::istringstream in(text);
    return parse_automaton(in);
  }

  inline dfa parse_dfa(std::string const& text) {
    auto r = parse_automaton(text);
    if (r.is_mealy) {
      throw parse_error(1, "expected 'type: dfa'");
    }
    return r.automaton;
  }

  inline mealy_machine parse_mealy(std::string const& text) {
    auto r = parse_automaton(text);
    if (!r.is_mealy) {
      throw parse_error(1, "expected 'type: mealy'");
    }
    return *r.machine;
  }

  namespace detail {
    inline std::string render_header(std::string_view type, dfa const& d) {
      std::string out = "type: " + std::string(type) + "\nalphabet:";
      for (auto const& s : d.alphabet().symbols()) {
        out += ' ' + s;
      }
      out += "\nstates:";
      for (auto const& s : d.names()) {
        out += ' ' + s;
      }
      out += '\n';
      return out;
    }
  }  // namespace detail

  inline std::string render_dfa(dfa const& d) {
    auto out = detail::render_header("dfa", d);
    for (state_type q = 0; q < d.size(); ++q) {
      for (letter_type a = 0; a < d.alphabet_size(); ++a) {
        out += "trans: " + d.name(q) + ' ' + d.alphabet().symbol(a) + ' '
               + d.name(d.next(q, a)) + '\n';
      }
    }
    return out;
  }

  inline std::string render_mealy(mealy_machine const& m) {
    auto const& d   = m.automaton();
    auto        out = detail::render_header("mealy", d);
    for (state_type q = 0; q < d.size(); ++q) {
      for (letter_type a = 0; a < d.alphabet_size(); ++a) {
        out += "trans: " + d.name(q) + ' ' + d.alphabet().symbol(a) + '|'
               + d.alphabet().symbol(m.output(q, a)) + ' '
               + d.name(d.next(q, a)) + '\n';
      }
    }
    return out;
  }

}  // namespace mealysync
