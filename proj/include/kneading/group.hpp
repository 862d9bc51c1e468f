#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kneading/automaton.hpp"
#include "kneading/letter.hpp"

namespace kneading {

// Generators act on the left: (g h)(w) = g(h(w)). A word s_1 s_2 ... s_n acts
// by applying s_n first. Commutators are [g, h] = g h g^-1 h^-1.

struct GenLetter {
  StateId state;
  int exponent = 1;  // +1 or -1

  GenLetter inverse() const { return {state, -exponent}; }

  friend auto operator<=>(const GenLetter&, const GenLetter&) = default;
};

/// A freely reduced word over the generators and their inverses.
class GroupWord {
 public:
  GroupWord() = default;

  explicit GroupWord(std::vector<GenLetter> letters) {
    for (const GenLetter& g : letters) push(g);
  }

  static GroupWord generator(StateId s, int exponent = 1) {
    GroupWord w;
    w.push({s, exponent});
    return w;
  }

  static GroupWord power(StateId s, long long n) {
    GroupWord w;
    const int e = n < 0 ? -1 : 1;
    for (long long i = 0; i < (n < 0 ? -n : n); ++i) w.push({s, e});
    return w;
  }

  const std::vector<GenLetter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  /// Appends on the right with free cancellation. Identity letters are dropped.
  void push(const GenLetter& g) {
    if (g.state.is_identity()) return;
    if (!letters_.empty() && letters_.back().state == g.state &&
        letters_.back().exponent == -g.exponent) {
      letters_.pop_back();
    } else {
      letters_.push_back(g);
    }
  }

  GroupWord inverse() const {
    GroupWord out;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push(it->inverse());
    return out;
  }

  friend GroupWord operator*(GroupWord lhs, const GroupWord& rhs) {
    for (const GenLetter& g : rhs.letters_) lhs.push(g);
    return lhs;
  }

  friend auto operator<=>(const GroupWord&, const GroupWord&) = default;

 private:
  std::vector<GenLetter> letters_;
};

inline GroupWord multiply(const GroupWord& g, const GroupWord& h) { return g * h; }

inline GroupWord commutator(const GroupWord& g, const GroupWord& h) {
  return g * h * g.inverse() * h.inverse();
}

/// h^-1 g h.
inline GroupWord conjugate(const GroupWord& g, const GroupWord& h) { return h.inverse() * g * h; }

inline std::string format_word(const GroupWord& w) {
  if (w.empty()) return "1";
  std::ostringstream out;
  bool first = true;
  for (const GenLetter& g : w.letters()) {
    if (!first) out << ' ';
    first = false;
    out << state_name(g.state);
    if (g.exponent < 0) out << "^-1";
  }
  return out.str();
}

/// Parses juxtaposed generators such as "a1 b1^-1 a1^3". "1", "e" or blank
/// input is the identity. Unknown generators are rejected.
inline GroupWord parse_word(const ZAutomaton& automaton, std::string_view text) {
  GroupWord out;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == '*'))
      ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    std::size_t start = pos;
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
    std::string_view name = text.substr(start, pos - start);
    if (name.empty()) {
      throw ParseError("unexpected character '" + std::string(1, text[pos]) + "' in group word");
    }
    long long exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::size_t estart = pos;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string_view digits = text.substr(estart, pos - estart);
      if (digits.empty() || digits == "-" || digits == "+" || digits.size() > 12) {
        throw ParseError("bad exponent after '" + std::string(name) + "'");
      }
      exponent = std::stoll(std::string(digits));
    }
    if (name == "1" || name == "e") {
      // identity token
    } else {
      auto state = automaton.parse_state(name);
      if (!state || state->is_identity()) {
        throw ParseError("unknown generator '" + std::string(name) + "' for automaton with k=" +
                         std::to_string(automaton.k()) + ", p=" + std::to_string(automaton.p()));
      }
      out = out * GroupWord::power(*state, exponent);
    }
    skip_space();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single generator letters acting on letters and tree words.

inline Letter letter_image(const ZAutomaton& automaton, const GenLetter& g, const Letter& z) {
  return g.exponent > 0 ? z + automaton.translation(g.state) : z - automaton.translation(g.state);
}

/// Section of s^{+-1} at the letter z, as a generator letter (possibly Id).
inline GenLetter letter_section(const ZAutomaton& automaton, const GenLetter& g, const Letter& z) {
  if (g.exponent > 0) return {automaton.restriction(g.state, z), 1};
  // s^-1 |z = (s | s^-1(z))^-1
  return {automaton.restriction(g.state, z - automaton.translation(g.state)), -1};
}

inline TreeWord act_letter(const ZAutomaton& automaton, GenLetter g, TreeWord word) {
  for (Letter& z : word) {
    if (g.state.is_identity()) break;
    GenLetter next = letter_section(automaton, g, z);
    z = letter_image(automaton, g, z);
    g = next;
  }
  return word;
}

inline TreeWord act(const ZAutomaton& automaton, const GroupWord& g, TreeWord word) {
  const auto& ls = g.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) word = act_letter(automaton, *it, std::move(word));
  return word;
}

/// g|z for a single first-level letter z, via (gh)|v = g|h(v) h|v.
inline GroupWord section_at(const ZAutomaton& automaton, const GroupWord& g, const Letter& z) {
  const auto& ls = g.letters();
  std::vector<GenLetter> parts(ls.size());
  Letter current = z;
  for (std::size_t i = ls.size(); i-- > 0;) {
    parts[i] = letter_section(automaton, ls[i], current);
    current = letter_image(automaton, ls[i], current);
  }
  return GroupWord(std::move(parts));
}

inline GroupWord section(const ZAutomaton& automaton, GroupWord g, const TreeWord& address) {
  for (const Letter& z : address) {
    if (g.empty()) break;
    g = section_at(automaton, g, z);
  }
  return g;
}

/// First-level letters z at which some letter of g contributes a non-identity
/// section to g|z. Every other letter has g|z = 1 as a word.
inline std::set<Letter, LetterOrder> probe_letters(const ZAutomaton& automaton, const GroupWord& g) {
  std::set<Letter, LetterOrder> out;
  const auto& ls = g.letters();
  Letter offset = 0;  // g_{i+1} ... g_n maps z to z + offset
  for (std::size_t i = ls.size(); i-- > 0;) {
    const GenLetter& s = ls[i];
    const Letter& t = automaton.translation(s.state);
    for (const auto& entry : automaton.restrictions(s.state)) {
      // positive letter is active at input u = r; inverse at u = r + t
      Letter u = s.exponent > 0 ? entry.first : entry.first + t;
      out.insert(u - offset);
    }
    offset += s.exponent > 0 ? t : -t;
  }
  return out;
}

/// Translation amount on the first level.
inline Letter rho(const ZAutomaton& automaton, const GroupWord& g) {
  Letter total = 0;
  for (const GenLetter& s : g.letters()) {
    if (s.exponent > 0) {
      total += automaton.translation(s.state);
    } else {
      total -= automaton.translation(s.state);
    }
  }
  return total;
}

namespace detail {

inline Letter rho_bar_memo(const ZAutomaton& automaton, const GroupWord& g, std::size_t level,
                           std::map<std::pair<GroupWord, std::size_t>, Letter>& memo) {
  if (g.empty()) return 0;
  if (level == 0) return rho(automaton, g);
  auto key = std::make_pair(g, level);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Letter total = 0;
  for (const Letter& z : probe_letters(automaton, g)) {
    total += rho_bar_memo(automaton, section_at(automaton, g, z), level - 1, memo);
  }
  memo.emplace(std::move(key), total);
  return total;
}

}  // namespace detail

/// Sum of rho(g|v) over all v in Z^level. Computed through the recursion
/// rho_bar(g, n+1) = sum over z of rho_bar(g|z, n), restricted to the finitely
/// many probe letters.
inline Letter rho_bar(const ZAutomaton& automaton, const GroupWord& g, std::size_t level) {
  std::map<std::pair<GroupWord, std::size_t>, Letter> memo;
  return detail::rho_bar_memo(automaton, g, level, memo);
}

/// (rho_bar(g, 0), ..., rho_bar(g, k+p-1)).
inline std::vector<Letter> rho_vec(const ZAutomaton& automaton, const GroupWord& g) {
  std::map<std::pair<GroupWord, std::size_t>, Letter> memo;
  std::vector<Letter> out;
  const std::size_t n = automaton.k() + automaton.p();
  for (std::size_t level = 0; level < n; ++level) {
    out.push_back(detail::rho_bar_memo(automaton, g, level, memo));
  }
  return out;
}

}  // namespace kneading
