#pragma once

#include <map>
#include <string>
#include <sstream>

#include "kneading/group.hpp"

namespace kneading {

/// Element of the restricted wreath product Z wr Z, written (lamp, shift).
///
/// The product matches the left action on the second level:
///   (f, s) * (f', s') = (x -> f(x + s') + f'(x), s + s'),
/// which is (gh)|x = g|h(x) h|x read through rho.
struct WreathElement {
  std::map<Letter, Letter> lamp;  // zero entries never stored
  Letter shift = 0;

  static WreathElement identity() { return {}; }

  void add_lamp(const Letter& position, const Letter& amount) {
    if (amount == 0) return;
    auto [it, inserted] = lamp.emplace(position, amount);
    if (!inserted) {
      it->second += amount;
      if (it->second == 0) lamp.erase(it);
    }
  }

  friend WreathElement operator*(const WreathElement& lhs, const WreathElement& rhs) {
    WreathElement out;
    out.shift = lhs.shift + rhs.shift;
    for (const auto& [x, v] : lhs.lamp) out.add_lamp(x - rhs.shift, v);
    for (const auto& [x, v] : rhs.lamp) out.add_lamp(x, v);
    return out;
  }

  WreathElement inverse() const {
    WreathElement out;
    out.shift = -shift;
    for (const auto& [x, v] : lamp) out.add_lamp(x + shift, -v);
    return out;
  }

  bool is_identity() const { return shift == 0 && lamp.empty(); }

  friend bool operator==(const WreathElement&, const WreathElement&) = default;
  friend bool operator<(const WreathElement& lhs, const WreathElement& rhs) {
    if (lhs.shift != rhs.shift) return lhs.shift < rhs.shift;
    return lhs.lamp < rhs.lamp;
  }
};

inline std::string format_wreath(const WreathElement& e) {
  std::ostringstream out;
  out << "shift " << e.shift << "\nlamp";
  for (const auto& [x, v] : e.lamp) out << ' ' << x << ':' << v;
  return out.str();
}

/// Image of g in Z wr Z induced by the action on the second level:
/// shift = rho(g), lamp(x) = rho(g|x).
inline WreathElement wreath_image(const ZAutomaton& automaton, const GroupWord& g) {
  WreathElement out;
  out.shift = rho(automaton, g);
  for (const Letter& z : probe_letters(automaton, g)) {
    out.add_lamp(z, rho(automaton, section_at(automaton, g, z)));
  }
  return out;
}

}  // namespace kneading
