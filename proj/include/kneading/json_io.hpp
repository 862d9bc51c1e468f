#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include <json.hpp>

#include "kneading/automaton.hpp"
#include "kneading/group.hpp"
#include "kneading/letter.hpp"
#include "kneading/wreath.hpp"

namespace kneading {

using json = nlohmann::ordered_json;

// Letters are written as JSON integers. Values outside the signed 64-bit
// range are written as decimal strings, and both forms are accepted on input.
inline json letter_to_json(const Letter& z) {
  static const Letter lo(std::numeric_limits<std::int64_t>::min());
  static const Letter hi(std::numeric_limits<std::int64_t>::max());
  if (z >= lo && z <= hi) return json(z.convert_to<std::int64_t>());
  return json(z.str());
}

inline Letter letter_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Letter(j.get<std::uint64_t>());
    return Letter(j.get<std::int64_t>());
  }
  if (j.is_string()) return parse_letter(j.get<std::string>());
  throw ParseError("expected an integer letter in JSON, got " + j.dump());
}

inline json word_to_json(const TreeWord& w) {
  json out = json::array();
  for (const Letter& z : w) out.push_back(letter_to_json(z));
  return out;
}

inline TreeWord word_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of letters, got " + j.dump());
  TreeWord out;
  for (const json& z : j) out.push_back(letter_from_json(z));
  return out;
}

inline json wreath_to_json(const WreathElement& e) {
  json lamp = json::array();
  for (const auto& [x, v] : e.lamp) lamp.push_back({letter_to_json(x), letter_to_json(v)});
  return json{{"shift", letter_to_json(e.shift)}, {"lamp", lamp}};
}

// ---------------------------------------------------------------------------
// Automaton files
//
// {"x":[...], "y":[...],
//  "states":[{"name":"a1","translation":1}, ...],
//  "transitions":[{"state":"b1","letter":0,"image":0,"restriction":"a1"}, ...]}
//
// Only transitions with a non-identity restriction are listed; a state's
// action on letters is its translation.

inline json automaton_to_json(const ZAutomaton& automaton) {
  json states = json::array();
  json transitions = json::array();
  for (StateId s : automaton.generators()) {
    states.push_back({{"name", state_name(s)}, {"translation", letter_to_json(automaton.translation(s))}});
  }
  for (StateId s : automaton.generators()) {
    for (const auto& [z, r] : automaton.restrictions(s)) {
      transitions.push_back({{"state", state_name(s)},
                             {"letter", letter_to_json(z)},
                             {"image", letter_to_json(z + automaton.translation(s))},
                             {"restriction", state_name(r)}});
    }
  }
  return json{{"x", word_to_json(automaton.data().x())},
              {"y", word_to_json(automaton.data().y())},
              {"states", states},
              {"transitions", transitions}};
}

inline ZAutomaton automaton_from_json(const json& j) {
  try {
    KneadingData data(word_from_json(j.at("x")), word_from_json(j.at("y")));
    // A scratch automaton to resolve state names against k and p.
    ZAutomaton names(data, {}, {});
    auto state = [&](const json& name) {
      auto s = names.parse_state(name.get<std::string>());
      if (!s) throw ParseError("unknown state '" + name.get<std::string>() + "'");
      return *s;
    };
    std::map<StateId, Letter> translations;
    for (const json& entry : j.at("states")) {
      translations[state(entry.at("name"))] = letter_from_json(entry.at("translation"));
    }
    std::map<StateId, ZAutomaton::RestrictionMap> restrictions;
    for (const json& t : j.at("transitions")) {
      StateId s = state(t.at("state"));
      Letter z = letter_from_json(t.at("letter"));
      Letter image = letter_from_json(t.at("image"));
      auto it = translations.find(s);
      Letter shift = it == translations.end() ? Letter(0) : it->second;
      if (image != z + shift) {
        throw ParseError("transition image for " + state_name(s) + " at " + z.str() +
                         " disagrees with its translation");
      }
      if (!restrictions[s].emplace(z, state(t.at("restriction"))).second) {
        throw ParseError("duplicate transition for " + state_name(s) + " at " + z.str());
      }
    }
    return ZAutomaton(std::move(data), std::move(translations), std::move(restrictions));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed automaton JSON: ") + e.what());
  }
}

}  // namespace kneading
