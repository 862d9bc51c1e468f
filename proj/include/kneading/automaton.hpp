#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kneading/letter.hpp"

namespace kneading {

/// A state of a kneading automaton: the identity, a_i (1 <= i <= k) or
/// b_j (1 <= j <= p). The ordering Id < a_1 < ... < a_k < b_1 < ... < b_p is
/// used for all enumerations.
struct StateId {
  enum class Kind : std::uint8_t { Id = 0, A = 1, B = 2 };

  Kind kind = Kind::Id;
  std::uint32_t index = 0;

  static constexpr StateId identity() { return {}; }
  static constexpr StateId a(std::uint32_t i) { return {Kind::A, i}; }
  static constexpr StateId b(std::uint32_t j) { return {Kind::B, j}; }

  constexpr bool is_identity() const { return kind == Kind::Id; }

  friend constexpr auto operator<=>(const StateId&, const StateId&) = default;
};

inline std::string state_name(StateId s) {
  switch (s.kind) {
    case StateId::Kind::Id: return "id";
    case StateId::Kind::A: return "a" + std::to_string(s.index);
    case StateId::Kind::B: return "b" + std::to_string(s.index);
  }
  return "?";
}

/// The two kneading words x_1..x_k and y_1..y_p, with x_k != y_p.
class KneadingData {
 public:
  KneadingData(TreeWord x, TreeWord y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.empty()) throw PreconditionError("kneading word x must be nonempty");
    if (y_.empty()) throw PreconditionError("kneading word y must be nonempty");
    if (x_.back() == y_.back()) {
      throw PreconditionError("kneading data requires x_k != y_p (last letters are both " +
                              x_.back().str() + ")");
    }
  }

  const TreeWord& x() const { return x_; }
  const TreeWord& y() const { return y_; }
  std::uint32_t k() const { return static_cast<std::uint32_t>(x_.size()); }
  std::uint32_t p() const { return static_cast<std::uint32_t>(y_.size()); }

  // 0-based letter of the kneading sequence x_1..x_k (y_1..y_p)^omega.
  const Letter& sequence_at(std::size_t i) const {
    if (i < x_.size()) return x_[i];
    return y_[(i - x_.size()) % y_.size()];
  }

  EndSpec sequence() const { return EndSpec(x_, y_); }

  friend bool operator==(const KneadingData&, const KneadingData&) = default;

 private:
  TreeWord x_;
  TreeWord y_;
};

struct Transition {
  Letter image;
  StateId restriction;
};

/// A Z-automaton on the state set {Id, a_1..a_k, b_1..b_p}. Each state acts on
/// letters by a translation; restrictions are stored sparsely with Id as the
/// default.
///
/// The constructor only enforces what every Z-automaton with an identity state
/// needs (Id translates by 0 and restricts to Id, state indices in range).
/// Kneading-specific shape is produced by build_kneading and checked by
/// verify_kneading_shape, so hand-built violations remain representable.
class ZAutomaton {
 public:
  using RestrictionMap = std::map<Letter, StateId>;

  ZAutomaton(KneadingData data, std::map<StateId, Letter> translations,
             std::map<StateId, RestrictionMap> restrictions)
      : data_(std::move(data)) {
    const std::size_t n = 1 + data_.k() + data_.p();
    translation_.assign(n, Letter(0));
    restriction_.assign(n, RestrictionMap{});
    for (auto& [state, amount] : translations) {
      check_state(state);
      if (state.is_identity() && amount != 0) {
        throw PreconditionError("identity state must translate by 0");
      }
      translation_[slot(state)] = amount;
    }
    for (auto& [state, table] : restrictions) {
      check_state(state);
      if (state.is_identity() && !table.empty()) {
        throw PreconditionError("identity state must restrict to identity");
      }
      for (auto& [letter, target] : table) {
        check_state(target);
        if (!target.is_identity()) restriction_[slot(state)].emplace(letter, target);
      }
    }
  }

  const KneadingData& data() const { return data_; }
  std::uint32_t k() const { return data_.k(); }
  std::uint32_t p() const { return data_.p(); }

  /// Non-identity states in canonical order a_1..a_k, b_1..b_p.
  std::vector<StateId> generators() const {
    std::vector<StateId> out;
    for (std::uint32_t i = 1; i <= k(); ++i) out.push_back(StateId::a(i));
    for (std::uint32_t j = 1; j <= p(); ++j) out.push_back(StateId::b(j));
    return out;
  }

  bool has_state(StateId s) const {
    switch (s.kind) {
      case StateId::Kind::Id: return s.index == 0;
      case StateId::Kind::A: return s.index >= 1 && s.index <= k();
      case StateId::Kind::B: return s.index >= 1 && s.index <= p();
    }
    return false;
  }

  const Letter& translation(StateId s) const { return translation_[slot(s)]; }

  /// Letters at which s restricts to a non-identity state.
  const RestrictionMap& restrictions(StateId s) const { return restriction_[slot(s)]; }

  StateId restriction(StateId s, const Letter& z) const {
    const auto& table = restriction_[slot(s)];
    auto it = table.find(z);
    return it == table.end() ? StateId::identity() : it->second;
  }

  /// Dense index: Id -> 0, a_i -> i, b_j -> k + j.
  std::size_t slot(StateId s) const {
    switch (s.kind) {
      case StateId::Kind::Id: return 0;
      case StateId::Kind::A: return s.index;
      case StateId::Kind::B: return k() + s.index;
    }
    return 0;
  }

  /// Parses "a3", "b1", "id"; "a"/"b" alias a1/b1 when k = 1 / p = 1.
  std::optional<StateId> parse_state(std::string_view name) const {
    if (name == "id" || name == "Id") return StateId::identity();
    if (name.empty() || (name[0] != 'a' && name[0] != 'b')) return std::nullopt;
    const bool is_a = name[0] == 'a';
    std::uint32_t index = 0;
    if (name.size() == 1) {
      if ((is_a ? k() : p()) != 1) return std::nullopt;
      index = 1;
    } else {
      for (char ch : name.substr(1)) {
        if (ch < '0' || ch > '9') return std::nullopt;
        index = index * 10 + static_cast<std::uint32_t>(ch - '0');
        if (index > 1'000'000) return std::nullopt;
      }
    }
    StateId s = is_a ? StateId::a(index) : StateId::b(index);
    if (!has_state(s) || s.is_identity()) return std::nullopt;
    return s;
  }

  friend bool operator==(const ZAutomaton& lhs, const ZAutomaton& rhs) {
    return lhs.data_ == rhs.data_ && lhs.translation_ == rhs.translation_ &&
           lhs.restriction_ == rhs.restriction_;
  }

 private:
  void check_state(StateId s) const {
    if (!has_state(s)) throw PreconditionError("state " + state_name(s) + " out of range");
  }

  KneadingData data_;
  std::vector<Letter> translation_;
  std::vector<RestrictionMap> restriction_;
};

/// The kneading automaton K(x_1..x_k, y_1..y_p):
///   a_1 translates by one and restricts to Id everywhere,
///   a_{i+1}|x_i = a_i,  b_1|x_k = a_k,  b_1|y_p = b_p,  b_{j+1}|y_j = b_j.
inline ZAutomaton build_kneading(const KneadingData& data) {
  const std::uint32_t k = data.k();
  const std::uint32_t p = data.p();
  std::map<StateId, Letter> translations{{StateId::a(1), Letter(1)}};
  std::map<StateId, ZAutomaton::RestrictionMap> restrictions;
  for (std::uint32_t i = 1; i < k; ++i) {
    restrictions[StateId::a(i + 1)].emplace(data.x()[i - 1], StateId::a(i));
  }
  restrictions[StateId::b(1)].emplace(data.x()[k - 1], StateId::a(k));
  restrictions[StateId::b(1)].emplace(data.y()[p - 1], StateId::b(p));
  for (std::uint32_t j = 1; j < p; ++j) {
    restrictions[StateId::b(j + 1)].emplace(data.y()[j - 1], StateId::b(j));
  }
  return ZAutomaton(data, std::move(translations), std::move(restrictions));
}

inline ZAutomaton build_kneading(TreeWord x, TreeWord y) {
  return build_kneading(KneadingData(std::move(x), std::move(y)));
}

/// One transition tau(q, z) = (q(z), q|z).
inline Transition step(const ZAutomaton& automaton, StateId q, const Letter& z) {
  return {z + automaton.translation(q), automaton.restriction(q, z)};
}

/// Image of a tree word under the state q (extended action).
inline TreeWord act_word(const ZAutomaton& automaton, StateId q, const TreeWord& word) {
  TreeWord out;
  out.reserve(word.size());
  for (const Letter& z : word) {
    if (q.is_identity()) {
      out.push_back(z);
      continue;
    }
    Transition t = step(automaton, q, z);
    out.push_back(std::move(t.image));
    q = t.restriction;
  }
  return out;
}

/// The state q|w.
inline StateId state_section(const ZAutomaton& automaton, StateId q, const TreeWord& word) {
  for (const Letter& z : word) {
    if (q.is_identity()) break;
    q = automaton.restriction(q, z);
  }
  return q;
}

struct ActivePair {
  StateId state;
  TreeWord address;
  StateId section;

  friend bool operator==(const ActivePair&, const ActivePair&) = default;
};

/// All (q, v) with |v| = depth, q non-identity and q|v non-identity. These are
/// the length-depth paths of the Moore diagram that avoid Id, so the set is
/// finite and enumerable by walking the sparse restriction tables.
inline std::vector<ActivePair> activity_pairs(const ZAutomaton& automaton, std::size_t depth) {
  std::vector<ActivePair> frontier;
  for (StateId q : automaton.generators()) frontier.push_back({q, {}, q});
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<ActivePair> next;
    for (const ActivePair& pair : frontier) {
      for (const auto& [letter, target] : automaton.restrictions(pair.section)) {
        ActivePair extended{pair.state, pair.address, target};
        extended.address.push_back(letter);
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

/// Whether the state q moves the infinite word `end`. Walks q along the end;
/// after the preperiod, (state, phase in period) pairs repeat, so the walk is
/// cut off on the first repetition.
inline bool moves_end(const ZAutomaton& automaton, StateId q, const EndSpec& end) {
  for (const Letter& z : end.preperiod) {
    if (q.is_identity()) return false;
    if (automaton.translation(q) != 0) return true;
    q = automaton.restriction(q, z);
  }
  std::set<std::pair<StateId, std::size_t>> seen;
  std::size_t phase = 0;
  while (!q.is_identity()) {
    if (automaton.translation(q) != 0) return true;
    if (!seen.emplace(q, phase).second) return false;
    q = automaton.restriction(q, end.period[phase]);
    phase = (phase + 1) % end.period.size();
  }
  return false;
}

}  // namespace kneading
