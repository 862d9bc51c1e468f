#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>

#include "kneading/group.hpp"

namespace kneading {

struct TrivialityResult {
  bool trivial = true;
  // Set when nontrivial: rho(g|witness) != 0, so g moves witness
  // followed by any letter.
  std::optional<TreeWord> witness;
  Letter witness_rho = 0;
  std::size_t explored = 0;  // distinct section words visited

  explicit operator bool() const { return trivial; }
};

/// Decides whether g acts trivially on Z*.
///
/// g is trivial iff rho(g) = 0 and every first-level section is trivial, and
/// only the probe letters can carry a nonempty section. Sections of a word of
/// length L are words of length <= L over a finite alphabet, so the closure of
/// g under sections is finite; a breadth-first walk over it with a visited set
/// terminates. The first word found with nonzero rho gives the witness; BFS
/// order makes it one of minimal depth.
inline TrivialityResult is_trivial(const ZAutomaton& automaton, const GroupWord& g) {
  TrivialityResult result;
  std::map<GroupWord, TreeWord> visited;  // word -> address where first reached
  std::deque<GroupWord> queue;
  visited.emplace(g, TreeWord{});
  queue.push_back(g);
  while (!queue.empty()) {
    GroupWord current = std::move(queue.front());
    queue.pop_front();
    ++result.explored;
    const TreeWord& here = visited.at(current);
    Letter r = rho(automaton, current);
    if (r != 0) {
      result.trivial = false;
      result.witness = here;
      result.witness_rho = r;
      return result;
    }
    for (const Letter& z : probe_letters(automaton, current)) {
      GroupWord child = section_at(automaton, current, z);
      if (child.empty() || visited.count(child)) continue;
      TreeWord address = here;
      address.push_back(z);
      visited.emplace(child, std::move(address));
      queue.push_back(std::move(child));
    }
  }
  return result;
}

inline bool equals(const ZAutomaton& automaton, const GroupWord& g, const GroupWord& h) {
  return is_trivial(automaton, g * h.inverse()).trivial;
}

}  // namespace kneading
