#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "kneading/automaton.hpp"
#include "kneading/group.hpp"
#include "kneading/schreier.hpp"

namespace kneading {

// T_m(u) is the part of the orbital Schreier graph of the end u whose
// vertices agree with u beyond position m. Prefix projection identifies it
// with the level-m reduced Schreier graph, so vertices are written as their
// length-m prefix and the tail u_{m+1} u_{m+2} ... is implied.

struct LeavingEdge {
  TreeWord vertex;  // length-m prefix of the source vertex
  GenLetter label;

  friend bool operator==(const LeavingEdge&, const LeavingEdge&) = default;
};

struct LeavingEdgeOrder {
  bool operator()(const LeavingEdge& lhs, const LeavingEdge& rhs) const {
    TreeWordOrder less;
    if (less(lhs.vertex, rhs.vertex)) return true;
    if (less(rhs.vertex, lhs.vertex)) return false;
    return lhs.label < rhs.label;
  }
};

using LeavingEdgeSet = std::set<LeavingEdge, LeavingEdgeOrder>;

/// Edges of T(u) leaving T_m(u): pairs (v, q) with v in Z^m, q in S u S^-1 and
/// q|v moving the tail of u after position m. Only active pairs can qualify,
/// so the candidates come from activity_pairs: (v, s) with section r, and
/// (s(v), s^-1) with section r^-1, which moves the tail iff r does.
inline LeavingEdgeSet leaving_edges(const ZAutomaton& automaton, const EndSpec& u, std::size_t m) {
  LeavingEdgeSet out;
  const EndSpec tail = u.tail(m);
  for (const ActivePair& pair : activity_pairs(automaton, m)) {
    if (!moves_end(automaton, pair.section, tail)) continue;
    out.insert({pair.address, {pair.state, 1}});
    out.insert({act_word(automaton, pair.state, pair.address), {pair.state, -1}});
  }
  return out;
}

/// The map E_m -> E_{m-1}: an edge e leaving T_m(u) goes to the first edge
/// leaving T_{m-1}(u) on the geodesic from u to e. If the source of e already
/// lies in T_{m-1}(u), e itself is that edge.
inline std::map<LeavingEdge, LeavingEdge, LeavingEdgeOrder> project_leaving(const ZAutomaton& automaton,
                                                                            const EndSpec& u,
                                                                            std::size_t m) {
  if (m < 2) throw PreconditionError("project_leaving needs m >= 2");
  std::map<LeavingEdge, LeavingEdge, LeavingEdgeOrder> out;
  const TreeWord base = u.prefix(m);
  const Letter& anchor = u.at(m - 1);
  for (const LeavingEdge& e : leaving_edges(automaton, u, m)) {
    TreeWord source = base;
    GenLetter label = e.label;
    if (e.vertex.back() == anchor) {
      source = e.vertex;
    } else {
      TreeWord previous = base;
      bool found = false;
      for (PathStep& step : geodesic(automaton, base, e.vertex)) {
        if (step.to.back() != previous.back()) {
          source = previous;
          label = step.label;
          found = true;
          break;
        }
        previous = std::move(step.to);
      }
      if (!found) throw Error("geodesic never left T_{m-1}(u)");
    }
    source.pop_back();
    out.emplace(e, LeavingEdge{std::move(source), label});
  }
  return out;
}

}  // namespace kneading
