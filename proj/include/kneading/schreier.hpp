#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kneading/automaton.hpp"
#include "kneading/group.hpp"

namespace kneading {

inline constexpr std::size_t kDefaultVertexCap = 100'000;

/// Generators and their inverses in label order a1, a1^-1, a2, ..., bp^-1.
inline std::vector<GenLetter> generator_labels(const ZAutomaton& automaton) {
  std::vector<GenLetter> out;
  for (StateId s : automaton.generators()) {
    out.push_back({s, 1});
    out.push_back({s, -1});
  }
  return out;
}

inline std::string label_name(const GenLetter& g) {
  return state_name(g.state) + (g.exponent < 0 ? "^-1" : "");
}

// ---------------------------------------------------------------------------
// Spine

struct SpineData {
  std::size_t m = 0;
  TreeWord w;  // labels of the unique length-m Moore path ending in a_1
  StateId c;   // its starting state; c|w = a_1
};

/// Parents in the Moore diagram: (state, letter) pairs with state|letter = target.
inline std::vector<std::pair<StateId, Letter>> moore_parents(const ZAutomaton& automaton,
                                                             StateId target) {
  std::vector<std::pair<StateId, Letter>> out;
  for (StateId q : automaton.generators()) {
    for (const auto& [z, r] : automaton.restrictions(q)) {
      if (r == target) out.emplace_back(q, z);
    }
  }
  return out;
}

/// Walks the Moore diagram backwards from a_1 for m steps. m = 0 gives the
/// empty word and c = a_1. Requires unique incoming edges along the way.
inline SpineData spine(const ZAutomaton& automaton, std::size_t m) {
  SpineData out{m, {}, StateId::a(1)};
  TreeWord reversed;
  for (std::size_t step = 0; step < m; ++step) {
    auto parents = moore_parents(automaton, out.c);
    if (parents.size() != 1) {
      throw PreconditionError("state " + state_name(out.c) + " has " + std::to_string(parents.size()) +
                              " incoming Moore edges; spine needs exactly one");
    }
    out.c = parents.front().first;
    reversed.push_back(parents.front().second);
  }
  out.w.assign(reversed.rbegin(), reversed.rend());
  return out;
}

// ---------------------------------------------------------------------------
// Neighbors and balls of the reduced Schreier graphs

struct Neighbor {
  GenLetter label;
  TreeWord vertex;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// s(v) for every s in S u S^-1 that moves v, in label order.
inline std::vector<Neighbor> neighbors(const ZAutomaton& automaton, const TreeWord& v) {
  std::vector<Neighbor> out;
  for (const GenLetter& g : generator_labels(automaton)) {
    TreeWord image = act_letter(automaton, g, v);
    if (image != v) out.push_back({g, std::move(image)});
  }
  return out;
}

struct BallEdge {
  TreeWord from;
  GenLetter label;
  TreeWord to;

  friend bool operator==(const BallEdge&, const BallEdge&) = default;
};

/// A finite window of a reduced Schreier graph: every vertex within `radius`
/// of `center`, and all edges between them. Edges come in inverse pairs.
struct SchreierBall {
  TreeWord center;
  std::size_t radius = 0;
  std::vector<TreeWord> vertices;  // sorted by TreeWordOrder
  std::vector<std::size_t> distance;
  std::vector<BallEdge> edges;     // sorted by (from, label, to)

  std::optional<std::size_t> index_of(const TreeWord& v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v, TreeWordOrder{});
    if (it == vertices.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
  }
};

/// Breadth-first ball around `center` in the reduced Schreier graph of level
/// |center|. `neighbor_fn` defaults to the automaton action; a custom one lets
/// callers build balls in other graphs with the same vertex type.
template <typename NeighborFn>
SchreierBall ball_with(NeighborFn&& neighbor_fn, const TreeWord& center, std::size_t radius,
                       std::size_t vertex_cap) {
  std::map<TreeWord, std::size_t, TreeWordOrder> dist;
  std::map<TreeWord, std::vector<Neighbor>, TreeWordOrder> adjacency;
  std::deque<TreeWord> queue;
  dist.emplace(center, 0);
  queue.push_back(center);
  while (!queue.empty()) {
    TreeWord v = std::move(queue.front());
    queue.pop_front();
    const std::size_t d = dist.at(v);
    std::vector<Neighbor> ns = neighbor_fn(v);
    if (d < radius) {
      for (const Neighbor& n : ns) {
        if (dist.count(n.vertex)) continue;
        if (dist.size() >= vertex_cap) {
          throw ResourceLimit("Schreier ball exceeds vertex cap of " + std::to_string(vertex_cap));
        }
        dist.emplace(n.vertex, d + 1);
        queue.push_back(n.vertex);
      }
    }
    adjacency.emplace(std::move(v), std::move(ns));
  }

  SchreierBall ball;
  ball.center = center;
  ball.radius = radius;
  ball.vertices.reserve(dist.size());
  for (auto& [v, d] : dist) {
    ball.vertices.push_back(v);
    ball.distance.push_back(d);
  }
  for (const auto& [v, ns] : adjacency) {
    for (const Neighbor& n : ns) {
      if (dist.count(n.vertex)) ball.edges.push_back({v, n.label, n.vertex});
    }
  }
  // adjacency is iterated in vertex order and labels are already ordered
  return ball;
}

inline SchreierBall ball(const ZAutomaton& automaton, const TreeWord& center, std::size_t radius,
                         std::size_t vertex_cap = kDefaultVertexCap) {
  return ball_with([&](const TreeWord& v) { return neighbors(automaton, v); }, center, radius,
                   vertex_cap);
}

struct TreeCheck {
  bool is_tree = true;
  std::vector<TreeWord> cycle;  // closed walk v0, v1, ..., v0 when not a tree

  explicit operator bool() const { return is_tree; }
};

/// Acyclicity of the undirected graph underlying the ball. Each undirected
/// edge is taken once through its positive label; two distinct generators
/// joining the same pair count as a 2-cycle.
inline TreeCheck is_tree(const SchreierBall& ball) {
  const std::size_t n = ball.vertices.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::vector<std::size_t>> forest(n);

  auto forest_path = [&](std::size_t from, std::size_t to) {
    std::vector<std::size_t> prev(n, n);
    std::deque<std::size_t> queue{from};
    prev[from] = from;
    while (!queue.empty()) {
      std::size_t x = queue.front();
      queue.pop_front();
      if (x == to) break;
      for (std::size_t y : forest[x]) {
        if (prev[y] == n) {
          prev[y] = x;
          queue.push_back(y);
        }
      }
    }
    std::vector<std::size_t> path;
    for (std::size_t x = to; x != from; x = prev[x]) path.push_back(x);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (const BallEdge& e : ball.edges) {
    if (e.label.exponent < 0) continue;
    auto a = ball.index_of(e.from);
    auto b = ball.index_of(e.to);
    if (!a || !b || *a == *b) continue;
    std::size_t ra = find(*a);
    std::size_t rb = find(*b);
    if (ra == rb) {
      TreeCheck out;
      out.is_tree = false;
      for (std::size_t x : forest_path(*a, *b)) out.cycle.push_back(ball.vertices[x]);
      out.cycle.push_back(ball.vertices[*a]);
      return out;
    }
    parent[ra] = rb;
    forest[*a].push_back(*b);
    forest[*b].push_back(*a);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Geodesics from the inductive structure

struct PathStep {
  GenLetter label;
  TreeWord to;
};

/// The unique reduced path from `from` to `to` in the level-|from| reduced
/// Schreier graph, built recursively: stay in the copy indexed by the last
/// letter when it agrees, otherwise walk inside the copy to the spine vertex
/// w_{m-1}, cross along the spine (label c_{m-1}) and finish in the target copy.
inline std::vector<PathStep> geodesic(const ZAutomaton& automaton, const TreeWord& from,
                                      const TreeWord& to, std::size_t step_cap = kDefaultVertexCap) {
  if (from.size() != to.size()) throw PreconditionError("geodesic endpoints on different levels");
  std::vector<PathStep> path;
  std::function<void(const TreeWord&, const TreeWord&, const TreeWord&)> walk =
      [&](const TreeWord& x, const TreeWord& y, const TreeWord& suffix) {
        const std::size_t m = x.size();
        if (m == 0) return;
        TreeWord xv(x.begin(), x.end() - 1);
        TreeWord yv(y.begin(), y.end() - 1);
        TreeWord xs = suffix;
        xs.insert(xs.begin(), x.back());
        if (x.back() == y.back()) {
          walk(xv, yv, xs);
          return;
        }
        const SpineData sp = spine(automaton, m - 1);
        walk(xv, sp.w, xs);
        const int dir = y.back() > x.back() ? 1 : -1;
        Letter i = x.back();
        while (i != y.back()) {
          if (path.size() >= step_cap) throw ResourceLimit("geodesic exceeds step cap");
          i += dir;
          TreeWord v = sp.w;
          v.push_back(i);
          v.insert(v.end(), suffix.begin(), suffix.end());
          path.push_back({{sp.c, dir}, std::move(v)});
        }
        TreeWord ys = suffix;
        ys.insert(ys.begin(), y.back());
        walk(sp.w, yv, ys);
      };
  walk(from, to, {});
  return path;
}

// ---------------------------------------------------------------------------
// Inductive structure of level m+1 over level m

/// All words of length n with letters in [lo, hi], in lexicographic order.
inline std::vector<TreeWord> window_words(std::size_t n, const Letter& lo, const Letter& hi) {
  std::vector<TreeWord> out;
  if (lo > hi) return out;
  TreeWord w(n, lo);
  for (;;) {
    out.push_back(w);
    std::size_t i = n;
    while (i > 0 && w[i - 1] == hi) {
      w[i - 1] = lo;
      --i;
    }
    if (i == 0) return out;
    ++w[i - 1];
  }
}

struct InductiveCheck {
  bool pass = true;
  std::size_t vertices_checked = 0;
  TreeWord counterexample;
  std::vector<Neighbor> expected;
  std::vector<Neighbor> actual;
};

/// Checks, for every v in window^m and i in window, that the neighbors of vi
/// on level m+1 are exactly the lifts vi -> v'i of level-m edges plus, when
/// v = w_m, the spine edges w_m i -> w_m (i +- 1) labeled c_m^{+-1}.
inline InductiveCheck verify_inductive_structure(const ZAutomaton& automaton, std::size_t m,
                                                 const Letter& lo, const Letter& hi) {
  InductiveCheck out;
  const SpineData sp = spine(automaton, m);
  auto by_label = [](const Neighbor& lhs, const Neighbor& rhs) {
    if (lhs.label != rhs.label) return lhs.label < rhs.label;
    return TreeWordOrder{}(lhs.vertex, rhs.vertex);
  };
  for (const TreeWord& v : window_words(m, lo, hi)) {
    const std::vector<Neighbor> lower = neighbors(automaton, v);
    for (Letter i = lo; i <= hi; ++i) {
      TreeWord vi = v;
      vi.push_back(i);
      std::vector<Neighbor> expected;
      for (const Neighbor& n : lower) {
        TreeWord lifted = n.vertex;
        lifted.push_back(i);
        expected.push_back({n.label, std::move(lifted)});
      }
      if (v == sp.w) {
        TreeWord up = sp.w;
        up.push_back(i + 1);
        TreeWord down = sp.w;
        down.push_back(i - 1);
        expected.push_back({{sp.c, 1}, std::move(up)});
        expected.push_back({{sp.c, -1}, std::move(down)});
      }
      std::vector<Neighbor> actual = neighbors(automaton, vi);
      std::sort(expected.begin(), expected.end(), by_label);
      std::sort(actual.begin(), actual.end(), by_label);
      ++out.vertices_checked;
      if (expected != actual) {
        out.pass = false;
        out.counterexample = vi;
        out.expected = std::move(expected);
        out.actual = std::move(actual);
        return out;
      }
    }
  }
  return out;
}

}  // namespace kneading
