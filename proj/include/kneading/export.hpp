#pragma once

#include <optional>
#include <sstream>
#include <string>

#include "kneading/ends.hpp"
#include "kneading/json_io.hpp"
#include "kneading/schreier.hpp"

namespace kneading {

// Exports list each undirected edge once, through its positive label.

/// Optional orbital context: the ball lives in T_m(u) and vertices are
/// length-m prefixes with the tail of u implied.
struct EndContext {
  EndSpec end;
  std::size_t depth = 0;
};

inline std::string to_dot(const SchreierBall& ball, const std::optional<EndContext>& end = std::nullopt) {
  std::ostringstream out;
  out << "graph schreier {\n";
  if (end) {
    out << "  // orbital component T_" << end->depth << "(u), u = " << format_tree_word(end->end.preperiod, ",")
        << " (" << format_tree_word(end->end.period, ",") << ")^omega\n";
  }
  out << "  // center " << format_tree_word(ball.center, ",") << ", radius " << ball.radius << "\n";
  for (const TreeWord& v : ball.vertices) out << "  \"" << format_tree_word(v, ",") << "\";\n";
  for (const BallEdge& e : ball.edges) {
    if (e.label.exponent < 0) continue;
    out << "  \"" << format_tree_word(e.from, ",") << "\" -- \"" << format_tree_word(e.to, ",")
        << "\" [label=\"" << label_name(e.label) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

inline json ball_to_json(const SchreierBall& ball, const std::optional<EndContext>& end = std::nullopt) {
  json vertices = json::array();
  for (const TreeWord& v : ball.vertices) vertices.push_back(word_to_json(v));
  json edges = json::array();
  for (const BallEdge& e : ball.edges) {
    if (e.label.exponent < 0) continue;
    edges.push_back({{"from", word_to_json(e.from)}, {"label", label_name(e.label)}, {"to", word_to_json(e.to)}});
  }
  json out{{"center", word_to_json(ball.center)},
           {"radius", ball.radius},
           {"vertices", vertices},
           {"edges", edges}};
  if (end) {
    out["end"] = {{"preperiod", word_to_json(end->end.preperiod)},
                  {"period", word_to_json(end->end.period)},
                  {"depth", end->depth}};
  }
  return out;
}

}  // namespace kneading
