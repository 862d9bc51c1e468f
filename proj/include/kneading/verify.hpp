#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kneading/automaton.hpp"
#include "kneading/ends.hpp"
#include "kneading/group.hpp"
#include "kneading/json_io.hpp"
#include "kneading/schreier.hpp"
#include "kneading/word_problem.hpp"
#include "kneading/wreath.hpp"

namespace kneading {

struct VerifyLimits {
  std::size_t depth = 8;           // M_test
  std::size_t conjugation_cap = 64;
  std::size_t vertex_cap = kDefaultVertexCap;
};

/// Outcome of one check. A failing report always carries a counterexample in
/// `witness`.
struct VerificationReport {
  std::string check;
  json params = json::object();
  bool pass = false;
  json witness = json::object();
  long long ms = 0;

  json to_json(bool with_timing = true) const {
    return json{{"check", check},
                {"params", params},
                {"pass", pass},
                {"witness", witness},
                {"ms", with_timing ? ms : 0}};
  }

  static VerificationReport from_json(const json& j) {
    VerificationReport r;
    r.check = j.at("check").get<std::string>();
    r.params = j.at("params");
    r.pass = j.at("pass").get<bool>();
    r.witness = j.at("witness");
    r.ms = j.at("ms").get<long long>();
    return r;
  }
};

namespace detail {

template <typename Body>
VerificationReport timed(std::string name, json params, Body&& body) {
  VerificationReport report;
  report.check = std::move(name);
  report.params = std::move(params);
  const auto start = std::chrono::steady_clock::now();
  body(report);
  report.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                  .count();
  return report;
}

inline json kneading_params(const ZAutomaton& automaton) {
  return json{{"x", word_to_json(automaton.data().x())}, {"y", word_to_json(automaton.data().y())}};
}

inline GroupWord a1_power(const Letter& n) {
  return GroupWord::power(StateId::a(1), n.convert_to<long long>());
}

inline json triviality_json(const TrivialityResult& r) {
  json out{{"trivial", r.trivial}, {"explored", r.explored}};
  if (r.witness) {
    out["address"] = word_to_json(*r.witness);
    out["rho"] = letter_to_json(r.witness_rho);
  }
  return out;
}

// Letters z with a nonempty first-level section.
inline std::vector<Letter> support(const ZAutomaton& automaton, const GroupWord& g) {
  std::vector<Letter> out;
  for (const Letter& z : probe_letters(automaton, g)) {
    if (!section_at(automaton, g, z).empty()) out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Every non-identity state has exactly one incoming Moore edge, and there is
/// exactly one path of each length <= depth into each non-identity state.
inline VerificationReport verify_kneading_shape(const ZAutomaton& automaton, std::size_t depth = 8) {
  return detail::timed("kneading_shape", json{{"automaton", detail::kneading_params(automaton)}, {"depth", depth}},
                       [&](VerificationReport& r) {
    r.pass = true;
    json incoming = json::object();
    for (StateId s : automaton.generators()) {
      auto parents = moore_parents(automaton, s);
      if (parents.size() != 1) {
        json edges = json::array();
        for (const auto& [q, z] : parents) edges.push_back({{"state", state_name(q)}, {"letter", letter_to_json(z)}});
        r.pass = false;
        r.witness["state"] = state_name(s);
        r.witness["incoming"] = edges;
        return;
      }
      incoming[state_name(s)] = {{"state", state_name(parents.front().first)},
                                 {"letter", letter_to_json(parents.front().second)}};
    }
    // counts[slot] = number of Moore paths of the current length ending there
    const auto gens = automaton.generators();
    std::vector<Letter> counts(1 + gens.size(), Letter(1));
    for (std::size_t m = 1; m <= depth; ++m) {
      std::vector<Letter> next(counts.size(), Letter(0));
      for (StateId q : gens) {
        for (const auto& entry : automaton.restrictions(q)) next[automaton.slot(entry.second)] += counts[automaton.slot(q)];
      }
      for (StateId s : gens) {
        if (next[automaton.slot(s)] != 1) {
          r.pass = false;
          r.witness["state"] = state_name(s);
          r.witness["length"] = m;
          r.witness["paths"] = letter_to_json(next[automaton.slot(s)]);
          return;
        }
      }
      counts = std::move(next);
    }
    r.witness["incoming"] = incoming;
  });
}

/// Every generator is the section of another generator at some letter, and
/// some generator translates by +-1 so conjugation reaches every first-level
/// letter. The conjugates are checked on sample letters with the word problem.
inline VerificationReport verify_self_replicating(const ZAutomaton& automaton, const Letter& sample_lo = -3,
                                                  const Letter& sample_hi = 3) {
  return detail::timed("self_replicating",
                       json{{"automaton", detail::kneading_params(automaton)},
                            {"sample", {letter_to_json(sample_lo), letter_to_json(sample_hi)}}},
                       [&](VerificationReport& r) {
    r.pass = true;
    json parents = json::array();
    std::optional<StateId> shifter;
    for (StateId s : automaton.generators()) {
      if (abs(automaton.translation(s)) == 1) {
        shifter = s;
        break;
      }
    }
    if (!shifter) {
      r.pass = false;
      r.witness["reason"] = "no generator translates the first level by +-1";
      return;
    }
    for (StateId s : automaton.generators()) {
      auto ps = moore_parents(automaton, s);
      if (ps.empty()) {
        r.pass = false;
        r.witness["unreachable"] = state_name(s);
        return;
      }
      const auto& [c, z] = ps.front();
      // (a^-n c a^n)|x = c|(x + n t) when a translates by t = +-1
      const Letter t = automaton.translation(*shifter);
      for (Letter x = sample_lo; x <= sample_hi; ++x) {
        const Letter n = (z - x) * t;
        const GroupWord h = conjugate(GroupWord::generator(c), GroupWord::power(*shifter, n.convert_to<long long>()));
        if (!equals(automaton, section(automaton, h, {x}), GroupWord::generator(s))) {
          r.pass = false;
          r.witness["state"] = state_name(s);
          r.witness["letter"] = letter_to_json(x);
          r.witness["element"] = format_word(h);
          return;
        }
      }
      parents.push_back({{"generator", state_name(s)}, {"parent", state_name(c)}, {"letter", letter_to_json(z)}});
    }
    r.witness["shift"] = state_name(*shifter);
    r.witness["sections"] = parents;
  });
}

/// Every vertex of window^n is reached from the all-zeros vertex within
/// `radius` steps of the reduced Schreier graph. Window-verified only.
inline VerificationReport verify_level_transitive_window(const ZAutomaton& automaton, std::size_t n,
                                                         const Letter& lo, const Letter& hi, std::size_t radius,
                                                         std::size_t vertex_cap = kDefaultVertexCap) {
  return detail::timed(
      "level_transitive_window",
      json{{"automaton", detail::kneading_params(automaton)},
           {"level", n},
           {"window", {letter_to_json(lo), letter_to_json(hi)}},
           {"radius", radius}},
      [&](VerificationReport& r) {
        std::set<TreeWord, TreeWordOrder> targets;
        for (TreeWord& w : window_words(n, lo, hi)) targets.insert(std::move(w));
        const std::size_t total = targets.size();
        std::map<TreeWord, std::size_t, TreeWordOrder> dist;
        std::deque<TreeWord> queue;
        const TreeWord origin(n, Letter(0));
        dist.emplace(origin, 0);
        queue.push_back(origin);
        targets.erase(origin);
        std::size_t farthest = 0;
        bool capped = false;
        while (!queue.empty() && !targets.empty()) {
          TreeWord v = std::move(queue.front());
          queue.pop_front();
          const std::size_t d = dist.at(v);
          if (d >= radius) continue;
          for (Neighbor& nb : neighbors(automaton, v)) {
            if (dist.count(nb.vertex)) continue;
            if (dist.size() >= vertex_cap) {
              capped = true;
              queue.clear();
              break;
            }
            if (targets.erase(nb.vertex)) farthest = std::max(farthest, d + 1);
            dist.emplace(nb.vertex, d + 1);
            queue.push_back(std::move(nb.vertex));
          }
        }
        r.pass = targets.empty();
        r.witness["scope"] = "window-verified";
        r.witness["window_vertices"] = total;
        r.witness["explored"] = dist.size();
        if (r.pass) {
          r.witness["max_distance"] = farthest;
        } else {
          r.witness["unreached"] = word_to_json(*targets.begin());
          r.witness["status"] = capped ? "inconclusive: vertex cap reached" : "unreached within radius";
        }
      });
}

/// With c|z = s and d|w = t, the element [a^-z c a^z, a^-w d a^w] has section
/// [s, t] at 0, trivial sections elsewhere, and rho = 0.
inline VerificationReport verify_commutator_section(const ZAutomaton& automaton, StateId s, StateId t) {
  return detail::timed("commutator_section",
                       json{{"automaton", detail::kneading_params(automaton)},
                            {"s", state_name(s)},
                            {"t", state_name(t)}},
                       [&](VerificationReport& r) {
    auto ps = moore_parents(automaton, s);
    auto pt = moore_parents(automaton, t);
    if (ps.empty() || pt.empty()) {
      r.pass = false;
      r.witness["reason"] = "generator without a Moore parent";
      r.witness["state"] = state_name(ps.empty() ? s : t);
      return;
    }
    const auto& [c, z] = ps.front();
    const auto& [d, w] = pt.front();
    const GroupWord x = conjugate(GroupWord::generator(c), detail::a1_power(z));
    const GroupWord y = conjugate(GroupWord::generator(d), detail::a1_power(w));
    const GroupWord element = commutator(x, y);
    const GroupWord target = commutator(GroupWord::generator(s), GroupWord::generator(t));
    const GroupWord at_zero = section(automaton, element, {Letter(0)});
    r.witness["c"] = state_name(c);
    r.witness["z"] = letter_to_json(z);
    r.witness["d"] = state_name(d);
    r.witness["w"] = letter_to_json(w);
    r.witness["element"] = format_word(element);
    r.witness["section_at_0"] = format_word(at_zero);
    const Letter rho_total = rho(automaton, element);
    if (rho_total != 0) {
      r.pass = false;
      r.witness["rho"] = letter_to_json(rho_total);
      return;
    }
    if (!equals(automaton, at_zero, target)) {
      r.pass = false;
      r.witness["reason"] = "section at 0 differs from [s,t]";
      return;
    }
    for (const Letter& letter : probe_letters(automaton, element)) {
      if (letter == 0) continue;
      GroupWord sec = section_at(automaton, element, letter);
      TrivialityResult tr = is_trivial(automaton, sec);
      if (!tr.trivial) {
        r.pass = false;
        r.witness["nontrivial_section_at"] = letter_to_json(letter);
        r.witness["section"] = format_word(sec);
        return;
      }
    }
    r.pass = true;
  });
}

/// A pair of first-level stabilizer elements with nontrivial commutator,
/// searched among conjugates a1^-j s a1^j of stabilizing generators.
inline std::optional<std::pair<GroupWord, GroupWord>> find_noncommuting_stabilizer_pair(
    const ZAutomaton& automaton, long long conjugation_range = 3) {
  std::vector<GroupWord> candidates;
  for (long long j = 0; j <= conjugation_range; ++j) {
    for (long long sign : {1LL, -1LL}) {
      if (j == 0 && sign < 0) continue;
      for (StateId s : automaton.generators()) {
        if (automaton.translation(s) != 0) continue;
        candidates.push_back(conjugate(GroupWord::generator(s), detail::a1_power(Letter(sign * j))));
      }
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t k = i + 1; k < candidates.size(); ++k) {
      if (!is_trivial(automaton, commutator(candidates[i], candidates[k])).trivial) {
        return std::make_pair(candidates[i], candidates[k]);
      }
    }
  }
  return std::nullopt;
}

/// For stabilizer elements x, y: [x, y] is nontrivial, and conjugating x by a
/// power of a_1 separates the supports so that [a1^-m x a1^m, y] = 1. Reports
/// the least such m; it never exceeds max(supp x) - min(supp y) + 1.
inline VerificationReport verify_residual_witness(const ZAutomaton& automaton, const GroupWord& x,
                                                  const GroupWord& y, std::size_t conjugation_cap = 64) {
  if (rho(automaton, x) != 0 || rho(automaton, y) != 0) {
    throw PreconditionError("residual witness needs x and y in the first-level stabilizer");
  }
  return detail::timed("residual_witness",
                       json{{"automaton", detail::kneading_params(automaton)},
                            {"x", format_word(x)},
                            {"y", format_word(y)},
                            {"conjugation_cap", conjugation_cap}},
                       [&](VerificationReport& r) {
    const TrivialityResult base = is_trivial(automaton, commutator(x, y));
    r.witness["commutator"] = detail::triviality_json(base);
    const auto sx = detail::support(automaton, x);
    const auto sy = detail::support(automaton, y);
    json supp_x = json::array();
    json supp_y = json::array();
    for (const Letter& z : sx) supp_x.push_back(letter_to_json(z));
    for (const Letter& z : sy) supp_y.push_back(letter_to_json(z));
    r.witness["support_x"] = supp_x;
    r.witness["support_y"] = supp_y;
    if (base.trivial) {
      r.pass = true;
      r.witness["degenerate"] = true;
      r.witness["m"] = 0;
      return;
    }
    Letter bound = 1;
    if (!sx.empty() && !sy.empty()) bound = std::max(Letter(1), sx.back() - sy.front() + 1);
    r.witness["support_bound"] = letter_to_json(bound);
    GroupWord shift_x = x;
    const GroupWord a = GroupWord::generator(StateId::a(1));
    for (std::size_t m = 1; m <= conjugation_cap; ++m) {
      shift_x = a.inverse() * shift_x * a;
      if (is_trivial(automaton, commutator(shift_x, y)).trivial) {
        r.pass = true;
        r.witness["degenerate"] = false;
        r.witness["m"] = m;
        return;
      }
    }
    r.pass = false;
    r.witness["reason"] = "no m within the conjugation cap makes the commutator trivial";
  });
}

/// The (k+p) x (k+p) matrix with columns rho_vec(a_1), ..., rho_vec(b_p) is
/// the identity.
inline VerificationReport verify_abelianization(const ZAutomaton& automaton) {
  return detail::timed("abelianization", json{{"automaton", detail::kneading_params(automaton)}},
                       [&](VerificationReport& r) {
    const auto gens = automaton.generators();
    json matrix = json::array();
    for (std::size_t row = 0; row < gens.size(); ++row) matrix.push_back(json::array());
    r.pass = true;
    for (std::size_t col = 0; col < gens.size(); ++col) {
      auto v = rho_vec(automaton, GroupWord::generator(gens[col]));
      for (std::size_t row = 0; row < gens.size(); ++row) {
        matrix[row].push_back(letter_to_json(v[row]));
        if (v[row] != (row == col ? 1 : 0) && r.pass) {
          r.pass = false;
          r.witness["entry"] = {row, col};
        }
      }
    }
    r.witness["matrix"] = matrix;
  });
}

/// a_1 maps to the shift (0, 1) and a_2 (b_1 if k = 1) to a single unit lamp
/// with no shift, so the image contains a standard generating pair of Z wr Z.
inline VerificationReport verify_wreath_surjection(const ZAutomaton& automaton) {
  return detail::timed("wreath_surjection", json{{"automaton", detail::kneading_params(automaton)}},
                       [&](VerificationReport& r) {
    const StateId second = automaton.k() >= 2 ? StateId::a(2) : StateId::b(1);
    const WreathElement shift = wreath_image(automaton, GroupWord::generator(StateId::a(1)));
    const WreathElement lamp = wreath_image(automaton, GroupWord::generator(second));
    r.witness["a1"] = wreath_to_json(shift);
    r.witness[state_name(second)] = wreath_to_json(lamp);
    const bool shift_ok = shift.shift == 1 && shift.lamp.empty();
    const bool lamp_ok = lamp.shift == 0 && lamp.lamp.size() == 1 && lamp.lamp.begin()->second == 1;
    r.pass = shift_ok && lamp_ok;
    if (lamp_ok) r.witness["lamp_position"] = letter_to_json(lamp.lamp.begin()->first);
  });
}

/// Inductive structure of level m+1 over level m on a window.
inline VerificationReport verify_inductive(const ZAutomaton& automaton, std::size_t m, const Letter& lo,
                                           const Letter& hi) {
  return detail::timed("inductive_structure",
                       json{{"automaton", detail::kneading_params(automaton)},
                            {"m", m},
                            {"window", {letter_to_json(lo), letter_to_json(hi)}}},
                       [&](VerificationReport& r) {
    const InductiveCheck check = verify_inductive_structure(automaton, m, lo, hi);
    const SpineData sp = spine(automaton, m);
    r.pass = check.pass;
    r.witness["w"] = word_to_json(sp.w);
    r.witness["c"] = state_name(sp.c);
    r.witness["vertices_checked"] = check.vertices_checked;
    if (!check.pass) r.witness["counterexample"] = word_to_json(check.counterexample);
  });
}

/// Balls around the all-zeros vertex on levels 1..levels are trees.
inline VerificationReport verify_tree_balls(const ZAutomaton& automaton, std::size_t levels, std::size_t radius,
                                            std::size_t vertex_cap = kDefaultVertexCap) {
  return detail::timed("tree_balls",
                       json{{"automaton", detail::kneading_params(automaton)}, {"levels", levels}, {"radius", radius}},
                       [&](VerificationReport& r) {
    r.pass = true;
    json sizes = json::array();
    for (std::size_t n = 1; n <= levels; ++n) {
      const SchreierBall b = ball(automaton, TreeWord(n, Letter(0)), radius, vertex_cap);
      const TreeCheck t = is_tree(b);
      sizes.push_back(b.vertices.size());
      if (!t.is_tree) {
        r.pass = false;
        json cycle = json::array();
        for (const TreeWord& v : t.cycle) cycle.push_back(word_to_json(v));
        r.witness["level"] = n;
        r.witness["cycle"] = cycle;
        return;
      }
    }
    r.witness["ball_sizes"] = sizes;
  });
}

/// |activity_pairs(m)| <= k + p for m <= depth and the counts are eventually
/// constant; leaving-edge sets of sample ends stay within 2(k + p).
inline VerificationReport verify_bounded_activity(const ZAutomaton& automaton, std::size_t depth = 8) {
  return detail::timed("bounded_activity", json{{"automaton", detail::kneading_params(automaton)}, {"depth", depth}},
                       [&](VerificationReport& r) {
    const std::size_t bound = automaton.k() + automaton.p();
    json counts = json::array();
    r.pass = true;
    for (std::size_t m = 0; m <= depth; ++m) {
      const std::size_t c = activity_pairs(automaton, m).size();
      counts.push_back(c);
      if (c > bound && r.pass) {
        r.pass = false;
        r.witness["exceeded_at"] = m;
      }
    }
    r.witness["activity_counts"] = counts;
    const std::vector<EndSpec> ends{automaton.data().sequence(), EndSpec({}, {Letter(0)}),
                                    EndSpec({Letter(1)}, {Letter(-1), Letter(2)})};
    json leaving = json::array();
    for (const EndSpec& u : ends) {
      json row = json::array();
      for (std::size_t m = 1; m <= depth; ++m) {
        const std::size_t c = leaving_edges(automaton, u, m).size();
        row.push_back(c);
        if (c > 2 * bound && r.pass) {
          r.pass = false;
          r.witness["leaving_exceeded"] = {{"preperiod", word_to_json(u.preperiod)},
                                           {"period", word_to_json(u.period)},
                                           {"m", m}};
        }
      }
      leaving.push_back(row);
    }
    r.witness["leaving_counts"] = leaving;
  });
}

/// Sizes of balls in the Cayley graph of the Z wr Z image of the generators.
inline std::vector<std::size_t> wreath_ball_sizes(const ZAutomaton& automaton, std::size_t max_radius) {
  std::vector<WreathElement> steps;
  for (StateId s : automaton.generators()) {
    WreathElement e = wreath_image(automaton, GroupWord::generator(s));
    steps.push_back(e.inverse());
    steps.push_back(std::move(e));
  }
  std::set<WreathElement> seen{WreathElement::identity()};
  std::vector<WreathElement> frontier{WreathElement::identity()};
  std::vector<std::size_t> sizes{1};
  for (std::size_t radius = 1; radius <= max_radius; ++radius) {
    std::vector<WreathElement> next;
    for (const WreathElement& g : frontier) {
      for (const WreathElement& s : steps) {
        WreathElement h = g * s;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
    sizes.push_back(seen.size());
  }
  return sizes;
}

/// Growth sanity proxy: the local polynomial degree
/// log(|B(r)| / |B(r-1)|) / log(r / (r-1)) keeps increasing for 3 <= r <= max_radius,
/// which no polynomial growth function sustains.
inline VerificationReport verify_growth(const ZAutomaton& automaton, std::size_t max_radius = 8) {
  return detail::timed("wreath_growth", json{{"automaton", detail::kneading_params(automaton)}, {"radius", max_radius}},
                       [&](VerificationReport& r) {
    const auto sizes = wreath_ball_sizes(automaton, max_radius);
    json degrees = json::array();
    r.pass = true;
    double previous = -1.0;
    for (std::size_t radius = 2; radius <= max_radius; ++radius) {
      const double degree = std::log(static_cast<double>(sizes[radius]) / static_cast<double>(sizes[radius - 1])) /
                            std::log(static_cast<double>(radius) / static_cast<double>(radius - 1));
      degrees.push_back(std::round(degree * 1000.0) / 1000.0);
      if (radius >= 3 && !(degree > previous) && r.pass) {
        r.pass = false;
        r.witness["stalled_at"] = radius;
      }
      previous = degree;
    }
    r.witness["ball_sizes"] = sizes;
    r.witness["local_degree"] = degrees;
  });
}

/// The full suite with default parameters. Deterministic in order and content
/// (apart from `ms`).
inline std::vector<VerificationReport> verify_all(const ZAutomaton& automaton, const VerifyLimits& limits = {}) {
  std::vector<VerificationReport> out;
  out.push_back(verify_kneading_shape(automaton, limits.depth));
  out.push_back(verify_self_replicating(automaton));
  out.push_back(verify_level_transitive_window(automaton, 1, -5, 5, 10, limits.vertex_cap));
  out.push_back(verify_level_transitive_window(automaton, 2, -2, 2, 20, limits.vertex_cap));
  for (StateId s : automaton.generators()) {
    for (StateId t : automaton.generators()) out.push_back(verify_commutator_section(automaton, s, t));
  }
  if (auto pair = find_noncommuting_stabilizer_pair(automaton)) {
    out.push_back(verify_residual_witness(automaton, pair->first, pair->second, limits.conjugation_cap));
  } else {
    VerificationReport missing;
    missing.check = "residual_witness";
    missing.params = json{{"automaton", detail::kneading_params(automaton)}};
    missing.witness["reason"] = "no noncommuting stabilizer pair among searched conjugates";
    out.push_back(std::move(missing));
  }
  out.push_back(verify_abelianization(automaton));
  out.push_back(verify_wreath_surjection(automaton));
  for (std::size_t m = 1; m <= 3; ++m) out.push_back(verify_inductive(automaton, m, -2, 2));
  out.push_back(verify_tree_balls(automaton, 3, 6, limits.vertex_cap));
  out.push_back(verify_bounded_activity(automaton, limits.depth));
  out.push_back(verify_growth(automaton));
  return out;
}

}  // namespace kneading
