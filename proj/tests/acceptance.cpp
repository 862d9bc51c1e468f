// Acceptance gate: one PASS/FAIL line per criterion, exact integers only.
// Usage: acceptance <path-to-zc>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kneading/kneading.hpp"
#include "oracle.hpp"

using namespace kneading;

namespace {

std::string zc_path;

TreeWord tw(std::initializer_list<long long> letters) {
  TreeWord out;
  for (long long z : letters) out.emplace_back(z);
  return out;
}

std::vector<long long> from_tree(const TreeWord& w) {
  std::vector<long long> out;
  for (const Letter& z : w) out.push_back(z.convert_to<long long>());
  return out;
}

std::vector<ZAutomaton> test_automata() {
  std::vector<ZAutomaton> out;
  for (long long k = 1; k <= 5; ++k) out.push_back(build_kneading(tw({0}), tw({k})));
  out.push_back(build_kneading(tw({0, 5}), tw({1, 2})));
  out.push_back(build_kneading(tw({3, -1}), tw({2, 4})));
  out.push_back(build_kneading(tw({1, 0, 2}), tw({-2})));
  out.push_back(build_kneading(tw({0}), tw({1, 1, 3})));
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run_zc(const std::string& args) {
  Run r;
  FILE* pipe = popen(("'" + zc_path + "' " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// A criterion returns "" on success, otherwise the first counterexample.
using Criterion = std::function<std::string(std::string& detail)>;

// 1. K(0,k) has a: n|n+1 -> 1, b: 0|0 -> a, k|k -> b and nothing else; matches the golden files.
std::string moore_fidelity(std::string& detail) {
  const StateId a = StateId::a(1), b = StateId::b(1), id = StateId::identity();
  std::size_t transitions = 0;
  for (long long k = 1; k <= 5; ++k) {
    const ZAutomaton A = build_kneading(tw({0}), tw({k}));
    if (A.generators() != std::vector<StateId>{a, b}) return "unexpected states for k=" + std::to_string(k);
    for (long long z = -50; z <= 50; ++z) {
      const Transition ta = step(A, a, z);
      const Transition tb = step(A, b, z);
      const StateId expected_b = z == 0 ? a : (z == k ? b : id);
      ++transitions;
      if (ta.image != z + 1 || ta.restriction != id || tb.image != z || tb.restriction != expected_b) {
        return "k=" + std::to_string(k) + " letter " + std::to_string(z);
      }
    }
    const auto golden = std::filesystem::path(GOLDEN_DIR) / ("k0_" + std::to_string(k) + ".json");
    const std::string expected = slurp(golden);
    if (automaton_to_json(A).dump(2) + "\n" != expected) return "library JSON differs from " + golden.string();
    const Run cli = run_zc("build --x 0 --y " + std::to_string(k));
    if (cli.exit_code != 0 || cli.out != expected) return "zc build differs from " + golden.string();
    if (!(automaton_from_json(json::parse(expected)) == A)) return "golden file does not load back";
  }
  detail = std::to_string(transitions) + " letters checked, 5 golden files";
  return "";
}

// 2. rho_vec matrix over the generators is the identity.
std::string abelianization(std::string& detail) {
  std::vector<ZAutomaton> automata;
  for (long long k = 1; k <= 5; ++k) automata.push_back(build_kneading(tw({0}), tw({k})));
  automata.push_back(build_kneading(tw({0, 5}), tw({1, 2})));
  automata.push_back(build_kneading(tw({3, -1}), tw({2, 4})));
  for (const ZAutomaton& A : automata) {
    const VerificationReport r = verify_abelianization(A);
    if (!r.pass) return r.to_json(false).dump();
  }
  detail = "7 automata, sizes 2x2 and 4x4";
  return "";
}

// 3. Level-1 line, level-2 comb on [-3,3]^2, inductive structure for m = 1..4.
std::string schreier_structure(std::string& detail) {
  const ZAutomaton K01 = build_kneading(tw({0}), tw({1}));
  const GenLetter a{StateId::a(1), 1};
  const GenLetter b{StateId::b(1), 1};
  for (const ZAutomaton& A : test_automata()) {
    const SchreierBall line = ball(A, tw({0}), 10);
    if (line.vertices.size() != 21) return "level-1 ball has " + std::to_string(line.vertices.size()) + " vertices";
    for (const BallEdge& e : line.edges) {
      if (e.label.state != StateId::a(1) || abs(e.to[0] - e.from[0]) != 1) return "level-1 edge off the line";
    }
    if (line.edges.size() != 40) return "level-1 ball is not a path";
  }
  // undirected positive-label edges induced on the window
  std::set<std::pair<std::vector<long long>, std::vector<long long>>> actual, comb;
  std::set<std::pair<std::vector<long long>, GenLetter>> labels;
  for (const TreeWord& v : window_words(2, -3, 3)) {
    for (const Neighbor& n : neighbors(K01, v)) {
      if (n.label.exponent < 0) continue;
      if (abs(n.vertex[0]) > 3 || abs(n.vertex[1]) > 3) continue;
      actual.emplace(from_tree(v), from_tree(n.vertex));
      labels.emplace(from_tree(v), n.label);
    }
  }
  for (long long i = -3; i <= 3; ++i) {
    for (long long j = -3; j <= 3; ++j) {
      if (i < 3) comb.emplace(std::vector<long long>{i, j}, std::vector<long long>{i + 1, j});
      if (i == 0 && j < 3) comb.emplace(std::vector<long long>{0, j}, std::vector<long long>{0, j + 1});
    }
  }
  if (actual != comb) return "level-2 window differs from the comb";
  for (const auto& [v, label] : labels) {
    if (!(label == a || (label == b && v[0] == 0))) return "comb edge with wrong label";
  }
  std::size_t checked = 0;
  for (const ZAutomaton& A : test_automata()) {
    for (std::size_t m = 1; m <= 4; ++m) {
      const InductiveCheck c = verify_inductive_structure(A, m, -2, 2);
      if (!c.pass) return "inductive structure fails at " + format_tree_word(c.counterexample);
      checked += c.vertices_checked;
    }
  }
  detail = std::to_string(comb.size()) + " comb edges, " + std::to_string(checked) + " inductive vertices";
  return "";
}

// 4. 200 seeded random balls are trees.
std::string tree_property(std::string& detail) {
  const auto automata = test_automata();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> pick_automaton(0, automata.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_level(1, 5);
  std::uniform_int_distribution<std::size_t> pick_radius(0, 12);
  std::uniform_int_distribution<long long> pick_letter(-20, 20);
  std::size_t vertices = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ZAutomaton& A = automata[pick_automaton(rng)];
    TreeWord center;
    const std::size_t level = pick_level(rng);
    for (std::size_t i = 0; i < level; ++i) center.emplace_back(pick_letter(rng));
    const std::size_t radius = pick_radius(rng);
    const SchreierBall B = ball(A, center, radius, 1'000'000);
    vertices += B.vertices.size();
    const TreeCheck t = is_tree(B);
    if (!t.is_tree) return "cycle in ball around " + format_tree_word(center) + " radius " + std::to_string(radius);
  }
  detail = "200 balls, " + std::to_string(vertices) + " vertices";
  return "";
}

// 5. is_trivial agrees with brute force on all products of <= 4 generators of K(0,1).
std::string word_problem(std::string& detail) {
  const ZAutomaton A = build_kneading(tw({0}), tw({1}));
  const oracle::Kneading kd{{0}, {1}};
  const std::vector<GenLetter> letters{{StateId::a(1), 1}, {StateId::a(1), -1}, {StateId::b(1), 1}, {StateId::b(1), -1}};
  auto to_oracle = [](const std::vector<GenLetter>& ls) {
    std::vector<oracle::Gen> out;
    for (const GenLetter& l : ls) out.push_back({{l.state.kind == StateId::Kind::A ? 'a' : 'b', 1}, l.exponent});
    return out;
  };
  std::vector<std::vector<GenLetter>> products{{}};
  std::size_t total = 0, trivial = 0;
  for (std::size_t length = 0; length <= 4; ++length) {
    std::vector<std::vector<GenLetter>> next;
    for (const auto& p : products) {
      ++total;
      const bool fast = is_trivial(A, GroupWord(p)).trivial;
      const bool brute = oracle::acts_trivially(kd, to_oracle(p), 3, -6, 6);
      trivial += fast;
      if (fast != brute) return "disagreement on " + format_word(GroupWord(p));
      for (const GenLetter& l : letters) {
        auto q = p;
        q.push_back(l);
        next.push_back(std::move(q));
      }
    }
    products = std::move(next);
  }
  detail = std::to_string(total) + " products, " + std::to_string(trivial) + " trivial";
  return "";
}

// 6. Activity and leaving-edge bounds.
std::string bounded_activity(std::string& detail) {
  std::size_t worst_activity = 0, worst_leaving = 0;
  for (const ZAutomaton& A : test_automata()) {
    const std::size_t bound = A.k() + A.p();
    for (std::size_t m = 0; m <= 10; ++m) {
      const std::size_t c = activity_pairs(A, m).size();
      worst_activity = std::max(worst_activity, c);
      if (c > bound) return "activity " + std::to_string(c) + " at m=" + std::to_string(m);
    }
    const std::vector<EndSpec> ends{A.data().sequence(), EndSpec({}, tw({0})), EndSpec(tw({1}), tw({-1, 2})),
                                    EndSpec({}, tw({1})), EndSpec(tw({2, 2}), tw({0, 5}))};
    for (const EndSpec& u : ends) {
      for (std::size_t m = 1; m <= 8; ++m) {
        const std::size_t c = leaving_edges(A, u, m).size();
        worst_leaving = std::max(worst_leaving, c);
        if (c > 2 * bound) return "leaving edges " + std::to_string(c) + " at m=" + std::to_string(m);
      }
    }
  }
  detail = "max activity " + std::to_string(worst_activity) + ", max leaving " + std::to_string(worst_leaving);
  return "";
}

// 7. Verifier witnesses on K(0,1) and K(0,2).
std::string verifier_witnesses(std::string& detail) {
  std::size_t reports = 0;
  auto accept = [&](const VerificationReport& r) -> std::string {
    ++reports;
    if (!r.pass) return r.to_json(false).dump();
    if (!r.witness.is_object() || r.witness.empty()) return r.check + " has no witness";
    return "";
  };
  for (long long k : {1LL, 2LL}) {
    const ZAutomaton A = build_kneading(tw({0}), tw({k}));
    if (auto e = accept(verify_self_replicating(A)); !e.empty()) return e;
    for (StateId s : A.generators()) {
      for (StateId t : A.generators()) {
        if (auto e = accept(verify_commutator_section(A, s, t)); !e.empty()) return e;
      }
    }
    if (auto e = accept(verify_wreath_surjection(A)); !e.empty()) return e;
    const auto pair = find_noncommuting_stabilizer_pair(A);
    if (!pair) return "no noncommuting stabilizer pair";
    const VerificationReport r = verify_residual_witness(A, pair->first, pair->second);
    if (auto e = accept(r); !e.empty()) return e;
    if (r.witness["degenerate"] != false) return "residual witness is degenerate";
  }
  detail = std::to_string(reports) + " reports with witnesses";
  return "";
}

// 8. zc schreier and zc verify all are byte-identical across runs.
std::string determinism(std::string& detail) {
  const std::vector<std::string> commands{
      "schreier --x 0 --y 1 --level 3 --radius 8",
      "schreier --x 0 --y 1 --level 2 --radius 6 --format json",
      "schreier --x 0,5 --y 1,2 --end-period 0 --level 3 --radius 5",
      "verify all --x 0 --y 1",
      "verify all --x 0,5 --y 1,2",
  };
  std::size_t bytes = 0;
  for (const std::string& c : commands) {
    const Run first = run_zc(c);
    const Run second = run_zc(c);
    if (first.exit_code != 0) return "'" + c + "' exited " + std::to_string(first.exit_code);
    if (first.out.empty() || first.out != second.out) return "'" + c + "' differs between runs";
    bytes += first.out.size();
  }
  detail = std::to_string(commands.size()) + " commands, " + std::to_string(bytes) + " bytes each run";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-zc>\n";
    return 2;
  }
  zc_path = argv[1];
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"moore-diagram fidelity", moore_fidelity},   {"abelianization identity", abelianization},
      {"schreier structure", schreier_structure},   {"tree property", tree_property},
      {"word problem soundness", word_problem},     {"bounded activity", bounded_activity},
      {"verifier witnesses", verifier_witnesses},   {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    std::string error;
    try {
      error = criteria[i].second(detail);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (error.empty()) {
      std::cout << "PASS " << i + 1 << " " << criteria[i].first << " (" << detail << ", " << ms << " ms)\n";
    } else {
      ++failures;
      std::cout << "FAIL " << i + 1 << " " << criteria[i].first << ": " << error << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}
