// zc: command-line front end for kneading automata and their groups.
//
// Exit codes: 0 pass/true, 1 fail/false, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kneading/kneading.hpp"

namespace {

using namespace kneading;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

struct Session {
  std::string config_path;
  std::string automaton_path;
  std::string x_text;
  std::string y_text;
  std::string format;
  std::size_t vertex_cap = kDefaultVertexCap;
  std::size_t depth = 8;
  std::size_t conjugation_cap = 64;
  bool timing = false;
  json config = json::object();
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Flag > environment (vertex cap only) > config file > default.
template <typename T>
T setting(const Session& s, const CLI::App& app, const std::string& flag, const std::string& key, T value) {
  if (app.count(flag) > 0) return value;
  if (s.config.contains(key)) return s.config.at(key).get<T>();
  return value;
}

TreeWord letters_from_config(const json& j) {
  if (j.is_string()) return parse_tree_word(j.get<std::string>());
  return word_from_json(j);
}

ZAutomaton load_automaton(const Session& s) {
  if (!s.x_text.empty() || !s.y_text.empty()) {
    if (s.x_text.empty() || s.y_text.empty()) throw UsageError("--x and --y must be given together");
    return build_kneading(parse_tree_word(s.x_text), parse_tree_word(s.y_text));
  }
  if (!s.automaton_path.empty()) return automaton_from_json(read_json_file(s.automaton_path));
  if (s.config.contains("automaton")) return automaton_from_json(read_json_file(s.config.at("automaton")));
  if (s.config.contains("x") && s.config.contains("y")) {
    return build_kneading(letters_from_config(s.config.at("x")), letters_from_config(s.config.at("y")));
  }
  throw UsageError("no automaton: pass --automaton FILE or --x/--y");
}

std::string tree_word_text(const TreeWord& w) { return w.empty() ? "(root)" : format_tree_word(w); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zc - kneading automata, their groups and Schreier graphs"};
  app.require_subcommand(1);
  Session s;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", s.config_path, "JSON config file; flags override it");
    sub->add_option("-A,--automaton", s.automaton_path, "automaton JSON file");
    sub->add_option("--x", s.x_text, "kneading word x (comma/space separated)");
    sub->add_option("--y", s.y_text, "kneading word y (comma/space separated)");
    sub->add_option("--format", s.format, "output format: text, json or dot");
    sub->add_option("--vertex-cap", s.vertex_cap, "vertex cap for Schreier balls (env ZC_VERTEX_CAP)");
    sub->add_option("--depth", s.depth, "depth bound for verifiers");
    sub->add_option("--conjugation-cap", s.conjugation_cap, "largest conjugation exponent tried");
    sub->add_flag("--timing", s.timing, "record wall-clock ms in reports");
  };

  auto* build = app.add_subcommand("build", "write the automaton K(x, y) as JSON");
  add_common(build);
  std::string out_path;
  build->add_option("-o,--output", out_path, "output file (default stdout)");

  std::string word_a, word_b, tree_text;
  auto* act_cmd = app.add_subcommand("act", "image of a tree word under a group element");
  add_common(act_cmd);
  act_cmd->add_option("word", word_a, "group word, e.g. \"a1 b1^-1\"")->required();
  act_cmd->add_option("vertex", tree_text, "tree word, e.g. \"0 -1 2\"")->required();

  auto* section_cmd = app.add_subcommand("section", "section of a group element at a vertex");
  add_common(section_cmd);
  section_cmd->add_option("word", word_a)->required();
  section_cmd->add_option("vertex", tree_text)->required();

  auto* trivial_cmd = app.add_subcommand("trivial", "decide whether a group element is trivial");
  add_common(trivial_cmd);
  trivial_cmd->add_option("word", word_a)->required();

  auto* equal_cmd = app.add_subcommand("equal", "decide whether two group words are equal");
  add_common(equal_cmd);
  equal_cmd->add_option("lhs", word_a)->required();
  equal_cmd->add_option("rhs", word_b)->required();

  auto* abel_cmd = app.add_subcommand("abelianize", "image in Z^(k+p) under (rho_bar_0 .. rho_bar_{k+p-1})");
  add_common(abel_cmd);
  abel_cmd->add_option("word", word_a)->required();

  auto* wreath_cmd = app.add_subcommand("wreath", "image in Z wr Z from the second-level action");
  add_common(wreath_cmd);
  wreath_cmd->add_option("word", word_a)->required();

  auto* schreier_cmd = app.add_subcommand("schreier", "ball in a reduced Schreier graph (DOT or JSON)");
  add_common(schreier_cmd);
  std::string center_text, end_pre, end_period;
  std::size_t radius = 3;
  std::size_t level = 0;
  schreier_cmd->add_option("--center", center_text, "center vertex (level = its length)");
  schreier_cmd->add_option("--level", level, "level; center defaults to all zeros");
  schreier_cmd->add_option("--radius", radius, "ball radius");
  schreier_cmd->add_option("--end-pre", end_pre, "preperiod of the end u (orbital component)");
  schreier_cmd->add_option("--end-period", end_period, "period of the end u");

  auto* spine_cmd = app.add_subcommand("spine", "spine data (w_m, c_m)");
  add_common(spine_cmd);
  std::size_t spine_m = 1;
  spine_cmd->add_option("m", spine_m, "level")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run verification checks, one JSON report per line");
  add_common(verify_cmd);
  std::string check_name = "all";
  std::string gen_s, gen_t, lo_text = "-2", hi_text = "2";
  std::size_t v_level = 2, v_radius = 20, v_m = 1;
  verify_cmd->add_option("check", check_name,
                         "all | kneading_shape | self_replicating | level_transitive | commutator_section | "
                         "residual_witness | abelianization | wreath_surjection | inductive_structure | "
                         "tree_balls | bounded_activity | growth");
  verify_cmd->add_option("--s", gen_s, "first generator (commutator_section)");
  verify_cmd->add_option("--t", gen_t, "second generator (commutator_section)");
  verify_cmd->add_option("--wx", word_a, "x element (residual_witness)");
  verify_cmd->add_option("--wy", word_b, "y element (residual_witness)");
  verify_cmd->add_option("--level", v_level, "level (level_transitive, tree_balls)");
  verify_cmd->add_option("--lo", lo_text, "window low letter");
  verify_cmd->add_option("--hi", hi_text, "window high letter");
  verify_cmd->add_option("--radius", v_radius, "search radius");
  verify_cmd->add_option("--m", v_m, "level m (inductive_structure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (!s.config_path.empty()) s.config = read_json_file(s.config_path);
    s.format = setting<std::string>(s, *active, "--format", "format", s.format);
    s.depth = setting<std::size_t>(s, *active, "--depth", "depth", s.depth);
    s.conjugation_cap = setting<std::size_t>(s, *active, "--conjugation-cap", "conjugation_cap", s.conjugation_cap);
    s.timing = setting<bool>(s, *active, "--timing", "timing", s.timing);
    if (active->count("--vertex-cap") == 0) {
      if (const char* env = std::getenv("ZC_VERTEX_CAP")) {
        try {
          s.vertex_cap = std::stoull(env);
        } catch (const std::exception&) {
          throw UsageError("ZC_VERTEX_CAP must be a positive integer");
        }
      } else if (s.config.contains("vertex_cap")) {
        s.vertex_cap = s.config.at("vertex_cap").get<std::size_t>();
      }
    }
    if (s.vertex_cap == 0 || s.depth == 0) throw UsageError("caps must be positive");

    const ZAutomaton automaton = load_automaton(s);
    const bool as_json = s.format == "json";

    if (active == build) {
      const std::string text = automaton_to_json(automaton).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write '" + out_path + "'");
        out << text;
      }
      return kPass;
    }
    if (active == act_cmd) {
      const TreeWord image = act(automaton, parse_word(automaton, word_a), parse_tree_word(tree_text));
      if (as_json) {
        std::cout << word_to_json(image).dump() << "\n";
      } else {
        std::cout << format_tree_word(image) << "\n";
      }
      return kPass;
    }
    if (active == section_cmd) {
      std::cout << format_word(section(automaton, parse_word(automaton, word_a), parse_tree_word(tree_text)))
                << "\n";
      return kPass;
    }
    if (active == trivial_cmd) {
      const TrivialityResult r = is_trivial(automaton, parse_word(automaton, word_a));
      if (as_json) {
        std::cout << detail::triviality_json(r).dump() << "\n";
      } else if (r.trivial) {
        std::cout << "trivial\n";
      } else {
        std::cout << "nontrivial\nwitness " << tree_word_text(*r.witness) << "\nrho " << r.witness_rho << "\n";
      }
      return r.trivial ? kPass : kFail;
    }
    if (active == equal_cmd) {
      const bool same = equals(automaton, parse_word(automaton, word_a), parse_word(automaton, word_b));
      std::cout << (same ? "true" : "false") << "\n";
      return same ? kPass : kFail;
    }
    if (active == abel_cmd) {
      const auto v = rho_vec(automaton, parse_word(automaton, word_a));
      if (as_json) {
        std::cout << word_to_json(v).dump() << "\n";
      } else {
        std::cout << format_tree_word(v) << "\n";
      }
      return kPass;
    }
    if (active == wreath_cmd) {
      const WreathElement e = wreath_image(automaton, parse_word(automaton, word_a));
      if (as_json) {
        std::cout << wreath_to_json(e).dump() << "\n";
      } else {
        std::cout << format_wreath(e) << "\n";
      }
      return kPass;
    }
    if (active == spine_cmd) {
      const SpineData sp = spine(automaton, spine_m);
      if (as_json) {
        std::cout << json{{"m", sp.m}, {"w", word_to_json(sp.w)}, {"c", state_name(sp.c)}}.dump() << "\n";
      } else {
        std::cout << "w " << tree_word_text(sp.w) << "\nc " << state_name(sp.c) << "\n";
      }
      return kPass;
    }
    if (active == schreier_cmd) {
      radius = setting<std::size_t>(s, *active, "--radius", "radius", radius);
      std::optional<EndContext> end;
      TreeWord center;
      if (!end_period.empty() || !end_pre.empty()) {
        if (end_period.empty()) throw UsageError("--end-period is required with --end-pre");
        EndContext ctx{EndSpec(parse_tree_word(end_pre), parse_tree_word(end_period)), level};
        if (ctx.depth == 0) throw UsageError("--level must be positive for an orbital component");
        center = ctx.end.prefix(ctx.depth);
        end = std::move(ctx);
      } else if (!center_text.empty()) {
        center = parse_tree_word(center_text);
      } else {
        center = TreeWord(level, Letter(0));
      }
      const SchreierBall b = ball(automaton, center, radius, s.vertex_cap);
      if (as_json) {
        std::cout << ball_to_json(b, end).dump(2) << "\n";
      } else {
        std::cout << to_dot(b, end);
      }
      return kPass;
    }
    if (active == verify_cmd) {
      const Letter lo = parse_letter(lo_text);
      const Letter hi = parse_letter(hi_text);
      std::vector<VerificationReport> reports;
      auto generator = [&](const std::string& name) {
        auto st = automaton.parse_state(name);
        if (!st || st->is_identity()) throw UsageError("unknown generator '" + name + "'");
        return *st;
      };
      VerifyLimits limits{s.depth, s.conjugation_cap, s.vertex_cap};
      if (check_name == "all") {
        reports = verify_all(automaton, limits);
      } else if (check_name == "kneading_shape") {
        reports.push_back(verify_kneading_shape(automaton, s.depth));
      } else if (check_name == "self_replicating") {
        reports.push_back(verify_self_replicating(automaton));
      } else if (check_name == "level_transitive") {
        reports.push_back(verify_level_transitive_window(automaton, v_level, lo, hi, v_radius, s.vertex_cap));
      } else if (check_name == "commutator_section") {
        if (gen_s.empty() || gen_t.empty()) {
          for (StateId x : automaton.generators())
            for (StateId y : automaton.generators()) reports.push_back(verify_commutator_section(automaton, x, y));
        } else {
          reports.push_back(verify_commutator_section(automaton, generator(gen_s), generator(gen_t)));
        }
      } else if (check_name == "residual_witness") {
        std::optional<std::pair<GroupWord, GroupWord>> pair;
        if (!word_a.empty() || !word_b.empty()) {
          pair.emplace(parse_word(automaton, word_a), parse_word(automaton, word_b));
        } else {
          pair = find_noncommuting_stabilizer_pair(automaton);
          if (!pair) throw Error("no noncommuting stabilizer pair found");
        }
        reports.push_back(verify_residual_witness(automaton, pair->first, pair->second, s.conjugation_cap));
      } else if (check_name == "abelianization") {
        reports.push_back(verify_abelianization(automaton));
      } else if (check_name == "wreath_surjection") {
        reports.push_back(verify_wreath_surjection(automaton));
      } else if (check_name == "inductive_structure") {
        reports.push_back(verify_inductive(automaton, v_m, lo, hi));
      } else if (check_name == "tree_balls") {
        reports.push_back(verify_tree_balls(automaton, v_level, v_radius, s.vertex_cap));
      } else if (check_name == "bounded_activity") {
        reports.push_back(verify_bounded_activity(automaton, s.depth));
      } else if (check_name == "growth") {
        reports.push_back(verify_growth(automaton));
      } else {
        throw UsageError("unknown check '" + check_name + "'");
      }
      bool all_pass = true;
      for (const VerificationReport& r : reports) {
        std::cout << r.to_json(s.timing).dump() << "\n";
        all_pass = all_pass && r.pass;
      }
      return all_pass ? kPass : kFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "zc: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "zc: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "zc: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "zc: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "zc: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
