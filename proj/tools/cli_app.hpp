#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ordfree/probe.hpp"
#include "ordfree/serialize.hpp"
#include "ordfree/session.hpp"

// Command-line front end. Exit contract: 0 ok, 1 refuted / none found,
// 2 parse failure, 3 semantic error.

namespace ordfree::cli {

inline json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return j;
}

inline void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    atomic_write(out_path, text);
}

struct CommonOpts {
  SessionConfig config;
  std::string out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "random seed recorded in reports");
    cmd->add_option("--budget-windows", config.budget_windows, "witness search window rounds");
    cmd->add_option("--grid-density", config.grid_density, "dense-grid nodes per gap");
    cmd->add_option("--max-candidates", config.max_candidates, "witness candidate budget");
    cmd->add_option("--out", out, "write the report to this file instead of stdout");
  }

  json report_header(const char* command) const {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = config.seed;
    return j;
  }
};

inline Frame frame_for_hull(const Interval& hull, Frame::IndexKind kind) {
  if (hull.bounded())
    return kind == Frame::IndexKind::integers ? Frame::geometric_in(hull)
                                              : Frame::geometric_naturals_in(hull);
  return kind == Frame::IndexKind::integers ? Frame::unit() : Frame::unit_naturals();
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"exact free-subgroup constructions over the rational line"};
  app.require_subcommand(1);

  // --- eval ---
  auto* eval_cmd = app.add_subcommand("eval", "apply a word to a point");
  std::string eval_action, eval_word_text, eval_at;
  eval_cmd->add_option("--action", eval_action, "action JSON file")->required();
  eval_cmd->add_option("--word", eval_word_text, "word, e.g. \"f g^-1\"");
  eval_cmd->add_option("--at", eval_at, "rational point")->required();

  // --- witness ---
  auto* wit_cmd = app.add_subcommand("witness", "find a moved point certifying a word nontrivial");
  std::string wit_action, wit_word, wit_window;
  CommonOpts wit_opts;
  wit_cmd->add_option("--action", wit_action, "action JSON file")->required();
  wit_cmd->add_option("--word", wit_word, "word to test")->required();
  wit_cmd->add_option("--window", wit_window, "initial search window, e.g. \"[-8/1,8/1]\"");
  wit_opts.attach(wit_cmd);

  // --- pingpong ---
  auto* pp_cmd = app.add_subcommand("pingpong", "certify a table");
  std::string pp_table;
  CommonOpts pp_opts;
  pp_cmd->add_option("--table", pp_table, "table JSON file")->required();
  pp_opts.attach(pp_cmd);

  // --- basis ---
  auto* basis_cmd = app.add_subcommand("basis", "rank-2 pair over a frame, with its table");
  std::string basis_interval;
  std::uint64_t basis_omega = 0;
  bool basis_omega_set = false;
  CommonOpts basis_opts;
  basis_cmd->add_option("--interval", basis_interval,
                        "bounded interval to build inside (default: whole line)");
  basis_cmd->add_option("--omega", basis_omega, "also print the j-th conjugate basis word")
      ->each([&](const std::string&) { basis_omega_set = true; });
  basis_opts.attach(basis_cmd);

  // --- cameron ---
  auto* cam_cmd = app.add_subcommand("cameron", "branch-indexed generator families");
  cam_cmd->require_subcommand(1);
  auto* cam_gen = cam_cmd->add_subcommand("gen", "emit one generator");
  std::string cam_gen_branch, cam_gen_hull = "(0/1,1/1)";
  CommonOpts cam_gen_opts;
  cam_gen->add_option("--branch", cam_gen_branch, "branch, e.g. \"01(0)\"")->required();
  cam_gen->add_option("--hull", cam_gen_hull, "family hull interval");
  cam_gen_opts.attach(cam_gen);
  auto* cam_agree = cam_cmd->add_subcommand("agree", "blocks where two generators coincide");
  std::vector<std::string> cam_agree_branches;
  std::int64_t cam_agree_blocks = 16;
  std::string cam_agree_hull = "(0/1,1/1)";
  CommonOpts cam_agree_opts;
  cam_agree->add_option("--branch", cam_agree_branches, "two branches")->expected(2);
  cam_agree->add_option("--blocks", cam_agree_blocks, "compare the first N blocks");
  cam_agree->add_option("--hull", cam_agree_hull, "family hull interval");
  cam_agree_opts.attach(cam_agree);
  auto* cam_wit = cam_cmd->add_subcommand("witness", "moved point for a word over generators");
  std::string cam_wit_word, cam_wit_hull = "(0/1,1/1)";
  CommonOpts cam_wit_opts;
  cam_wit->add_option("--word", cam_wit_word, "word over g#<branch> letters")->required();
  cam_wit->add_option("--hull", cam_wit_hull, "family hull interval");
  cam_wit_opts.attach(cam_wit);

  // --- transitive ---
  auto* tr_cmd = app.add_subcommand("transitive", "tuple-transitive free generators");
  tr_cmd->require_subcommand(1);
  auto* tr_map = tr_cmd->add_subcommand("map", "generator carrying one tuple onto another");
  std::string tr_from, tr_to, tr_registry;
  std::size_t tr_max_n = 2;
  CommonOpts tr_opts;
  tr_map->add_option("--from", tr_from, "source tuple, e.g. \"0,1\"")->required();
  tr_map->add_option("--to", tr_to, "target tuple")->required();
  tr_map->add_option("--registry", tr_registry, "registry JSON file (read and updated)");
  tr_map->add_option("--max-n", tr_max_n, "maximum tuple length accepted");
  tr_opts.attach(tr_map);

  // --- dirprod ---
  auto* dp_cmd = app.add_subcommand("dirprod", "restricted direct product tools");
  dp_cmd->require_subcommand(1);
  auto* dp_rel = dp_cmd->add_subcommand("relation", "shortest relation among the elements");
  std::string dp_rel_set;
  std::size_t dp_rel_maxlen = 8;
  CommonOpts dp_rel_opts;
  dp_rel->add_option("--set", dp_rel_set, "element set JSON file")->required();
  dp_rel->add_option("--max-len", dp_rel_maxlen, "maximum word length");
  dp_rel_opts.attach(dp_rel);
  auto* dp_probe = dp_cmd->add_subcommand("probe", "support-refinement commuting triple");
  std::string dp_probe_set;
  CommonOpts dp_probe_opts;
  dp_probe->add_option("--set", dp_probe_set, "element set JSON file")->required();
  dp_probe_opts.attach(dp_probe);

  // --- export / import ---
  auto* ex_cmd = app.add_subcommand("export", "write a built-in artifact");
  std::string ex_what, ex_out;
  ex_cmd->add_option("what", ex_what, "example-action | example-table | mutated-table | dirprod-sample")
      ->required();
  ex_cmd->add_option("--out", ex_out, "output file");
  auto* im_cmd = app.add_subcommand("import", "validate an artifact and re-emit it canonically");
  std::string im_in, im_out;
  im_cmd->add_option("--in", im_in, "artifact JSON file")->required();
  im_cmd->add_option("--out", im_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval_cmd) {
      Action a = action_from_json(load_json(eval_action));
      Word w = parse_word(eval_word_text);
      Rational x = parse_rational(eval_at);
      for (const auto& l : w.letters())
        if (!a.bound(l.gen)) throw DomainError("unbound letter '" + l.gen.str() + "'");
      std::cout << to_string(eval_word(a, w, x)) << "\n";
      return 0;
    }
    if (*wit_cmd) {
      Action a = action_from_json(load_json(wit_action));
      Word w = parse_word(wit_word);
      WitnessBudget budget = wit_opts.config.witness_budget();
      if (!wit_window.empty()) budget.initial_window = parse_interval(wit_window);
      WitnessResult r = nontriviality_witness(a, w, budget);
      json rep = wit_opts.report_header("witness");
      rep["word"] = w.str();
      rep["found"] = r.found;
      rep["candidates_tried"] = r.candidates_tried;
      rep["windows_used"] = r.windows_used;
      if (r.found) {
        rep["point"] = to_json(r.point);
        rep["image"] = to_json(r.image);
      } else {
        rep["note"] = "budget exhausted; inconclusive";
      }
      emit(rep, wit_opts.out);
      return r.found ? 0 : 1;
    }
    if (*pp_cmd) {
      PingPongTable t = table_from_json(load_json(pp_table));
      PingPongCertificate cert = certify(t);
      json rep = to_json(cert, t);
      rep["seed"] = pp_opts.config.seed;
      emit(rep, pp_opts.out);
      return cert.certified ? 0 : 1;
    }
    if (*basis_cmd) {
      Frame frame = basis_interval.empty()
                        ? Frame::unit()
                        : Frame::geometric_in(parse_interval(basis_interval));
      auto [f, g] = rank2_basis(frame);
      Action a;
      a.alphabet[GeneratorId("f")] = f;
      a.alphabet[GeneratorId("g")] = g;
      PingPongTable t;
      t.action = a;
      t.pairs.push_back(PingPongPair{BlockSet(frame, select_residue(4, {0})),
                                     BlockSet(frame, select_residue(4, {3})), GeneratorId("f")});
      t.pairs.push_back(PingPongPair{BlockSet(frame, select_residue(4, {2})),
                                     BlockSet(frame, select_residue(4, {1})), GeneratorId("g")});
      json rep = basis_opts.report_header("basis");
      rep["action"] = to_json(a);
      rep["table"] = to_json(t);
      rep["certifiable"] = frame.uniform_step().has_value();
      if (basis_omega_set)
        rep["omega_word"] = rank_omega_word(basis_omega, GeneratorId("f"), GeneratorId("g")).str();
      emit(rep, basis_opts.out);
      return 0;
    }
    if (*cam_gen) {
      Interval hull = parse_interval(cam_gen_hull);
      BlockFreeFamily fam(hull, frame_for_hull(hull, Frame::IndexKind::naturals));
      CameronGenerator g = cameron_generator(fam, Branch::parse(cam_gen_branch));
      json rep = cam_gen_opts.report_header("cameron gen");
      rep["family"] = to_json(fam);
      rep["branches"] = json::array({g.branch.str()});
      rep["encoding"] = "pow2-prefix";
      rep["generator"] = json{{"id", g.id().str()}, {"map", to_json(g.descriptor)}};
      emit(rep, cam_gen_opts.out);
      return 0;
    }
    if (*cam_agree) {
      Interval hull = parse_interval(cam_agree_hull);
      BlockFreeFamily fam(hull, frame_for_hull(hull, Frame::IndexKind::naturals));
      CameronGenerator ga = cameron_generator(fam, Branch::parse(cam_agree_branches.at(0)));
      CameronGenerator gb = cameron_generator(fam, Branch::parse(cam_agree_branches.at(1)));
      auto blocks = agreement_blocks(ga, gb, cam_agree_blocks);
      json rep = cam_agree_opts.report_header("cameron agree");
      rep["branches"] = json::array({ga.branch.str(), gb.branch.str()});
      rep["prefix_length"] = intersection_size(ga.branch, gb.branch);
      rep["blocks"] = blocks;
      emit(rep, cam_agree_opts.out);
      return 0;
    }
    if (*cam_wit) {
      Interval hull = parse_interval(cam_wit_hull);
      BlockFreeFamily fam(hull, frame_for_hull(hull, Frame::IndexKind::naturals));
      Word w = parse_word(cam_wit_word);
      CameronWitness r = cameron_word_witness(fam, w, cam_wit_opts.config.witness_budget());
      json rep = cam_wit_opts.report_header("cameron witness");
      rep["word"] = w.str();
      rep["found"] = r.found;
      rep["block"] = r.block;
      rep["candidates_tried"] = r.candidates_tried;
      if (r.found) {
        rep["point"] = to_json(r.point);
        rep["image"] = to_json(r.image);
      }
      emit(rep, cam_wit_opts.out);
      return r.found ? 0 : 1;
    }
    if (*tr_map) {
      TransitiveFreeFamily fam(std::max<std::size_t>(tr_max_n, 2));
      if (!tr_registry.empty() && std::filesystem::exists(tr_registry))
        fam.registry() = registry_from_json(load_json(tr_registry));
      auto [idx, g] = fam.generator(OrderedTuple::parse(tr_from), OrderedTuple::parse(tr_to));
      if (!tr_registry.empty())
        atomic_write(tr_registry, to_json(fam.registry()).dump(2) + "\n");
      json rep = tr_opts.report_header("transitive map");
      rep["index"] = idx;
      rep["map"] = to_json(g);
      emit(rep, tr_opts.out);
      return 0;
    }
    if (*dp_rel) {
      auto S = element_set_from_json(load_json(dp_rel_set));
      RelationSearchResult r = relation_search(S, dp_rel_maxlen);
      json rep = dp_rel_opts.report_header("dirprod relation");
      rep["found"] = r.found;
      rep["words_tried"] = r.words_tried;
      if (r.found) {
        rep["word"] = r.word.str();
        rep["length"] = r.word.size();
      } else {
        rep["note"] = "no relation within the length budget; inconclusive";
      }
      emit(rep, dp_rel_opts.out);
      return r.found ? 0 : 1;
    }
    if (*dp_probe) {
      auto S = element_set_from_json(load_json(dp_probe_set));
      PigeonholeResult r = pigeonhole_probe(S);
      json rep = dp_probe_opts.report_header("dirprod probe");
      rep["found"] = r.found;
      if (r.found) {
        rep["f"] = r.f_index;
        rep["g1"] = r.g1_index;
        rep["g2"] = r.g2_index;
        rep["pattern"] = r.pattern;
        json sels = json::array();
        for (const auto& [coord, value] : r.selections)
          sels.push_back(json{{"coordinate", coord}, {"value", value}});
        rep["selections"] = std::move(sels);
      }
      emit(rep, dp_probe_opts.out);
      return r.found ? 0 : 1;
    }
    if (*ex_cmd) {
      json j;
      if (ex_what == "example-action") {
        j = to_json(example_action());
      } else if (ex_what == "example-table") {
        j = to_json(example_table());
      } else if (ex_what == "mutated-table") {
        j = to_json(mutated_table());
      } else if (ex_what == "dirprod-sample") {
        std::vector<FinSupportElement> S;
        S.push_back(FinSupportElement::single(0, {1, 0, 2, 3}));
        S.push_back(FinSupportElement::single(1, {1, 2, 0, 3}));
        S.push_back(FinSupportElement::single(2, {1, 0, 3, 2}));
        j = to_json(S);
      } else {
        throw ParseError("unknown export artifact '" + ex_what + "'");
      }
      emit(j, ex_out);
      return 0;
    }
    if (*im_cmd) {
      json j = load_json(im_in);
      json canon;
      if (j.contains("pairs") && j.contains("action"))
        canon = to_json(table_from_json(j));
      else if (j.contains("generators"))
        canon = to_json(action_from_json(j));
      else if (j.contains("elements"))
        canon = to_json(element_set_from_json(j));
      else if (j.contains("assignments"))
        canon = to_json(registry_from_json(j));
      else if (j.contains("type"))
        canon = to_json(map_from_json(j));
      else
        throw ParseError("unrecognized artifact shape");
      emit(canon, im_out);
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: bad artifact: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

inline int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("ordfree");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ordfree::cli
