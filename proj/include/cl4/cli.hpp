#ifndef CL4_CLI_HPP
#define CL4_CLI_HPP

// The `cl4` command line. Exit status: 0 affirmative, 1 negative, 2 error.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cl4/bench.hpp"
#include "cl4/cl4.hpp"

namespace cl4 {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write '" + path + "'");
}

struct QbfInput {
  std::string file;
  std::string text;
  std::string format = "auto";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--in", file, "QBF file (.qdimacs or textual)");
    cmd->add_option("--qbf", text, "QBF in textual form");
    cmd->add_option("--format", format, "qdimacs, textual or auto")
        ->check(CLI::IsMember({"auto", "qdimacs", "textual"}));
  }

  // QDIMACS input is normalized; textual input must already satisfy the
  // invariants.
  Qbf load() const {
    if (file.empty() == text.empty()) throw Error("give exactly one of --in and --qbf");
    std::string body = file.empty() ? text : read_file(file);
    bool qdimacs = format == "qdimacs";
    if (format == "auto" && !file.empty()) {
      qdimacs = file.ends_with(".qdimacs") || file.ends_with(".cnf");
    }
    if (qdimacs) return normalize_qbf(parse_raw_qbf(body, QbfFormat::Qdimacs));
    return parse_qbf(body, QbfFormat::Textual);
  }
};

inline Logic parse_logic(const std::string& s) { return s == "cl3" ? Logic::CL3 : Logic::CL4; }

inline const char* yes_no(bool b, const char* yes, const char* no) { return b ? yes : no; }

}  // namespace detail

/// Runs one command line (without the program name).
inline int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof search and QBF reduction toolkit for the choice fragment of computability logic", "cl4"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 20240601;
  bool json = false;
  app.add_option("--seed", seed, "seed for randomized commands");
  app.add_flag("--json", json, "machine-readable output");

  // prove
  auto* prove_cmd = app.add_subcommand("prove", "search for a proof of a formula");
  std::string logic = "cl4", formula_text, formula_file, proof_out;
  std::optional<std::size_t> depth_limit;
  bool no_memo = false;
  prove_cmd->add_option("--logic", logic)->check(CLI::IsMember({"cl4", "cl3"}));
  prove_cmd->add_option("--formula", formula_text, "formula text");
  prove_cmd->add_option("--in", formula_file, "file holding the formula");
  prove_cmd->add_option("--proof-out", proof_out, "write the proof here");
  prove_cmd->add_option("--depth-limit", depth_limit);
  prove_cmd->add_flag("--no-memo", no_memo);

  // check
  auto* check_cmd = app.add_subcommand("check", "verify a proof artifact");
  std::string proof_file;
  check_cmd->add_option("--proof", proof_file, "proof JSON")->required();
  check_cmd->add_option("--logic", logic)->check(CLI::IsMember({"cl4", "cl3"}));
  check_cmd->add_option("--formula", formula_text, "required conclusion");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "translate a QBF into a formula");
  std::string target = "cl4";
  detail::QbfInput qin;
  reduce_cmd->add_option("--target", target)->check(CLI::IsMember({"cl4", "cl3"}));
  qin.add_to(reduce_cmd);

  // qbf eval | normalize
  auto* qbf_cmd = app.add_subcommand("qbf", "QBF utilities");
  qbf_cmd->require_subcommand(1);
  auto* qbf_eval = qbf_cmd->add_subcommand("eval", "decide a QBF");
  qin.add_to(qbf_eval);
  auto* qbf_norm = qbf_cmd->add_subcommand("normalize", "repair alternation and clause width");
  std::string norm_file, norm_text, norm_format = "auto", norm_out = "textual";
  qbf_norm->add_option("--in", norm_file);
  qbf_norm->add_option("--qbf", norm_text);
  qbf_norm->add_option("--format", norm_format)->check(CLI::IsMember({"auto", "qdimacs", "textual"}));
  qbf_norm->add_option("--output", norm_out)->check(CLI::IsMember({"textual", "qdimacs"}));

  // strategy extract | to-proof | check
  auto* strat_cmd = app.add_subcommand("strategy", "strategy trees");
  strat_cmd->require_subcommand(1);
  std::string strategy_file, strategy_out;
  auto* strat_extract = strat_cmd->add_subcommand("extract", "winning tree from the QBF, or from a proof");
  qin.add_to(strat_extract);
  strat_extract->add_option("--proof", proof_file, "read the tree off this proof");
  strat_extract->add_option("--out", strategy_out);
  auto* strat_to_proof = strat_cmd->add_subcommand("to-proof", "proof of the reduction image from a tree");
  qin.add_to(strat_to_proof);
  strat_to_proof->add_option("--strategy", strategy_file)->required();
  strat_to_proof->add_option("--proof-out", proof_out);
  auto* strat_check = strat_cmd->add_subcommand("check", "is the tree winning");
  qin.add_to(strat_check);
  strat_check->add_option("--strategy", strategy_file)->required();

  // roundtrip
  auto* rt_cmd = app.add_subcommand("roundtrip", "compare truth with provability of both images");
  std::string expect = "any";
  qin.add_to(rt_cmd);
  rt_cmd->add_option("--expect", expect)->check(CLI::IsMember({"any", "true", "false"}));

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "agreement and depth report over a corpus");
  CorpusSpec spec;
  std::size_t random_count = 0, threads = 1;
  bench_cmd->add_option("--prefix", spec.prefix_length, "prefix length (odd; 0 = empty corpus)");
  bench_cmd->add_option("--min-clauses", spec.min_clauses);
  bench_cmd->add_option("--max-clauses", spec.max_clauses);
  bench_cmd->add_option("--random", random_count, "draw this many random instances instead of enumerating");
  bench_cmd->add_option("--threads", threads);

  // play
  auto* play_cmd = app.add_subcommand("play", "play the formula game against the engine");
  bool auto_moves = false;
  qin.add_to(play_cmd);
  play_cmd->add_flag("--auto", auto_moves, "choose A's moves at random");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prove_cmd->parsed()) {
      if (formula_text.empty() == formula_file.empty()) throw Error("give exactly one of --formula and --in");
      Formula f = parse_formula(formula_text.empty() ? detail::read_file(formula_file) : formula_text);
      ProverConfig cfg;
      cfg.logic = detail::parse_logic(logic);
      cfg.depth_limit = depth_limit;
      cfg.memoization = !no_memo;
      SearchResult r = search(f, cfg);
      if (r.proof && !proof_out.empty()) detail::write_file(proof_out, write_proof(*r.proof));
      if (json) {
        nlohmann::ordered_json j;
        j["provable"] = r.proof.has_value();
        j["mu"] = measure(f);
        j["maxDepth"] = r.stats.max_depth;
        j["nodes"] = r.stats.nodes;
        out << j.dump() << "\n";
      } else {
        out << detail::yes_no(r.proof.has_value(), "PROVABLE", "UNPROVABLE") << "\n";
      }
      return r.proof ? 0 : 1;
    }

    if (check_cmd->parsed()) {
      ProofNode p = read_proof(detail::read_file(proof_file));
      ProverConfig cfg;
      cfg.logic = detail::parse_logic(logic);
      CheckResult r = check_proof(p, cfg);
      if (!formula_text.empty() && !(parse_formula(formula_text) == p.conclusion))
        r.fail("root concludes " + render_formula(p.conclusion) + ", not the requested formula");
      out << (r.ok ? "VALID" : "INVALID") << "\n";
      for (const std::string& d : r.diagnostics) out << d << "\n";
      return r.ok ? 0 : 1;
    }

    if (reduce_cmd->parsed()) {
      Qbf q = qin.load();
      out << render_formula(target == "cl3" ? reduce_to_cl3(q) : reduce_to_cl4(q)) << "\n";
      return 0;
    }

    if (qbf_eval->parsed()) {
      bool v = eval_qbf(qin.load());
      out << detail::yes_no(v, "TRUE", "FALSE") << "\n";
      return v ? 0 : 1;
    }

    if (qbf_norm->parsed()) {
      if (norm_file.empty() == norm_text.empty()) throw Error("give exactly one of --in and --qbf");
      std::string body = norm_file.empty() ? norm_text : detail::read_file(norm_file);
      bool qdimacs = norm_format == "qdimacs" ||
                     (norm_format == "auto" && (norm_file.ends_with(".qdimacs") || norm_file.ends_with(".cnf")));
      Qbf q = normalize_qbf(parse_raw_qbf(body, qdimacs ? QbfFormat::Qdimacs : QbfFormat::Textual));
      out << (norm_out == "qdimacs" ? render_qdimacs(q) : render_qbf(q) + "\n");
      return 0;
    }

    if (strat_extract->parsed()) {
      Qbf q = qin.load();
      std::optional<StrategyTree> t;
      if (!proof_file.empty()) t = proof_to_strategy(q, canonicalize_proof(read_proof(detail::read_file(proof_file))));
      else t = winning_strategy_tree(q);
      if (!t) {
        out << "NO WINNING STRATEGY\n";
        return 1;
      }
      if (strategy_out.empty()) out << write_strategy(*t);
      else detail::write_file(strategy_out, write_strategy(*t));
      return 0;
    }

    if (strat_to_proof->parsed()) {
      Qbf q = qin.load();
      ProofNode p = strategy_to_proof(q, read_strategy(detail::read_file(strategy_file)));
      if (proof_out.empty()) out << write_proof(p);
      else detail::write_file(proof_out, write_proof(p));
      return 0;
    }

    if (strat_check->parsed()) {
      CheckResult r = check_strategy_tree(qin.load(), read_strategy(detail::read_file(strategy_file)));
      out << (r.ok ? "WINNING" : "NOT WINNING") << "\n";
      for (const std::string& d : r.diagnostics) out << d << "\n";
      return r.ok ? 0 : 1;
    }

    if (rt_cmd->parsed()) {
      Qbf q = qin.load();
      bool v = eval_qbf(q);
      bool p4 = prove(reduce_to_cl4(q)).has_value();
      ProverConfig c3;
      c3.logic = Logic::CL3;
      bool p3 = prove(reduce_to_cl3(q), c3).has_value();
      bool agree = v == p4 && v == p3;
      out << (agree ? "AGREE" : "DISAGREE") << " eval=" << detail::yes_no(v, "TRUE", "FALSE")
          << " cl4=" << detail::yes_no(p4, "PROVABLE", "UNPROVABLE")
          << " cl3=" << detail::yes_no(p3, "PROVABLE", "UNPROVABLE") << "\n";
      bool expected = expect == "any" || (expect == "true") == v;
      return agree && expected ? 0 : 1;
    }

    if (bench_cmd->parsed()) {
      if (random_count > 0) {
        spec.mode = CorpusSpec::Mode::Random;
        spec.count = random_count;
        spec.seed = seed;
      }
      BenchReport r = bench_run(spec, threads);
      if (json) out << bench_json(r).dump(2) << "\n";
      else out << bench_text(r);
      return r.ok() ? 0 : 1;
    }

    if (play_cmd->parsed()) {
      Qbf q = qin.load();
      auto t = winning_strategy_tree(q);
      if (!t) {
        out << "Player E has no winning strategy; nothing to play.\n";
        return 1;
      }
      std::mt19937_64 rng(seed);
      std::vector<int> played;
      const StrategyNode* e = &t->root;
      for (std::size_t level = 0; level < q.prefix.size(); ++level) {
        const std::string& var = q.prefix[level].var;
        if (level % 2 == 0) {
          played.push_back(e->label);
          out << "E sets " << var << " = " << e->label << "\n";
          continue;
        }
        int move = -1;
        if (auto_moves) {
          move = static_cast<int>(rng() & 1U);
        } else {
          out << "A: value for " << var << " (0/1)? " << std::flush;
          std::string line;
          while (move < 0) {
            if (!std::getline(in, line)) throw Error("input ended before the game did");
            if (line == "0" || line == "1") move = line[0] - '0';
            else out << "please enter 0 or 1: " << std::flush;
          }
        }
        out << "A sets " << var << " = " << move << "\n";
        played.push_back(move);
        e = &e->children[static_cast<std::size_t>(move)].children.front();
      }
      bool won = play_path(q, played);
      out << (won ? "E WINS" : "A WINS") << "\n";
      return won ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace cl4

#endif  // CL4_CLI_HPP
