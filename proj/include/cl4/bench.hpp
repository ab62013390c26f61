#ifndef CL4_BENCH_HPP
#define CL4_BENCH_HPP

// Agreement runs: QBF truth versus provability of both reduction images, with
// the search depth measured against μ + 1.

#include <algorithm>
#include <chrono>
#include <future>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cl4/corpus.hpp"
#include "cl4/prover.hpp"
#include "cl4/qbf.hpp"
#include "cl4/reduction.hpp"

namespace cl4 {

struct BenchEntry {
  std::size_t index = 0;
  std::string qbf;
  std::size_t mu = 0;         // of the CL4 image
  std::size_t max_depth = 0;  // of the CL4 search
  std::size_t cl3_mu = 0;
  std::size_t cl3_max_depth = 0;
  double millis = 0;
  bool eval = false;
  bool cl4 = false;
  bool cl3 = false;

  bool agree() const { return eval == cl4 && eval == cl3; }
  bool depth_ok() const { return max_depth <= mu + 1 && cl3_max_depth <= cl3_mu + 1; }
};

struct BenchReport {
  std::vector<BenchEntry> entries;

  bool all_agree() const {
    return std::all_of(entries.begin(), entries.end(), [](const BenchEntry& e) { return e.agree(); });
  }
  bool depth_ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const BenchEntry& e) { return e.depth_ok(); });
  }
  bool ok() const { return all_agree() && depth_ok(); }
};

inline BenchEntry bench_instance(const Qbf& q, std::size_t index, const ProverConfig& cfg = {}) {
  auto start = std::chrono::steady_clock::now();
  BenchEntry e;
  e.index = index;
  e.qbf = render_qbf(q);
  e.eval = eval_qbf(q);

  Formula f4 = reduce_to_cl4(q);
  ProverConfig c4 = cfg;
  c4.logic = Logic::CL4;
  SearchResult r4 = search(f4, c4);
  e.mu = measure(f4);
  e.max_depth = r4.stats.max_depth;
  e.cl4 = r4.proof.has_value();

  Formula f3 = reduce_to_cl3(q);
  ProverConfig c3 = cfg;
  c3.logic = Logic::CL3;
  SearchResult r3 = search(f3, c3);
  e.cl3_mu = measure(f3);
  e.cl3_max_depth = r3.stats.max_depth;
  e.cl3 = r3.proof.has_value();

  e.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return e;
}

/// Runs every instance; with threads > 1 instances are spread over workers
/// but the report keeps corpus order.
inline BenchReport bench_run(const std::vector<Qbf>& corpus, std::size_t threads = 1, const ProverConfig& cfg = {}) {
  BenchReport report;
  report.entries.resize(corpus.size());
  threads = std::max<std::size_t>(1, std::min(threads, corpus.size()));
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < threads; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < corpus.size(); i += threads) report.entries[i] = bench_instance(corpus[i], i, cfg);
    }));
  for (auto& w : workers) w.get();
  return report;
}

inline BenchReport bench_run(const CorpusSpec& spec, std::size_t threads = 1, const ProverConfig& cfg = {}) {
  return bench_run(generate_corpus(spec), threads, cfg);
}

inline std::string verdict(bool b, const char* yes, const char* no) { return b ? yes : no; }

/// One line per instance followed by a summary line.
inline std::string bench_text(const BenchReport& r) {
  std::string out;
  for (const BenchEntry& e : r.entries) {
    out += std::to_string(e.index) + " " + verdict(e.agree(), "AGREE", "DISAGREE") + " eval=" +
           verdict(e.eval, "TRUE", "FALSE") + " cl4=" + verdict(e.cl4, "PROVABLE", "UNPROVABLE") +
           " cl3=" + verdict(e.cl3, "PROVABLE", "UNPROVABLE") + " mu=" + std::to_string(e.mu) +
           " depth=" + std::to_string(e.max_depth) + " ms=" + std::to_string(e.millis) + " " +
           verdict(e.depth_ok(), "depth-ok", "DEPTH-EXCEEDED") + " | " + e.qbf + "\n";
  }
  std::size_t agree = static_cast<std::size_t>(
      std::count_if(r.entries.begin(), r.entries.end(), [](const BenchEntry& e) { return e.agree(); }));
  out += "instances=" + std::to_string(r.entries.size()) + " agree=" + std::to_string(agree) +
         " depth-ok=" + verdict(r.depth_ok(), "yes", "no") + "\n";
  return out;
}

inline nlohmann::ordered_json bench_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["instances"] = nlohmann::ordered_json::array();
  for (const BenchEntry& e : r.entries) {
    nlohmann::ordered_json x;
    x["index"] = e.index;
    x["qbf"] = e.qbf;
    x["eval"] = e.eval;
    x["cl4"] = e.cl4;
    x["cl3"] = e.cl3;
    x["agree"] = e.agree();
    x["mu"] = e.mu;
    x["maxDepth"] = e.max_depth;
    x["cl3Mu"] = e.cl3_mu;
    x["cl3MaxDepth"] = e.cl3_max_depth;
    x["depthOk"] = e.depth_ok();
    x["millis"] = e.millis;
    j["instances"].push_back(std::move(x));
  }
  j["allAgree"] = r.all_agree();
  j["depthOk"] = r.depth_ok();
  return j;
}

}  // namespace cl4

#endif  // CL4_BENCH_HPP
