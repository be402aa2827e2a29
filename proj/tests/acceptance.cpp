// End-to-end checks over the built library and binary. One line per
// criterion; the exit code counts the failures.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "disco/io.hpp"
#include "disco/selfcheck.hpp"
#include "disco/training.hpp"
#include "json.hpp"

using namespace disco;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int rc = pclose(p);
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

int failures = 0;

void report(int number, const std::string& what, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

void property(int number, const std::string& what, const PropertyResult& r) {
  report(number, what, r.passed, r.detail);
}

void guarded(int number, const std::string& what,
             const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(number, what, ok, detail);
  } catch (const std::exception& e) {
    report(number, what, false, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli, data;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli")
      cli = argv[i + 1];
    else if (flag == "--data")
      data = argv[i + 1];
  }
  if (cli.empty() || data.empty()) {
    std::cerr << "usage: acceptance --cli <binary> --data <dir>\n";
    return 1;
  }
  const std::uint64_t seed = 20250821;

  property(1, "reduction search agrees with exhaustive enumeration",
           check_grammar_oracle(seed, 1000));
  property(2, "diagram contraction equals the recursive combiner",
           check_central_equivalence(seed + 1, 500));
  property(3, "the combiner family collapses along its special cases",
           check_specialization_chain(seed + 2, 100));
  property(4, "copy, merge, unit and counit obey their algebra",
           check_frobenius_laws());
  property(5, "pronoun contractions match their closed forms",
           check_pronoun_yanking(seed + 3, 200));
  property(6, "analytic gradients match finite differences",
           check_gradients(seed + 4, 50));

  guarded(7, "toy corpus trains below 1e-3 and reruns bit for bit", [&] {
    const SemanticsConfig config = load_semantics_config(data + "/config.json");
    const Lexicon lexicon = load_lexicon_file(data + "/lexicon.jsonl", config);
    const auto examples = load_train_examples_file(data + "/toy_corpus.jsonl");
    TrainConfig tc;
    tc.learning_rate = 0.2;
    tc.epochs = 2000;
    tc.seed = 3;
    tc.init_scale = 0.1;
    const TrainResult a = train(lexicon, examples, tc, config);
    const TrainResult b = train(lexicon, examples, tc, config);
    if (a.loss_trace.size() != tc.epochs + 1)
      return std::make_pair(false, std::string("unexpected trace length"));
    if (!(a.loss_trace.back() < 1e-3))
      return std::make_pair(false,
                            "final loss " + json_number(a.loss_trace.back()));
    if (a.loss_trace != b.loss_trace)
      return std::make_pair(false, std::string("reruns disagree"));
    if (a.params.comp.T != b.params.comp.T || a.params.words != b.params.words)
      return std::make_pair(false, std::string("rerun parameters disagree"));
    return std::make_pair(true, "final loss " + json_number(a.loss_trace.back()) +
                                    " after " + std::to_string(tc.epochs) + " epochs");
  });

  guarded(8, "files and the binary round trip the bundled data", [&] {
    const SemanticsConfig config = load_semantics_config(data + "/config.json");

    // model file round trip through a temp copy
    const ModelParams model = load_model(data + "/model.json", config);
    const std::string copy = "/tmp/acceptance_model.json";
    save_model(copy, model, config);
    const ModelParams back = load_model(copy, config);
    if (back.comp.T != model.comp.T || back.words != model.words)
      return std::make_pair(false, std::string("model round trip changed values"));

    // diagram round trip
    LinkDiagram d;
    d.n_positions = 5;
    d.links = {{0, 1}, {3, 4}};
    d.open = {2};
    if (diagram_from_json_text(diagram_to_json(d)) != d)
      return std::make_pair(false, std::string("diagram round trip changed values"));

    const RunResult parse =
        run(q(cli) + " parse --config " + q(data + "/config.json") + " --lexicon " +
            q(data + "/lexicon.jsonl") + " --json dragons breathe fire 2>/dev/null");
    if (parse.status != 0)
      return std::make_pair(false,
                            "parse exited with " + std::to_string(parse.status));
    const auto pj = nlohmann::json::parse(parse.out);
    if (pj["links"] != nlohmann::json::parse("[[0,1],[3,4]]") ||
        pj["open"] != nlohmann::json::parse("[2]"))
      return std::make_pair(false, std::string("parse returned the wrong diagram"));

    const RunResult compose =
        run(q(cli) + " compose --config " + q(data + "/config.json") + " --lexicon " +
            q(data + "/lexicon.jsonl") + " --model " + q(data + "/model.json") +
            " --json dragons breathe fire 2>/dev/null");
    if (compose.status != 0)
      return std::make_pair(false,
                            "compose exited with " + std::to_string(compose.status));
    const auto cj = nlohmann::json::parse(compose.out);
    if (cj["residual"] != "s")
      return std::make_pair(false, std::string("compose lost the sentence type"));
    for (const auto& x : cj["tensor"]["data"])
      if (!std::isfinite(x.get<double>()))
        return std::make_pair(false, std::string("compose output is not finite"));
    return std::make_pair(true, std::string("model, diagram and binary all agree"));
  });

  return failures;
}
