#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "disco/composition.hpp"
#include "disco/grammar.hpp"
#include "disco/io.hpp"
#include "disco/selfcheck.hpp"
#include "disco/training.hpp"

namespace {

using namespace disco;

void put(std::string& line, std::size_t pos, const std::string& text) {
  if (line.size() < pos + text.size()) line.resize(pos + text.size(), ' ');
  for (std::size_t i = 0; i < text.size(); ++i) line[pos + i] = text[i];
}

// Words over their types, cups below, the residual type at the bottom.
// Inner cups sit closest to the type row; outer cups stack beneath.
std::string render_diagram(const std::vector<std::string>& words,
                           const std::vector<PregroupType>& types,
                           const LinkDiagram& d) {
  const auto positions = flatten(types);
  std::vector<std::string> labels;
  for (const auto& p : positions) labels.push_back(to_string(p));

  // Each word gets a column block wide enough for both the word and its
  // type labels; the narrower of the two is centered in the block.
  std::vector<std::size_t> col(positions.size());
  std::string header, word_row;
  std::size_t base = 0, pos_index = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::size_t k = types[w].size();
    if (k == 0) continue;  // unit-typed words occupy no positions
    std::size_t block = k - 1;
    for (std::size_t i = 0; i < k; ++i) block += labels[pos_index + i].size();
    const std::size_t width = std::max(words[w].size(), block);
    put(word_row, base + (width - words[w].size()) / 2, words[w]);
    std::size_t at = base + (width - block) / 2;
    for (std::size_t i = 0; i < k; ++i) {
      col[pos_index + i] = at + (labels[pos_index + i].size() - 1) / 2;
      put(header, at, labels[pos_index + i]);
      at += labels[pos_index + i].size() + 1;
    }
    pos_index += k;
    base += width + 1;
  }

  auto depth = [&](const std::pair<std::size_t, std::size_t>& l) {
    std::size_t n = 0;
    for (const auto& other : d.links)
      if (other.first < l.first && l.second < other.second) ++n;
    return n;
  };
  std::size_t maxd = 0;
  for (const auto& l : d.links) maxd = std::max(maxd, depth(l));
  std::vector<std::string> grid(d.links.empty() ? 0 : maxd + 1);
  for (const auto& l : d.links) {
    const std::size_t r = maxd - depth(l);
    put(grid[r], col[l.first], "\\");
    put(grid[r], col[l.second], "/");
    for (std::size_t c = col[l.first] + 1; c < col[l.second]; ++c) put(grid[r], c, "_");
    for (std::size_t rr = 0; rr < r; ++rr) {
      put(grid[rr], col[l.first], "|");
      put(grid[rr], col[l.second], "|");
    }
  }
  for (const std::size_t p : d.open)
    for (auto& row : grid) put(row, col[p], "|");

  std::string res_row;
  for (const std::size_t p : d.open)
    put(res_row, col[p] - (labels[p].size() - 1) / 2, labels[p]);

  std::string out = word_row + "\n" + header + "\n";
  for (const auto& row : grid) out += row + "\n";
  out += res_row.empty() ? std::string("1") : res_row;
  out += "\n";
  return out;
}

struct CommonOpts {
  std::string config_path;
  std::string lexicon_path;
  std::string model_path;
  std::string target = "s";
  bool json = false;
};

std::string resolved_config(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("DISCO_CONFIG"); env && *env) return env;
  return {};
}

struct World {
  SemanticsConfig config;
  Lexicon lexicon;
  ModelParams model;
  bool has_model = false;
};

World load_world(const CommonOpts& opts, bool need_lexicon) {
  World w;
  const std::string config_path = resolved_config(opts.config_path);
  if (config_path.empty())
    throw io_error("no config given; pass --config or set DISCO_CONFIG");
  w.config = load_semantics_config(config_path);
  if (!opts.lexicon_path.empty())
    w.lexicon = load_lexicon_file(opts.lexicon_path, w.config);
  else if (need_lexicon)
    throw io_error("this command needs --lexicon");
  if (!opts.model_path.empty()) {
    w.model = load_model(opts.model_path, w.config);
    w.has_model = true;
  } else {
    w.model.comp.mode = w.config.unified ? CompositionParams::Mode::unified
                                         : CompositionParams::Mode::per_type;
  }
  return w;
}

std::vector<WordMeaning> realize_sentence(const World& w,
                                          const std::vector<std::string>& tokens) {
  std::vector<WordMeaning> meanings;
  for (const auto& tok : tokens) {
    const auto it = w.lexicon.find(tok);
    if (it == w.lexicon.end())
      throw validation_error("word '" + tok + "' is not in the lexicon");
    const LexiconEntry& e = it->second;
    if (!w.has_model &&
        (e.cls == WordClass::adj || e.cls == WordClass::iv || e.cls == WordClass::tv))
      throw io_error("word '" + tok + "' needs composition tensors; pass --model");
    std::optional<Tensor> vec = e.vector;
    if (const auto mv = w.model.words.find(tok); mv != w.model.words.end())
      vec = mv->second;
    meanings.push_back(realize_word(tok, e.cls, e.type, vec, e.tensor, w.model.comp,
                                    w.config));
  }
  return meanings;
}

std::vector<PregroupType> types_of(const World& w, const std::vector<std::string>& tokens) {
  std::vector<PregroupType> types;
  for (const auto& tok : tokens) {
    const auto it = w.lexicon.find(tok);
    if (it == w.lexicon.end())
      throw validation_error("word '" + tok + "' is not in the lexicon");
    types.push_back(it->second.type);
  }
  return types;
}

int report_no_reduction(const std::vector<std::string>& tokens, const std::string& target) {
  std::string sent;
  for (const auto& t : tokens) sent += (sent.empty() ? "" : " ") + t;
  std::cerr << "no reduction of '" << sent << "' to target '" << target << "'\n";
  return 2;
}

int run_parse(const CommonOpts& opts, const std::vector<std::string>& tokens) {
  const World w = load_world(opts, true);
  const PregroupType target = parse_type(opts.target);
  const auto types = types_of(w, tokens);
  const auto diagram = reduce(types, target);
  if (!diagram) return report_no_reduction(tokens, opts.target);
  const std::string picture = render_diagram(tokens, types, *diagram);
  if (opts.json) {
    std::cerr << picture;
    std::cout << diagram_to_json(*diagram) << "\n";
  } else {
    std::cout << picture;
  }
  return 0;
}

std::optional<Tensor> compose_tokens(const World& w, const std::vector<std::string>& tokens,
                                     const PregroupType& target) {
  const auto meanings = realize_sentence(w, tokens);
  std::vector<PregroupType> types;
  for (const auto& m : meanings) types.push_back(m.gtype);
  const auto diagram = reduce(types, target);
  if (!diagram) return std::nullopt;
  return compose(meanings, *diagram, w.config);
}

std::string tensor_values(const Tensor& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i)
    out += (i ? ", " : "") + json_number(t.data()[i]);
  return out + "]";
}

int run_compose(const CommonOpts& opts, const std::vector<std::string>& tokens) {
  const World w = load_world(opts, true);
  const PregroupType target = parse_type(opts.target);
  const auto result = compose_tokens(w, tokens, target);
  if (!result) return report_no_reduction(tokens, opts.target);
  const std::string human = "residual '" + (target.is_unit() ? "1" : to_string(target)) +
                            "': " + tensor_values(*result) + "\n";
  if (opts.json) {
    std::cerr << human;
    std::cout << "{\"residual\":" << json_string(to_string(target))
              << ",\"tensor\":" << tensor_to_json(*result) << "}\n";
  } else {
    std::cout << human;
  }
  return 0;
}

int run_sim(const CommonOpts& opts, const std::vector<std::string>& tokens) {
  const auto sep = std::find(tokens.begin(), tokens.end(), ";");
  if (sep == tokens.end()) {
    std::cerr << "sim needs two sentences separated by a ';' token\n";
    return 1;
  }
  const std::vector<std::string> left(tokens.begin(), sep);
  const std::vector<std::string> right(sep + 1, tokens.end());
  if (left.empty() || right.empty()) {
    std::cerr << "sim needs words on both sides of ';'\n";
    return 1;
  }
  const World w = load_world(opts, true);
  const PregroupType target = parse_type(opts.target);
  const auto a = compose_tokens(w, left, target);
  if (!a) return report_no_reduction(left, opts.target);
  const auto b = compose_tokens(w, right, target);
  if (!b) return report_no_reduction(right, opts.target);
  const double sim = cosine_similarity(*a, *b);
  if (opts.json) {
    std::cerr << "cosine similarity: " << json_number(sim) << "\n";
    std::cout << "{\"similarity\":" << json_number(sim) << "}\n";
  } else {
    std::cout << "cosine similarity: " << json_number(sim) << "\n";
  }
  return 0;
}

int run_train(const CommonOpts& opts, const std::string& data_path, const TrainConfig& tc) {
  CommonOpts in = opts;
  in.model_path.clear();  // --model names the output file here
  World w = load_world(in, false);
  const auto examples = load_train_examples_file(data_path);
  const TrainResult result = train(w.lexicon, examples, tc, w.config);
  save_model(opts.model_path, result.params, w.config);
  const double initial = result.loss_trace.front();
  const double final_loss = result.loss_trace.back();
  std::ostringstream human;
  human << "trained " << tc.epochs << " epochs on " << examples.size() << " examples\n"
        << "loss " << json_number(initial) << " -> " << json_number(final_loss) << "\n"
        << "model written to " << opts.model_path << "\n";
  if (opts.json) {
    std::cerr << human.str();
    std::cout << "{\"epochs\":" << tc.epochs << ",\"examples\":" << examples.size()
              << ",\"initial_loss\":" << json_number(initial)
              << ",\"final_loss\":" << json_number(final_loss)
              << ",\"model\":" << json_string(opts.model_path) << "}\n";
  } else {
    std::cout << human.str();
  }
  return 0;
}

int run_verify(std::uint64_t seed, bool json) {
  const auto results = run_selfcheck(seed);
  bool all = true;
  std::ostringstream human;
  for (const auto& r : results) {
    all = all && r.passed;
    human << (r.passed ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail << "\n";
  }
  if (json) {
    std::cerr << human.str();
    std::cout << "{\"passed\":" << (all ? "true" : "false") << ",\"results\":[";
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << "{\"name\":" << json_string(results[i].name)
                << ",\"passed\":" << (results[i].passed ? "true" : "false")
                << ",\"detail\":" << json_string(results[i].detail) << "}";
    }
    std::cout << "]}\n";
  } else {
    std::cout << human.str();
  }
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pregroup grammar and tensor semantics toolkit"};
  app.require_subcommand(1);

  CommonOpts parse_opts, compose_opts, sim_opts, train_opts;
  std::vector<std::string> parse_words, compose_words, sim_words;
  std::string train_data;
  TrainConfig tc;
  std::string objective_name = "squared";
  std::uint64_t verify_seed = 0;
  bool verify_json = false;

  auto add_common = [](CLI::App* sub, CommonOpts& o, bool with_model) {
    sub->add_option("--config", o.config_path,
                    "semantics config JSON (or set DISCO_CONFIG)");
    sub->add_option("--lexicon", o.lexicon_path, "lexicon JSON-lines file");
    if (with_model) sub->add_option("--model", o.model_path, "model JSON file");
    sub->add_option("--target", o.target, "target type to reduce to")
        ->default_val("s");
    sub->add_flag("--json", o.json, "emit a single JSON document on stdout");
  };

  CLI::App* cmd_parse = app.add_subcommand("parse", "reduce a sentence and draw its wiring");
  add_common(cmd_parse, parse_opts, false);
  cmd_parse->add_option("words", parse_words, "sentence words")->required();

  CLI::App* cmd_compose =
      app.add_subcommand("compose", "contract a sentence to its meaning tensor");
  add_common(cmd_compose, compose_opts, true);
  cmd_compose->add_option("words", compose_words, "sentence words")->required();

  CLI::App* cmd_sim = app.add_subcommand(
      "sim", "cosine similarity of two sentences (separate them with ';')");
  add_common(cmd_sim, sim_opts, true);
  cmd_sim->add_option("words", sim_words, "words of both sentences with a ';' between")
      ->required();

  CLI::App* cmd_train = app.add_subcommand("train", "fit tensors and vectors to examples");
  add_common(cmd_train, train_opts, true);
  cmd_train->get_option("--model")->required();
  cmd_train->add_option("data", train_data, "training examples JSON-lines file")->required();
  cmd_train->add_option("--lr", tc.learning_rate, "gradient step size")->default_val(0.05);
  cmd_train->add_option("--epochs", tc.epochs, "full-batch passes")->default_val(1000);
  cmd_train->add_option("--seed", tc.seed, "generator seed for initialization")
      ->default_val(0);
  cmd_train->add_option("--init-scale", tc.init_scale,
                        "half-width of the uniform initialization")
      ->default_val(0.1);
  cmd_train->add_option("--objective", objective_name, "squared or cosine")
      ->default_val("squared")
      ->check(CLI::IsMember({"squared", "cosine"}));

  CLI::App* cmd_verify = app.add_subcommand("verify", "run the built-in property checks");
  cmd_verify->add_option("--seed", verify_seed, "generator seed")->default_val(0);
  cmd_verify->add_flag("--json", verify_json, "emit a single JSON document on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_parse->parsed()) return run_parse(parse_opts, parse_words);
    if (cmd_compose->parsed()) return run_compose(compose_opts, compose_words);
    if (cmd_sim->parsed()) return run_sim(sim_opts, sim_words);
    if (cmd_train->parsed()) {
      tc.objective = *objective_from_string(objective_name);
      return run_train(train_opts, train_data, tc);
    }
    if (cmd_verify->parsed()) return run_verify(verify_seed, verify_json);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
