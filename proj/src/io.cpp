#include "disco/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace disco {

using nlohmann::json;

void write_json_number(std::ostream& os, double x) { os << json_number(x); }

std::string json_number(double x) {
  // "-0" would read back as the integer zero and lose the sign
  if (x == 0.0 && std::signbit(x)) return "-0.0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_string(const std::string& s) { return json(s).dump(); }

std::string tensor_to_json(const Tensor& t) {
  std::ostringstream os;
  os << "{\"shape\":[";
  for (std::size_t i = 0; i < t.rank(); ++i) os << (i ? "," : "") << t.shape()[i];
  os << "],\"data\":[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    write_json_number(os, t.data()[i]);
  }
  os << "]}";
  return os.str();
}

std::string diagram_to_json(const LinkDiagram& d) {
  std::ostringstream os;
  os << "{\"n\":" << d.n_positions << ",\"links\":[";
  for (std::size_t i = 0; i < d.links.size(); ++i)
    os << (i ? "," : "") << '[' << d.links[i].first << ',' << d.links[i].second << ']';
  os << "],\"open\":[";
  for (std::size_t i = 0; i < d.open.size(); ++i) os << (i ? "," : "") << d.open[i];
  os << "]}";
  return os.str();
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw io_error("failed writing '" + path + "'");
}

json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(where + ": malformed JSON: " + e.what());
  }
}

const json& need(const json& j, const char* field, const std::string& where) {
  if (!j.is_object()) throw validation_error(where + ": expected a JSON object");
  auto it = j.find(field);
  if (it == j.end()) throw validation_error(where + ": missing field '" + field + "'");
  return *it;
}

std::size_t index_from(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw validation_error(where + " must be an integer");
  const auto n = v.get<long long>();
  if (n < 0) throw validation_error(where + " must be non-negative");
  return static_cast<std::size_t>(n);
}

std::size_t positive_from(const json& v, const std::string& where) {
  const std::size_t n = index_from(v, where);
  if (n == 0) throw validation_error(where + " must be positive");
  return n;
}

std::vector<double> numbers_from(const json& v, const std::string& where) {
  if (!v.is_array()) throw validation_error(where + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw validation_error(where + " must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

Tensor tensor_from(const json& v, const std::string& where) {
  if (!v.is_object())
    throw validation_error(where + " must be an object with 'shape' and 'data'");
  const json& js = need(v, "shape", where);
  if (!js.is_array()) throw validation_error(where + ": 'shape' must be an array");
  std::vector<std::size_t> shape;
  for (const auto& d : js) shape.push_back(positive_from(d, where + ": each dimension"));
  std::vector<double> data = numbers_from(need(v, "data", where), where + ": 'data'");
  try {
    return Tensor(std::move(shape), std::move(data));
  } catch (const error& e) {
    throw validation_error(where + ": " + e.what());
  }
}

Tensor vector_from(const json& v, const std::string& where) {
  std::vector<double> data = numbers_from(v, where);
  if (data.empty()) throw validation_error(where + " must be non-empty");
  return Tensor::from_vector(std::move(data));
}

void check_diagram(const LinkDiagram& d, const std::string& where) {
  std::vector<char> used(d.n_positions, 0);
  for (std::size_t k = 0; k < d.links.size(); ++k) {
    const auto& [i, j] = d.links[k];
    if (i >= j || j >= d.n_positions)
      throw validation_error(where + ": link endpoints must satisfy i < j < n");
    if (used[i] || used[j])
      throw validation_error(where + ": a position may appear in at most one link");
    used[i] = used[j] = 1;
    if (k > 0 && !(d.links[k - 1] < d.links[k]))
      throw validation_error(where + ": links must be sorted");
  }
  std::vector<std::size_t> expect_open;
  for (std::size_t p = 0; p < d.n_positions; ++p)
    if (!used[p]) expect_open.push_back(p);
  if (d.open != expect_open)
    throw validation_error(where +
                           ": 'open' must list exactly the unlinked positions in order");
}

}  // namespace

Tensor tensor_from_json_text(const std::string& text) {
  return tensor_from(parse_json_text(text, "tensor"), "tensor");
}

LinkDiagram diagram_from_json_text(const std::string& text) {
  const json j = parse_json_text(text, "diagram");
  LinkDiagram d;
  d.n_positions = index_from(need(j, "n", "diagram"), "diagram: field 'n'");
  const json& links = need(j, "links", "diagram");
  if (!links.is_array()) throw validation_error("diagram: field 'links' must be an array");
  for (const auto& l : links) {
    if (!l.is_array() || l.size() != 2)
      throw validation_error("diagram: each link must be a pair of positions");
    d.links.emplace_back(index_from(l[0], "diagram: link endpoint"),
                         index_from(l[1], "diagram: link endpoint"));
  }
  const json& open = need(j, "open", "diagram");
  if (!open.is_array()) throw validation_error("diagram: field 'open' must be an array");
  for (const auto& p : open)
    d.open.push_back(index_from(p, "diagram: open position"));
  check_diagram(d, "diagram");
  return d;
}

void save_diagram(const std::string& path, const LinkDiagram& d) {
  check_diagram(d, "diagram");
  write_file(path, diagram_to_json(d) + "\n");
}

LinkDiagram load_diagram(const std::string& path) {
  return diagram_from_json_text(read_file(path));
}

SemanticsConfig load_semantics_config(const std::string& path) {
  const json j = parse_json_text(read_file(path), "config");
  SemanticsConfig cfg;
  const json& dims = need(j, "atom_dims", "config");
  if (!dims.is_object()) throw validation_error("config: 'atom_dims' must be an object");
  for (auto it = dims.begin(); it != dims.end(); ++it)
    cfg.atom_dims[it.key()] =
        positive_from(it.value(), "config: dimension for atom '" + it.key() + "'");
  if (auto it = j.find("unified"); it != j.end()) {
    if (!it->is_boolean()) throw validation_error("config: 'unified' must be a boolean");
    cfg.unified = it->get<bool>();
  }
  if (auto it = j.find("hidden_dim"); it != j.end())
    cfg.hidden_dim = positive_from(*it, "config: 'hidden_dim'");
  validate(cfg);
  return cfg;
}

Lexicon load_lexicon(std::istream& in, const SemanticsConfig& config) {
  validate(config);
  const std::size_t d_n = dim_of(config, Atom("n"));
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "lexicon line " + std::to_string(line_no);
    const json j = parse_json_text(line, where);
    LexiconEntry e;
    const json& jw = need(j, "word", where);
    if (!jw.is_string() || jw.get<std::string>().empty())
      throw validation_error(where + ": field 'word' must be a non-empty string");
    e.word = jw.get<std::string>();
    const json& jt = need(j, "type", where);
    if (!jt.is_string())
      throw validation_error(where + ": field 'type' must be a string");
    try {
      e.type = parse_type(jt.get<std::string>());
    } catch (const error& err) {
      throw validation_error(where + ": field 'type': " + err.what());
    }
    const json& jc = need(j, "class", where);
    if (!jc.is_string())
      throw validation_error(where + ": field 'class' must be a string");
    const auto cls = word_class_from_string(jc.get<std::string>());
    if (!cls)
      throw validation_error(where + ": field 'class' has unknown value '" +
                             jc.get<std::string>() + "'");
    e.cls = *cls;
    if (auto expected = expected_type(e.cls); expected && e.type != *expected)
      throw validation_error(where + ": class " + to_string(e.cls) + " requires type '" +
                             to_string(*expected) + "', got '" + to_string(e.type) + "'");

    const bool has_vector = j.contains("vector");
    const bool has_tensor = j.contains("tensor");
    switch (e.cls) {
      case WordClass::noun:
      case WordClass::adj:
      case WordClass::iv:
      case WordClass::tv:
        if (!has_vector)
          throw validation_error(where + ": class " + to_string(e.cls) +
                                 " needs field 'vector'");
        if (has_tensor)
          throw validation_error(where + ": class " + to_string(e.cls) +
                                 " must not carry field 'tensor'");
        e.vector = vector_from(j["vector"], where + ": field 'vector'");
        if (e.vector->shape() != std::vector<std::size_t>{d_n})
          throw validation_error(where + ": field 'vector' must have length " +
                                 std::to_string(d_n));
        break;
      case WordClass::raw: {
        if (!has_tensor)
          throw validation_error(where + ": class raw needs field 'tensor'");
        if (has_vector)
          throw validation_error(where + ": class raw must not carry field 'vector'");
        e.tensor = tensor_from(j["tensor"], where + ": field 'tensor'");
        const auto expected = type_shape(config, e.type);
        if (e.tensor->shape() != expected)
          throw validation_error(where + ": field 'tensor' must have shape " +
                                 dims_to_string(expected) + ", got " +
                                 dims_to_string(e.tensor->shape()));
        break;
      }
      case WordClass::relpron:
      case WordClass::reflpron:
        if (has_vector || has_tensor)
          throw validation_error(where + ": class " + to_string(e.cls) +
                                 " stores no payload");
        break;
    }
    if (!lex.emplace(e.word, e).second)
      throw validation_error(where + ": duplicate word '" + e.word + "'");
  }
  return lex;
}

Lexicon load_lexicon_file(const std::string& path, const SemanticsConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  return load_lexicon(in, config);
}

void save_model(const std::string& path, const ModelParams& params,
                const SemanticsConfig& config) {
  validate_params(params.comp, config);
  const std::size_t d_n = dim_of(config, Atom("n"));
  for (const auto& [word, vec] : params.words)
    if (vec.shape() != std::vector<std::size_t>{d_n})
      throw shape_error("model vector for '" + word + "' has the wrong length", {d_n},
                        vec.shape());
  std::ostringstream os;
  const bool unified = params.comp.mode == CompositionParams::Mode::unified;
  os << "{\"mode\":" << (unified ? "\"unified\"" : "\"per_type\"") << ',';
  if (unified) {
    os << "\"T\":" << tensor_to_json(params.comp.T) << ',';
  } else {
    os << "\"T_adj\":" << tensor_to_json(params.comp.T_adj) << ','
       << "\"T_iv\":" << tensor_to_json(params.comp.T_iv) << ','
       << "\"T_tv_inner\":" << tensor_to_json(params.comp.T_tv_inner) << ','
       << "\"T_tv_outer\":" << tensor_to_json(params.comp.T_tv_outer) << ',';
  }
  os << "\"words\":{";
  bool first = true;
  for (const auto& [word, vec] : params.words) {
    if (!first) os << ',';
    first = false;
    os << json_string(word) << ':' << tensor_to_json(vec);
  }
  os << "}}\n";
  write_file(path, os.str());
}

ModelParams load_model(const std::string& path, const SemanticsConfig& config) {
  const json j = parse_json_text(read_file(path), "model");
  ModelParams params;
  const json& jm = need(j, "mode", "model");
  if (!jm.is_string()) throw validation_error("model: field 'mode' must be a string");
  const std::string mode = jm.get<std::string>();
  if (mode == "unified")
    params.comp.mode = CompositionParams::Mode::unified;
  else if (mode == "per_type")
    params.comp.mode = CompositionParams::Mode::per_type;
  else
    throw validation_error("model: unknown mode '" + mode + "'");
  if ((mode == "unified") != config.unified)
    throw validation_error("model mode '" + mode + "' does not match the config");
  if (params.comp.mode == CompositionParams::Mode::unified) {
    params.comp.T = tensor_from(need(j, "T", "model"), "model: field 'T'");
  } else {
    params.comp.T_adj = tensor_from(need(j, "T_adj", "model"), "model: field 'T_adj'");
    params.comp.T_iv = tensor_from(need(j, "T_iv", "model"), "model: field 'T_iv'");
    params.comp.T_tv_inner =
        tensor_from(need(j, "T_tv_inner", "model"), "model: field 'T_tv_inner'");
    params.comp.T_tv_outer =
        tensor_from(need(j, "T_tv_outer", "model"), "model: field 'T_tv_outer'");
  }
  validate_params(params.comp, config);
  const std::size_t d_n = dim_of(config, Atom("n"));
  const json& words = need(j, "words", "model");
  if (!words.is_object()) throw validation_error("model: field 'words' must be an object");
  for (auto it = words.begin(); it != words.end(); ++it) {
    Tensor v = tensor_from(it.value(), "model: word '" + it.key() + "'");
    if (v.shape() != std::vector<std::size_t>{d_n})
      throw validation_error("model: word '" + it.key() + "' must be a vector of length " +
                             std::to_string(d_n));
    params.words.emplace(it.key(), std::move(v));
  }
  return params;
}

std::vector<TrainExample> load_train_examples(std::istream& in) {
  std::vector<TrainExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "examples line " + std::to_string(line_no);
    const json j = parse_json_text(line, where);
    TrainExample ex;
    const json& sent = need(j, "sentence", where);
    if (!sent.is_array() || sent.empty())
      throw validation_error(where + ": field 'sentence' must be a non-empty array");
    for (const auto& term : sent) {
      if (!term.is_array() || term.size() != 2 || !term[0].is_string() ||
          !term[1].is_string())
        throw validation_error(where + ": each sentence term must be a [word, class] pair");
      const auto cls = word_class_from_string(term[1].get<std::string>());
      if (!cls)
        throw validation_error(where + ": unknown word class '" +
                               term[1].get<std::string>() + "'");
      ex.sentence.push_back({term[0].get<std::string>(), *cls});
    }
    ex.target = vector_from(need(j, "target", where), where + ": field 'target'");
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<TrainExample> load_train_examples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  return load_train_examples(in);
}

}  // namespace disco
