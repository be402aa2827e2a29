#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "disco/composition.hpp"
#include "disco/grammar.hpp"
#include "disco/tensor.hpp"
#include "disco/training.hpp"

namespace disco {

// Numbers are written with enough digits to round-trip exactly.
void write_json_number(std::ostream& os, double x);
std::string json_number(double x);
std::string json_string(const std::string& s);

std::string tensor_to_json(const Tensor& t);
Tensor tensor_from_json_text(const std::string& text);

std::string diagram_to_json(const LinkDiagram& d);
LinkDiagram diagram_from_json_text(const std::string& text);
void save_diagram(const std::string& path, const LinkDiagram& d);
LinkDiagram load_diagram(const std::string& path);

SemanticsConfig load_semantics_config(const std::string& path);

// One JSON object per line: word, type, class, and a vector or tensor
// payload when the class calls for one.
Lexicon load_lexicon(std::istream& in, const SemanticsConfig& config);
Lexicon load_lexicon_file(const std::string& path, const SemanticsConfig& config);

void save_model(const std::string& path, const ModelParams& params,
                const SemanticsConfig& config);
ModelParams load_model(const std::string& path, const SemanticsConfig& config);

// One JSON object per line: {"sentence": [[word, class], ...], "target": [...]}.
std::vector<TrainExample> load_train_examples(std::istream& in);
std::vector<TrainExample> load_train_examples_file(const std::string& path);

}  // namespace disco
