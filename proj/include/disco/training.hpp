#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "disco/composition.hpp"
#include "disco/tensor.hpp"

namespace disco {

enum class Objective { squared_error_to_target, cosine_to_target };

const char* to_string(Objective o);
std::optional<Objective> objective_from_string(const std::string& s);

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 1000;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  Objective objective = Objective::squared_error_to_target;
  bool train_vectors = true;
  bool train_tensors = true;
  std::set<std::string> frozen_words;
};

struct SentenceTerm {
  std::string word;
  WordClass cls = WordClass::noun;
};

struct TrainExample {
  std::vector<SentenceTerm> sentence;
  Tensor target;
};

struct ModelParams {
  CompositionParams comp;
  std::map<std::string, Tensor> words;
};

// Word gradients are lazy: a word absent from the map has zero gradient.
// Tensor gradients are keyed "T" (unified) or "T_adj", "T_iv",
// "T_tv_inner", "T_tv_outer" (per type).
struct Gradients {
  std::map<std::string, Tensor> words;
  std::map<std::string, Tensor> tensors;
};

struct GLinGrad {
  Tensor dv1, dT, dv2;
};

// Backprop through out[j] = sum_{i,k} v1[i] * T[i,j,k] * v2[k].
GLinGrad grad_g_lin(const Tensor& v1, const Tensor& T, const Tensor& v2,
                    const Tensor& upstream);

// Sentence shapes the trainer understands: adj* noun phrases, optionally
// followed by an intransitive verb or joined through a transitive verb.
Tensor evaluate_sentence(const std::vector<SentenceTerm>& sentence,
                         const ModelParams& params, const SemanticsConfig& config);

double example_loss(const Tensor& output, const Tensor& target, Objective objective);

Gradients grad_sentence(const std::vector<SentenceTerm>& sentence, const Tensor& target,
                        const ModelParams& params, const SemanticsConfig& config,
                        Objective objective);

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_trace;  // one entry per epoch before its update, plus final
};

TrainResult train(const Lexicon& lexicon, const std::vector<TrainExample>& examples,
                  const TrainConfig& tc, const SemanticsConfig& config,
                  const std::optional<ModelParams>& initial = {});

}  // namespace disco
