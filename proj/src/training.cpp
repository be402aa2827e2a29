#include "disco/training.hpp"

#include <cmath>
#include <random>

namespace disco {

const char* to_string(Objective o) {
  return o == Objective::squared_error_to_target ? "squared" : "cosine";
}

std::optional<Objective> objective_from_string(const std::string& s) {
  if (s == "squared") return Objective::squared_error_to_target;
  if (s == "cosine") return Objective::cosine_to_target;
  return std::nullopt;
}

GLinGrad grad_g_lin(const Tensor& v1, const Tensor& T, const Tensor& v2,
                    const Tensor& upstream) {
  if (T.rank() != 3) throw shape_error("grad_g_lin: T must be an order-3 tensor", {}, T.shape());
  if (v1.shape() != std::vector<std::size_t>{T.shape()[0]})
    throw shape_error("grad_g_lin: v1 does not match axis 0 of T", {T.shape()[0]}, v1.shape());
  if (v2.shape() != std::vector<std::size_t>{T.shape()[2]})
    throw shape_error("grad_g_lin: v2 does not match axis 2 of T", {T.shape()[2]}, v2.shape());
  if (upstream.shape() != std::vector<std::size_t>{T.shape()[1]})
    throw shape_error("grad_g_lin: upstream does not match axis 1 of T", {T.shape()[1]},
                      upstream.shape());
  GLinGrad g;
  g.dv1 = contract(contract(T, 1, upstream, 0), 1, v2, 0);
  g.dT = tensor_product(tensor_product(v1, upstream), v2);
  g.dv2 = contract(contract(v1, 0, T, 0), 0, upstream, 0);
  return g;
}

namespace {

struct Parsed {
  struct NP {
    std::vector<std::size_t> adjs;  // term indices, left to right
    std::size_t noun = 0;
  };
  NP subject;
  std::optional<NP> object;
  std::optional<std::size_t> iv;
  std::optional<std::size_t> tv;
};

Parsed::NP parse_np(const std::vector<SentenceTerm>& sentence, std::size_t begin,
                    std::size_t end) {
  if (begin == end) throw validation_error("training sentence has an empty noun phrase");
  Parsed::NP np;
  np.noun = end - 1;
  if (sentence[np.noun].cls != WordClass::noun)
    throw validation_error("noun phrase must end with a noun, got '" +
                           sentence[np.noun].word + "'");
  for (std::size_t i = begin; i + 1 < end; ++i) {
    if (sentence[i].cls != WordClass::adj)
      throw validation_error("only adjectives may precede the noun, got '" +
                             sentence[i].word + "'");
    np.adjs.push_back(i);
  }
  return np;
}

Parsed parse_sentence(const std::vector<SentenceTerm>& sentence) {
  if (sentence.empty()) throw validation_error("training sentence is empty");
  Parsed p;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    switch (sentence[i].cls) {
      case WordClass::noun:
      case WordClass::adj:
        break;
      case WordClass::iv:
      case WordClass::tv:
        if (p.iv || p.tv)
          throw validation_error("training sentence may contain at most one verb");
        if (sentence[i].cls == WordClass::iv) p.iv = i; else p.tv = i;
        break;
      default:
        throw validation_error("word class " + std::string(to_string(sentence[i].cls)) +
                               " is not supported in training sentences");
    }
  }
  if (p.iv && *p.iv + 1 != sentence.size())
    throw validation_error("an intransitive verb must end the sentence");
  const std::size_t subj_end = p.tv ? *p.tv : (p.iv ? *p.iv : sentence.size());
  p.subject = parse_np(sentence, 0, subj_end);
  if (p.tv) p.object = parse_np(sentence, *p.tv + 1, sentence.size());
  return p;
}

const Tensor& word_vec(const ModelParams& params, const std::string& word) {
  auto it = params.words.find(word);
  if (it == params.words.end())
    throw validation_error("word '" + word + "' has no vector in the model");
  return it->second;
}

bool unified_mode(const ModelParams& p) {
  return p.comp.mode == CompositionParams::Mode::unified;
}

const Tensor& adj_tensor(const ModelParams& p) { return unified_mode(p) ? p.comp.T : p.comp.T_adj; }
const Tensor& iv_tensor(const ModelParams& p) { return unified_mode(p) ? p.comp.T : p.comp.T_iv; }
const Tensor& tv_inner(const ModelParams& p) { return unified_mode(p) ? p.comp.T : p.comp.T_tv_inner; }
const Tensor& tv_outer(const ModelParams& p) { return unified_mode(p) ? p.comp.T : p.comp.T_tv_outer; }
const char* adj_key(const ModelParams& p) { return unified_mode(p) ? "T" : "T_adj"; }
const char* iv_key(const ModelParams& p) { return unified_mode(p) ? "T" : "T_iv"; }
const char* tv_inner_key(const ModelParams& p) { return unified_mode(p) ? "T" : "T_tv_inner"; }
const char* tv_outer_key(const ModelParams& p) { return unified_mode(p) ? "T" : "T_tv_outer"; }

struct Forward {
  Parsed parsed;
  // chain[0] is the noun vector, chain[k] the phrase after folding in the
  // k rightmost adjectives.
  std::vector<Tensor> subj_chain;
  std::vector<Tensor> obj_chain;
  Tensor inner;
  Tensor output;
};

std::vector<Tensor> eval_np(const std::vector<SentenceTerm>& sentence, const Parsed::NP& np,
                            const ModelParams& params) {
  std::vector<Tensor> chain;
  chain.push_back(word_vec(params, sentence[np.noun].word));
  for (std::size_t k = np.adjs.size(); k-- > 0;) {
    const Tensor& av = word_vec(params, sentence[np.adjs[k]].word);
    chain.push_back(g_lin(av, adj_tensor(params), chain.back()));
  }
  return chain;
}

Forward forward_sentence(const std::vector<SentenceTerm>& sentence,
                         const ModelParams& params) {
  Forward f;
  f.parsed = parse_sentence(sentence);
  f.subj_chain = eval_np(sentence, f.parsed.subject, params);
  const Tensor& subj = f.subj_chain.back();
  if (f.parsed.tv) {
    f.obj_chain = eval_np(sentence, *f.parsed.object, params);
    const Tensor& vv = word_vec(params, sentence[*f.parsed.tv].word);
    f.inner = g_lin(vv, tv_inner(params), f.obj_chain.back());
    f.output = g_lin(subj, tv_outer(params), f.inner);
  } else if (f.parsed.iv) {
    const Tensor& vv = word_vec(params, sentence[*f.parsed.iv].word);
    f.output = g_lin(subj, iv_tensor(params), vv);
  } else {
    f.output = subj;
  }
  return f;
}

void add_into(std::map<std::string, Tensor>& m, const std::string& key, const Tensor& g) {
  auto it = m.find(key);
  if (it == m.end())
    m.emplace(key, g);
  else
    it->second = add(it->second, g);
}

void require_same_shape(const Tensor& output, const Tensor& target) {
  if (output.shape() != target.shape())
    throw shape_error("target does not match the sentence output", output.shape(),
                      target.shape());
}

Tensor loss_grad(const Tensor& o, const Tensor& t, Objective objective) {
  require_same_shape(o, t);
  Tensor g(o.shape());
  if (objective == Objective::squared_error_to_target) {
    for (std::size_t i = 0; i < o.size(); ++i)
      g.data()[i] = 2.0 * (o.data()[i] - t.data()[i]);
    return g;
  }
  const double no = norm(o), nt = norm(t);
  if (no == 0.0 || nt == 0.0)
    throw numeric_error("cosine objective is undefined for a zero-norm vector");
  const double d = dot(o, t);
  for (std::size_t i = 0; i < o.size(); ++i)
    g.data()[i] = -(t.data()[i] / (no * nt) - d * o.data()[i] / (no * no * no * nt));
  return g;
}

}  // namespace

Tensor evaluate_sentence(const std::vector<SentenceTerm>& sentence,
                         const ModelParams& params, const SemanticsConfig& config) {
  validate_params(params.comp, config);
  return forward_sentence(sentence, params).output;
}

double example_loss(const Tensor& output, const Tensor& target, Objective objective) {
  require_same_shape(output, target);
  if (objective == Objective::squared_error_to_target) {
    double loss = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
      const double diff = output.data()[i] - target.data()[i];
      loss += diff * diff;
    }
    return loss;
  }
  const double no = norm(output), nt = norm(target);
  if (no == 0.0 || nt == 0.0)
    throw numeric_error("cosine objective is undefined for a zero-norm vector");
  return 1.0 - dot(output, target) / (no * nt);
}

Gradients grad_sentence(const std::vector<SentenceTerm>& sentence, const Tensor& target,
                        const ModelParams& params, const SemanticsConfig& config,
                        Objective objective) {
  validate_params(params.comp, config);
  const Forward f = forward_sentence(sentence, params);
  Gradients grads;

  auto backprop_np = [&](const Parsed::NP& np, const std::vector<Tensor>& chain, Tensor up) {
    for (std::size_t k = 0; k < np.adjs.size(); ++k) {
      const std::size_t term = np.adjs[k];
      const Tensor& av = word_vec(params, sentence[term].word);
      const Tensor& child = chain[np.adjs.size() - 1 - k];
      GLinGrad gg = grad_g_lin(av, adj_tensor(params), child, up);
      add_into(grads.words, sentence[term].word, gg.dv1);
      add_into(grads.tensors, adj_key(params), gg.dT);
      up = std::move(gg.dv2);
    }
    add_into(grads.words, sentence[np.noun].word, up);
  };

  Tensor dout = loss_grad(f.output, target, objective);
  if (f.parsed.tv) {
    const Tensor& vv = word_vec(params, sentence[*f.parsed.tv].word);
    GLinGrad outer = grad_g_lin(f.subj_chain.back(), tv_outer(params), f.inner, dout);
    add_into(grads.tensors, tv_outer_key(params), outer.dT);
    GLinGrad inner = grad_g_lin(vv, tv_inner(params), f.obj_chain.back(), outer.dv2);
    add_into(grads.tensors, tv_inner_key(params), inner.dT);
    add_into(grads.words, sentence[*f.parsed.tv].word, inner.dv1);
    backprop_np(f.parsed.subject, f.subj_chain, std::move(outer.dv1));
    backprop_np(*f.parsed.object, f.obj_chain, std::move(inner.dv2));
  } else if (f.parsed.iv) {
    const Tensor& vv = word_vec(params, sentence[*f.parsed.iv].word);
    GLinGrad gg = grad_g_lin(f.subj_chain.back(), iv_tensor(params), vv, dout);
    add_into(grads.tensors, iv_key(params), gg.dT);
    add_into(grads.words, sentence[*f.parsed.iv].word, gg.dv2);
    backprop_np(f.parsed.subject, f.subj_chain, std::move(gg.dv1));
  } else {
    backprop_np(f.parsed.subject, f.subj_chain, std::move(dout));
  }
  return grads;
}

namespace {

Tensor draw_tensor(std::mt19937_64& rng, const std::vector<std::size_t>& shape,
                   double scale) {
  Tensor t(shape);
  for (auto& x : t.data()) {
    const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    x = (2.0 * u - 1.0) * scale;
  }
  return t;
}

Tensor* tensor_slot(CompositionParams& comp, const std::string& key) {
  if (key == "T") return &comp.T;
  if (key == "T_adj") return &comp.T_adj;
  if (key == "T_iv") return &comp.T_iv;
  if (key == "T_tv_inner") return &comp.T_tv_inner;
  if (key == "T_tv_outer") return &comp.T_tv_outer;
  throw std::logic_error("unknown tensor key " + key);
}

}  // namespace

TrainResult train(const Lexicon& lexicon, const std::vector<TrainExample>& examples,
                  const TrainConfig& tc, const SemanticsConfig& config,
                  const std::optional<ModelParams>& initial) {
  validate(config);
  if (examples.empty()) throw validation_error("training needs at least one example");
  if (tc.learning_rate < 0.0)
    throw validation_error("learning rate must not be negative");
  if (tc.init_scale <= 0.0) throw validation_error("init_scale must be positive");

  // Every word is pinned to a single class across the corpus.
  std::map<std::string, WordClass> needed;
  for (const auto& ex : examples) {
    parse_sentence(ex.sentence);
    for (const auto& term : ex.sentence) {
      auto [it, inserted] = needed.emplace(term.word, term.cls);
      if (!inserted && it->second != term.cls)
        throw validation_error("word '" + term.word + "' is used as both " +
                               to_string(it->second) + " and " + to_string(term.cls));
      if (auto lex = lexicon.find(term.word); lex != lexicon.end() &&
          lex->second.cls != term.cls)
        throw validation_error("word '" + term.word + "' is a " +
                               to_string(lex->second.cls) + " in the lexicon but used as " +
                               to_string(term.cls));
    }
  }

  const std::size_t d_n = dim_of(config, Atom("n"));
  const std::size_t d_s = dim_of(config, Atom("s"));
  const std::size_t d_h = config.hidden_dim ? config.hidden_dim : d_n;

  std::mt19937_64 rng(tc.seed);
  ModelParams params;
  if (initial) {
    const auto want = config.unified ? CompositionParams::Mode::unified
                                     : CompositionParams::Mode::per_type;
    if (initial->comp.mode != want)
      throw validation_error("initial parameters use a different mode than the config");
    params.comp = initial->comp;
    validate_params(params.comp, config);
    params.words = initial->words;
    for (const auto& [word, vec] : params.words)
      if (vec.shape() != std::vector<std::size_t>{d_n})
        throw shape_error("initial vector for '" + word + "' has the wrong length", {d_n},
                          vec.shape());
  } else if (config.unified) {
    params.comp.mode = CompositionParams::Mode::unified;
    params.comp.T = draw_tensor(rng, {d_n, d_n, d_n}, tc.init_scale);
    validate_params(params.comp, config);
  } else {
    params.comp.mode = CompositionParams::Mode::per_type;
    params.comp.T_adj = draw_tensor(rng, {d_n, d_n, d_n}, tc.init_scale);
    params.comp.T_iv = draw_tensor(rng, {d_n, d_s, d_n}, tc.init_scale);
    params.comp.T_tv_inner = draw_tensor(rng, {d_n, d_h, d_n}, tc.init_scale);
    params.comp.T_tv_outer = draw_tensor(rng, {d_n, d_s, d_h}, tc.init_scale);
    validate_params(params.comp, config);
  }

  for (const auto& [word, cls] : needed) {
    (void)cls;
    if (params.words.count(word)) continue;
    if (tc.frozen_words.count(word)) {
      auto lex = lexicon.find(word);
      if (lex == lexicon.end() || !lex->second.vector)
        throw validation_error("frozen word '" + word + "' has no lexicon vector");
      if (lex->second.vector->shape() != std::vector<std::size_t>{d_n})
        throw shape_error("lexicon vector for '" + word + "' has the wrong length", {d_n},
                          lex->second.vector->shape());
      params.words.emplace(word, *lex->second.vector);
    } else {
      params.words.emplace(word, draw_tensor(rng, {d_n}, tc.init_scale));
    }
  }

  auto batch_pass = [&](bool with_grads, Gradients* out_grads, std::size_t epoch) {
    double total = 0.0;
    for (std::size_t k = 0; k < examples.size(); ++k) {
      const auto& ex = examples[k];
      const Tensor output = forward_sentence(ex.sentence, params).output;
      const double loss = example_loss(output, ex.target, tc.objective);
      if (!std::isfinite(loss))
        throw numeric_error("training produced a non-finite loss at epoch " +
                            std::to_string(epoch) + ", example " + std::to_string(k));
      total += loss;
      if (with_grads) {
        Gradients g = grad_sentence(ex.sentence, ex.target, params, config, tc.objective);
        for (const auto& [word, grad] : g.words) add_into(out_grads->words, word, grad);
        for (const auto& [key, grad] : g.tensors) add_into(out_grads->tensors, key, grad);
      }
    }
    return total;
  };

  TrainResult result;
  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    Gradients grads;
    result.loss_trace.push_back(batch_pass(true, &grads, epoch));
    if (tc.train_tensors)
      for (const auto& [key, grad] : grads.tensors) {
        Tensor* slot = tensor_slot(params.comp, key);
        *slot = add(*slot, scale(grad, -tc.learning_rate));
      }
    if (tc.train_vectors)
      for (const auto& [word, grad] : grads.words) {
        if (tc.frozen_words.count(word)) continue;
        auto it = params.words.find(word);
        it->second = add(it->second, scale(grad, -tc.learning_rate));
      }
  }
  result.loss_trace.push_back(batch_pass(false, nullptr, tc.epochs));
  result.params = std::move(params);
  return result;
}

}  // namespace disco
