#include "disco/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "disco/grammar.hpp"
#include "disco/training.hpp"

namespace disco {

bool rel_close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

bool rel_close(const Tensor& x, const Tensor& y, double tol) {
  if (x.shape() != y.shape()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!rel_close(x.data()[i], y.data()[i], tol)) return false;
  return true;
}

namespace {

// Modulo draws keep the stream identical across standard libraries;
// distribution classes do not promise that.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

double sym(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
}

Tensor rand_tensor(std::mt19937_64& rng, const std::vector<std::size_t>& shape) {
  Tensor t(shape);
  for (auto& x : t.data()) x = sym(rng);
  return t;
}

PropertyResult pass(std::string name, std::string detail) {
  return {std::move(name), true, std::move(detail)};
}

PropertyResult fail(std::string name, std::string detail) {
  return {std::move(name), false, std::move(detail)};
}

struct Setting {
  SemanticsConfig config;
  ModelParams params;
};

Setting random_setting(std::mt19937_64& rng, std::size_t d_n, std::size_t d_s,
                       std::size_t d_h, bool unified) {
  Setting s;
  s.config.atom_dims = {{"n", d_n}, {"s", d_s}};
  s.config.unified = unified;
  s.config.hidden_dim = unified ? 0 : d_h;
  s.params.comp.mode =
      unified ? CompositionParams::Mode::unified : CompositionParams::Mode::per_type;
  if (unified) {
    s.params.comp.T = rand_tensor(rng, {d_n, d_n, d_n});
  } else {
    s.params.comp.T_adj = rand_tensor(rng, {d_n, d_n, d_n});
    s.params.comp.T_iv = rand_tensor(rng, {d_n, d_s, d_n});
    s.params.comp.T_tv_inner = rand_tensor(rng, {d_n, d_h, d_n});
    s.params.comp.T_tv_outer = rand_tensor(rng, {d_n, d_s, d_h});
  }
  return s;
}

bool form_has_verb(const std::vector<WordClass>& form) {
  for (WordClass c : form)
    if (c == WordClass::iv || c == WordClass::tv) return true;
  return false;
}

// The same sentence evaluated the categorical way: realize every word,
// reduce the type string, contract along the diagram.
Tensor route_compose(const std::vector<SentenceTerm>& sentence, const Setting& s,
                     const PregroupType& target) {
  std::vector<WordMeaning> words;
  for (const auto& term : sentence) {
    const auto type = expected_type(term.cls);
    words.push_back(realize_word(term.word, term.cls, *type,
                                 s.params.words.at(term.word), std::nullopt,
                                 s.params.comp, s.config));
  }
  std::vector<PregroupType> types;
  types.reserve(words.size());
  for (const auto& w : words) types.push_back(w.gtype);
  const auto diagram = reduce(types, target);
  if (!diagram) throw validation_error("equivalence check sentence failed to reduce");
  return compose(words, *diagram, s.config);
}

const std::vector<std::vector<WordClass>>& sentence_forms() {
  static const std::vector<std::vector<WordClass>> forms = {
      {WordClass::adj, WordClass::noun},
      {WordClass::noun, WordClass::iv},
      {WordClass::noun, WordClass::tv, WordClass::noun},
      {WordClass::adj, WordClass::noun, WordClass::tv, WordClass::noun},
      {WordClass::noun, WordClass::tv, WordClass::adj, WordClass::noun},
      {WordClass::adj, WordClass::adj, WordClass::noun, WordClass::iv},
  };
  return forms;
}

}  // namespace

PropertyResult check_grammar_oracle(std::uint64_t seed, std::size_t trials) {
  const char* name = "grammar_oracle";
  {
    const std::vector<PregroupType> sentence = {parse_type("n"), parse_type("n^r s n^l"),
                                                parse_type("n")};
    const auto d = reduce(sentence, parse_type("s"));
    const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 1}, {3, 4}};
    if (!d || d->links != want || d->open != std::vector<std::size_t>{2})
      return fail(name, "pinned subject-verb-object reduction came out wrong");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m = 1 + pick(rng, 8);
    std::vector<PregroupType> sentence;
    PregroupType cur;
    for (std::size_t p = 0; p < m; ++p) {
      cur.factors.push_back(SimpleType{Atom(pick(rng, 2) ? "s" : "n"),
                                       static_cast<int>(pick(rng, 5)) - 2});
      if (p + 1 == m || pick(rng, 3) == 0) {
        sentence.push_back(cur);
        cur.factors.clear();
      }
    }
    PregroupType target;
    const std::size_t tlen = pick(rng, 3);
    for (std::size_t p = 0; p < tlen; ++p)
      target.factors.push_back(SimpleType{Atom(pick(rng, 2) ? "s" : "n"),
                                          static_cast<int>(pick(rng, 5)) - 2});

    std::ostringstream at;
    at << "trial " << t << ", '";
    for (std::size_t w = 0; w < sentence.size(); ++w)
      at << (w ? " | " : "") << to_string(sentence[w]);
    at << "' -> '" << to_string(target) << "'";

    const auto all = enumerate_reductions(sentence, target);
    const auto least = reduce(sentence, target);
    if (all.empty() == least.has_value())
      return fail(name, "search and enumeration disagree on reducibility at " + at.str());
    if (least && *least != all.front())
      return fail(name, "search did not return the least diagram at " + at.str());
    const auto positions = flatten(sentence);
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (!diagram_is_valid(all[k], positions))
        return fail(name, "enumerated diagram is invalid at " + at.str());
      if (diagram_residual(all[k], positions) != target)
        return fail(name, "enumerated diagram has the wrong residual at " + at.str());
      if (k > 0 && !(all[k - 1] < all[k]))
        return fail(name, "enumeration is not sorted at " + at.str());
    }
  }
  return pass(name, std::to_string(trials) + " random type strings agreed with enumeration");
}

PropertyResult check_central_equivalence(std::uint64_t seed, std::size_t trials_per_dim) {
  const char* name = "central_equivalence";
  std::mt19937_64 rng(seed);
  std::size_t done = 0;
  for (const std::size_t d : {std::size_t{2}, std::size_t{3}, std::size_t{5}}) {
    for (std::size_t t = 0; t < trials_per_dim; ++t) {
      const bool unified = pick(rng, 2) == 0;
      const std::size_t d_s = unified ? d : 2 + pick(rng, 3);
      const std::size_t d_h = 2 + pick(rng, 3);
      Setting s = random_setting(rng, d, d_s, d_h, unified);
      const auto& form = sentence_forms()[pick(rng, sentence_forms().size())];
      std::vector<SentenceTerm> sentence;
      for (std::size_t k = 0; k < form.size(); ++k)
        sentence.push_back({"w" + std::to_string(k), form[k]});
      for (const auto& term : sentence)
        s.params.words.emplace(term.word, rand_tensor(rng, {d}));
      const Tensor via_g = evaluate_sentence(sentence, s.params, s.config);
      const PregroupType target = parse_type(form_has_verb(form) ? "s" : "n");
      const Tensor via_diagram = route_compose(sentence, s, target);
      if (!rel_close(via_g, via_diagram, 1e-12))
        return fail(name, "recursive evaluation and diagram contraction differ at dim " +
                              std::to_string(d) + ", trial " + std::to_string(t));
      ++done;
    }
  }
  return pass(name, std::to_string(done) + " random sentences matched along both routes");
}

PropertyResult check_specialization_chain(std::uint64_t seed, std::size_t trials) {
  const char* name = "specialization_chain";
  std::mt19937_64 rng(seed);
  const Squash squashes[] = {Squash::identity, Squash::tanh, Squash::logistic};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d = 2 + pick(rng, 3);
    const Tensor v1 = rand_tensor(rng, {d});
    const Tensor v2 = rand_tensor(rng, {d});
    const Tensor T = rand_tensor(rng, {d, d, d});
    const Tensor M = rand_tensor(rng, {d, 2 * d});
    const Tensor zero_T(std::vector<std::size_t>{d, d, d});
    const Tensor zero_M(std::vector<std::size_t>{d, 2 * d});
    if (g_tree_rntn(v1, v2, zero_M, T, Squash::identity, Squash::identity) !=
        g_lin(v1, T, v2))
      return fail(name, "zero M with identity squashes did not collapse to the bilinear map");
    const Squash f1 = squashes[pick(rng, 3)];
    // the collapse needs f2(0) = 0, which rules the logistic out
    const Squash f2 = pick(rng, 2) ? Squash::tanh : Squash::identity;
    if (g_tree_rntn(v1, v2, M, zero_T, f1, f2) != g_tree_rnn(v1, v2, M, f1))
      return fail(name, "zero T did not collapse to the matrix tree network");
  }
  return pass(name, std::to_string(trials) + " random specializations collapsed exactly");
}

PropertyResult check_frobenius_laws() {
  const char* name = "frobenius_laws";
  for (std::size_t d = 2; d <= 5; ++d) {
    const std::string at = " at dim " + std::to_string(d);
    Tensor v({d});
    for (std::size_t i = 0; i < d; ++i)
      v.data()[i] = std::sin(1.0 + static_cast<double>(i) + 0.25 * static_cast<double>(d));
    const Tensor copied = frobenius_delta(v);
    if (!rel_close(frobenius_mu(copied), v, 1e-12))
      return fail(name, "merge after copy is not the identity" + at);
    if (!rel_close(frobenius_iota(frobenius_zeta(d)), static_cast<double>(d), 1e-12))
      return fail(name, "deleting the unit does not count the dimension" + at);
    if (!rel_close(frobenius_mu(tensor_product(frobenius_zeta(d), v)), v, 1e-12))
      return fail(name, "merging with the unit changes the vector" + at);
    if (!rel_close(contract(copied, 0, frobenius_zeta(d), 0), v, 1e-12))
      return fail(name, "summing one leg of the copy changes the vector" + at);
    Tensor w({d});
    for (std::size_t i = 0; i < d; ++i) w.data()[i] = std::cos(0.5 + static_cast<double>(i));
    if (!rel_close(frobenius_mu(tensor_product(v, w)), pointwise_mul(v, w), 1e-12))
      return fail(name, "merge of an outer product is not the pointwise product" + at);
  }
  return pass(name, "copy, merge, unit and counit laws hold at dims 2 through 5");
}

PropertyResult check_pronoun_yanking(std::uint64_t seed, std::size_t trials) {
  const char* name = "pronoun_yanking";
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d_n = 2 + pick(rng, 3);
    const std::size_t d_s = 2 + pick(rng, 3);
    SemanticsConfig config;
    config.atom_dims = {{"n", d_n}, {"s", d_s}};
    config.unified = false;
    const Tensor subj = rand_tensor(rng, {d_n});
    const Tensor obj = rand_tensor(rng, {d_n});
    const Tensor verb = rand_tensor(rng, {d_n, d_s, d_n});
    const std::string at = " at trial " + std::to_string(t);

    {
      const std::vector<WordMeaning> words = {
          {"head", parse_type("n"), subj},
          {"who", parse_type("n^r n s^l n"), build_relative_pronoun(config)},
          {"verb", parse_type("n^r s n^l"), verb},
          {"obj", parse_type("n"), obj},
      };
      std::vector<PregroupType> types;
      for (const auto& w : words) types.push_back(w.gtype);
      const auto diagram = reduce(types, parse_type("n"));
      if (!diagram) return fail(name, "relative clause failed to reduce" + at);
      const std::vector<std::pair<std::size_t, std::size_t>> want{
          {0, 1}, {3, 6}, {4, 5}, {7, 8}};
      if (diagram->links != want || diagram->open != std::vector<std::size_t>{2})
        return fail(name, "relative clause reduced to an unexpected diagram" + at);
      if (!rel_close(compose(words, *diagram, config),
                     relpron_compose(subj, verb, obj), 1e-12))
        return fail(name, "relative clause contraction differs from its closed form" + at);
    }
    {
      const std::vector<WordMeaning> words = {
          {"agent", parse_type("n"), subj},
          {"verb", parse_type("n^r s n^l"), verb},
          {"self", parse_type("n s^r n^rr n^r s"), build_reflexive_pronoun(config)},
      };
      std::vector<PregroupType> types;
      for (const auto& w : words) types.push_back(w.gtype);
      const auto diagram = reduce(types, parse_type("s"));
      if (!diagram) return fail(name, "reflexive clause failed to reduce" + at);
      const std::vector<std::pair<std::size_t, std::size_t>> want{
          {0, 7}, {1, 6}, {2, 5}, {3, 4}};
      if (diagram->links != want || diagram->open != std::vector<std::size_t>{8})
        return fail(name, "reflexive clause reduced to an unexpected diagram" + at);
      if (!rel_close(compose(words, *diagram, config), reflexive_compose(verb, subj),
                     1e-12))
        return fail(name, "reflexive contraction differs from its closed form" + at);
    }
  }
  return pass(name, std::to_string(trials) + " random pronoun clauses matched their closed forms");
}

PropertyResult check_gradients(std::uint64_t seed, std::size_t trials) {
  const char* name = "gradient_check";
  std::mt19937_64 rng(seed);
  const double h = 1e-5;
  const double tol = 1e-6;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d = 2 + pick(rng, 2);
    const bool unified = pick(rng, 2) == 0;
    const std::size_t d_s = unified ? d : 2 + pick(rng, 2);
    const std::size_t d_h = 2 + pick(rng, 2);
    Setting s = random_setting(rng, d, d_s, d_h, unified);
    const auto& form = sentence_forms()[pick(rng, sentence_forms().size())];
    std::vector<SentenceTerm> sentence;
    for (std::size_t k = 0; k < form.size(); ++k)
      sentence.push_back({"w" + std::to_string(k), form[k]});
    for (const auto& term : sentence)
      s.params.words.emplace(term.word, rand_tensor(rng, {d}));
    const Tensor target = rand_tensor(rng, {form_has_verb(form) ? d_s : d});

    Objective objective = pick(rng, 2) ? Objective::cosine_to_target
                                       : Objective::squared_error_to_target;
    const Tensor out0 = evaluate_sentence(sentence, s.params, s.config);
    // the cosine surface is ill-conditioned near the origin; fall back
    if (objective == Objective::cosine_to_target &&
        (norm(out0) < 0.3 || norm(target) < 0.3))
      objective = Objective::squared_error_to_target;

    const Gradients grads = grad_sentence(sentence, target, s.params, s.config, objective);
    const std::string at = " at trial " + std::to_string(t);

    auto fd_matches = [&](double* x, double analytic) {
      const double save = *x;
      *x = save + h;
      const double lp =
          example_loss(evaluate_sentence(sentence, s.params, s.config), target, objective);
      *x = save - h;
      const double lm =
          example_loss(evaluate_sentence(sentence, s.params, s.config), target, objective);
      *x = save;
      return rel_close((lp - lm) / (2.0 * h), analytic, tol);
    };

    for (auto& [word, vec] : s.params.words) {
      const auto git = grads.words.find(word);
      for (std::size_t i = 0; i < vec.size(); ++i) {
        const double analytic = git == grads.words.end() ? 0.0 : git->second.data()[i];
        if (!fd_matches(&vec.data()[i], analytic))
          return fail(name, "word gradient for '" + word + "' disagrees with finite differences" + at);
      }
    }
    std::vector<std::pair<std::string, Tensor*>> slots;
    if (unified) {
      slots = {{"T", &s.params.comp.T}};
    } else {
      slots = {{"T_adj", &s.params.comp.T_adj},
               {"T_iv", &s.params.comp.T_iv},
               {"T_tv_inner", &s.params.comp.T_tv_inner},
               {"T_tv_outer", &s.params.comp.T_tv_outer}};
    }
    for (auto& [key, tensor] : slots) {
      const auto git = grads.tensors.find(key);
      for (std::size_t i = 0; i < tensor->size(); ++i) {
        const double analytic = git == grads.tensors.end() ? 0.0 : git->second.data()[i];
        if (!fd_matches(&tensor->data()[i], analytic))
          return fail(name, "tensor gradient for " + key + " disagrees with finite differences" + at);
      }
    }
  }
  return pass(name, std::to_string(trials) + " sentences passed full finite-difference sweeps");
}

PropertyResult check_multilinearity(std::uint64_t seed, std::size_t trials) {
  const char* name = "multilinearity";
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d_n = 2 + pick(rng, 2);
    const std::size_t d_s = 2 + pick(rng, 2);
    SemanticsConfig config;
    config.atom_dims = {{"n", d_n}, {"s", d_s}};
    config.unified = false;
    std::vector<WordMeaning> words = {
        {"a", parse_type("n"), rand_tensor(rng, {d_n})},
        {"v", parse_type("n^r s n^l"), rand_tensor(rng, {d_n, d_s, d_n})},
        {"b", parse_type("n"), rand_tensor(rng, {d_n})},
    };
    std::vector<PregroupType> types;
    for (const auto& w : words) types.push_back(w.gtype);
    const auto diagram = reduce(types, parse_type("s"));
    if (!diagram) return fail(name, "test sentence failed to reduce");
    const std::size_t slot = pick(rng, words.size());
    const auto shape = words[slot].tensor.shape();
    const Tensor x = rand_tensor(rng, shape);
    const Tensor y = rand_tensor(rng, shape);
    const double alpha = sym(rng);
    const double beta = sym(rng);
    auto with = [&](const Tensor& v) {
      auto ws = words;
      ws[slot].tensor = v;
      return compose(ws, *diagram, config);
    };
    const Tensor lhs = with(add(scale(x, alpha), scale(y, beta)));
    const Tensor rhs = add(scale(with(x), alpha), scale(with(y), beta));
    if (!rel_close(lhs, rhs, 1e-12))
      return fail(name, "contraction is not linear in word slot " + std::to_string(slot) +
                            " at trial " + std::to_string(t));
  }
  return pass(name, std::to_string(trials) + " random linearity probes held");
}

std::vector<PropertyResult> run_selfcheck(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  out.push_back(check_grammar_oracle(seed, 1000));
  out.push_back(check_central_equivalence(seed + 1, 500));
  out.push_back(check_specialization_chain(seed + 2, 100));
  out.push_back(check_frobenius_laws());
  out.push_back(check_pronoun_yanking(seed + 3, 200));
  out.push_back(check_gradients(seed + 4, 50));
  out.push_back(check_multilinearity(seed + 5, 100));
  return out;
}

}  // namespace disco
