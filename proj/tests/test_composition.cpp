#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "disco/composition.hpp"
#include "disco/selfcheck.hpp"
#include "doctest.h"

using namespace disco;

namespace {

SemanticsConfig unified2() {
  SemanticsConfig c;
  c.atom_dims = {{"n", 2}, {"s", 2}};
  c.unified = true;
  return c;
}

// cube with entries 0..7 in row-major order, handy for frozen results
Tensor cube07() { return Tensor({2, 2, 2}, {0, 1, 2, 3, 4, 5, 6, 7}); }

CompositionParams unified_params() {
  CompositionParams p;
  p.mode = CompositionParams::Mode::unified;
  p.T = cube07();
  return p;
}

}  // namespace

TEST_CASE("config validation and dims") {
  SemanticsConfig c = unified2();
  CHECK(dim_of(c, Atom("n")) == 2);
  CHECK(dim_of(c, Atom("s")) == 2);
  CHECK_THROWS_AS(dim_of(c, Atom("p")), validation_error);

  CHECK_NOTHROW(validate(c));
  c.atom_dims["s"] = 3;
  CHECK_THROWS_AS(validate(c), validation_error);  // unified needs equal dims
  c.unified = false;
  CHECK_NOTHROW(validate(c));
  c.atom_dims.clear();
  CHECK_THROWS_AS(validate(c), validation_error);
}

TEST_CASE("type_shape follows base atoms") {
  SemanticsConfig c;
  c.atom_dims = {{"n", 2}, {"s", 3}};
  c.unified = false;
  CHECK(type_shape(c, parse_type("n")) == std::vector<std::size_t>{2});
  CHECK(type_shape(c, parse_type("n^r s n^l")) == std::vector<std::size_t>{2, 3, 2});
  CHECK(type_shape(c, parse_type("n^r n s^l n")) == std::vector<std::size_t>{2, 2, 3, 2});
  CHECK(type_shape(c, PregroupType{}).empty());
  CHECK_THROWS_AS(type_shape(c, parse_type("q")), validation_error);
}

TEST_CASE("apply_squash") {
  const Tensor x = Tensor::from_vector({0.0, 1.0, -2.0});
  CHECK(apply_squash(Squash::identity, x) == x);

  const Tensor th = apply_squash(Squash::tanh, x);
  CHECK(th.data()[0] == 0.0);
  CHECK(th.data()[1] == std::tanh(1.0));
  CHECK(th.data()[2] == std::tanh(-2.0));

  const Tensor lg = apply_squash(Squash::logistic, x);
  CHECK(lg.data()[0] == 0.5);
  CHECK(lg.data()[1] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(lg.data()[2] == doctest::Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-15));
}

TEST_CASE("g_lin frozen values") {
  // only T[0,1,0] = 2 set: out picks up v1[0] * 2 * v2[0] in slot 1
  const Tensor sparse({2, 2, 2}, {0, 0, 2, 0, 0, 0, 0, 0});
  const Tensor v1 = Tensor::from_vector({1, 2});
  const Tensor v2 = Tensor::from_vector({3, 4});
  CHECK(g_lin(v1, sparse, v2) == Tensor::from_vector({0, 6}));

  // b[i,j,k] = i+j+k with basis-ish arguments reads out b[0,j,1] = j+1
  const Tensor b({2, 2, 2}, {0, 1, 1, 2, 1, 2, 2, 3});
  CHECK(g_lin(Tensor::from_vector({1, 0}), b, Tensor::from_vector({0, 1})) ==
        Tensor::from_vector({1, 2}));

  CHECK_THROWS_AS(g_lin(Tensor::from_vector({1, 2, 3}), b, v2), shape_error);
  CHECK_THROWS_AS(g_lin(v1, b, Tensor::from_vector({3})), shape_error);
  CHECK_THROWS_AS(g_lin(v1, Tensor::identity(2), v2), shape_error);
}

TEST_CASE("g_lin output is the middle axis") {
  // rectangular cube [2,3,4] so any axis mixup trips a shape check
  std::vector<double> data(24);
  for (std::size_t i = 0; i < 24; ++i) data[i] = double(i);
  const Tensor T({2, 3, 4}, data);
  const Tensor v1 = Tensor::from_vector({1, 1});
  const Tensor v2 = Tensor::from_vector({1, 1, 1, 1});
  const Tensor out = g_lin(v1, T, v2);
  REQUIRE(out.shape() == std::vector<std::size_t>{3});
  for (std::size_t j = 0; j < 3; ++j) {
    double want = 0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 4; ++k) want += T.at({i, j, k});
    CHECK(out.data()[j] == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("g_tree_rnn") {
  const Tensor M({2, 4}, {1, 0, 0, 0, 0, 0, 0, 1});
  const Tensor v1 = Tensor::from_vector({3, 5});
  const Tensor v2 = Tensor::from_vector({7, 11});
  CHECK(g_tree_rnn(v1, v2, M, Squash::identity) == Tensor::from_vector({3, 11}));
  const Tensor th = g_tree_rnn(v1, v2, M, Squash::tanh);
  CHECK(th.data()[0] == std::tanh(3.0));
  CHECK(th.data()[1] == std::tanh(11.0));

  CHECK_THROWS_AS(g_tree_rnn(v1, v2, Tensor::identity(2), Squash::identity), shape_error);
  CHECK_THROWS_AS(g_tree_rnn(v1, Tensor::from_vector({1, 2, 3}), M, Squash::identity),
                  shape_error);
}

TEST_CASE("g_tree_rntn") {
  const Tensor M({2, 4}, {1, 0, 0, 0, 0, 0, 0, 1});
  const Tensor v1 = Tensor::from_vector({3, 5});
  const Tensor v2 = Tensor::from_vector({7, 11});

  const Tensor zeroT({2, 2, 2}, std::vector<double>(8, 0.0));
  CHECK(g_tree_rntn(v1, v2, M, zeroT, Squash::identity, Squash::identity) ==
        g_tree_rnn(v1, v2, M, Squash::identity));
  CHECK(g_tree_rntn(v1, v2, M, zeroT, Squash::tanh, Squash::tanh) ==
        g_tree_rnn(v1, v2, M, Squash::tanh));

  // zero M isolates the bilinear part
  const Tensor zeroM({2, 4}, std::vector<double>(8, 0.0));
  Tensor spike({2, 2, 2}, std::vector<double>(8, 0.0));
  spike.at({0, 0, 0}) = 1.0;
  CHECK(g_tree_rntn(v1, v2, zeroM, spike, Squash::identity, Squash::identity) ==
        Tensor::from_vector({21, 0}));

  CHECK_THROWS_AS(
      g_tree_rntn(v1, v2, M, Tensor::identity(2), Squash::identity, Squash::identity),
      shape_error);
}

TEST_CASE("unified builders, frozen values") {
  const SemanticsConfig config = unified2();
  const CompositionParams params = unified_params();
  CHECK_NOTHROW(validate_params(params, config));
  const Tensor vec = Tensor::from_vector({1, 2});

  // adjective: A[j,k] = sum_i vec[i] T[i,j,k]
  CHECK(build_adjective(vec, params) == Tensor({2, 2}, {8, 11, 14, 17}));
  // intransitive: V[i,j] = sum_k T[i,j,k] vec[k]
  CHECK(build_intransitive_verb(vec, params) == Tensor({2, 2}, {2, 8, 14, 20}));
  // transitive runs the cube through itself twice
  CHECK(build_transitive_verb(vec, params) ==
        Tensor({2, 2, 2}, {14, 17, 58, 73, 102, 129, 146, 185}));

  CHECK_THROWS_AS(build_adjective(Tensor::from_vector({1, 2, 3}), params), shape_error);
}

TEST_CASE("validate_params rejects wrong shapes") {
  const SemanticsConfig config = unified2();
  CompositionParams p = unified_params();
  p.T = Tensor({2, 2}, {1, 2, 3, 4});
  CHECK_THROWS_AS(validate_params(p, config), shape_error);

  SemanticsConfig uneven;
  uneven.atom_dims = {{"n", 2}, {"s", 3}};
  uneven.unified = true;
  CompositionParams q = unified_params();
  CHECK_THROWS_AS(validate_params(q, uneven), validation_error);

  SemanticsConfig pt;
  pt.atom_dims = {{"n", 2}, {"s", 3}};
  pt.unified = false;
  pt.hidden_dim = 4;
  CompositionParams r;
  r.mode = CompositionParams::Mode::per_type;
  r.T_adj = Tensor::ones({2, 2, 2});
  r.T_iv = Tensor::ones({2, 3, 2});
  r.T_tv_inner = Tensor::ones({2, 4, 2});
  r.T_tv_outer = Tensor::ones({2, 3, 4});
  CHECK_NOTHROW(validate_params(r, pt));
  r.T_tv_inner = Tensor::ones({2, 2, 2});
  CHECK_THROWS_AS(validate_params(r, pt), shape_error);
}

TEST_CASE("compose contracts a subject-verb-object sentence") {
  const SemanticsConfig config = unified2();
  const CompositionParams params = unified_params();
  const Tensor subj = Tensor::from_vector({1, 2});
  const Tensor obj = Tensor::from_vector({3, 4});
  const Tensor B = build_transitive_verb(Tensor::from_vector({1, 2}), params);

  const std::vector<WordMeaning> words = {
      {"subj", parse_type("n"), subj},
      {"verb", parse_type("n^r s n^l"), B},
      {"obj", parse_type("n"), obj},
  };
  std::vector<PregroupType> types;
  for (const auto& w : words) types.push_back(w.gtype);
  const auto diagram = reduce(types, parse_type("s"));
  REQUIRE(diagram);
  CHECK(diagram->links ==
        std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {3, 4}});
  CHECK(diagram->open == std::vector<std::size_t>{2});

  const Tensor out = compose(words, *diagram, config);
  CHECK(out == Tensor::from_vector({1754, 2822}));
  CHECK(out == g_lin(subj, B, obj));
}

TEST_CASE("compose leaves residual axes for irreducible targets") {
  const SemanticsConfig config = unified2();
  // adjective + noun reduces to n with the noun consumed into axis 1
  const Tensor A({2, 2}, {1, 2, 3, 4});
  const Tensor v = Tensor::from_vector({5, 7});
  const std::vector<WordMeaning> words = {
      {"adj", parse_type("n n^l"), A},
      {"noun", parse_type("n"), v},
  };
  const auto diagram = reduce({words[0].gtype, words[1].gtype}, parse_type("n"));
  REQUIRE(diagram);
  // A[i,k] v[k]: rows against the vector
  CHECK(compose(words, *diagram, config) == Tensor::from_vector({19, 43}));
}

TEST_CASE("compose full contraction to the unit gives a scalar") {
  const SemanticsConfig config = unified2();
  const Tensor v = Tensor::from_vector({1, 2});
  const Tensor w = Tensor::from_vector({3, 4});
  const std::vector<WordMeaning> words = {
      {"v", parse_type("n"), v},
      {"wr", parse_type("n^r"), w},
  };
  const auto diagram = reduce({words[0].gtype, words[1].gtype}, PregroupType{});
  REQUIRE(diagram);
  const Tensor out = compose(words, *diagram, config);
  CHECK(out.rank() == 0);
  CHECK(out.data()[0] == 11.0);
}

TEST_CASE("compose validates shapes against the diagram") {
  const SemanticsConfig config = unified2();
  const Tensor v = Tensor::from_vector({1, 2});
  const std::vector<WordMeaning> words = {
      {"a", parse_type("n"), v},
      {"b", parse_type("n^r"), v},
  };
  // diagram for a different sentence length
  LinkDiagram d;
  d.n_positions = 3;
  d.links = {{0, 1}};
  d.open = {2};
  CHECK_THROWS_AS(compose(words, d, config), validation_error);

  // tensor whose shape disagrees with its type
  const std::vector<WordMeaning> bad = {
      {"a", parse_type("n"), Tensor::from_vector({1, 2, 3})},
      {"b", parse_type("n^r"), v},
  };
  const auto ok = reduce({parse_type("n"), parse_type("n^r")}, PregroupType{});
  REQUIRE(ok);
  CHECK_THROWS_AS(compose(bad, *ok, config), shape_error);
}

TEST_CASE("per-type transitive pipeline matches the nested combiner") {
  SemanticsConfig config;
  config.atom_dims = {{"n", 2}, {"s", 3}};
  config.unified = false;
  config.hidden_dim = 4;

  CompositionParams p;
  p.mode = CompositionParams::Mode::per_type;
  auto fill = [](std::vector<std::size_t> shape, double a, double b) {
    std::size_t total = 1;
    for (auto d : shape) total *= d;
    std::vector<double> data(total);
    for (std::size_t i = 0; i < total; ++i) data[i] = std::sin(a * double(i + 1) + b);
    return Tensor(shape, data);
  };
  p.T_adj = fill({2, 2, 2}, 0.3, 0.1);
  p.T_iv = fill({2, 3, 2}, 0.7, 0.2);
  p.T_tv_inner = fill({2, 4, 2}, 1.1, 0.3);
  p.T_tv_outer = fill({2, 3, 4}, 1.3, 0.4);
  CHECK_NOTHROW(validate_params(p, config));

  const Tensor vv = Tensor::from_vector({0.4, -0.9});
  const Tensor subj = Tensor::from_vector({0.8, 0.15});
  const Tensor obj = Tensor::from_vector({-0.3, 0.6});

  const Tensor B = build_transitive_verb(vv, p);
  REQUIRE(B.shape() == std::vector<std::size_t>{2, 3, 2});

  const std::vector<WordMeaning> words = {
      {"subj", parse_type("n"), subj},
      {"verb", parse_type("n^r s n^l"), B},
      {"obj", parse_type("n"), obj},
  };
  const auto diagram =
      reduce({words[0].gtype, words[1].gtype, words[2].gtype}, parse_type("s"));
  REQUIRE(diagram);
  const Tensor via_compose = compose(words, *diagram, config);
  const Tensor via_stages = g_lin(subj, p.T_tv_outer, g_lin(vv, p.T_tv_inner, obj));
  CHECK(rel_close(via_compose, via_stages, 1e-12));

  const Tensor iv = build_intransitive_verb(vv, p);
  REQUIRE(iv.shape() == std::vector<std::size_t>{2, 3});
  const std::vector<WordMeaning> sv = {
      {"subj", parse_type("n"), subj},
      {"verb", parse_type("n^r s"), iv},
  };
  const auto d2 = reduce({sv[0].gtype, sv[1].gtype}, parse_type("s"));
  REQUIRE(d2);
  CHECK(rel_close(compose(sv, *d2, config), g_lin(subj, p.T_iv, vv), 1e-12));
}

TEST_CASE("relative pronoun tensor is the basis-copy map") {
  SemanticsConfig config;
  config.atom_dims = {{"n", 2}, {"s", 3}};
  config.unified = false;

  const Tensor W = build_relative_pronoun(config);
  REQUIRE(W.shape() == std::vector<std::size_t>{2, 2, 3, 2});
  std::size_t nonzero = 0;
  for (double x : W.data()) {
    CHECK((x == 0.0 || x == 1.0));
    if (x != 0.0) ++nonzero;
  }
  CHECK(nonzero == 2 * 3);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t j = 0; j < 3; ++j) CHECK(W.at({a, a, j, a}) == 1.0);
}

TEST_CASE("reflexive pronoun tensor is the double copy") {
  SemanticsConfig config;
  config.atom_dims = {{"n", 2}, {"s", 3}};
  config.unified = false;

  const Tensor R = build_reflexive_pronoun(config);
  REQUIRE(R.shape() == std::vector<std::size_t>{2, 3, 2, 2, 3});
  std::size_t nonzero = 0;
  for (double x : R.data()) {
    CHECK((x == 0.0 || x == 1.0));
    if (x != 0.0) ++nonzero;
  }
  CHECK(nonzero == 2 * 3);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t j = 0; j < 3; ++j) CHECK(R.at({a, j, a, a, j}) == 1.0);
}

TEST_CASE("relpron_compose frozen values and formula") {
  const Tensor subj = Tensor::from_vector({1, 2});
  const Tensor obj = Tensor::from_vector({3, 4});
  const Tensor verb = cube07();
  CHECK(relpron_compose(subj, verb, obj) == Tensor::from_vector({22, 156}));

  // out[i] = subj[i] * sum_{j,k} verb[i,j,k] obj[k], checked in the
  // library's own summation order
  const Tensor verb2({2, 3, 2}, {0.1, -0.2, 0.3, 0.4, -0.5, 0.6,
                                 0.7, 0.8, -0.9, 1.0, 1.1, -1.2});
  const Tensor got = relpron_compose(subj, verb2, obj);
  for (std::size_t i = 0; i < 2; ++i) {
    double acc = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      double m = 0;
      for (std::size_t j = 0; j < 3; ++j) m += verb2.at({i, j, k});
      acc += m * obj.data()[k];
    }
    CHECK(got.data()[i] == subj.data()[i] * acc);
  }
}

TEST_CASE("reflexive_compose frozen values and formula") {
  const Tensor noun = Tensor::from_vector({1, 2});
  const Tensor verb = cube07();
  // out[j] = sum_k noun[k] verb[k,j,k]
  CHECK(reflexive_compose(verb, noun) == Tensor::from_vector({10, 16}));

  const Tensor verb2({2, 3, 2}, {0.1, -0.2, 0.3, 0.4, -0.5, 0.6,
                                 0.7, 0.8, -0.9, 1.0, 1.1, -1.2});
  const Tensor got = reflexive_compose(verb2, noun);
  REQUIRE(got.shape() == std::vector<std::size_t>{3});
  for (std::size_t j = 0; j < 3; ++j) {
    double acc = 0;
    for (std::size_t k = 0; k < 2; ++k) acc += noun.data()[k] * verb2.at({k, j, k});
    CHECK(got.data()[j] == acc);
  }
}

TEST_CASE("relative clause contraction matches the closed form") {
  SemanticsConfig config;
  config.atom_dims = {{"n", 2}, {"s", 2}};
  config.unified = false;

  const Tensor subj = Tensor::from_vector({1, 2});
  const Tensor obj = Tensor::from_vector({3, 4});
  const Tensor verb = cube07();
  const std::vector<WordMeaning> words = {
      {"head", parse_type("n"), subj},
      {"who", parse_type("n^r n s^l n"), build_relative_pronoun(config)},
      {"verb", parse_type("n^r s n^l"), verb},
      {"obj", parse_type("n"), obj},
  };
  std::vector<PregroupType> types;
  for (const auto& w : words) types.push_back(w.gtype);
  const auto diagram = reduce(types, parse_type("n"));
  REQUIRE(diagram);
  CHECK(diagram->links == std::vector<std::pair<std::size_t, std::size_t>>{
                              {0, 1}, {3, 6}, {4, 5}, {7, 8}});
  CHECK(diagram->open == std::vector<std::size_t>{2});
  CHECK(rel_close(compose(words, *diagram, config),
                  Tensor::from_vector({22, 156}), 1e-12));
}

TEST_CASE("reflexive clause contraction matches the closed form") {
  SemanticsConfig config;
  config.atom_dims = {{"n", 2}, {"s", 2}};
  config.unified = false;

  const Tensor agent = Tensor::from_vector({1, 2});
  const Tensor verb = cube07();
  const std::vector<WordMeaning> words = {
      {"agent", parse_type("n"), agent},
      {"verb", parse_type("n^r s n^l"), verb},
      {"self", parse_type("n s^r n^rr n^r s"), build_reflexive_pronoun(config)},
  };
  std::vector<PregroupType> types;
  for (const auto& w : words) types.push_back(w.gtype);
  const auto diagram = reduce(types, parse_type("s"));
  REQUIRE(diagram);
  CHECK(diagram->links == std::vector<std::pair<std::size_t, std::size_t>>{
                              {0, 7}, {1, 6}, {2, 5}, {3, 4}});
  CHECK(diagram->open == std::vector<std::size_t>{8});
  CHECK(rel_close(compose(words, *diagram, config),
                  Tensor::from_vector({10, 16}), 1e-12));
}

TEST_CASE("word class names round trip") {
  for (WordClass c : {WordClass::noun, WordClass::adj, WordClass::iv, WordClass::tv,
                      WordClass::relpron, WordClass::reflpron, WordClass::raw}) {
    const auto back = word_class_from_string(to_string(c));
    REQUIRE(back);
    CHECK(*back == c);
  }
  CHECK(!word_class_from_string("verb"));
  CHECK(!word_class_from_string(""));
}

TEST_CASE("expected_type per class") {
  CHECK(to_string(*expected_type(WordClass::noun)) == "n");
  CHECK(to_string(*expected_type(WordClass::adj)) == "n n^l");
  CHECK(to_string(*expected_type(WordClass::iv)) == "n^r s");
  CHECK(to_string(*expected_type(WordClass::tv)) == "n^r s n^l");
  CHECK(to_string(*expected_type(WordClass::relpron)) == "n^r n s^l n");
  CHECK(to_string(*expected_type(WordClass::reflpron)) == "n s^r n^rr n^r s");
  CHECK(!expected_type(WordClass::raw));
}

TEST_CASE("realize_word builds per class") {
  const SemanticsConfig config = unified2();
  const CompositionParams params = unified_params();
  const Tensor vec = Tensor::from_vector({1, 2});

  const WordMeaning noun = realize_word("cat", WordClass::noun, parse_type("n"), vec,
                                        std::nullopt, params, config);
  CHECK(noun.tensor == vec);

  const WordMeaning adj = realize_word("red", WordClass::adj, parse_type("n n^l"), vec,
                                       std::nullopt, params, config);
  CHECK(adj.tensor == Tensor({2, 2}, {8, 11, 14, 17}));

  const WordMeaning tv = realize_word("eats", WordClass::tv, parse_type("n^r s n^l"),
                                      vec, std::nullopt, params, config);
  CHECK(tv.tensor == build_transitive_verb(vec, params));

  const WordMeaning who = realize_word("who", WordClass::relpron,
                                       parse_type("n^r n s^l n"), std::nullopt,
                                       std::nullopt, params, config);
  CHECK(who.tensor.shape() == std::vector<std::size_t>{2, 2, 2, 2});

  // raw takes any type as long as the tensor fits it
  const Tensor m({2, 2}, {1, 2, 3, 4});
  const WordMeaning flip = realize_word("flip", WordClass::raw, parse_type("s n^l"),
                                        std::nullopt, m, params, config);
  CHECK(flip.tensor == m);
}

TEST_CASE("realize_word rejects bad input") {
  const SemanticsConfig config = unified2();
  const CompositionParams params = unified_params();
  const Tensor vec = Tensor::from_vector({1, 2});

  CHECK_THROWS_AS(realize_word("cat", WordClass::noun, parse_type("n n^l"), vec,
                               std::nullopt, params, config),
                  validation_error);
  CHECK_THROWS_AS(realize_word("cat", WordClass::noun, parse_type("n"), std::nullopt,
                               std::nullopt, params, config),
                  validation_error);
  CHECK_THROWS_AS(realize_word("cat", WordClass::noun, parse_type("n"),
                               Tensor::from_vector({1, 2, 3}), std::nullopt, params,
                               config),
                  shape_error);
  CHECK_THROWS_AS(realize_word("x", WordClass::raw, parse_type("s n^l"), std::nullopt,
                               std::nullopt, params, config),
                  validation_error);
  CHECK_THROWS_AS(realize_word("x", WordClass::raw, parse_type("s n^l"), std::nullopt,
                               Tensor::from_vector({1, 2}), params, config),
                  shape_error);
}

TEST_CASE("raw words compose with arbitrary types") {
  const SemanticsConfig config = unified2();
  // a sentence-modifier of type s s^l applied to an iv clause
  const Tensor mod({2, 2}, {2, 0, 0, 3});
  const Tensor subj = Tensor::from_vector({1, 2});
  const Tensor iv({2, 2}, {5, 6, 7, 8});
  const std::vector<WordMeaning> words = {
      {"not", parse_type("s s^l"), mod},
      {"subj", parse_type("n"), subj},
      {"verb", parse_type("n^r s"), iv},
  };
  std::vector<PregroupType> types;
  for (const auto& w : words) types.push_back(w.gtype);
  const auto diagram = reduce(types, parse_type("s"));
  REQUIRE(diagram);
  // clause = subj . iv = [19, 22]; mod scales the axes by [2, 3]
  CHECK(compose(words, *diagram, config) == Tensor::from_vector({38, 66}));
}

TEST_CASE("central equivalence holds over random settings") {
  // the verify subcommand runs this at scale; one seeded slice here
  const PropertyResult r = check_central_equivalence(12345, 50);
  INFO(r.detail);
  CHECK(r.passed);
}
