#include "disco/composition.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace disco {

std::size_t dim_of(const SemanticsConfig& config, const Atom& atom) {
  auto it = config.atom_dims.find(atom.name);
  if (it == config.atom_dims.end())
    throw validation_error("no dimension configured for atom '" + atom.name + "'");
  return it->second;
}

void validate(const SemanticsConfig& config) {
  if (config.atom_dims.empty())
    throw validation_error("semantics config must assign at least one atom dimension");
  std::size_t first = 0;
  for (const auto& [name, dim] : config.atom_dims) {
    Atom check(name);  // validates the name
    if (dim == 0)
      throw validation_error("dimension for atom '" + name + "' must be positive");
    if (first == 0) first = dim;
    if (config.unified && dim != first)
      throw validation_error("unified mode requires equal dimensions for all atoms");
  }
}

std::vector<std::size_t> type_shape(const SemanticsConfig& config, const PregroupType& t) {
  std::vector<std::size_t> shape;
  shape.reserve(t.factors.size());
  for (const auto& f : t.factors) shape.push_back(dim_of(config, f.base));
  return shape;
}

Tensor apply_squash(Squash f, const Tensor& t) {
  if (f == Squash::identity) return t;
  Tensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = t.data()[i];
    out.data()[i] = f == Squash::tanh ? std::tanh(x) : 1.0 / (1.0 + std::exp(-x));
  }
  return out;
}

namespace {

void require_vector(const Tensor& v, const char* what) {
  if (v.rank() != 1) throw shape_error(std::string(what) + " must be a vector", {}, v.shape());
}

void require_cube(const Tensor& t, const char* what) {
  if (t.rank() != 3) throw shape_error(std::string(what) + " must be an order-3 tensor", {}, t.shape());
}

}  // namespace

void validate_params(const CompositionParams& params, const SemanticsConfig& config) {
  validate(config);
  const std::size_t d_n = dim_of(config, Atom("n"));
  const std::size_t d_s = dim_of(config, Atom("s"));
  if (params.mode == CompositionParams::Mode::unified) {
    if (d_n != d_s)
      throw validation_error("unified composition requires equal n and s dimensions");
    if (params.T.shape() != std::vector<std::size_t>{d_n, d_n, d_n})
      throw shape_error("unified tensor T has the wrong shape", {d_n, d_n, d_n},
                        params.T.shape());
    return;
  }
  const std::size_t d_h = config.hidden_dim ? config.hidden_dim : d_n;
  if (params.T_adj.shape() != std::vector<std::size_t>{d_n, d_n, d_n})
    throw shape_error("T_adj has the wrong shape", {d_n, d_n, d_n}, params.T_adj.shape());
  if (params.T_iv.shape() != std::vector<std::size_t>{d_n, d_s, d_n})
    throw shape_error("T_iv has the wrong shape", {d_n, d_s, d_n}, params.T_iv.shape());
  if (params.T_tv_inner.shape() != std::vector<std::size_t>{d_n, d_h, d_n})
    throw shape_error("T_tv_inner has the wrong shape", {d_n, d_h, d_n},
                      params.T_tv_inner.shape());
  if (params.T_tv_outer.shape() != std::vector<std::size_t>{d_n, d_s, d_h})
    throw shape_error("T_tv_outer has the wrong shape", {d_n, d_s, d_h},
                      params.T_tv_outer.shape());
}

Tensor g_tree_rnn(const Tensor& v1, const Tensor& v2, const Tensor& M, Squash f1) {
  require_vector(v1, "g_tree_rnn v1");
  require_vector(v2, "g_tree_rnn v2");
  const std::size_t d = v1.shape()[0];
  if (v2.shape()[0] != d)
    throw shape_error("g_tree_rnn: child vectors differ in length", {d}, v2.shape());
  if (M.shape() != std::vector<std::size_t>{d, 2 * d})
    throw shape_error("g_tree_rnn: M must map the concatenated children", {d, 2 * d},
                      M.shape());
  std::vector<double> cat(v1.data());
  cat.insert(cat.end(), v2.data().begin(), v2.data().end());
  return apply_squash(f1, contract(M, 1, Tensor::from_vector(std::move(cat)), 0));
}

Tensor g_tree_rntn(const Tensor& v1, const Tensor& v2, const Tensor& M, const Tensor& T,
                   Squash f1, Squash f2) {
  const std::size_t d = v1.rank() == 1 ? v1.shape()[0] : 0;
  if (T.shape() != std::vector<std::size_t>{d, d, d})
    throw shape_error("g_tree_rntn: T must be a cube over the child space", {d, d, d},
                      T.shape());
  return add(g_tree_rnn(v1, v2, M, f1), apply_squash(f2, g_lin(v1, T, v2)));
}

Tensor g_lin(const Tensor& v1, const Tensor& T, const Tensor& v2) {
  require_vector(v1, "g_lin v1");
  require_vector(v2, "g_lin v2");
  require_cube(T, "g_lin T");
  if (T.shape()[0] != v1.shape()[0])
    throw shape_error("g_lin: v1 does not match axis 0 of T", {T.shape()[0]}, v1.shape());
  if (T.shape()[2] != v2.shape()[0])
    throw shape_error("g_lin: v2 does not match axis 2 of T", {T.shape()[2]}, v2.shape());
  return contract(contract(v1, 0, T, 0), 1, v2, 0);
}

Tensor build_transitive_verb(const Tensor& verb_vec, const CompositionParams& params) {
  const bool unified = params.mode == CompositionParams::Mode::unified;
  const Tensor& inner = unified ? params.T : params.T_tv_inner;
  const Tensor& outer = unified ? params.T : params.T_tv_outer;
  require_vector(verb_vec, "verb vector");
  require_cube(inner, "inner transitive tensor");
  require_cube(outer, "outer transitive tensor");
  if (inner.shape()[0] != verb_vec.shape()[0])
    throw shape_error("verb vector does not match the inner tensor",
                      {inner.shape()[0]}, verb_vec.shape());
  // P[m,c] = sum_a verb_vec[a] * inner[a,m,c]
  Tensor p = contract(verb_vec, 0, inner, 0);
  if (outer.shape()[2] != p.shape()[0])
    throw shape_error("outer tensor does not accept the inner stage",
                      {outer.shape()[2]}, {p.shape()[0]});
  // B[i,j,c] = sum_m outer[i,j,m] * P[m,c]
  return contract(outer, 2, p, 0);
}

Tensor build_adjective(const Tensor& adj_vec, const CompositionParams& params) {
  const Tensor& t = params.mode == CompositionParams::Mode::unified ? params.T : params.T_adj;
  require_vector(adj_vec, "adjective vector");
  require_cube(t, "adjective tensor");
  if (t.shape()[0] != adj_vec.shape()[0])
    throw shape_error("adjective vector does not match its tensor", {t.shape()[0]},
                      adj_vec.shape());
  return contract(adj_vec, 0, t, 0);
}

Tensor build_intransitive_verb(const Tensor& verb_vec, const CompositionParams& params) {
  const Tensor& t = params.mode == CompositionParams::Mode::unified ? params.T : params.T_iv;
  require_vector(verb_vec, "verb vector");
  require_cube(t, "intransitive tensor");
  if (t.shape()[2] != verb_vec.shape()[0])
    throw shape_error("verb vector does not match its tensor", {t.shape()[2]},
                      verb_vec.shape());
  return contract(t, 2, verb_vec, 0);
}

Tensor build_relative_pronoun(const SemanticsConfig& config) {
  const std::size_t d_n = dim_of(config, Atom("n"));
  const std::size_t d_s = dim_of(config, Atom("s"));
  Tensor w({d_n, d_n, d_s, d_n});
  for (std::size_t a = 0; a < d_n; ++a)
    for (std::size_t j = 0; j < d_s; ++j)
      w.at({a, a, j, a}) = 1.0;
  return w;
}

Tensor build_reflexive_pronoun(const SemanticsConfig& config) {
  const std::size_t d_n = dim_of(config, Atom("n"));
  const std::size_t d_s = dim_of(config, Atom("s"));
  Tensor r({d_n, d_s, d_n, d_n, d_s});
  for (std::size_t a = 0; a < d_n; ++a)
    for (std::size_t j = 0; j < d_s; ++j)
      r.at({a, j, a, a, j}) = 1.0;
  return r;
}

Tensor relpron_compose(const Tensor& subj, const Tensor& verb, const Tensor& obj) {
  require_vector(subj, "relpron subject");
  require_cube(verb, "relpron verb");
  require_vector(obj, "relpron object");
  // v[i] = sum_{j,k} verb[i,j,k] * obj[k]: the sentence axis deleted, the
  // object consumed, then the head noun filtered pointwise.
  Tensor summed = contract(verb, 1, frobenius_zeta(verb.shape()[1]), 0);
  Tensor v = contract(summed, 1, obj, 0);
  return pointwise_mul(subj, v);
}

Tensor reflexive_compose(const Tensor& verb, const Tensor& noun) {
  require_cube(verb, "reflexive verb");
  require_vector(noun, "reflexive noun");
  const std::size_t d_n = verb.shape()[0];
  const std::size_t d_s = verb.shape()[1];
  if (verb.shape()[2] != d_n)
    throw shape_error("reflexive verb must have matching argument axes",
                      {d_n, d_s, d_n}, verb.shape());
  if (noun.shape()[0] != d_n)
    throw shape_error("reflexive noun does not match the verb", {d_n}, noun.shape());
  // The basis copy feeds the same index into both argument slots.
  Tensor out({d_s});
  for (std::size_t j = 0; j < d_s; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < d_n; ++k)
      sum += noun.data()[k] * verb.data()[(k * d_s + j) * d_n + k];
    out.data()[j] = sum;
  }
  return out;
}

namespace {

struct Block {
  Tensor t;
  std::vector<std::size_t> axes;  // global positions, ascending
};

std::size_t block_holding(const std::vector<Block>& blocks, std::size_t position) {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t axis : blocks[b].axes)
      if (axis == position) return b;
  throw std::logic_error("compose: position not held by any block");
}

std::size_t axis_index(const Block& block, std::size_t position) {
  for (std::size_t i = 0; i < block.axes.size(); ++i)
    if (block.axes[i] == position) return i;
  throw std::logic_error("compose: axis not in block");
}

}  // namespace

Tensor compose(const std::vector<WordMeaning>& words, const LinkDiagram& diagram,
               const SemanticsConfig& config) {
  if (words.empty()) throw validation_error("compose: sentence must be non-empty");
  std::vector<PregroupType> types;
  types.reserve(words.size());
  for (const auto& w : words) types.push_back(w.gtype);
  const auto positions = flatten(types);
  if (diagram.n_positions != positions.size())
    throw validation_error("compose: diagram covers " +
                           std::to_string(diagram.n_positions) + " positions but the sentence has " +
                           std::to_string(positions.size()));
  if (!diagram_is_valid(diagram, positions))
    throw validation_error("compose: diagram does not validate against the sentence types");
  for (const auto& w : words) {
    const auto expected = type_shape(config, w.gtype);
    if (w.tensor.shape() != expected)
      throw shape_error("word '" + w.word + "' has the wrong tensor shape", expected,
                        w.tensor.shape());
  }

  std::vector<Block> blocks;
  std::size_t base = 0;
  for (const auto& w : words) {
    Block b{w.tensor, {}};
    for (std::size_t i = 0; i < w.gtype.size(); ++i) b.axes.push_back(base + i);
    base += w.gtype.size();
    blocks.push_back(std::move(b));
  }

  // Innermost cups first, ties left to right. Depth counts the cups
  // strictly enclosing a cup.
  auto links = diagram.links;
  auto depth = [&](const std::pair<std::size_t, std::size_t>& l) {
    std::size_t d = 0;
    for (const auto& other : diagram.links)
      if (other.first < l.first && l.second < other.second) ++d;
    return d;
  };
  std::stable_sort(links.begin(), links.end(),
                   [&](const auto& a, const auto& b) {
                     const std::size_t da = depth(a), db = depth(b);
                     if (da != db) return da > db;
                     return a.first < b.first;
                   });

  for (const auto& [i, j] : links) {
    const std::size_t bi = block_holding(blocks, i);
    const std::size_t bj = block_holding(blocks, j);
    if (bi == bj) {
      Block& blk = blocks[bi];
      const std::size_t a1 = axis_index(blk, i);
      const std::size_t a2 = axis_index(blk, j);
      blk.t = self_contract(blk.t, a1, a2);
      blk.axes.erase(blk.axes.begin() + static_cast<std::ptrdiff_t>(std::max(a1, a2)));
      blk.axes.erase(blk.axes.begin() + static_cast<std::ptrdiff_t>(std::min(a1, a2)));
    } else {
      const std::size_t left = std::min(bi, bj), right = std::max(bi, bj);
      Block& lb = blocks[left];
      Block& rb = blocks[right];
      const std::size_t ai = axis_index(lb, std::min(i, j));
      const std::size_t aj = axis_index(rb, std::max(i, j));
      Tensor merged = contract(lb.t, ai, rb.t, aj);
      std::vector<std::size_t> axes;
      for (std::size_t k = 0; k < lb.axes.size(); ++k)
        if (k != ai) axes.push_back(lb.axes[k]);
      for (std::size_t k = 0; k < rb.axes.size(); ++k)
        if (k != aj) axes.push_back(rb.axes[k]);
      lb.t = std::move(merged);
      lb.axes = std::move(axes);
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(right));
    }
  }

  Tensor out = blocks[0].t;
  std::vector<std::size_t> axes = blocks[0].axes;
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    out = tensor_product(out, blocks[b].t);
    axes.insert(axes.end(), blocks[b].axes.begin(), blocks[b].axes.end());
  }
  if (axes != diagram.open)
    throw std::logic_error("compose: residual axes out of order");
  return out;
}

const char* to_string(WordClass c) {
  switch (c) {
    case WordClass::noun: return "noun";
    case WordClass::adj: return "adj";
    case WordClass::iv: return "iv";
    case WordClass::tv: return "tv";
    case WordClass::relpron: return "relpron";
    case WordClass::reflpron: return "reflpron";
    case WordClass::raw: return "raw";
  }
  return "?";
}

std::optional<WordClass> word_class_from_string(const std::string& s) {
  if (s == "noun") return WordClass::noun;
  if (s == "adj") return WordClass::adj;
  if (s == "iv") return WordClass::iv;
  if (s == "tv") return WordClass::tv;
  if (s == "relpron") return WordClass::relpron;
  if (s == "reflpron") return WordClass::reflpron;
  if (s == "raw") return WordClass::raw;
  return std::nullopt;
}

std::optional<PregroupType> expected_type(WordClass c) {
  switch (c) {
    case WordClass::noun: return parse_type("n");
    case WordClass::adj: return parse_type("n n^l");
    case WordClass::iv: return parse_type("n^r s");
    case WordClass::tv: return parse_type("n^r s n^l");
    case WordClass::relpron: return parse_type("n^r n s^l n");
    case WordClass::reflpron: return parse_type("n s^r n^rr n^r s");
    case WordClass::raw: return std::nullopt;
  }
  return std::nullopt;
}

WordMeaning realize_word(const std::string& word, WordClass cls, const PregroupType& type,
                         const std::optional<Tensor>& vector_payload,
                         const std::optional<Tensor>& tensor_payload,
                         const CompositionParams& params, const SemanticsConfig& config) {
  if (auto expected = expected_type(cls); expected && type != *expected)
    throw validation_error("word '" + word + "' of class " + to_string(cls) +
                           " must have type '" + to_string(*expected) + "', got '" +
                           to_string(type) + "'");

  auto need_vector = [&]() -> const Tensor& {
    if (!vector_payload)
      throw validation_error("word '" + word + "' of class " + to_string(cls) +
                             " needs a vector");
    const std::size_t d_n = dim_of(config, Atom("n"));
    if (vector_payload->shape() != std::vector<std::size_t>{d_n})
      throw shape_error("word '" + word + "' vector has the wrong length", {d_n},
                        vector_payload->shape());
    return *vector_payload;
  };

  Tensor t;
  switch (cls) {
    case WordClass::noun: t = need_vector(); break;
    case WordClass::adj: t = build_adjective(need_vector(), params); break;
    case WordClass::iv: t = build_intransitive_verb(need_vector(), params); break;
    case WordClass::tv: t = build_transitive_verb(need_vector(), params); break;
    case WordClass::relpron: t = build_relative_pronoun(config); break;
    case WordClass::reflpron: t = build_reflexive_pronoun(config); break;
    case WordClass::raw: {
      if (!tensor_payload)
        throw validation_error("word '" + word + "' of class raw needs a tensor");
      const auto expected = type_shape(config, type);
      if (tensor_payload->shape() != expected)
        throw shape_error("word '" + word + "' tensor does not match its type", expected,
                          tensor_payload->shape());
      t = *tensor_payload;
      break;
    }
  }
  return WordMeaning{word, type, std::move(t)};
}

}  // namespace disco
