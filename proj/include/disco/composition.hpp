#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disco/grammar.hpp"
#include "disco/tensor.hpp"

namespace disco {

// Dimension assignment for the semantic spaces: one dense space per atom,
// adjoints share the dimension of their base. unified forces a single
// dimension across all atoms so one cube T can serve every construction;
// hidden_dim is the middle dimension of the two-stage transitive verb in
// per-type mode (0 means: use the dimension of n).
struct SemanticsConfig {
  std::map<std::string, std::size_t> atom_dims;
  bool unified = true;
  std::size_t hidden_dim = 0;
};

std::size_t dim_of(const SemanticsConfig& config, const Atom& atom);
void validate(const SemanticsConfig& config);

// Dense shape of a word tensor for the given pregroup type: one axis per
// factor, each sized by its base atom.
std::vector<std::size_t> type_shape(const SemanticsConfig& config, const PregroupType& t);

enum class Squash { identity, tanh, logistic };

Tensor apply_squash(Squash f, const Tensor& t);

// Everything needed to turn word vectors into word tensors. In unified
// mode the single cube T is used for adjectives, intransitives and both
// stages of transitives; per_type mode keeps a separate tensor for each
// construction. M and the squashes belong to the TreeRNN/RNTN baselines
// only; they are evaluated, never produced by the builders here.
struct CompositionParams {
  enum class Mode { unified, per_type };
  Mode mode = Mode::unified;
  Tensor T;
  Tensor T_adj;
  Tensor T_iv;
  Tensor T_tv_inner;
  Tensor T_tv_outer;
  Tensor M;
  Squash f1 = Squash::identity;
  Squash f2 = Squash::identity;
};

void validate_params(const CompositionParams& params, const SemanticsConfig& config);

// A word with its grammar type and its meaning tensor, shaped per
// type_shape of the configured spaces.
struct WordMeaning {
  std::string word;
  PregroupType gtype;
  Tensor tensor;
};

// Baseline recursive combiners. Both take the two child vectors of a
// parse-tree node and produce the parent vector.
Tensor g_tree_rnn(const Tensor& v1, const Tensor& v2, const Tensor& M, Squash f1);
Tensor g_tree_rntn(const Tensor& v1, const Tensor& v2, const Tensor& M, const Tensor& T,
                   Squash f1, Squash f2);

// The linear combiner: out[j] = sum_{i,k} v1[i] * T[i,j,k] * v2[k]. The
// output index is the middle axis of T throughout this codebase.
Tensor g_lin(const Tensor& v1, const Tensor& T, const Tensor& v2);

// Word-tensor synthesis. Each builder packs the combiner applications a
// parse tree would perform into a single word tensor, so that composing
// by cup contraction and evaluating the tree node by node agree exactly.
//   transitive:   B[i,j,c] = sum_{a,m} verb_vec[a] * T_outer[i,j,m] * T_inner[a,m,c]
//   adjective:    A[j,k]   = sum_i adj_vec[i] * T_adj[i,j,k]
//   intransitive: V[i,j]   = sum_k T_iv[i,j,k] * verb_vec[k]
Tensor build_transitive_verb(const Tensor& verb_vec, const CompositionParams& params);
Tensor build_adjective(const Tensor& adj_vec, const CompositionParams& params);
Tensor build_intransitive_verb(const Tensor& verb_vec, const CompositionParams& params);

// Pronoun tensors are purely structural: Kronecker deltas wired from the
// Frobenius copy/merge/delete maps, never learned.
//   who (n^r n s^l n):          W[a,b,j,c] = 1 iff a == b == c
//   himself (n s^r n^rr n^r s): R[a,j,b,c,j'] = 1 iff a == b == c and j == j'
Tensor build_relative_pronoun(const SemanticsConfig& config);
Tensor build_reflexive_pronoun(const SemanticsConfig& config);

// Closed forms of the pronoun constructions after yanking the wires
// straight. relpron: the head noun filtered pointwise by the verb-object
// property, the sentence axis summed away. reflexive: the noun copied
// through the basis into both argument slots of the verb, so the result
// stays linear in the noun: out[j] = sum_k noun[k] * verb[k,j,k].
Tensor relpron_compose(const Tensor& subj, const Tensor& verb, const Tensor& obj);
Tensor reflexive_compose(const Tensor& verb, const Tensor& noun);

// Execute a reduction diagram on word tensors: every cup becomes a
// pairwise contraction (or a trace once both ends live in the same
// intermediate tensor), innermost cups first, ties left to right. The
// result carries the open wires in left-to-right position order.
Tensor compose(const std::vector<WordMeaning>& words, const LinkDiagram& diagram,
               const SemanticsConfig& config);

// Lexicon entry classes. Vector-backed classes (noun, adj, iv, tv) store a
// vector in the n space and synthesize their tensor through the builders;
// raw stores an explicit tensor; the pronoun classes store nothing.
enum class WordClass { noun, adj, iv, tv, relpron, reflpron, raw };

const char* to_string(WordClass c);
std::optional<WordClass> word_class_from_string(const std::string& s);

// The fixed pregroup type each class must carry (nullopt for raw).
std::optional<PregroupType> expected_type(WordClass c);

struct LexiconEntry {
  std::string word;
  WordClass cls = WordClass::raw;
  PregroupType type;
  std::optional<Tensor> vector;  // vector-backed classes
  std::optional<Tensor> tensor;  // raw
};

using Lexicon = std::map<std::string, LexiconEntry>;

// Turn a lexicon entry (with its vector already resolved) into the word
// tensor used by compose.
WordMeaning realize_word(const std::string& word, WordClass cls, const PregroupType& type,
                         const std::optional<Tensor>& vector_payload,
                         const std::optional<Tensor>& tensor_payload,
                         const CompositionParams& params, const SemanticsConfig& config);

}  // namespace disco
