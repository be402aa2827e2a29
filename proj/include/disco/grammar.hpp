#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "disco/errors.hpp"

namespace disco {

// A grammatical atom such as n (noun phrase) or s (sentence). Names are
// lowercase a-z; nothing restricts the alphabet to those two.
struct Atom {
  std::string name;
  explicit Atom(std::string n);
  auto operator<=>(const Atom&) const = default;
};

// One factor of a pregroup type: an atom with an adjoint order.
// adjoint 0 is the plain type, +1 the right adjoint x^r, -1 the left
// adjoint x^l; iterated adjoints stack, so n^rr carries +2.
struct SimpleType {
  Atom base;
  int adjoint = 0;
  auto operator<=>(const SimpleType&) const = default;
};

SimpleType adjoint_right(const SimpleType& t);
SimpleType adjoint_left(const SimpleType& t);

// A pregroup type: a concatenation of simple types. Empty means the
// unit type 1.
struct PregroupType {
  std::vector<SimpleType> factors;

  bool is_unit() const { return factors.empty(); }
  std::size_t size() const { return factors.size(); }
  auto operator<=>(const PregroupType&) const = default;
};

PregroupType concat(const PregroupType& a, const PregroupType& b);

// (x y)^r = y^r x^r: reverse the factors and raise each adjoint order.
PregroupType adjoint_right(const PregroupType& t);
PregroupType adjoint_left(const PregroupType& t);

// Parse the concrete syntax "n^r s n^l": whitespace-separated factors,
// each a lowercase atom name optionally followed by ^ and a run of r/l
// letters (net order = count of r minus count of l).
PregroupType parse_type(const std::string& text);

std::string to_string(const SimpleType& t);
std::string to_string(const PregroupType& t);

// True when the adjacent pair (left, right) contracts to the unit: same
// base atom and the adjoint order steps up by exactly one. Covers both
// eps^r (x x^r) and eps^l (x^l x) at every iteration level.
bool contractible(const SimpleType& left, const SimpleType& right);

// A contraction-only reduction of a flattened type string. links are the
// cups: position i linked to j > i, stored sorted ascending, pairwise
// disjoint and non-crossing, with every position strictly under a cup
// itself linked under that cup. open lists the unlinked positions in
// order; they spell the residual type. The same structure doubles as the
// contraction plan executed by the tensor semantics.
struct LinkDiagram {
  std::size_t n_positions = 0;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> open;
  auto operator<=>(const LinkDiagram&) const = default;
};

// Concatenate the factors of a word-type sequence into one position list.
std::vector<SimpleType> flatten(const std::vector<PregroupType>& sentence);

// Full invariant check of a diagram against its type string.
bool diagram_is_valid(const LinkDiagram& d, const std::vector<SimpleType>& positions);

// The residual type spelled by the open positions.
PregroupType diagram_residual(const LinkDiagram& d, const std::vector<SimpleType>& positions);

// Search for a contraction-only reduction of the sentence to the target
// type. Returns the lexicographically least valid diagram (links compared
// as sorted pair lists), or nullopt when no reduction exists. Polynomial:
// interval DP over cancellable substrings plus a memoized suffix search.
std::optional<LinkDiagram> reduce(const std::vector<PregroupType>& sentence,
                                  const PregroupType& target);

// Exhaustive oracle: every valid diagram whose residual equals target,
// sorted lexicographically. Exponential backtracking; refuses sentences
// with more than max_positions simple types.
std::vector<LinkDiagram> enumerate_reductions(const std::vector<PregroupType>& sentence,
                                              const PregroupType& target,
                                              std::size_t max_positions = 12);

}  // namespace disco
