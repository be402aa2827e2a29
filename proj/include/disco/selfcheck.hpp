#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disco/composition.hpp"
#include "disco/tensor.hpp"

namespace disco {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// |x - y| <= tol * max(1, |x|, |y|), componentwise for tensors.
bool rel_close(double x, double y, double tol);
bool rel_close(const Tensor& x, const Tensor& y, double tol);

// Randomized property checks shared by the verify subcommand and the
// acceptance harness. Each runs its own generator from the given seed.
PropertyResult check_grammar_oracle(std::uint64_t seed, std::size_t trials);
PropertyResult check_central_equivalence(std::uint64_t seed, std::size_t trials_per_dim);
PropertyResult check_specialization_chain(std::uint64_t seed, std::size_t trials);
PropertyResult check_frobenius_laws();
PropertyResult check_pronoun_yanking(std::uint64_t seed, std::size_t trials);
PropertyResult check_gradients(std::uint64_t seed, std::size_t trials);
PropertyResult check_multilinearity(std::uint64_t seed, std::size_t trials);

std::vector<PropertyResult> run_selfcheck(std::uint64_t seed);

}  // namespace disco
