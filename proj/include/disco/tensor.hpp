#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "disco/errors.hpp"

namespace disco {

// Dense tensor of doubles in row-major layout. Value semantics: every
// operation allocates a fresh result, inputs are never modified. Rank 0
// with a single entry plays the scalar. All entries are finite; any
// operation that would produce NaN or infinity throws numeric_error
// instead. Dimensions are positive and the total entry count is bounded
// by tensor_size_limit().
class Tensor {
 public:
  Tensor();  // rank-0 zero
  explicit Tensor(std::vector<std::size_t> shape);  // zero-filled
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor scalar(double v);
  static Tensor from_vector(std::vector<double> v);
  static Tensor identity(std::size_t n);
  static Tensor ones(std::vector<std::size_t> shape);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double at(std::span<const std::size_t> index) const;
  double& at(std::span<const std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;
  double& at(std::initializer_list<std::size_t> index);

  double scalar_value() const;  // rank 0 only

  bool operator==(const Tensor&) const = default;

 private:
  std::size_t flat_index(std::span<const std::size_t> index) const;

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Total-entry cap guarding tensor_product blowup (default 10^7 entries).
std::size_t tensor_size_limit();
void set_tensor_size_limit(std::size_t limit);

// Kronecker/outer product: shape is the concatenation of the operand
// shapes, entries are all pairwise products.
Tensor tensor_product(const Tensor& a, const Tensor& b);

// Sum a[..., k, ...] * b[..., k, ...] over the paired axes. The result
// shape is a's shape without axis_a followed by b's without axis_b. The
// summation index runs ascending, so results are bit-reproducible.
Tensor contract(const Tensor& a, std::size_t axis_a, const Tensor& b, std::size_t axis_b);

// Trace over two axes of equal dimension within one tensor.
Tensor self_contract(const Tensor& a, std::size_t axis1, std::size_t axis2);

Tensor pointwise_mul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// Frobenius maps over the fixed basis: copying turns a vector into the
// diagonal matrix, merging extracts the diagonal, deleting sums the
// entries, and the unit is the all-ones vector.
Tensor frobenius_delta(const Tensor& v);
Tensor frobenius_mu(const Tensor& m);
double frobenius_iota(const Tensor& v);
Tensor frobenius_zeta(std::size_t dim);

double dot(const Tensor& v, const Tensor& w);
double norm(const Tensor& v);

// Standard cosine, clamped into [-1, 1]; zero-norm input is an error.
double cosine_similarity(const Tensor& v, const Tensor& w);

}  // namespace disco
