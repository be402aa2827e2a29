#include "disco/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

namespace disco {

namespace {

std::atomic<std::size_t> g_size_limit{10'000'000};

// Validates positive dims and the global cap, with overflow protection.
std::size_t checked_entry_count(const std::vector<std::size_t>& shape) {
  const std::size_t limit = tensor_size_limit();
  std::size_t total = 1;
  for (std::size_t d : shape) {
    if (d == 0)
      throw shape_error("tensor dimensions must be positive", {}, shape);
    if (total > limit / d)
      throw resource_error("tensor of shape " + dims_to_string(shape) +
                           " exceeds the size limit of " + std::to_string(limit) +
                           " entries");
    total *= d;
  }
  return total;
}

void ensure_finite(const std::vector<double>& data, const char* op) {
  for (double v : data)
    if (!std::isfinite(v))
      throw numeric_error(std::string(op) + " produced a non-finite value");
}

std::size_t prefix_product(const std::vector<std::size_t>& shape, std::size_t upto) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < upto; ++i) p *= shape[i];
  return p;
}

std::size_t suffix_product(const std::vector<std::size_t>& shape, std::size_t from) {
  std::size_t p = 1;
  for (std::size_t i = from; i < shape.size(); ++i) p *= shape[i];
  return p;
}

}  // namespace

std::size_t tensor_size_limit() { return g_size_limit.load(); }

void set_tensor_size_limit(std::size_t limit) {
  if (limit == 0) throw validation_error("tensor size limit must be positive");
  g_size_limit.store(limit);
}

Tensor::Tensor() : data_(1, 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_entry_count(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  const std::size_t expected = checked_entry_count(shape_);
  if (data_.size() != expected)
    throw shape_error("tensor data length does not match shape", {expected},
                      {data_.size()});
  ensure_finite(data_, "tensor construction");
}

Tensor Tensor::scalar(double v) { return Tensor({}, {v}); }

Tensor Tensor::from_vector(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor({n}, std::move(v));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor out({n, n});
  for (std::size_t i = 0; i < n; ++i) out.data_[i * n + i] = 1.0;
  return out;
}

Tensor Tensor::ones(std::vector<std::size_t> shape) {
  Tensor out(std::move(shape));
  std::fill(out.data_.begin(), out.data_.end(), 1.0);
  return out;
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size())
    throw shape_error("index rank does not match tensor rank", shape_,
                      std::vector<std::size_t>(index.begin(), index.end()));
  std::size_t flat = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (index[i] >= shape_[i])
      throw shape_error("tensor index out of range", shape_,
                        std::vector<std::size_t>(index.begin(), index.end()));
    flat = flat * shape_[i] + index[i];
  }
  return flat;
}

double Tensor::at(std::span<const std::size_t> index) const { return data_[flat_index(index)]; }
double& Tensor::at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }

double Tensor::at(std::initializer_list<std::size_t> index) const {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}
double& Tensor::at(std::initializer_list<std::size_t> index) {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}

double Tensor::scalar_value() const {
  if (rank() != 0)
    throw shape_error("scalar_value requires a rank-0 tensor", {}, shape_);
  return data_[0];
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
  std::vector<std::size_t> shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  Tensor out(std::move(shape));
  const std::size_t nb = b.size();
  for (std::size_t ia = 0; ia < a.size(); ++ia)
    for (std::size_t ib = 0; ib < nb; ++ib)
      out.data()[ia * nb + ib] = a.data()[ia] * b.data()[ib];
  ensure_finite(out.data(), "tensor_product");
  return out;
}

Tensor contract(const Tensor& a, std::size_t axis_a, const Tensor& b, std::size_t axis_b) {
  if (axis_a >= a.rank())
    throw shape_error("contract: axis " + std::to_string(axis_a) +
                          " out of range for left operand",
                      a.shape(), {axis_a});
  if (axis_b >= b.rank())
    throw shape_error("contract: axis " + std::to_string(axis_b) +
                          " out of range for right operand",
                      b.shape(), {axis_b});
  const std::size_t d = a.shape()[axis_a];
  if (d != b.shape()[axis_b])
    throw shape_error("contract: paired axes differ in dimension",
                      {d}, {b.shape()[axis_b]});

  const std::size_t pre_a = prefix_product(a.shape(), axis_a);
  const std::size_t post_a = suffix_product(a.shape(), axis_a + 1);
  const std::size_t pre_b = prefix_product(b.shape(), axis_b);
  const std::size_t post_b = suffix_product(b.shape(), axis_b + 1);

  std::vector<std::size_t> shape;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (i != axis_a) shape.push_back(a.shape()[i]);
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (i != axis_b) shape.push_back(b.shape()[i]);
  Tensor out(std::move(shape));

  const double* A = a.data().data();
  const double* B = b.data().data();
  double* O = out.data().data();
  const std::size_t out_b = pre_b * post_b;
  for (std::size_t pa = 0; pa < pre_a; ++pa) {
    for (std::size_t qa = 0; qa < post_a; ++qa) {
      for (std::size_t pb = 0; pb < pre_b; ++pb) {
        for (std::size_t qb = 0; qb < post_b; ++qb) {
          double sum = 0.0;
          for (std::size_t k = 0; k < d; ++k)
            sum += A[(pa * d + k) * post_a + qa] * B[(pb * d + k) * post_b + qb];
          O[(pa * post_a + qa) * out_b + pb * post_b + qb] = sum;
        }
      }
    }
  }
  ensure_finite(out.data(), "contract");
  return out;
}

Tensor self_contract(const Tensor& a, std::size_t axis1, std::size_t axis2) {
  if (axis1 == axis2)
    throw shape_error("self_contract: axes must be distinct", {}, {axis1, axis2});
  std::size_t lo = std::min(axis1, axis2), hi = std::max(axis1, axis2);
  if (hi >= a.rank())
    throw shape_error("self_contract: axis out of range", a.shape(), {lo, hi});
  const std::size_t d = a.shape()[lo];
  if (d != a.shape()[hi])
    throw shape_error("self_contract: paired axes differ in dimension",
                      {d}, {a.shape()[hi]});

  const std::size_t pre = prefix_product(a.shape(), lo);
  std::size_t mid = 1;
  for (std::size_t i = lo + 1; i < hi; ++i) mid *= a.shape()[i];
  const std::size_t post = suffix_product(a.shape(), hi + 1);

  std::vector<std::size_t> shape;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (i != lo && i != hi) shape.push_back(a.shape()[i]);
  Tensor out(std::move(shape));

  const double* A = a.data().data();
  double* O = out.data().data();
  for (std::size_t p = 0; p < pre; ++p) {
    for (std::size_t m = 0; m < mid; ++m) {
      for (std::size_t q = 0; q < post; ++q) {
        double sum = 0.0;
        for (std::size_t k = 0; k < d; ++k)
          sum += A[(((p * d + k) * mid + m) * d + k) * post + q];
        O[(p * mid + m) * post + q] = sum;
      }
    }
  }
  ensure_finite(out.data(), "self_contract");
  return out;
}

Tensor pointwise_mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw shape_error("pointwise_mul: shapes differ", a.shape(), b.shape());
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.data()[i] = a.data()[i] * b.data()[i];
  ensure_finite(out.data(), "pointwise_mul");
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw shape_error("add: shapes differ", a.shape(), b.shape());
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.data()[i] = a.data()[i] + b.data()[i];
  ensure_finite(out.data(), "add");
  return out;
}

Tensor scale(const Tensor& a, double factor) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * factor;
  ensure_finite(out.data(), "scale");
  return out;
}

Tensor frobenius_delta(const Tensor& v) {
  if (v.rank() != 1)
    throw shape_error("frobenius_delta expects a vector", {}, v.shape());
  const std::size_t n = v.shape()[0];
  Tensor out({n, n});
  for (std::size_t i = 0; i < n; ++i) out.data()[i * n + i] = v.data()[i];
  return out;
}

Tensor frobenius_mu(const Tensor& m) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1])
    throw shape_error("frobenius_mu expects a square matrix", {}, m.shape());
  const std::size_t n = m.shape()[0];
  Tensor out({n});
  for (std::size_t i = 0; i < n; ++i) out.data()[i] = m.data()[i * n + i];
  return out;
}

double frobenius_iota(const Tensor& v) {
  if (v.rank() != 1)
    throw shape_error("frobenius_iota expects a vector", {}, v.shape());
  double sum = 0.0;
  for (double x : v.data()) sum += x;
  if (!std::isfinite(sum)) throw numeric_error("frobenius_iota produced a non-finite value");
  return sum;
}

Tensor frobenius_zeta(std::size_t dim) { return Tensor::ones({dim}); }

double dot(const Tensor& v, const Tensor& w) {
  if (v.rank() != 1 || w.rank() != 1)
    throw shape_error("dot expects vectors", v.shape(), w.shape());
  if (v.shape() != w.shape())
    throw shape_error("dot: lengths differ", v.shape(), w.shape());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += v.data()[i] * w.data()[i];
  if (!std::isfinite(sum)) throw numeric_error("dot produced a non-finite value");
  return sum;
}

double norm(const Tensor& v) { return std::sqrt(dot(v, v)); }

double cosine_similarity(const Tensor& v, const Tensor& w) {
  const double nv = norm(v), nw = norm(w);
  if (nv == 0.0 || nw == 0.0)
    throw numeric_error("cosine_similarity of a zero vector is undefined");
  const double c = dot(v, w) / (nv * nw);
  if (!std::isfinite(c)) throw numeric_error("cosine_similarity produced a non-finite value");
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace disco
