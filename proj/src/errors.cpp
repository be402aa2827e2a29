#include "disco/errors.hpp"

namespace disco {

std::string dims_to_string(const std::vector<std::size_t>& dims) {
  std::string out = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(dims[i]);
  }
  return out + "]";
}

namespace {
std::string shape_message(const std::string& msg,
                          const std::vector<std::size_t>& expected,
                          const std::vector<std::size_t>& actual) {
  if (expected.empty() && actual.empty()) return msg;
  return msg + " (expected " + dims_to_string(expected) + ", got " +
         dims_to_string(actual) + ")";
}
}  // namespace

shape_error::shape_error(const std::string& msg,
                         std::vector<std::size_t> expected_dims,
                         std::vector<std::size_t> actual_dims)
    : error(shape_message(msg, expected_dims, actual_dims)),
      expected(std::move(expected_dims)),
      actual(std::move(actual_dims)) {}

}  // namespace disco
