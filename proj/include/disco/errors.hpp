#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace disco {

// Base class for everything thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed concrete syntax (type strings, JSON documents).
struct parse_error : error {
  using error::error;
};

// Semantic constraint violated: bad lexicon record, class/type mismatch,
// diagram that does not validate, unusable configuration.
struct validation_error : error {
  using error::error;
};

// Tensor shape or axis problem; carries the offending dimension lists.
struct shape_error : error {
  std::vector<std::size_t> expected;
  std::vector<std::size_t> actual;
  shape_error(const std::string& msg,
              std::vector<std::size_t> expected_dims = {},
              std::vector<std::size_t> actual_dims = {});
};

// A computation produced NaN or infinity, or was asked to divide by zero.
struct numeric_error : error {
  using error::error;
};

// A size cap or complexity cap was exceeded.
struct resource_error : error {
  using error::error;
};

// File could not be opened or read.
struct io_error : error {
  using error::error;
};

std::string dims_to_string(const std::vector<std::size_t>& dims);

}  // namespace disco
