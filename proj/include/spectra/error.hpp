#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spectra {

enum class ErrorCode {
  syntax_error,
  unknown_function,
  unbalanced_parentheses,
  unbound_parameter,
  evaluation_singularity,
  invalid_extent,
  grid_mismatch,
  dimension_mismatch,
  zero_function,
  non_convergence,
  divergence,
  no_closed_form,
  unknown_catalog_id,
  invalid_parameter,
  schema_violation,
  io_failure,
};

/// Stable, machine-readable name of an error code (used in CLI JSON output).
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure; offset is the byte position in the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, std::size_t offset, const std::string& message)
      : Error(code, message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Potential evaluated at a point where it is undefined or non-finite.
class SingularityError : public Error {
 public:
  static constexpr std::size_t no_index = static_cast<std::size_t>(-1);

  SingularityError(double coordinate, std::size_t node_index, const std::string& what)
      : Error(ErrorCode::evaluation_singularity,
              what + " at coordinate " + std::to_string(coordinate) +
                  (node_index == no_index ? std::string{} : " (node " + std::to_string(node_index) + ")")),
        coordinate_(coordinate),
        node_index_(node_index) {}

  double coordinate() const noexcept { return coordinate_; }
  std::size_t node_index() const noexcept { return node_index_; }

 private:
  double coordinate_;
  std::size_t node_index_;
};

/// Config schema violation; path is a JSON pointer to the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(ErrorCode::schema_violation, path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace spectra
