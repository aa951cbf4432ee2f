#ifndef SEIFERT_MANIFOLD_IO_HPP
#define SEIFERT_MANIFOLD_IO_HPP

// Line-oriented manifold files:
//
//     # comment
//     block <id> genus <int> free <int>
//     edge <id> <id> glue <a> <b> <c> <d>
//
// Tokens are separated by arbitrary whitespace; `#` starts a comment anywhere
// on a line. Block ids use letters, digits and `_ . -`. Edges may name blocks
// declared later in the file.

#include "seifert/manifold.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seifert {

class ManifoldFileError : public std::runtime_error {
 public:
  ManifoldFileError(std::size_t line, const std::string& message);
  /// Validation failure; `message` already lists the lines.
  ManifoldFileError(std::size_t line, const std::string& message, ValidationReport report);

  /// 1-based line of the first problem, 0 when no single line is to blame.
  std::size_t line() const { return line_; }
  const std::optional<ValidationReport>& report() const { return report_; }

 private:
  std::size_t line_ = 0;
  std::optional<ValidationReport> report_;
};

/// Syntax only: no validation beyond what the grammar needs (known blocks,
/// unique ids). Throws ManifoldFileError.
GraphManifold parse_manifold_syntax(std::string_view text);

/// Parses and validates. Violations are reported with the line of the
/// offending block or edge. Throws ManifoldFileError.
GraphManifold parse_manifold(std::string_view text);

/// Reads a file and calls parse_manifold. Throws ManifoldFileError, also when
/// the file cannot be read.
GraphManifold load_manifold(const std::string& path);

/// Blocks and edges in stored order; parse_manifold_syntax inverts it exactly.
std::string serialize_manifold(const GraphManifold& m);

/// Blocks sorted by id, each edge stored from the smaller id to the larger
/// (matrix inverted when that flips it), edges sorted by endpoint ids.
GraphManifold canonical_form(const GraphManifold& m);

/// Hex SHA-256 of serialize_manifold(canonical_form(m)).
std::string manifold_hash(const GraphManifold& m);

bool is_valid_block_id(std::string_view id);

}  // namespace seifert

#endif  // SEIFERT_MANIFOLD_IO_HPP
