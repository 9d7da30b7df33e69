#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latcoset {

/// Classifies every failure the library reports.
enum class ErrorKind {
  non_square,
  singular_generator,
  dimension_mismatch,
  not_orthogonal,
  singular_relation,
  not_sublattice,
  invalid_argument,
  radius_overflow,
  point_count_cap,
  domain_error,
  not_a_skewing,
  parse_error,
  io_error,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::non_square: return "NonSquare";
    case ErrorKind::singular_generator: return "SingularGenerator";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::not_orthogonal: return "NotOrthogonal";
    case ErrorKind::singular_relation: return "SingularRelation";
    case ErrorKind::not_sublattice: return "NotSublattice";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::radius_overflow: return "RadiusOverflow";
    case ErrorKind::point_count_cap: return "PointCountCap";
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::not_a_skewing: return "NotASkewing";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::io_error: return "IoError";
  }
  return "Unknown";
}

/// Single exception type; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace latcoset
