#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbi {

enum class ErrorKind {
  parse,
  invalid_graph,
  invalid_complex,
  no_essential_vertices,
  unsupported_defining_graph,
  branch_too_short,
  not_a_polygon,
  not_a_disk_orbifold,
  not_a_homomorphism,
  not_surjective,
  mirrors_present,
  bad_genus,
  unsupported_piece,
  malformed_rotation,
  disconnected,
  mismatched_complexes,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports is an orbi::Error; the kind drives the
// CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::invalid_graph: return "InvalidGraph";
    case ErrorKind::invalid_complex: return "InvalidComplex";
    case ErrorKind::no_essential_vertices: return "NoEssentialVertices";
    case ErrorKind::unsupported_defining_graph: return "UnsupportedDefiningGraph";
    case ErrorKind::branch_too_short: return "BranchTooShort";
    case ErrorKind::not_a_polygon: return "NotAPolygon";
    case ErrorKind::not_a_disk_orbifold: return "NotADiskOrbifold";
    case ErrorKind::not_a_homomorphism: return "NotAHomomorphism";
    case ErrorKind::not_surjective: return "NotSurjective";
    case ErrorKind::mirrors_present: return "MirrorsPresent";
    case ErrorKind::bad_genus: return "BadGenus";
    case ErrorKind::unsupported_piece: return "UnsupportedPiece";
    case ErrorKind::malformed_rotation: return "MalformedRotation";
    case ErrorKind::disconnected: return "Disconnected";
    case ErrorKind::mismatched_complexes: return "MismatchedComplexes";
  }
  return "Error";
}

}  // namespace orbi
