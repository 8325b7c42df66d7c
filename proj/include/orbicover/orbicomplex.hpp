#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "orbicover/marked_graph.hpp"

namespace orbi {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class SegmentKind { mirror, free };

struct Segment {
  SegmentKind kind = SegmentKind::free;
  std::string label;

  bool operator==(const Segment&) const = default;
};

/// Cyclic sequence of segments. Junction j sits at the start of segment j, so
/// segment j runs from junction j to junction (j + 1) mod size. Segment order
/// follows the boundary orientation induced by the piece.
struct BoundaryCircle {
  std::vector<Segment> segments;

  int size() const { return static_cast<int>(segments.size()); }
  bool operator==(const BoundaryCircle&) const = default;
};

/// Compact orientable 2-orbifold with boundary. Mirror segments carry
/// reflections; junctions between two mirrors are right-angled corner
/// reflectors.
struct Piece {
  std::string id;
  int genus = 0;
  std::vector<BoundaryCircle> boundary;
  std::vector<int> cones;  // cone orders, each >= 2

  int mirror_count() const;
  bool has_mirrors() const { return mirror_count() > 0; }
  bool operator==(const Piece&) const = default;
};

/// Local group order at junction j of a circle: 4 between two mirrors,
/// 2 between a mirror and a free segment, 1 otherwise.
int junction_order(const BoundaryCircle& circle, int junction);

struct SegmentRef {
  int piece = 0;
  int circle = 0;
  int segment = 0;

  auto operator<=>(const SegmentRef&) const = default;
};

/// Pieces glued to an attaching graph: every attached free segment maps onto
/// one directed graph edge. The optional rotation system fixes a planar
/// thickening of the attaching graph for built-in constructions.
struct Orbicomplex {
  std::vector<Piece> pieces;
  MarkedGraph graph;
  std::map<SegmentRef, DirectedEdge> attachments;
  std::optional<RotationSystem> rotation;

  std::optional<int> find_piece(const std::string& id) const;
  const DirectedEdge* attachment(const SegmentRef& ref) const;
  bool operator==(const Orbicomplex&) const = default;
};

enum class ViolationKind {
  dangling_attachment,
  mirror_attached,
  multiplicity_mismatch,
  discontinuous_attachment,
  junction_stabilizer_mismatch,
  bad_piece,
  mirror_shape,
  duplicate_id,
  bad_edge,
  bad_wall_label,
  malformed_rotation,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string cell;
  std::string detail;
};

std::vector<Violation> validate_complex(const Orbicomplex& c);

/// Throws Error(invalid_complex) naming the first violation.
void require_valid(const Orbicomplex& c);

/// Orbifold Euler characteristic of a piece on its own, free boundary
/// included.
Rational piece_euler_characteristic(const Piece& p);

/// chi(attaching graph, marked vertices weighted 1/2) plus, per piece,
/// chi^orb(piece) minus the part of its boundary identified with the graph.
Rational euler_characteristic(const Orbicomplex& c);

/// The attaching graph with multiplicities; wall marks are reported as
/// order-2 ramification points.
MarkedGraph singular_subspace(const Orbicomplex& c);

/// A complex made of one unattached piece and an empty graph.
Orbicomplex standalone(const Piece& p);

/// Closed edge walk of a circle whose segments are all attached.
std::optional<EdgeWalk> circle_walk(const Orbicomplex& c, int piece, int circle);

/// Homeomorphism-type key of a piece: genus, boundary count, mirror count and
/// sorted cone orders, e.g. "g0 b1 m0 c2,2,2,2".
std::string piece_type(const Piece& p);

/// Number of pieces per piece_type.
std::map<std::string, int> piece_census(const Orbicomplex& c);

/// Disk with the given number of order-2 cones and free boundary circle.
std::string disk_type(int cones);

/// Encodes the complex (graph, pieces, segments, junctions, attachments) as
/// a labelled graph; ids and segment labels are ignored.
LabeledGraph to_labeled_graph(const Orbicomplex& c);

/// Combinatorial isomorphism of complexes up to renaming, with each boundary
/// circle free to be traversed in either direction.
bool orbicomplex_isomorphic(const Orbicomplex& a, const Orbicomplex& b);

}  // namespace orbi
