#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "orbicover/coxeter.hpp"
#include "orbicover/orbicomplex.hpp"

namespace orbi {

/// One step along a target boundary circle: a whole target segment,
/// traversed forwards or backwards.
struct SegmentImage {
  int circle = 0;
  int segment = 0;
  bool reversed = false;

  auto operator<=>(const SegmentImage&) const = default;
};

using SegmentPath = std::vector<SegmentImage>;

struct PieceImage {
  int piece = 0;
  int degree = 1;

  bool operator==(const PieceImage&) const = default;
};

enum class PointKind { cone, corner, smooth };

/// A point of a piece: a cone (index into cones), a corner reflector
/// (junction `index` of boundary circle `circle`), or a smooth interior point.
struct PointRef {
  PointKind kind = PointKind::smooth;
  int index = 0;
  int circle = 0;

  auto operator<=>(const PointRef&) const = default;
};

struct PiecePoint {
  int piece = 0;
  PointRef point;

  auto operator<=>(const PiecePoint&) const = default;
};

/// Preimages of a target cone or corner lying in the interior of source
/// pieces. Boundary preimages of corners are read off the segment map.
struct PointFiber {
  PiecePoint target;
  std::vector<PiecePoint> preimages;

  bool operator==(const PointFiber&) const = default;
};

struct CoveringMap {
  std::shared_ptr<const Orbicomplex> source;
  std::shared_ptr<const Orbicomplex> target;
  int degree = 1;
  std::vector<int> vertex_map;       // source vertex -> target vertex
  std::vector<EdgeWalk> edge_map;    // source edge -> target walk
  std::vector<PieceImage> piece_map; // source piece -> target piece
  /// [piece][circle][segment] -> path along one circle of the image piece.
  std::vector<std::vector<std::vector<SegmentPath>>> segment_map;
  std::vector<PointFiber> point_fibers;
};

/// Tables equal and source/target equal as complexes.
bool operator==(const CoveringMap& a, const CoveringMap& b);

/// The six checks run by verify_covering, in order.
enum class Condition { fiber_sums, piece_euler, boundary, cone_fibers, singular_covering, global_euler };

std::string_view to_string(Condition c);

struct ConditionResult {
  Condition condition;
  bool pass = true;
  std::vector<std::string> witnesses;  // offending cells, empty on pass
};

struct VerifyReport {
  std::vector<ConditionResult> conditions;

  bool passed() const;
  const ConditionResult& operator[](Condition c) const;
};

/// Throws MismatchedComplexes when the map does not fit its source and
/// target (wrong table sizes, indices out of range) or either is invalid.
VerifyReport verify_covering(const CoveringMap& f);

CoveringMap identity_cover(std::shared_ptr<const Orbicomplex> c);

/// outer o inner; inner.target must be outer.source.
CoveringMap compose(const CoveringMap& outer, const CoveringMap& inner);

/// Unfolds a polygon across all its mirrors. The source is a disk with one
/// order-2 cone per corner reflector. Throws NotAPolygon.
std::pair<Piece, CoveringMap> reflection_double(const Piece& polygon);

/// Rotation by pi of a disk with order-2 cones: the first target cone is the
/// image of the rotation centre and has one smooth preimage, each other cone
/// has two cone preimages. Throws NotADiskOrbifold.
std::pair<Piece, CoveringMap> rotation_double(const Piece& disk);

/// The explicit degree-2 cover of the Davis orbicomplex of example_defining_graph
/// by six cone disks glued on a theta graph.
std::pair<Orbicomplex, CoveringMap> build_x1();

/// Z/2 values on the generators of fundamental_group_presentation; missing
/// generators count as 0.
struct TwoTorsionLabeling {
  std::map<std::string, int> values;

  int operator()(const std::string& generator) const;
  auto operator<=>(const TwoTorsionLabeling&) const = default;
};

bool is_homomorphism(const GroupPresentation& p, const TwoTorsionLabeling& phi);

/// Degree-2 cover with monodromy phi. Graph vertices whose local involution
/// maps to 1 become unramified fold points and are suppressed when they end
/// up with valence 2. Throws NotAHomomorphism, NotSurjective, and
/// UnsupportedPiece for polygons whose mirrors are not all labelled alike or
/// that carry cones.
std::pair<Orbicomplex, CoveringMap> double_cover(const Orbicomplex& c, const TwoTorsionLabeling& phi);

struct DoubleCover {
  TwoTorsionLabeling labeling;
  Orbicomplex complex;
  CoveringMap map;
};

/// Every nonzero labeling of the attaching-graph cycle generators, completed
/// on cones piece by piece: all cones 0 when the boundary parity is 0,
/// otherwise only the first cone is 1. Sorted by labeling. Throws
/// MirrorsPresent.
std::vector<DoubleCover> enumerate_double_covers(const Orbicomplex& c);

struct SurfaceTower {
  Piece surface;   // S_{g,4}
  Piece annulus;   // A(2g+2)
  Piece disk;      // D^2(g+3)
  CoveringMap upper;  // surface -> annulus
  CoveringMap lower;  // annulus -> disk
};

/// Standalone pieces; every boundary circle has `segments` free segments.
/// Throws BadGenus for g < 1.
SurfaceTower surface_over_disk_tower(int genus, int segments = 1);

/// Degree-4 cover: four copies of the attaching graph, each cone disk D^2(k)
/// replaced by S_{k-3,4} glued once to each copy. Throws UnsupportedPiece.
std::pair<Orbicomplex, CoveringMap> torsion_free_cover(const Orbicomplex& c);

}  // namespace orbi
