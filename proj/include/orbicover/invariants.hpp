#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbicover/coxeter.hpp"
#include "orbicover/orbicomplex.hpp"

namespace orbi {

/// Orbifold fundamental group by van Kampen over the attaching graph.
///
/// Generators, in order:
///   e:<edge>          attaching-graph edges outside the spanning forest
///   w:<wall>, r:<v>   local involution at each wall / ramification vertex
///   t:<piece>:<k>     circle k of a piece closing a cycle in the
///                     component/piece incidence graph
///   per piece: m:<piece>:<seg> mirrors, a:/b:<piece>:<i> handles,
///              c:<piece>:<i> cones, d:<piece>:<k> unattached circles
///
/// Throws Disconnected when the complex is not connected and
/// UnsupportedPiece for boundary shapes outside the model (a surface circle
/// only partly attached, several free runs on a polygon, cones on a polygon).
GroupPresentation fundamental_group_presentation(const Orbicomplex& c);

/// Name of the w:/r: generator of a marked vertex.
std::string local_generator(const MarkedGraph& g, int v);

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Nonzero invariant factors d1 | d2 | ..., all positive.
std::vector<BigInt> smith_normal_form(IntMatrix m);

/// Exponent-sum matrix: one row per relator, one column per generator.
IntMatrix relation_matrix(const GroupPresentation& p);

struct AbelianInvariants {
  int free_rank = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1

  /// Number of cyclic factors of even order.
  int two_rank() const;
  bool operator==(const AbelianInvariants&) const = default;
};

AbelianInvariants abelianization(const GroupPresentation& p);

std::string to_string(const AbelianInvariants& a);

/// Rational ranks of H1 and H2 of the presentation 2-complex.
struct PresentationHomology {
  int h1 = 0;
  int h2 = 0;
};

PresentationHomology presentation_homology(const GroupPresentation& p);

/// Regular neighbourhood of the attaching graph, plus which of its boundary
/// circles each piece circle is glued to.
struct NormalForm {
  std::vector<RibbonComponent> components;
  std::vector<int> circle_component;            // per neighbourhood circle
  std::vector<std::string> piece_types;         // per piece
  std::vector<std::vector<int>> piece_circles;  // per piece, per boundary circle

  /// For each neighbourhood circle, the sorted types of the pieces glued to it.
  std::vector<std::vector<std::string>> carriers() const;
};

LabeledGraph to_labeled_graph(const NormalForm& nf);

/// None when some piece has mirrors, a partly attached circle, or an
/// attachment circuit that is not a face of the ribbon structure.
/// Throws MalformedRotation for a bad rotation.
std::optional<NormalForm> planar_normal_form(const Orbicomplex& c, const RotationSystem& rotation);

/// Uses the rotation carried by the complex; none if it has no rotation.
std::optional<NormalForm> planar_normal_form(const Orbicomplex& c);

struct HomotopyCertificate {
  NormalForm first;
  NormalForm second;
  std::vector<int> mapping;  // node bijection between the encoded normal forms
};

std::optional<HomotopyCertificate> homotopy_equivalence_certificate(const Orbicomplex& a,
                                                                   const Orbicomplex& b);

/// No cones, no mirrors and no marked graph vertices.
bool torsion_freeness(const Orbicomplex& c);

enum class CertificateStatus { present, absent, inconclusive };

std::string_view to_string(CertificateStatus s);

struct CompareReport {
  Rational euler[2];
  std::optional<std::vector<int>> singular_bijection;
  std::optional<AbelianInvariants> abelian[2];
  CertificateStatus certificate = CertificateStatus::inconclusive;
  std::vector<std::string> verdicts;

  bool homeomorphic_compatible() const;
};

CompareReport compare_report(const Orbicomplex& a, const Orbicomplex& b);

}  // namespace orbi
