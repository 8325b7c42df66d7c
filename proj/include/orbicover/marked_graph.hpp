#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "orbicover/labeled_graph.hpp"

namespace orbi {

enum class Mark { none, ramification, wall };

struct GraphVertex {
  std::string id;
  Mark mark = Mark::none;
  std::string wall;  // wall class label; only meaningful for Mark::wall

  bool operator==(const GraphVertex&) const = default;
};

struct GraphEdge {
  std::string id;
  int tail = 0;
  int head = 0;
  int multiplicity = 0;  // number of piece segments attached along the edge

  bool operator==(const GraphEdge&) const = default;
};

enum class EdgeEnd { tail, head };

/// One end of an edge, seen from the vertex it is incident to.
struct Dart {
  int edge = 0;
  EdgeEnd end = EdgeEnd::tail;

  auto operator<=>(const Dart&) const = default;
};

/// An edge traversed in a direction: tail -> head unless reversed.
struct DirectedEdge {
  int edge = 0;
  bool reversed = false;

  auto operator<=>(const DirectedEdge&) const = default;
  DirectedEdge inverse() const { return {edge, !reversed}; }
};

using EdgeWalk = std::vector<DirectedEdge>;

EdgeWalk inverse(const EdgeWalk& walk);

/// Cyclic order of darts around each vertex, indexed by vertex.
using RotationSystem = std::vector<std::vector<Dart>>;

/// Finite multigraph whose vertices may carry an order-2 ramification mark or
/// a reflection-wall mark, and whose edges carry attachment multiplicities.
struct MarkedGraph {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;

  int add_vertex(std::string id, Mark mark = Mark::none, std::string wall = {});
  int add_edge(std::string id, int tail, int head, int multiplicity = 0);

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  std::optional<int> find_vertex(const std::string& id) const;
  std::optional<int> find_edge(const std::string& id) const;

  /// Local group order at a vertex: 2 for any mark, 1 otherwise.
  int stabilizer_order(int v) const { return vertices[v].mark == Mark::none ? 1 : 2; }

  /// Darts at v in edge order; a loop contributes both of its ends.
  std::vector<Dart> darts_at(int v) const;
  int valence(int v) const { return static_cast<int>(darts_at(v).size()); }

  int start(const DirectedEdge& d) const { return d.reversed ? edges[d.edge].head : edges[d.edge].tail; }
  int finish(const DirectedEdge& d) const { return d.reversed ? edges[d.edge].tail : edges[d.edge].head; }
  int endpoint(const Dart& d) const { return d.end == EdgeEnd::tail ? edges[d.edge].tail : edges[d.edge].head; }

  /// Connected-component index per vertex, numbered in order of first vertex.
  std::vector<int> component_labels() const;
  int component_count() const;

  bool operator==(const MarkedGraph&) const = default;
};

/// Spanning forest: BFS in each component from its lexicographically least
/// vertex id, scanning incident edges in edge order. Returns tree flags per edge.
std::vector<bool> spanning_forest(const MarkedGraph& g);

/// Suppresses unmarked valence-2 vertices whose two (distinct) incident edges
/// carry equal multiplicity, repeatedly. The merged edge keeps the id of the
/// lower-indexed edge.
MarkedGraph topological_form(const MarkedGraph& g);

/// Vertex bijection g1 -> g2 preserving marks and, for every vertex pair, the
/// multiset of multiplicities of the edges joining them.
std::optional<std::vector<int>> marked_graph_isomorphism(const MarkedGraph& g1,
                                                         const MarkedGraph& g2);

LabeledGraph to_labeled_graph(const MarkedGraph& g);

MarkedGraph disjoint_union(const std::vector<MarkedGraph>& parts);

struct RibbonComponent {
  int genus = 0;
  int boundary_circles = 0;

  auto operator<=>(const RibbonComponent&) const = default;
};

/// Thickened graph described by a rotation system.
struct RibbonSurface {
  int genus = 0;  // summed over components
  std::vector<EdgeWalk> boundary;            // one face circuit per boundary circle
  std::vector<int> boundary_component;       // component index of each circuit
  std::vector<RibbonComponent> components;   // in component_labels() order
};

/// Traces the faces of the ribbon graph. Each connected component satisfies
/// V - E + F = 2 - 2 genus; an isolated vertex is a disk with one empty circuit.
RibbonSurface ribbon_neighborhood(const MarkedGraph& g, const RotationSystem& rotation);

/// Throws Error(malformed_rotation) unless every dart appears exactly once,
/// at the vertex it is incident to.
void check_rotation(const MarkedGraph& g, const RotationSystem& rotation);

/// Rotation listing the darts at each vertex in edge order.
RotationSystem edge_order_rotation(const MarkedGraph& g);

/// True if the closed walks are equal up to cyclic shift (and, when
/// allow_reversal, up to reversal).
bool same_circuit(const EdgeWalk& a, const EdgeWalk& b, bool allow_reversal);

std::string to_dot(const MarkedGraph& g, const std::string& name = "singular");

}  // namespace orbi
