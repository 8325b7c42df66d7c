#pragma once

#include <string>
#include <utility>
#include <vector>

#include "orbicover/orbicomplex.hpp"

namespace orbi {

/// Finite simplicial graph; vertices are kept sorted by token.
class DefiningGraph {
 public:
  DefiningGraph() = default;
  /// Throws Error(invalid_graph) on loops, repeated edges or unknown vertices.
  DefiningGraph(std::vector<std::string> vertices,
                std::vector<std::pair<std::string, std::string>> edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  /// Edges as sorted index pairs, sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbours(int v) const { return adjacency_[v]; }
  int index(const std::string& token) const;
  int valence(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool adjacent(int u, int v) const;
  int size() const { return static_cast<int>(vertices_.size()); }
  bool connected() const;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
};

struct Letter {
  std::string generator;
  int exponent = 1;  // +1 or -1

  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  bool operator==(const GroupPresentation&) const = default;
};

/// Throws Error(invalid_graph) if a relator uses an undeclared generator.
void check_presentation(const GroupPresentation& p);

/// Maximal path whose interior vertices have valence 2.
struct Branch {
  std::vector<std::string> path;
  bool start_essential = false;
  bool end_essential = false;

  int size() const { return static_cast<int>(path.size()); }
  bool operator==(const Branch&) const = default;
};

/// Generators are the vertices; relators s^2 for every vertex, then (st)^2 for
/// every edge, both in sorted order.
GroupPresentation racg_presentation(const DefiningGraph& g);

/// Edge-disjoint branches covering all edges, between vertices of valence
/// other than 2. Essential means valence >= 3. Throws NoEssentialVertices when
/// nothing has valence >= 3, invalid_graph when g is disconnected.
std::vector<Branch> branch_decomposition(const DefiningGraph& g);

/// Right-angled polygon for a branch: n mirror segments labelled by the path
/// followed by two free segments (the non-reflection edge split at its
/// midpoint). The first free segment meets the last mirror.
Piece branch_polygon(const Branch& b, std::string id = {});

/// Polygons glued on a star: one centre, one wall-marked leaf and one edge
/// (oriented leaf -> centre) per essential vertex.
Orbicomplex davis_orbicomplex(const DefiningGraph& g);

/// Connected, not complete, and no complete subgraph separates it.
bool one_endedness_check(const DefiningGraph& g);

/// The three-branch-pair graph used for the rigidity counterexample: three
/// valence-4 vertices v1, v2, v3; two 7-vertex branches v1-v2, two 5-vertex
/// branches v1-v3 and two v2-v3.
DefiningGraph example_defining_graph();

}  // namespace orbi
