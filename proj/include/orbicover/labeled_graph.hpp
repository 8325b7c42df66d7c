#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace orbi {

/// Undirected multigraph with string-labelled vertices and edges. This is the
/// common currency for every isomorphism question in the library: marked
/// graphs, normal-form incidence structures and whole orbicomplexes are all
/// encoded as a LabeledGraph before being compared.
class LabeledGraph {
 public:
  int add_vertex(std::string label);
  void add_edge(int u, int v, std::string label = {});

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int v) const { return labels_[v]; }

  /// Sorted labels of all edges joining u and v (loops when u == v).
  const std::vector<std::string>& between(int u, int v) const;
  const std::vector<int>& neighbours(int v) const { return adjacency_[v]; }
  int edge_count() const { return edge_count_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> adjacency_;
  std::map<std::pair<int, int>, std::vector<std::string>> edges_;
  int edge_count_ = 0;
};

/// Label- and adjacency-preserving bijection a -> b, if one exists.
/// Colour refinement prunes the candidates; the search itself is plain
/// backtracking with a deterministic candidate order.
std::optional<std::vector<int>> find_isomorphism(const LabeledGraph& a,
                                                 const LabeledGraph& b);

/// Calls visit(mapping) for every isomorphism until visit returns false.
void for_each_isomorphism(const LabeledGraph& a, const LabeledGraph& b,
                          const std::function<bool(const std::vector<int>&)>& visit);

}  // namespace orbi
