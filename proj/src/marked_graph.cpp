#include "orbicover/marked_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "orbicover/error.hpp"

namespace orbi {

EdgeWalk inverse(const EdgeWalk& walk) {
  EdgeWalk out;
  out.reserve(walk.size());
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) out.push_back(it->inverse());
  return out;
}

int MarkedGraph::add_vertex(std::string id, Mark mark, std::string wall) {
  vertices.push_back({std::move(id), mark, std::move(wall)});
  return vertex_count() - 1;
}

int MarkedGraph::add_edge(std::string id, int tail, int head, int multiplicity) {
  edges.push_back({std::move(id), tail, head, multiplicity});
  return edge_count() - 1;
}

std::optional<int> MarkedGraph::find_vertex(const std::string& id) const {
  for (int v = 0; v < vertex_count(); ++v) {
    if (vertices[v].id == id) return v;
  }
  return std::nullopt;
}

std::optional<int> MarkedGraph::find_edge(const std::string& id) const {
  for (int e = 0; e < edge_count(); ++e) {
    if (edges[e].id == id) return e;
  }
  return std::nullopt;
}

std::vector<Dart> MarkedGraph::darts_at(int v) const {
  std::vector<Dart> out;
  for (int e = 0; e < edge_count(); ++e) {
    if (edges[e].tail == v) out.push_back({e, EdgeEnd::tail});
    if (edges[e].head == v) out.push_back({e, EdgeEnd::head});
  }
  return out;
}

std::vector<int> MarkedGraph::component_labels() const {
  std::vector<int> parent(vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e.tail)] = find(e.head);
  std::map<int, int> number;
  std::vector<int> label(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) {
    auto [it, _] = number.emplace(find(v), static_cast<int>(number.size()));
    label[v] = it->second;
  }
  return label;
}

int MarkedGraph::component_count() const {
  auto labels = component_labels();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

std::vector<bool> spanning_forest(const MarkedGraph& g) {
  std::vector<int> order(g.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.vertices[a].id < g.vertices[b].id; });

  std::vector<std::vector<Dart>> darts(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) darts[v] = g.darts_at(v);

  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<bool> tree(g.edge_count(), false);
  for (int root : order) {
    if (seen[root]) continue;
    seen[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (const Dart& d : darts[v]) {
        const auto& e = g.edges[d.edge];
        int w = d.end == EdgeEnd::tail ? e.head : e.tail;
        if (seen[w]) continue;
        seen[w] = true;
        tree[d.edge] = true;
        queue.push_back(w);
      }
    }
  }
  return tree;
}

MarkedGraph topological_form(const MarkedGraph& input) {
  MarkedGraph g = input;
  while (true) {
    int target = -1;
    std::vector<Dart> darts;
    for (int v = 0; v < g.vertex_count() && target < 0; ++v) {
      if (g.vertices[v].mark != Mark::none) continue;
      darts = g.darts_at(v);
      if (darts.size() != 2 || darts[0].edge == darts[1].edge) continue;
      if (g.edges[darts[0].edge].multiplicity != g.edges[darts[1].edge].multiplicity) continue;
      target = v;
    }
    if (target < 0) return g;

    int a = darts[0].edge, b = darts[1].edge;
    auto far = [&](const Dart& d) {
      return d.end == EdgeEnd::tail ? g.edges[d.edge].head : g.edges[d.edge].tail;
    };
    g.edges[a].tail = far(darts[0]);
    g.edges[a].head = far(darts[1]);
    g.edges.erase(g.edges.begin() + b);
    g.vertices.erase(g.vertices.begin() + target);
    for (auto& e : g.edges) {
      if (e.tail > target) --e.tail;
      if (e.head > target) --e.head;
    }
  }
}

LabeledGraph to_labeled_graph(const MarkedGraph& g) {
  LabeledGraph out;
  for (const auto& v : g.vertices) {
    out.add_vertex(v.mark == Mark::none ? "plain" : v.mark == Mark::wall ? "wall" : "ram2");
  }
  for (const auto& e : g.edges) out.add_edge(e.tail, e.head, std::to_string(e.multiplicity));
  return out;
}

std::optional<std::vector<int>> marked_graph_isomorphism(const MarkedGraph& g1,
                                                         const MarkedGraph& g2) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) {
    return std::nullopt;
  }
  return find_isomorphism(to_labeled_graph(g1), to_labeled_graph(g2));
}

MarkedGraph disjoint_union(const std::vector<MarkedGraph>& parts) {
  MarkedGraph out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    int offset = out.vertex_count();
    std::string suffix = "#" + std::to_string(i);
    for (const auto& v : parts[i].vertices) {
      out.add_vertex(v.id + suffix, v.mark, v.wall.empty() ? v.wall : v.wall + suffix);
    }
    for (const auto& e : parts[i].edges) {
      out.add_edge(e.id + suffix, e.tail + offset, e.head + offset, e.multiplicity);
    }
  }
  return out;
}

void check_rotation(const MarkedGraph& g, const RotationSystem& rotation) {
  if (static_cast<int>(rotation.size()) != g.vertex_count()) {
    throw Error(ErrorKind::malformed_rotation, "rotation has " + std::to_string(rotation.size()) +
                                                   " vertices, graph has " +
                                                   std::to_string(g.vertex_count()));
  }
  std::map<Dart, int> seen;
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (const Dart& d : rotation[v]) {
      if (d.edge < 0 || d.edge >= g.edge_count()) {
        throw Error(ErrorKind::malformed_rotation, "unknown edge at vertex " + g.vertices[v].id);
      }
      if (g.endpoint(d) != v) {
        throw Error(ErrorKind::malformed_rotation,
                    "dart of " + g.edges[d.edge].id + " listed at wrong vertex " + g.vertices[v].id);
      }
      if (++seen[d] > 1) {
        throw Error(ErrorKind::malformed_rotation, "dart of " + g.edges[d.edge].id + " repeated");
      }
    }
  }
  if (static_cast<int>(seen.size()) != 2 * g.edge_count()) {
    throw Error(ErrorKind::malformed_rotation, "rotation misses some edge ends");
  }
}

RotationSystem edge_order_rotation(const MarkedGraph& g) {
  RotationSystem r(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) r[v] = g.darts_at(v);
  return r;
}

RibbonSurface ribbon_neighborhood(const MarkedGraph& g, const RotationSystem& rotation) {
  check_rotation(g, rotation);

  std::map<Dart, std::pair<int, int>> position;
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (int i = 0; i < static_cast<int>(rotation[v].size()); ++i) position[rotation[v][i]] = {v, i};
  }

  const auto component = g.component_labels();
  const int ncomp = g.component_count();
  std::vector<int> vcount(ncomp, 0), ecount(ncomp, 0), fcount(ncomp, 0);
  for (int v = 0; v < g.vertex_count(); ++v) ++vcount[component[v]];
  for (const auto& e : g.edges) ++ecount[component[e.tail]];

  RibbonSurface out;
  std::map<Dart, bool> visited;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (rotation[v].empty()) {
      out.boundary.emplace_back();
      out.boundary_component.push_back(component[v]);
      ++fcount[component[v]];
      continue;
    }
    for (const Dart& start : rotation[v]) {
      if (visited[start]) continue;
      EdgeWalk circuit;
      Dart d = start;
      do {
        visited[d] = true;
        circuit.push_back({d.edge, d.end == EdgeEnd::head});
        Dart opposite{d.edge, d.end == EdgeEnd::tail ? EdgeEnd::head : EdgeEnd::tail};
        auto [w, i] = position.at(opposite);
        d = rotation[w][(i + 1) % rotation[w].size()];
      } while (d != start);
      out.boundary.push_back(std::move(circuit));
      out.boundary_component.push_back(component[v]);
      ++fcount[component[v]];
    }
  }

  for (int c = 0; c < ncomp; ++c) {
    int twice_genus = 2 - vcount[c] + ecount[c] - fcount[c];
    out.components.push_back({twice_genus / 2, fcount[c]});
    out.genus += twice_genus / 2;
  }
  return out;
}

bool same_circuit(const EdgeWalk& a, const EdgeWalk& b, bool allow_reversal) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  auto rotated_equal = [](const EdgeWalk& x, const EdgeWalk& y) {
    const std::size_t n = x.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) ok = x[i] == y[(i + shift) % n];
      if (ok) return true;
    }
    return false;
  };
  return rotated_equal(a, b) || (allow_reversal && rotated_equal(a, inverse(b)));
}

std::string to_dot(const MarkedGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& vx = g.vertices[v];
    std::string label = vx.id;
    if (vx.mark == Mark::ramification) label += " (2)";
    if (vx.mark == Mark::wall) label += " (wall " + vx.wall + ")";
    out << "  v" << v << " [label=\"" << label << "\"";
    if (vx.mark != Mark::none) out << ", shape=box";
    out << "];\n";
  }
  for (const auto& e : g.edges) {
    out << "  v" << e.tail << " -- v" << e.head << " [label=\"" << e.id << " x" << e.multiplicity
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace orbi
