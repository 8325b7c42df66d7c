#include "orbicover/coxeter.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "orbicover/error.hpp"

namespace orbi {

DefiningGraph::DefiningGraph(std::vector<std::string> vertices,
                             std::vector<std::pair<std::string, std::string>> edges) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw Error(ErrorKind::invalid_graph, "repeated vertex");
  }
  vertices_ = std::move(vertices);
  adjacency_.resize(vertices_.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    int u = index(a), v = index(b);
    if (u == v) throw Error(ErrorKind::invalid_graph, "loop at " + a);
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw Error(ErrorKind::invalid_graph, "repeated edge " + a + "-" + b);
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  edges_.assign(seen.begin(), seen.end());
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

int DefiningGraph::index(const std::string& token) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), token);
  if (it == vertices_.end() || *it != token) throw Error(ErrorKind::invalid_graph, "unknown vertex " + token);
  return static_cast<int>(it - vertices_.begin());
}

bool DefiningGraph::adjacent(int u, int v) const {
  return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

bool DefiningGraph::connected() const {
  if (vertices_.empty()) return true;
  std::vector<bool> seen(size(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == size();
}

void check_presentation(const GroupPresentation& p) {
  std::set<std::string> gens(p.generators.begin(), p.generators.end());
  for (const auto& w : p.relators) {
    for (const auto& l : w) {
      if (!gens.count(l.generator)) throw Error(ErrorKind::invalid_graph, "undeclared generator " + l.generator);
    }
  }
}

GroupPresentation racg_presentation(const DefiningGraph& g) {
  GroupPresentation p;
  p.generators = g.vertices();
  for (const auto& s : g.vertices()) p.relators.push_back({{s, 1}, {s, 1}});
  for (auto [u, v] : g.edges()) {
    const auto& s = g.vertices()[u];
    const auto& t = g.vertices()[v];
    p.relators.push_back({{s, 1}, {t, 1}, {s, 1}, {t, 1}});
  }
  return p;
}

std::vector<Branch> branch_decomposition(const DefiningGraph& g) {
  if (!g.connected()) throw Error(ErrorKind::invalid_graph, "defining graph is disconnected");
  bool any_essential = false;
  for (int v = 0; v < g.size(); ++v) any_essential |= g.valence(v) >= 3;
  if (!any_essential) throw Error(ErrorKind::no_essential_vertices, "no vertex of valence >= 3");

  std::set<std::pair<int, int>> used;
  std::vector<Branch> branches;
  for (int v = 0; v < g.size(); ++v) {
    if (g.valence(v) == 2) continue;
    for (int first : g.neighbours(v)) {
      if (used.count(std::minmax(v, first))) continue;
      std::vector<int> path{v};
      int prev = v, cur = first;
      used.insert(std::minmax(prev, cur));
      while (g.valence(cur) == 2) {
        path.push_back(cur);
        int next = g.neighbours(cur)[0] == prev ? g.neighbours(cur)[1] : g.neighbours(cur)[0];
        prev = cur;
        cur = next;
        used.insert(std::minmax(prev, cur));
      }
      path.push_back(cur);

      Branch b;
      for (int x : path) b.path.push_back(g.vertices()[x]);
      auto reversed = b.path;
      std::reverse(reversed.begin(), reversed.end());
      if (reversed < b.path) b.path = reversed;
      b.start_essential = g.valence(g.index(b.path.front())) >= 3;
      b.end_essential = g.valence(g.index(b.path.back())) >= 3;
      branches.push_back(std::move(b));
    }
  }
  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
    return std::tie(a.path.front(), a.path.back(), a.path) < std::tie(b.path.front(), b.path.back(), b.path);
  });
  return branches;
}

Piece branch_polygon(const Branch& b, std::string id) {
  if (b.size() < 2) throw Error(ErrorKind::branch_too_short, "branch needs at least 2 vertices");
  Piece p;
  p.id = id.empty() ? "P:" + b.path.front() + "~" + b.path.back() : std::move(id);
  BoundaryCircle circle;
  for (const auto& v : b.path) circle.segments.push_back({SegmentKind::mirror, v});
  circle.segments.push_back({SegmentKind::free, "f:" + b.path.back()});
  circle.segments.push_back({SegmentKind::free, "f:" + b.path.front()});
  p.boundary.push_back(std::move(circle));
  return p;
}

Orbicomplex davis_orbicomplex(const DefiningGraph& g) {
  auto branches = branch_decomposition(g);
  for (const auto& b : branches) {
    if (!b.start_essential || !b.end_essential) {
      throw Error(ErrorKind::unsupported_defining_graph,
                  "branch " + b.path.front() + "~" + b.path.back() + " ends at a leaf");
    }
  }

  std::set<std::string> essential;
  for (const auto& b : branches) {
    essential.insert(b.path.front());
    essential.insert(b.path.back());
  }

  Orbicomplex c;
  int centre = c.graph.add_vertex("o");
  std::map<std::string, int> edge_of;
  for (const auto& v : essential) {
    int leaf = c.graph.add_vertex("w:" + v, Mark::wall, v);
    edge_of[v] = c.graph.add_edge("e:" + v, leaf, centre, 0);
  }

  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    int p = static_cast<int>(c.pieces.size());
    c.pieces.push_back(branch_polygon(b, "P" + std::to_string(i + 1) + ":" + b.path.front() + "~" + b.path.back()));
    const int n = b.size();
    // Free segment n runs from the end wall to the centre, n + 1 back out to
    // the start wall.
    c.attachments[{p, 0, n}] = {edge_of.at(b.path.back()), false};
    c.attachments[{p, 0, n + 1}] = {edge_of.at(b.path.front()), true};
    ++c.graph.edges[edge_of.at(b.path.back())].multiplicity;
    ++c.graph.edges[edge_of.at(b.path.front())].multiplicity;
  }
  c.rotation = edge_order_rotation(c.graph);
  return c;
}

namespace {

void for_each_clique(const DefiningGraph& g, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> clique;
  std::function<void(int)> grow = [&](int from) {
    for (int v = from; v < g.size(); ++v) {
      bool ok = std::all_of(clique.begin(), clique.end(), [&](int u) { return g.adjacent(u, v); });
      if (!ok) continue;
      clique.push_back(v);
      visit(clique);
      grow(v + 1);
      clique.pop_back();
    }
  };
  grow(0);
}

bool connected_without(const DefiningGraph& g, const std::vector<bool>& removed) {
  int start = -1, remaining = 0;
  for (int v = 0; v < g.size(); ++v) {
    if (!removed[v]) {
      ++remaining;
      if (start < 0) start = v;
    }
  }
  if (remaining == 0) return true;
  std::vector<bool> seen(removed);
  seen[start] = true;
  std::deque<int> queue{start};
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbours(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == remaining;
}

}  // namespace

bool one_endedness_check(const DefiningGraph& g) {
  if (g.size() == 0 || !g.connected()) return false;
  if (static_cast<int>(g.edges().size()) == g.size() * (g.size() - 1) / 2) return false;
  bool separated = false;
  for_each_clique(g, [&](const std::vector<int>& clique) {
    if (separated || static_cast<int>(clique.size()) == g.size()) return;
    std::vector<bool> removed(g.size(), false);
    for (int v : clique) removed[v] = true;
    if (!connected_without(g, removed)) separated = true;
  });
  return !separated;
}

DefiningGraph example_defining_graph() {
  std::vector<std::string> vertices{"v1", "v2", "v3"};
  std::vector<std::pair<std::string, std::string>> edges;
  auto add_branch = [&](const std::string& from, const std::string& to, const std::string& name, int interior) {
    std::string prev = from;
    for (int i = 1; i <= interior; ++i) {
      std::string v = name + "_" + std::to_string(i);
      vertices.push_back(v);
      edges.emplace_back(prev, v);
      prev = v;
    }
    edges.emplace_back(prev, to);
  };
  add_branch("v1", "v2", "b12a", 5);
  add_branch("v1", "v2", "b12b", 5);
  add_branch("v1", "v3", "b13a", 3);
  add_branch("v1", "v3", "b13b", 3);
  add_branch("v2", "v3", "b23a", 3);
  add_branch("v2", "v3", "b23b", 3);
  return DefiningGraph(std::move(vertices), std::move(edges));
}

}  // namespace orbi
