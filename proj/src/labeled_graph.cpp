#include "orbicover/labeled_graph.hpp"

#include <algorithm>
#include <numeric>

namespace orbi {

int LabeledGraph::add_vertex(std::string label) {
  labels_.push_back(std::move(label));
  adjacency_.emplace_back();
  return size() - 1;
}

void LabeledGraph::add_edge(int u, int v, std::string label) {
  auto key = std::minmax(u, v);
  auto& bucket = edges_[{key.first, key.second}];
  bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), label), std::move(label));
  if (bucket.size() == 1) {
    adjacency_[u].push_back(v);
    if (u != v) adjacency_[v].push_back(u);
  }
  ++edge_count_;
}

const std::vector<std::string>& LabeledGraph::between(int u, int v) const {
  static const std::vector<std::string> none;
  auto key = std::minmax(u, v);
  auto it = edges_.find({key.first, key.second});
  return it == edges_.end() ? none : it->second;
}

namespace {

// Joint colour refinement over the disjoint union so that colours of a and b
// are directly comparable.
std::pair<std::vector<int>, std::vector<int>> refine(const LabeledGraph& a,
                                                     const LabeledGraph& b) {
  const LabeledGraph* graphs[2] = {&a, &b};
  std::vector<int> colour[2];
  {
    std::map<std::string, int> ids;
    for (auto* g : graphs) {
      for (int v = 0; v < g->size(); ++v) ids.emplace(g->label(v), 0);
    }
    int next = 0;
    for (auto& [_, id] : ids) id = next++;
    for (int side = 0; side < 2; ++side) {
      for (int v = 0; v < graphs[side]->size(); ++v) {
        colour[side].push_back(ids[graphs[side]->label(v)]);
      }
    }
  }

  std::size_t classes = 0;
  while (true) {
    using Signature = std::pair<int, std::vector<std::pair<int, std::vector<std::string>>>>;
    std::map<Signature, int> ids;
    std::vector<Signature> sigs[2];
    for (int side = 0; side < 2; ++side) {
      const auto& g = *graphs[side];
      for (int v = 0; v < g.size(); ++v) {
        Signature s{colour[side][v], {}};
        for (int w : g.neighbours(v)) s.second.emplace_back(colour[side][w], g.between(v, w));
        std::sort(s.second.begin(), s.second.end());
        ids.emplace(s, 0);
        sigs[side].push_back(std::move(s));
      }
    }
    int next = 0;
    for (auto& [_, id] : ids) id = next++;
    for (int side = 0; side < 2; ++side) {
      for (std::size_t v = 0; v < sigs[side].size(); ++v) colour[side][v] = ids[sigs[side][v]];
    }
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {colour[0], colour[1]};
}

class Matcher {
 public:
  Matcher(const LabeledGraph& a, const LabeledGraph& b,
          const std::function<bool(const std::vector<int>&)>& visit)
      : a_(a), b_(b), visit_(visit) {}

  void run() {
    if (a_.size() != b_.size() || a_.edge_count() != b_.edge_count()) return;
    std::tie(colour_a_, colour_b_) = refine(a_, b_);
    std::vector<int> ha(colour_a_), hb(colour_b_);
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return;

    order_ = search_order();
    map_.assign(a_.size(), -1);
    inverse_.assign(b_.size(), -1);
    extend(0);
  }

 private:
  // Smallest colour classes first, then prefer vertices adjacent to ones
  // already placed so that adjacency checks bite early.
  std::vector<int> search_order() const {
    std::map<int, int> class_size;
    for (int c : colour_a_) ++class_size[c];
    std::vector<int> order;
    std::vector<bool> placed(a_.size(), false);
    std::vector<int> touch(a_.size(), 0);
    for (int step = 0; step < a_.size(); ++step) {
      int best = -1;
      for (int v = 0; v < a_.size(); ++v) {
        if (placed[v]) continue;
        if (best < 0) {
          best = v;
          continue;
        }
        auto key = [&](int x) {
          return std::make_tuple(-touch[x], class_size.at(colour_a_[x]), x);
        };
        if (key(v) < key(best)) best = v;
      }
      placed[best] = true;
      order.push_back(best);
      for (int w : a_.neighbours(best)) ++touch[w];
    }
    return order;
  }

  bool consistent(int x, int y) const {
    if (a_.between(x, x) != b_.between(y, y)) return false;
    for (int w : a_.neighbours(x)) {
      if (w == x || map_[w] < 0) continue;
      if (a_.between(x, w) != b_.between(y, map_[w])) return false;
    }
    // Mapped neighbours of y must come from mapped neighbours of x.
    for (int z : b_.neighbours(y)) {
      if (z == y) continue;
      int w = inverse_[z];
      if (w < 0) continue;
      if (a_.between(x, w).empty()) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return visit_(map_);
    int x = order_[depth];
    for (int y = 0; y < b_.size(); ++y) {
      if (inverse_[y] >= 0 || colour_b_[y] != colour_a_[x]) continue;
      if (!consistent(x, y)) continue;
      map_[x] = y;
      inverse_[y] = x;
      bool keep_going = extend(depth + 1);
      map_[x] = -1;
      inverse_[y] = -1;
      if (!keep_going) return false;
    }
    return true;
  }

  const LabeledGraph& a_;
  const LabeledGraph& b_;
  const std::function<bool(const std::vector<int>&)>& visit_;
  std::vector<int> colour_a_, colour_b_, order_, map_, inverse_;
};

}  // namespace

void for_each_isomorphism(const LabeledGraph& a, const LabeledGraph& b,
                          const std::function<bool(const std::vector<int>&)>& visit) {
  Matcher(a, b, visit).run();
}

std::optional<std::vector<int>> find_isomorphism(const LabeledGraph& a,
                                                 const LabeledGraph& b) {
  std::optional<std::vector<int>> found;
  for_each_isomorphism(a, b, [&](const std::vector<int>& m) {
    found = m;
    return false;
  });
  return found;
}

}  // namespace orbi
