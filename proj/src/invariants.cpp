#include "orbicover/invariants.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "orbicover/error.hpp"

namespace orbi {

namespace {

Word inverse(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->generator, -it->exponent});
  return out;
}

Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct CircleShape {
  bool attached = false;  // carries an attached run or is fully attached
  int anchor = 0;         // first segment of the attached run
  int run_length = 0;
};

CircleShape classify(const Orbicomplex& c, int p, int k) {
  const auto& piece = c.pieces[p];
  const auto& segs = piece.boundary[k].segments;
  const int n = static_cast<int>(segs.size());
  auto attached = [&](int j) { return c.attachment({p, k, j}) != nullptr; };
  auto mirror = [&](int j) { return segs[j].kind == SegmentKind::mirror; };

  int count = 0;
  for (int j = 0; j < n; ++j) count += attached(j);
  if (count == 0) return {};

  if (!piece.has_mirrors()) {
    if (count != n) throw Error(ErrorKind::unsupported_piece, piece.id + ": circle only partly attached");
    return {true, 0, n};
  }
  // Polygon: exactly one maximal free run, attached as a whole.
  int runs = 0, start = -1;
  for (int j = 0; j < n; ++j) {
    if (!mirror(j) && mirror((j + n - 1) % n)) {
      ++runs;
      start = j;
    }
  }
  if (runs != 1) throw Error(ErrorKind::unsupported_piece, piece.id + ": polygon needs exactly one free run");
  int len = 0;
  while (!mirror((start + len) % n)) {
    if (!attached((start + len) % n)) {
      throw Error(ErrorKind::unsupported_piece, piece.id + ": free run only partly attached");
    }
    ++len;
  }
  return {true, start, len};
}

}  // namespace

std::string local_generator(const MarkedGraph& g, int v) {
  const auto& vx = g.vertices[v];
  return vx.mark == Mark::wall ? "w:" + vx.wall : "r:" + vx.id;
}

GroupPresentation fundamental_group_presentation(const Orbicomplex& c) {
  require_valid(c);
  const auto& g = c.graph;
  const auto tree = spanning_forest(g);
  const auto component = g.component_labels();
  const int ncomp = g.component_count();
  const int npieces = static_cast<int>(c.pieces.size());

  GroupPresentation out;
  auto edge_word = [&](const DirectedEdge& d) -> Word {
    if (tree[d.edge]) return {};
    return {{"e:" + g.edges[d.edge].id, d.reversed ? -1 : 1}};
  };

  for (int e = 0; e < g.edge_count(); ++e) {
    if (!tree[e]) out.generators.push_back("e:" + g.edges[e].id);
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.vertices[v].mark == Mark::none) continue;
    auto s = local_generator(g, v);
    out.generators.push_back(s);
    out.relators.push_back({{s, 1}, {s, 1}});
  }

  // Incidence graph: components first, then pieces; one edge per attached circle.
  std::vector<std::vector<CircleShape>> shapes(npieces);
  struct Incidence {
    int piece, circle, component;
  };
  std::vector<Incidence> incidences;
  for (int p = 0; p < npieces; ++p) {
    for (int k = 0; k < static_cast<int>(c.pieces[p].boundary.size()); ++k) {
      shapes[p].push_back(classify(c, p, k));
      if (shapes[p][k].attached) {
        int v = g.start(*c.attachment({p, k, shapes[p][k].anchor}));
        incidences.push_back({p, k, component[v]});
      }
    }
  }
  const int nodes = ncomp + npieces;
  std::vector<std::vector<int>> touching(nodes);
  for (int i = 0; i < static_cast<int>(incidences.size()); ++i) {
    touching[incidences[i].component].push_back(i);
    touching[ncomp + incidences[i].piece].push_back(i);
  }
  std::vector<bool> reached(nodes, false), tree_incidence(incidences.size(), false);
  if (nodes > 0) {
    std::deque<int> queue{0};
    reached[0] = true;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int i : touching[x]) {
        int y = x < ncomp ? ncomp + incidences[i].piece : incidences[i].component;
        if (reached[y]) continue;
        reached[y] = true;
        tree_incidence[i] = true;
        queue.push_back(y);
      }
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    throw Error(ErrorKind::disconnected, "orbicomplex is not connected");
  }

  std::map<std::pair<int, int>, Word> connector;
  for (int i = 0; i < static_cast<int>(incidences.size()); ++i) {
    const auto& inc = incidences[i];
    Word t;
    if (!tree_incidence[i]) {
      std::string name = "t:" + c.pieces[inc.piece].id + ":" + std::to_string(inc.circle);
      out.generators.push_back(name);
      t = {{name, 1}};
    }
    connector[{inc.piece, inc.circle}] = t;
  }

  for (int p = 0; p < npieces; ++p) {
    const auto& piece = c.pieces[p];
    const std::string& id = piece.id;

    if (piece.has_mirrors()) {
      if (!piece.cones.empty()) throw Error(ErrorKind::unsupported_piece, id + ": cones on a mirrored piece");
      const auto& circle = piece.boundary[0];
      const int n = circle.size();
      auto mirror_gen = [&](int j) { return "m:" + id + ":" + std::to_string(j); };
      for (int j = 0; j < n; ++j) {
        if (circle.segments[j].kind != SegmentKind::mirror) continue;
        out.generators.push_back(mirror_gen(j));
        out.relators.push_back({{mirror_gen(j), 1}, {mirror_gen(j), 1}});
      }
      for (int j = 0; j < n; ++j) {
        if (junction_order(circle, j) != 4) continue;
        auto a = mirror_gen((j + n - 1) % n), b = mirror_gen(j);
        out.relators.push_back({{a, 1}, {b, 1}, {a, 1}, {b, 1}});
      }
      const auto& shape = shapes[p][0];
      if (shape.attached) {
        const Word& t = connector.at({p, 0});
        int first = shape.anchor, last = (shape.anchor + shape.run_length - 1) % n;
        Word walk;
        for (int i = 0; i < shape.run_length; ++i) {
          auto w = edge_word(*c.attachment({p, 0, (first + i) % n}));
          walk.insert(walk.end(), w.begin(), w.end());
        }
        int u = g.start(*c.attachment({p, 0, first}));
        int u2 = g.finish(*c.attachment({p, 0, last}));
        Word wu{{local_generator(g, u), 1}}, wu2{{local_generator(g, u2), 1}};
        Word before{{mirror_gen((first + n - 1) % n), -1}}, after{{mirror_gen((last + 1) % n), -1}};
        out.relators.push_back(concat({t, wu, inverse(t), before}));
        out.relators.push_back(concat({t, walk, wu2, inverse(walk), inverse(t), after}));
      }
      continue;
    }

    Word surface;
    for (int i = 0; i < piece.genus; ++i) {
      auto a = "a:" + id + ":" + std::to_string(i), b = "b:" + id + ":" + std::to_string(i);
      out.generators.push_back(a);
      out.generators.push_back(b);
      surface.insert(surface.end(), {{a, 1}, {b, 1}, {a, -1}, {b, -1}});
    }
    for (int i = 0; i < static_cast<int>(piece.cones.size()); ++i) {
      auto s = "c:" + id + ":" + std::to_string(i);
      out.generators.push_back(s);
      out.relators.push_back(Word(piece.cones[i], Letter{s, 1}));
      surface.push_back({s, 1});
    }
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      if (!shapes[p][k].attached) {
        auto d = "d:" + id + ":" + std::to_string(k);
        out.generators.push_back(d);
        surface.push_back({d, 1});
        continue;
      }
      const Word& t = connector.at({p, k});
      Word walk;
      for (int j = 0; j < piece.boundary[k].size(); ++j) {
        auto w = edge_word(*c.attachment({p, k, j}));
        walk.insert(walk.end(), w.begin(), w.end());
      }
      auto loop = concat({t, walk, inverse(t)});
      surface.insert(surface.end(), loop.begin(), loop.end());
    }
    out.relators.push_back(std::move(surface));
  }
  return out;
}

std::vector<BigInt> smith_normal_form(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<BigInt> diagonal;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    bool exhausted = false;
    while (true) {
      // Smallest nonzero entry of the remaining block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == rows) {
        exhausted = true;
        break;
      }
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        BigInt q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        clean &= m[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        BigInt q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        clean &= m[t][j] == 0;
      }
      if (!clean) continue;

      // The pivot must divide the rest of the block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (exhausted) break;
    diagonal.push_back(abs(m[t][t]));
  }
  return diagonal;
}

IntMatrix relation_matrix(const GroupPresentation& p) {
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < p.generators.size(); ++i) column[p.generators[i]] = i;
  IntMatrix m(p.relators.size(), std::vector<BigInt>(p.generators.size(), 0));
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    for (const auto& l : p.relators[r]) {
      auto it = column.find(l.generator);
      if (it == column.end()) throw Error(ErrorKind::invalid_graph, "undeclared generator " + l.generator);
      m[r][it->second] += l.exponent;
    }
  }
  return m;
}

int AbelianInvariants::two_rank() const {
  return static_cast<int>(std::count_if(torsion.begin(), torsion.end(), [](const BigInt& d) { return d % 2 == 0; }));
}

AbelianInvariants abelianization(const GroupPresentation& p) {
  auto factors = smith_normal_form(relation_matrix(p));
  AbelianInvariants out;
  out.free_rank = static_cast<int>(p.generators.size() - factors.size());
  for (const auto& d : factors) {
    if (d > 1) out.torsion.push_back(d);
  }
  return out;
}

std::string to_string(const AbelianInvariants& a) {
  std::map<BigInt, int> counts;
  for (const auto& d : a.torsion) ++counts[d];
  std::vector<std::string> terms;
  auto power = [](const std::string& base, int k) { return k == 1 ? base : "(" + base + ")^" + std::to_string(k); };
  if (a.free_rank == 1) terms.push_back("Z");
  if (a.free_rank > 1) terms.push_back("Z^" + std::to_string(a.free_rank));
  for (const auto& [d, k] : counts) terms.push_back(power("Z/" + d.str(), k));
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) out += " + " + terms[i];
  return out;
}

PresentationHomology presentation_homology(const GroupPresentation& p) {
  const int rank = static_cast<int>(smith_normal_form(relation_matrix(p)).size());
  return {static_cast<int>(p.generators.size()) - rank, static_cast<int>(p.relators.size()) - rank};
}

std::vector<std::vector<std::string>> NormalForm::carriers() const {
  std::vector<std::vector<std::string>> out(circle_component.size());
  for (std::size_t p = 0; p < piece_circles.size(); ++p) {
    for (int b : piece_circles[p]) out[b].push_back(piece_types[p]);
  }
  for (auto& list : out) std::sort(list.begin(), list.end());
  return out;
}

LabeledGraph to_labeled_graph(const NormalForm& nf) {
  LabeledGraph out;
  std::vector<int> comp, circle;
  for (const auto& c : nf.components) {
    comp.push_back(out.add_vertex("N g" + std::to_string(c.genus) + " b" + std::to_string(c.boundary_circles)));
  }
  for (int k : nf.circle_component) {
    circle.push_back(out.add_vertex("B"));
    out.add_edge(comp[k], circle.back(), "in");
  }
  for (std::size_t p = 0; p < nf.piece_types.size(); ++p) {
    int node = out.add_vertex("P " + nf.piece_types[p]);
    for (int b : nf.piece_circles[p]) out.add_edge(node, circle[b], "glued");
  }
  return out;
}

std::optional<NormalForm> planar_normal_form(const Orbicomplex& c, const RotationSystem& rotation) {
  auto ribbon = ribbon_neighborhood(c.graph, rotation);
  NormalForm nf;
  nf.components = ribbon.components;
  nf.circle_component = ribbon.boundary_component;
  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& piece = c.pieces[p];
    if (piece.has_mirrors()) return std::nullopt;
    nf.piece_types.push_back(piece_type(piece));
    nf.piece_circles.emplace_back();
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      auto walk = circle_walk(c, p, k);
      if (!walk) return std::nullopt;
      int face = -1;
      for (int f = 0; f < static_cast<int>(ribbon.boundary.size()) && face < 0; ++f) {
        if (same_circuit(*walk, ribbon.boundary[f], true)) face = f;
      }
      if (face < 0) return std::nullopt;
      nf.piece_circles.back().push_back(face);
    }
  }
  return nf;
}

std::optional<NormalForm> planar_normal_form(const Orbicomplex& c) {
  if (!c.rotation) return std::nullopt;
  return planar_normal_form(c, *c.rotation);
}

std::optional<HomotopyCertificate> homotopy_equivalence_certificate(const Orbicomplex& a,
                                                                   const Orbicomplex& b) {
  auto na = planar_normal_form(a);
  auto nb = planar_normal_form(b);
  if (!na || !nb) return std::nullopt;
  auto mapping = find_isomorphism(to_labeled_graph(*na), to_labeled_graph(*nb));
  if (!mapping) return std::nullopt;
  return HomotopyCertificate{std::move(*na), std::move(*nb), std::move(*mapping)};
}

bool torsion_freeness(const Orbicomplex& c) {
  for (const auto& p : c.pieces) {
    if (!p.cones.empty() || p.has_mirrors()) return false;
  }
  for (const auto& v : c.graph.vertices) {
    if (v.mark != Mark::none) return false;
  }
  return true;
}

std::string_view to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::present: return "present";
    case CertificateStatus::absent: return "absent";
    case CertificateStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool CompareReport::homeomorphic_compatible() const {
  return euler[0] == euler[1] && singular_bijection.has_value() && abelian[0] == abelian[1];
}

CompareReport compare_report(const Orbicomplex& a, const Orbicomplex& b) {
  CompareReport r;
  r.euler[0] = euler_characteristic(a);
  r.euler[1] = euler_characteristic(b);
  r.singular_bijection =
      marked_graph_isomorphism(topological_form(singular_subspace(a)), topological_form(singular_subspace(b)));
  const Orbicomplex* both[2] = {&a, &b};
  for (int i = 0; i < 2; ++i) {
    try {
      r.abelian[i] = abelianization(fundamental_group_presentation(*both[i]));
    } catch (const Error&) {
      r.abelian[i] = std::nullopt;
    }
  }

  if (r.euler[0] != r.euler[1]) {
    r.certificate = CertificateStatus::absent;
    r.verdicts.push_back("euler characteristics differ: not homotopy equivalent");
  } else if (homotopy_equivalence_certificate(a, b)) {
    r.certificate = CertificateStatus::present;
    r.verdicts.push_back("homotopy certificate present");
  } else {
    r.verdicts.push_back("homotopy equivalence inconclusive");
  }
  if (!r.singular_bijection) r.verdicts.push_back("singular subspaces differ: not homeomorphic");
  if (r.abelian[0] && r.abelian[1] && *r.abelian[0] != *r.abelian[1]) {
    r.verdicts.push_back("abelianizations differ");
  }
  return r;
}

}  // namespace orbi
