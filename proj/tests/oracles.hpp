#pragma once

// Independent reference implementations used to cross-check the library.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "orbicover/covers.hpp"
#include "orbicover/invariants.hpp"
#include "orbicover/orbicomplex.hpp"

namespace oracle {

using orbi::BigInt;
using orbi::Rational;

// Sum of (-1)^dim / |stabilizer| over the open cells of the glued complex:
// graph vertices and edges, then for each piece its open interior, cone
// points, and the boundary segments and junctions not identified with the
// graph.
inline Rational weighted_cell_euler(const orbi::Orbicomplex& c) {
  Rational chi = 0;
  for (const auto& v : c.graph.vertices) chi += Rational(1, v.mark == orbi::Mark::none ? 1 : 2);
  chi -= static_cast<int>(c.graph.edges.size());
  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& piece = c.pieces[p];
    chi += 2 - 2 * piece.genus - static_cast<int>(piece.boundary.size());
    for (int m : piece.cones) chi += Rational(1, m) - 1;
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      const auto& segs = piece.boundary[k].segments;
      const int n = static_cast<int>(segs.size());
      auto attached = [&](int j) { return c.attachments.count({p, k, j}) > 0; };
      for (int j = 0; j < n; ++j) {
        if (!attached(j)) chi -= segs[j].kind == orbi::SegmentKind::mirror ? Rational(1, 2) : Rational(1);
        int prev = (j + n - 1) % n;
        if (attached(j) || attached(prev)) continue;
        int mirrors = (segs[j].kind == orbi::SegmentKind::mirror) + (segs[prev].kind == orbi::SegmentKind::mirror);
        chi += Rational(1, mirrors == 2 ? 4 : mirrors == 1 ? 2 : 1);
      }
    }
  }
  return chi;
}

inline BigInt determinant(std::vector<std::vector<BigInt>> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  BigInt det = 0;
  for (int col = 0; col < n; ++col) {
    std::vector<std::vector<BigInt>> minor;
    for (int r = 1; r < n; ++r) {
      std::vector<BigInt> row;
      for (int c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(row);
    }
    BigInt term = m[0][col] * determinant(minor);
    det += col % 2 == 0 ? term : BigInt(-term);
  }
  return det;
}

inline void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from determinantal divisors: d_k is the gcd of all k x k
// minors and the k-th factor is d_k / d_{k-1}.
inline std::vector<BigInt> determinantal_factors(const orbi::IntMatrix& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<BigInt> factors;
  BigInt previous = 1;
  for (int k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<int>> rs, cs;
    std::vector<int> cur;
    subsets(rows, k, 0, cur, rs);
    subsets(cols, k, 0, cur, cs);
    BigInt d = 0;
    for (const auto& r : rs) {
      for (const auto& c : cs) {
        std::vector<std::vector<BigInt>> sub(k, std::vector<BigInt>(k));
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) sub[i][j] = m[r[i]][c[j]];
        }
        d = boost::multiprecision::gcd(d, boost::multiprecision::abs(determinant(sub)));
      }
    }
    if (d == 0) break;
    factors.push_back(d / previous);
    previous = d;
  }
  return factors;
}

// Plain unimodular row and column reduction: move the smallest entry to the
// pivot, clear its row and column, and fold in any row it fails to divide.
inline std::vector<BigInt> elementary_factors(orbi::IntMatrix m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<BigInt> factors;
  for (int t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      int pi = -1, pj = -1;
      for (int i = t; i < rows; ++i) {
        for (int j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (pi < 0 || abs(m[i][j]) < abs(m[pi][pj]))) pi = i, pj = j;
        }
      }
      if (pi < 0) return factors;
      std::swap(m[t], m[pi]);
      for (auto& row : m) std::swap(row[t], row[pj]);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        BigInt q = m[i][t] / m[t][t];
        for (int j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        clean &= m[i][t] == 0;
      }
      for (int j = t + 1; j < cols; ++j) {
        BigInt q = m[t][j] / m[t][t];
        for (int i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        clean &= m[t][j] == 0;
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i) {
        for (int j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad < 0) break;
      for (int j = t; j < cols; ++j) m[t][j] += m[bad][j];
    }
    factors.push_back(abs(m[t][t]));
  }
  return factors;
}

inline std::vector<int> sorted_multiplicities(const orbi::MarkedGraph& g, int u, int v) {
  std::vector<int> out;
  for (const auto& e : g.edges) {
    if ((e.tail == u && e.head == v) || (e.tail == v && e.head == u)) out.push_back(e.multiplicity);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_marked_isomorphism(const orbi::MarkedGraph& a, const orbi::MarkedGraph& b, const std::vector<int>& p) {
  if (a.vertex_count() != b.vertex_count() || static_cast<int>(p.size()) != a.vertex_count()) return false;
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    if (sorted[i] != i) return false;
  }
  for (int u = 0; u < a.vertex_count(); ++u) {
    if (a.vertices[u].mark != b.vertices[p[u]].mark) return false;
    for (int v = u; v < a.vertex_count(); ++v) {
      if (sorted_multiplicities(a, u, v) != sorted_multiplicities(b, p[u], p[v])) return false;
    }
  }
  return true;
}

// Tries every vertex permutation.
inline bool brute_force_isomorphic(const orbi::MarkedGraph& a, const orbi::MarkedGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> p(a.vertex_count());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (is_marked_isomorphism(a, b, p)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

inline orbi::MarkedGraph random_marked_graph(std::mt19937& rng, int vertices, int edges) {
  orbi::MarkedGraph g;
  std::uniform_int_distribution<int> mark(0, 3), pick(0, vertices - 1), mult(1, 3);
  for (int v = 0; v < vertices; ++v) {
    g.add_vertex("v" + std::to_string(v), mark(rng) == 0 ? orbi::Mark::ramification : orbi::Mark::none);
  }
  for (int e = 0; e < edges; ++e) g.add_edge("e" + std::to_string(e), pick(rng), pick(rng), mult(rng));
  return g;
}

// Same graph with vertices and edges listed in a shuffled order.
inline orbi::MarkedGraph shuffled(const orbi::MarkedGraph& g, std::mt19937& rng) {
  std::vector<int> p(g.vertex_count());
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  std::vector<int> inverse(p.size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) inverse[p[i]] = i;
  orbi::MarkedGraph out;
  for (int i = 0; i < g.vertex_count(); ++i) out.add_vertex("u" + std::to_string(i), g.vertices[p[i]].mark);
  auto edges = g.edges;
  std::shuffle(edges.begin(), edges.end(), rng);
  int n = 0;
  for (const auto& e : edges) {
    bool flip = rng() % 2;
    int t = inverse[e.tail], h = inverse[e.head];
    out.add_edge("f" + std::to_string(n++), flip ? h : t, flip ? t : h, e.multiplicity);
  }
  return out;
}

inline orbi::Piece disk(const std::string& id, int cones, int segments = 1) {
  orbi::Piece p;
  p.id = id;
  p.cones.assign(cones, 2);
  orbi::BoundaryCircle circle;
  for (int i = 0; i < segments; ++i) circle.segments.push_back({orbi::SegmentKind::free, "s" + std::to_string(i)});
  p.boundary.push_back(circle);
  return p;
}

// Every verified cover must also be multiplicative on chi.
inline bool multiplicative(const orbi::CoveringMap& f) {
  return orbi::euler_characteristic(*f.source) == f.degree * orbi::euler_characteristic(*f.target);
}

}  // namespace oracle
