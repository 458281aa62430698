#include "tchaos/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "tchaos/errors.hpp"
#include "tchaos/rng.hpp"

namespace tchaos {

namespace {
struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) {
      p[x] = p[p[x]];
      x = p[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};
}  // namespace

ClusterPartition build_clusters(const std::vector<Point>& points, double L_eps, const ScalingGeometry& g) {
  if (!(L_eps > 0.0)) throw PreconditionError("cluster scale must be positive");
  std::size_t n = points.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.distance(points[i], points[j]) <= L_eps) uf.unite(i, j);
  ClusterPartition cp;
  cp.scale = L_eps;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = uf.find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(cp.classes.size());
      cp.classes.emplace_back();
    }
    cp.classes[slot[r]].push_back(i);
  }
  for (std::size_t c = 0; c < cp.classes.size(); ++c)
    if (cp.classes[c].size() == 1) cp.singletons.push_back(c);
  return cp;
}

bool in_S2n(const std::vector<Point>& points, double L_eps, const ScalingGeometry& g) {
  std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool isolated = true;
    for (std::size_t j = 0; j < n && isolated; ++j)
      if (j != i && g.distance(points[i], points[j]) <= L_eps) isolated = false;
    if (isolated) return true;
  }
  return false;
}

bool in_Cm(const std::vector<Point>& points, double L_eps, const ScalingGeometry& g) {
  std::size_t m = points.size();
  if (m > kMaxCmSize) throw PreconditionError("C_m check limited to 16 points");
  if (m <= 1) return true;
  std::vector<std::uint32_t> adj(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && g.distance(points[i], points[j]) <= L_eps) adj[i] |= 1u << j;
  // Hamiltonian path DP: reach[mask] = set of endpoints of a path covering mask
  std::size_t full = (std::size_t(1) << m) - 1;
  std::vector<std::uint32_t> reach(full + 1, 0);
  for (std::size_t i = 0; i < m; ++i) reach[std::size_t(1) << i] = 1u << i;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    std::uint32_t ends = reach[mask];
    if (!ends) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(ends >> i & 1u)) continue;
      std::uint32_t nxt = adj[i] & ~static_cast<std::uint32_t>(mask);
      while (nxt) {
        int j = __builtin_ctz(nxt);
        nxt &= nxt - 1;
        reach[mask | (std::size_t(1) << j)] |= 1u << j;
      }
    }
  }
  return reach[full] != 0;
}

std::vector<std::vector<std::vector<std::size_t>>> set_partitions(std::size_t m, std::size_t min_block) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  std::vector<std::vector<std::size_t>> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == m) {
      for (const auto& b : cur)
        if (b.size() < min_block) return;
      out.push_back(cur);
      return;
    }
    for (std::size_t b = 0; b < cur.size(); ++b) {
      cur[b].push_back(i);
      rec(i + 1);
      cur[b].pop_back();
    }
    cur.push_back({i});
    rec(i + 1);
    cur.pop_back();
  };
  rec(0);
  return out;
}

nlohmann::json PartitionCheckReport::to_json() const {
  nlohmann::json j{{"trials", trials}, {"in_Sc", in_Sc}, {"violations", violations}, {"overlaps", overlaps}};
  if (!witness.empty()) j["witness"] = witness;
  return j;
}

Point sample_ball(const ScalingGeometry& g, double r, Stream& rs) {
  Point p(g.d());
  for (std::size_t a = 0; a < g.d(); ++a) p[a] = (2.0 * rs.uniform() - 1.0) * std::pow(r, g.s()[a]);
  return p;
}

PartitionCheckReport partition_sum_check(int n, double eps, double lambda, long n_mc, const ScalingGeometry& g, double L, std::uint64_t seed) {
  int m = 2 * n;
  if (m > kMaxPartitionPoints) throw PreconditionError("partition check limited to 2n <= 8");
  auto parts = set_partitions(static_cast<std::size_t>(m), 2);
  double Le = L * eps;
  PartitionCheckReport rep;
  Stream rs(seed, static_cast<std::uint64_t>(m), stream_tag::points);
  std::vector<Point> pts(m);
  for (long t = 0; t < n_mc; ++t) {
    for (auto& p : pts) p = sample_ball(g, 2.0 * lambda, rs);
    bool sc = !in_S2n(pts, Le, g);
    int covered = 0;
    for (const auto& P : parts) {
      bool all = true;
      for (const auto& blk : P) {
        std::vector<Point> sub;
        for (auto k : blk) sub.push_back(pts[k]);
        if (!in_Cm(sub, Le, g)) {
          all = false;
          break;
        }
      }
      covered += all;
    }
    ++rep.trials;
    rep.in_Sc += sc;
    if (covered > 1) ++rep.overlaps;
    if (sc != (covered > 0)) {
      if (rep.violations == 0) rep.witness = pts;
      ++rep.violations;
    }
  }
  return rep;
}

std::pair<double, double> wilson_interval(long hits, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  double p = static_cast<double>(hits) / n;
  double z2 = z * z;
  double den = 1.0 + z2 / n;
  double centre = (p + z2 / (2.0 * n)) / den;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

VolumeEstimate volume_Sc(int n, double eps, double lambda, const ScalingGeometry& g, long n_mc, double L, std::uint64_t seed) {
  if (n_mc < 10000) throw PreconditionError("volume_Sc needs n_mc >= 1e4");
  int m = 2 * n;
  double Le = L * eps;
  double r = 2.0 * lambda;
  double V1 = 1.0;
  for (double s : g.s()) V1 *= 2.0 * std::pow(r, s);
  double Vbox = std::pow(V1, m);
  Stream rs(seed, 1000u + static_cast<std::uint64_t>(m), stream_tag::mc);
  std::vector<Point> pts(m);
  long hits = 0;
  for (long t = 0; t < n_mc; ++t) {
    for (auto& p : pts) p = sample_ball(g, r, rs);
    if (!in_S2n(pts, Le, g)) ++hits;
  }
  if (hits == 0) throw ResolutionError("volume_Sc: zero hits; increase n_mc");
  VolumeEstimate v;
  v.hits = hits;
  v.n_mc = n_mc;
  v.estimate = Vbox * hits / static_cast<double>(n_mc);
  auto [lo, hi] = wilson_interval(hits, n_mc);
  v.ci_lo = Vbox * lo;
  v.ci_hi = Vbox * hi;
  v.bound = std::pow(std::min(Le, lambda), n * g.total()) * std::pow(lambda, n * g.total());
  v.ratio = v.estimate / v.bound;
  return v;
}

double volume_Sc_two_point_exact(double eps, double lambda, double L) {
  double a = 2.0 * lambda, l = std::min(L * eps, 2.0 * a);
  return (2.0 * a) * (2.0 * a) - (2.0 * a - l) * (2.0 * a - l);
}

}  // namespace tchaos
