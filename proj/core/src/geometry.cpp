#include "pdptwse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pdptwse {
namespace {

double Sq(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

double Uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 53>(rng); }

std::vector<Point> SeedPlusPlus(const std::vector<Point>& pts, int k, std::mt19937_64& rng) {
  std::vector<Point> centers;
  centers.push_back(pts[rng() % pts.size()]);
  std::vector<double> d2(pts.size(), kInf);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      d2[p] = std::min(d2[p], Sq(pts[p], centers.back()));
      total += d2[p];
    }
    std::size_t pick = pts.size() - 1;
    if (total > 0.0) {
      double r = Uniform01(rng) * total;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        r -= d2[p];
        if (r < 0.0) {
          pick = p;
          break;
        }
      }
    } else {
      pick = rng() % pts.size();
    }
    centers.push_back(pts[pick]);
  }
  return centers;
}

double Lloyd(const std::vector<Point>& pts, std::vector<Point>& centers, std::vector<int>& label, int max_iter) {
  const int k = static_cast<int>(centers.size());
  label.assign(pts.size(), -1);
  double inertia = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    inertia = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      int best = 0;
      double bd = kInf;
      for (int c = 0; c < k; ++c) {
        const double d = Sq(pts[p], centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (label[p] != best) changed = true;
      label[p] = best;
      inertia += bd;
    }
    // An empty cluster takes the point farthest from its center.
    std::vector<int> count(k, 0);
    for (int l : label) ++count[l];
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t far = 0;
      double fd = -1.0;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        if (count[label[p]] <= 1) continue;
        const double d = Sq(pts[p], centers[label[p]]);
        if (d > fd) {
          fd = d;
          far = p;
        }
      }
      if (fd < 0.0) continue;
      --count[label[far]];
      label[far] = c;
      count[c] = 1;
      changed = true;
    }
    std::vector<Point> sum(k);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      sum[label[p]].x += pts[p].x;
      sum[label[p]].y += pts[p].y;
      sum[label[p]].z += pts[p].z;
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      centers[c] = {sum[c].x / count[c], sum[c].y / count[c], sum[c].z / count[c]};
    }
    if (!changed && it > 0) break;
  }
  inertia = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) inertia += Sq(pts[p], centers[label[p]]);
  return inertia;
}

}  // namespace

std::vector<int> KMeans(const std::vector<Point>& points, int k, std::mt19937_64& rng, const KMeansOptions& options) {
  if (k < 1) throw std::invalid_argument("k-means needs at least one cluster");
  if (static_cast<int>(points.size()) < k) throw std::invalid_argument("fewer points than clusters");
  std::vector<int> best;
  double best_inertia = kInf;
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<Point> centers = SeedPlusPlus(points, k, rng);
    std::vector<int> label;
    const double inertia = Lloyd(points, centers, label, options.max_iterations);
    std::vector<char> used(k, 0);
    for (int l : label) used[l] = 1;
    const bool full = std::all_of(used.begin(), used.end(), [](char u) { return u != 0; });
    if (full && inertia < best_inertia - 1e-12) {
      best_inertia = inertia;
      best = std::move(label);
    }
  }
  if (best.empty()) throw std::invalid_argument("k-means could not fill every cluster");
  // Relabel by first appearance so equal partitions give equal labels.
  std::vector<int> map(k, -1);
  int next = 0;
  for (int& l : best) {
    if (map[l] < 0) map[l] = next++;
    l = map[l];
  }
  return best;
}

double Cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<int> ConvexHull(const std::vector<Point>& points) {
  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return points[a].x != points[b].x ? points[a].x < points[b].x : points[a].y < points[b].y;
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](int a, int b) { return points[a].x == points[b].x && points[a].y == points[b].y; }),
            idx.end());
  if (idx.size() < 3) return idx;
  std::vector<int> hull(2 * idx.size());
  std::size_t h = 0;
  for (int p : idx) {
    while (h >= 2 && Cross(points[hull[h - 2]], points[hull[h - 1]], points[p]) <= 0) --h;
    hull[h++] = p;
  }
  for (std::size_t a = idx.size() - 1, lower = h + 1; a-- > 0;) {
    const int p = idx[a];
    while (h >= lower && Cross(points[hull[h - 2]], points[hull[h - 1]], points[p]) <= 0) --h;
    hull[h++] = p;
  }
  hull.resize(h - 1);
  return hull;
}

std::vector<int> MinWeightClique(const std::vector<std::vector<Point>>& groups) {
  const std::size_t z = groups.size();
  std::vector<int> cur(z, 0), best;
  double best_cost = kInf;
  auto dist = [](const Point& a, const Point& b) { return std::sqrt(Sq(a, b)); };
  // Depth-first with partial-sum pruning; distances are non-negative.
  auto rec = [&](auto&& self, std::size_t g, double partial) -> void {
    if (partial >= best_cost) return;
    if (g == z) {
      best_cost = partial;
      best = cur;
      return;
    }
    for (std::size_t v = 0; v < groups[g].size(); ++v) {
      double add = 0.0;
      for (std::size_t prev = 0; prev < g; ++prev) add += dist(groups[g][v], groups[prev][cur[prev]]);
      cur[g] = static_cast<int>(v);
      self(self, g + 1, partial + add);
    }
  };
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("clique group without vertices");
  }
  rec(rec, 0, 0.0);
  return best;
}

double RoundHalfAway(double v) { return v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5); }

}  // namespace pdptwse
