#pragma once

#include <random>
#include <vector>

#include "pdptwse/instance.hpp"

namespace pdptwse {

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
};

// Lloyd iterations from k-means++ seeds; best inertia over restarts.
// Returns a label in [0, k) per point; every label is used.
std::vector<int> KMeans(const std::vector<Point>& points, int k, std::mt19937_64& rng,
                        const KMeansOptions& options = {});

double Cross(const Point& o, const Point& a, const Point& b);

// Counterclockwise hull vertex indices (monotone chain); collinear points
// are dropped. Fewer than three indices means a degenerate hull.
std::vector<int> ConvexHull(const std::vector<Point>& points);

// One vertex per group minimizing the total pairwise distance. Ties go to
// the lexicographically smallest index vector.
std::vector<int> MinWeightClique(const std::vector<std::vector<Point>>& groups);

// Half away from zero.
double RoundHalfAway(double v);

}  // namespace pdptwse
