#pragma once

#include <vector>

#include "cograsp/kdtree.hpp"
#include "cograsp/point_cloud.hpp"

namespace cograsp {

// Minimum Euclidean distance over all cross pairs, accelerated with a kd-tree
// over the larger cloud. Exactly equal to an O(|a|*|b|) scan: pruning never
// discards the minimizing pair and every candidate distance goes through the
// shared dist_sq() expression.
double min_pair_distance(const PointCloud& a, const PointCloud& b);

// Same query against a prebuilt index over b (batch scoring reuses indexes).
double min_pair_distance(const PointCloud& a, const KdTree& b_index);

// Mean Euclidean distance over all cross pairs.
//
// Summation contract: one partial sum per point of `a` (over b in index
// order), partials reduced in index order, total divided by |a|*|b|. The
// parallel path computes the same partials and reduces them identically, so
// the result is independent of thread count, bit for bit.
double mean_pair_distance(const PointCloud& a, const PointCloud& b, int threads = 1);

// Per-point unit normals from the smallest principal axis of the k-nearest-
// neighbor covariance (neighborhood includes the point itself), oriented away
// from the cloud centroid.
std::vector<Vec3> estimate_normals(const PointCloud& cloud, int k);

// Keeps the first point of every occupied voxel (index order), mask preserved.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size);

// Indices the downsampler keeps, ascending; lets callers subset per-point
// attributes (normals) consistently.
std::vector<size_t> voxel_downsample_indices(const PointCloud& cloud, double voxel_size);

}  // namespace cograsp
