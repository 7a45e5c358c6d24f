#pragma once

#include <random>
#include <vector>

#include "cograsp/point_cloud.hpp"
#include "cograsp/rigid_transform.hpp"
#include "cograsp/vec3.hpp"

namespace cograsp::testsupport {

// O(n^2) reference scans. brute_mean mirrors the documented summation
// contract (per-row partials over b in index order, reduced in a index
// order) so comparisons against the library are exact, not approximate.
double brute_min_distance(const PointCloud& a, const PointCloud& b);
double brute_mean_distance(const PointCloud& a, const PointCloud& b);

// Independent hull-overlap oracle: conv(A) and conv(B) share a point iff
// weights lambda >= 0, mu >= 0 exist with sum(lambda) = sum(mu) = 1 and
// sum(lambda_i a_i) = sum(mu_j b_j). Decided by a phase-1 simplex over that
// V-representation equality system — a different formulation and a separate
// implementation from the library's H-representation inflation LP.
bool hulls_intersect_oracle(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// Stability probe: re-runs the oracle with both clouds scaled about their
// centroids by (1 +- rel). A flip under perturbation marks the instance as
// marginal (separation/penetration below rel * extent) so agreement checks
// can exclude it.
bool oracle_is_stable(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                      double rel = 1e-6);

// Seeded fixture generators (plain std::mt19937_64; independent of Rng).
std::vector<Vec3> random_points(std::mt19937_64& gen, int n, double extent,
                                const Vec3& center = {});
Mat3 random_rotation(std::mt19937_64& gen);
RigidTransform random_rigid(std::mt19937_64& gen, double max_translation);

}  // namespace cograsp::testsupport
