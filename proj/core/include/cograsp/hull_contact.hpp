#pragma once

#include "cograsp/convex_hull.hpp"

namespace cograsp {

// True iff the hulls share at least one point; touching counts (closed-set
// semantics). GJK resolves clear cases; when the separation or containment
// margin falls below 1e-9 m the answer comes from a linear feasibility
// program over the combined face planes.
bool hulls_intersect(const ConvexHull& a, const ConvexHull& b);

namespace detail {

// Smallest uniform face-plane inflation t that makes the hulls overlap:
// min t subject to n.x - t <= d over all faces of both hulls.
// t <= 0 means the hulls already share a point (t = 0 exactly touching).
double min_inflation(const ConvexHull& a, const ConvexHull& b);

}  // namespace detail

}  // namespace cograsp
