#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cograsp/cloud_metrics.hpp"
#include "cograsp/convex_hull.hpp"
#include "cograsp/embodiment.hpp"
#include "cograsp/hull_contact.hpp"
#include "cograsp/kdtree.hpp"
#include "cograsp/scoring.hpp"

using namespace cograsp;

namespace {

PointCloud random_cloud(uint64_t seed, int n, double extent, const Vec3& center = {}) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  PointCloud cloud;
  cloud.points.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    cloud.points.push_back(center + Vec3{u(gen), u(gen), u(gen)});
  return cloud;
}

void bm_mean_pair_distance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PointCloud a = random_cloud(1, n, 0.1);
  const PointCloud b = random_cloud(2, n, 0.1, {0.25, 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(mean_pair_distance(a, b));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_mean_pair_distance)->Arg(256)->Arg(1024);

void bm_min_pair_distance_kd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PointCloud a = random_cloud(3, n, 0.1);
  const PointCloud b = random_cloud(4, n, 0.1, {0.25, 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(min_pair_distance(a, b));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_min_pair_distance_kd)->Arg(256)->Arg(1024)->Arg(4096);

void bm_min_pair_distance_brute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PointCloud a = random_cloud(3, n, 0.1);
  const PointCloud b = random_cloud(4, n, 0.1, {0.25, 0, 0});
  for (auto _ : state) {
    double best = 1e300;
    for (const Vec3& p : a.points)
      for (const Vec3& q : b.points) best = std::min(best, dist_sq(p, q));
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_min_pair_distance_brute)->Arg(256)->Arg(1024);

void bm_build_hull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PointCloud cloud = random_cloud(5, n, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(build_hull(cloud.points));
}
BENCHMARK(bm_build_hull)->Arg(64)->Arg(512)->Arg(2048);

void bm_hulls_intersect(benchmark::State& state) {
  const PointCloud a = random_cloud(6, 512, 0.1);
  // range(0) selects separated (0) vs overlapping (1) operands.
  const Vec3 offset = state.range(0) == 0 ? Vec3{0.35, 0, 0} : Vec3{0.05, 0, 0};
  const PointCloud b = random_cloud(7, 512, 0.1, offset);
  const ConvexHull ha = build_hull(a.points);
  const ConvexHull hb = build_hull(b.points);
  for (auto _ : state) benchmark::DoNotOptimize(hulls_intersect(ha, hb));
}
BENCHMARK(bm_hulls_intersect)->Arg(0)->Arg(1);

void bm_score_all_pairs(benchmark::State& state) {
  const int grasps = static_cast<int>(state.range(0));
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> c(-0.2, 0.2);
  std::vector<RobotGrasp> robot(static_cast<size_t>(grasps));
  std::vector<HandGrasp> hands(static_cast<size_t>(grasps));
  for (int i = 0; i < grasps; ++i) {
    const Vec3 rc{c(gen), c(gen), c(gen)};
    robot[static_cast<size_t>(i)].cloud = random_cloud(10 + i, 256, 0.06, rc);
    robot[static_cast<size_t>(i)].grasp.pose.translation = rc;
    robot[static_cast<size_t>(i)].grasp.opening_width = 0.05;
    const Vec3 hc{c(gen), c(gen), c(gen)};
    hands[static_cast<size_t>(i)].cloud = random_cloud(500 + i, 256, 0.06, hc);
    hands[static_cast<size_t>(i)].pose.translation = hc;
    hands[static_cast<size_t>(i)].approach = {0, 0, 1};
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(score_all_pairs(robot, hands, 1));
  state.SetItemsProcessed(state.iterations() * grasps * grasps);
}
BENCHMARK(bm_score_all_pairs)->Arg(8)->Arg(16);

void bm_render_gripper(benchmark::State& state) {
  GripperParams params;
  GraspPose grasp;
  grasp.pose = RigidTransform::identity();
  grasp.opening_width = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(render_gripper(params, grasp));
}
BENCHMARK(bm_render_gripper);

}  // namespace

BENCHMARK_MAIN();
