#pragma once
#include <cstdint>
#include <nlohmann/json.hpp>
#include <vector>

#include "tchaos/geometry.hpp"

namespace tchaos {

struct ClusterPartition {
  double scale = 0.0;
  std::vector<std::vector<std::size_t>> classes;  // sorted by smallest member
  std::vector<std::size_t> singletons;            // indices into classes
};

// Chain closure of |z_i - z_j|_s <= L_eps (union-find).
ClusterPartition build_clusters(const std::vector<Point>& points, double L_eps, const ScalingGeometry& g);

// Some point is > L_eps away from every other point.
bool in_S2n(const std::vector<Point>& points, double L_eps, const ScalingGeometry& g);

// The points admit an ordering whose consecutive links are all <= L_eps.
inline constexpr std::size_t kMaxCmSize = 16;
bool in_Cm(const std::vector<Point>& points, double L_eps, const ScalingGeometry& g);

// Set partitions of {0..m-1} with every block of size >= min_block.
std::vector<std::vector<std::vector<std::size_t>>> set_partitions(std::size_t m, std::size_t min_block = 2);

struct PartitionCheckReport {
  long trials = 0;
  long in_Sc = 0;
  long violations = 0;
  long overlaps = 0;  // configurations covered by more than one partition
  std::vector<Point> witness;
  nlohmann::json to_json() const;
};

inline constexpr int kMaxPartitionPoints = 8;

// Checks 1_{S^c} against the union over partitions of prod_u 1_{C_|u|} on
// random configurations in the 2*lambda box. Uses L_eps = L*eps.
PartitionCheckReport partition_sum_check(int n, double eps, double lambda, long n_mc, const ScalingGeometry& g, double L = 1.0,
                                         std::uint64_t seed = 1);

struct VolumeEstimate {
  double estimate = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  double bound = 0.0;  // (L eps ^ lambda)^{n|s|} lambda^{n|s|}
  double ratio = 0.0;
  long hits = 0;
  long n_mc = 0;
};

// Monte Carlo volume of S^c inside {|z_i|_s <= 2 lambda}, Wilson 95% interval.
VolumeEstimate volume_Sc(int n, double eps, double lambda, const ScalingGeometry& g, long n_mc, double L = 1.0,
                         std::uint64_t seed = 1);

// Exact S^c volume for two points in d=1: (2a)^2 - (2a - l)^2, a = 2 lambda.
double volume_Sc_two_point_exact(double eps, double lambda, double L = 1.0);

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long hits, long n, double z = 1.96);

// Uniform point in {|z|_s <= r}.
class Stream;
Point sample_ball(const ScalingGeometry& g, double r, Stream& rs);

}  // namespace tchaos
