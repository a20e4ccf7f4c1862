#pragma once

#include <Eigen/Core>
#include <vector>

namespace cpl {

// Convex hull of a point set in R^n (points are rows), n <= 12.
//
// Incremental insertion with a facet adjacency graph and conflict lists;
// insertion order is a seeded shuffle so results are deterministic. The
// boundary is kept simplicial during construction; coplanar simplices are
// merged afterwards and each merged plane is refit through the original
// (unperturbed) coordinates of its incident vertices. If the build hits a
// degenerate cone the whole run is retried with a tiny symbolic perturbation;
// output planes always come from the original coordinates.
struct HullResult {
  // simplicial boundary: each row of `simplices` holds n point indices
  std::vector<std::vector<int>> simplices;
  // indices of input points that are vertices of the hull, ascending
  std::vector<int> vertices;
  // merged, irredundant facet planes: <normal, x> <= offset, unit normals
  Eigen::MatrixXd facet_normals;
  Eigen::VectorXd facet_offsets;
  double volume = 0.0;  // from the simplicial triangulation, apex = vertex centroid
  bool perturbed = false;
};

HullResult convex_hull(const Eigen::MatrixXd& points, uint64_t seed = 0x9e3779b9ULL);

// volume only (same triangulation)
double hull_volume(const Eigen::MatrixXd& points);

}  // namespace cpl
