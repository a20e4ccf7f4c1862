#pragma once

#include <Eigen/Core>
#include <memory>
#include <variant>

namespace cpl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class RepKind { VPolytope, HPolytope, Ellipsoid, BallCylinder };

// vertices are rows; canonical form is lexicographically sorted, irredundant
struct VPolytopeRep {
  Mat vertices;
};

// <normals.row(i), x> <= offsets[i]; canonical form has unit normals,
// irredundant rows, lexicographic order
struct HPolytopeRep {
  Mat normals;
  Vec offsets;
};

// { x : (x - center)^T shape^{-1} (x - center) <= 1 }, shape SPD
struct EllipsoidRep {
  Vec center;
  Mat shape;
};

// B_2^k x [-h, h] in R^{k+1}; closed-form gauge / support / volume.
// Restricted to the verification suite (no polytope conversion).
struct BallCylinderRep {
  int ball_dim = 0;
  double half_length = 0.0;
};

// Immutable convex body in R^dim. All operations on bodies are pure
// functions; bodies are safe to share across threads. An optional cached
// dual representation (V <-> H) can be attached at construction time.
class ConvexBody {
 public:
  // vertices: any spanning point set; canonicalized to the irredundant,
  // lexicographically sorted vertex list of its hull
  static ConvexBody vpolytope(const Mat& vertices);
  // halfspaces: normalized to unit normals, redundancy removed, sorted;
  // boundedness and full-dimensionality are checked here
  static ConvexBody hpolytope(const Mat& normals, const Vec& offsets);
  static ConvexBody ellipsoid(const Vec& center, const Mat& shape);
  static ConvexBody ball_cylinder(int ball_dim, double half_length);
  static ConvexBody ball(int dim, double radius = 1.0);

  // trusted constructors skip canonicalization (inputs already canonical)
  static ConvexBody vpolytope_trusted(Mat vertices);
  static ConvexBody hpolytope_trusted(Mat normals, Vec offsets);

  int dim() const { return dim_; }
  RepKind kind() const;

  bool is_vpolytope() const { return kind() == RepKind::VPolytope; }
  bool is_hpolytope() const { return kind() == RepKind::HPolytope; }
  bool is_ellipsoid() const { return kind() == RepKind::Ellipsoid; }
  bool is_cylinder() const { return kind() == RepKind::BallCylinder; }
  bool is_polytope() const { return is_vpolytope() || is_hpolytope(); }

  const VPolytopeRep& vrep() const;
  const HPolytopeRep& hrep() const;
  const EllipsoidRep& erep() const;
  const BallCylinderRep& crep() const;

  // cached dual form (the other polytope representation), if attached
  std::shared_ptr<const ConvexBody> cached_dual() const { return dual_; }
  ConvexBody with_cached_dual() const;  // computes and attaches the dual form

  // crude but cheap: max vertex norm / support over axes; used for scaling
  double circumradius_upper() const;

 private:
  ConvexBody(int dim, std::variant<VPolytopeRep, HPolytopeRep, EllipsoidRep,
                                   BallCylinderRep> rep)
      : dim_(dim), rep_(std::move(rep)) {}

  int dim_;
  std::variant<VPolytopeRep, HPolytopeRep, EllipsoidRep, BallCylinderRep> rep_;
  std::shared_ptr<const ConvexBody> dual_;
};

// Linear subspace of R^n given by an orthonormal basis (columns).
class Subspace {
 public:
  // orthonormalizes the given spanning columns (QR); rank defects rejected
  static Subspace span(const Mat& columns);
  // trusted: columns already orthonormal to 1e-12
  static Subspace from_orthonormal(Mat basis);
  static Subspace full(int ambient);
  static Subspace zero(int ambient);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }

  Subspace complement() const;               // orthogonal complement
  Subspace direct_sum(const Subspace&) const;  // requires orthogonality
  Vec lift(const Vec& local) const { return basis_ * local; }
  Vec coords(const Vec& ambient) const { return basis_.transpose() * ambient; }

 private:
  explicit Subspace(Mat basis) : basis_(std::move(basis)) {}
  Mat basis_;  // ambient x k, orthonormal columns
};

// Invertible affine map x -> linear x + shift.
struct AffinePosition {
  Mat linear;
  Vec shift;

  static AffinePosition identity(int dim);
  static AffinePosition translation(const Vec& t);
  static AffinePosition linear_map(const Mat& T);

  Vec apply(const Vec& x) const { return linear * x + shift; }
  ConvexBody apply(const ConvexBody& K) const;
  AffinePosition compose(const AffinePosition& inner) const;  // this after inner
  AffinePosition inverse() const;
  double det() const;
  double condition_number() const;  // reported, not bounded
};

}  // namespace cpl
