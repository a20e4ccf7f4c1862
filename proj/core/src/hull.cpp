#include "cpl/hull.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/lp.hpp"
#include "cpl/rng.hpp"

namespace cpl {
namespace {

struct Facet {
  std::vector<int> verts;      // n point indices, sorted ascending
  std::vector<int> neighbors;  // neighbors[i] is across the ridge omitting verts[i]
  Eigen::VectorXd normal;      // unit outward
  double offset = 0.0;
  std::vector<int> outside;    // conflict list
  bool alive = true;
};

struct BuildFailure {};  // degenerate cone; caller retries with perturbation

class Builder {
 public:
  Builder(const Eigen::MatrixXd& pts, uint64_t seed)
      : pts_(pts), n_(static_cast<int>(pts.cols())),
        m_(static_cast<int>(pts.rows())) {
    scale_ = std::max(1e-12, pts.array().abs().maxCoeff());
    eps_ = HULL_EPS * scale_;
    seed_ = seed;
  }

  std::vector<Facet> run() {
    initial_simplex();
    std::vector<int> order(m_);
    std::iota(order.begin(), order.end(), 0);
    CounterRng rng(seed_, 17);
    rng.shuffle(order);
    distribute_initial(order);
    for (int p : order) {
      if (witness_[p] >= 0) insert_point(p);
    }
    return std::move(facets_);
  }

 private:
  double dist(const Facet& f, int p) const {
    return f.normal.dot(pts_.row(p)) - f.offset;
  }

  // plane through the n points `vs`, oriented away from `inside`
  void fit_plane(const std::vector<int>& vs, const Eigen::VectorXd& inside,
                 Eigen::VectorXd& normal, double& offset) const {
    Eigen::MatrixXd M(n_, n_ - 1);
    for (int i = 1; i < n_; ++i)
      M.col(i - 1) = (pts_.row(vs[i]) - pts_.row(vs[0])).transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    normal = Q.col(n_ - 1);
    // rank check: the span must really be (n-1)-dimensional
    Eigen::MatrixXd R = qr.matrixQR().topRows(n_ - 1);
    for (int i = 0; i < n_ - 1; ++i) {
      if (std::abs(R(i, i)) < 1e-13 * scale_) throw BuildFailure{};
    }
    offset = normal.dot(pts_.row(vs[0]));
    if (normal.dot(inside) > offset) { normal = -normal; offset = -offset; }
  }

  void initial_simplex() {
    std::vector<int> chosen;
    // farthest pair along the coordinate of largest spread
    int best_dim = 0;
    double best_spread = -1;
    for (int j = 0; j < n_; ++j) {
      const double s = pts_.col(j).maxCoeff() - pts_.col(j).minCoeff();
      if (s > best_spread) { best_spread = s; best_dim = j; }
    }
    int i0, i1;
    pts_.col(best_dim).minCoeff(&i0);
    pts_.col(best_dim).maxCoeff(&i1);
    if (i0 == i1 || best_spread < 1e-10 * scale_)
      fail(ErrorCode::DegenerateBody, "point set has no extent");
    chosen.push_back(i0);
    chosen.push_back(i1);
    // grow an affinely independent set, farthest-from-span greedy
    Eigen::MatrixXd basis(n_, 0);
    while (static_cast<int>(chosen.size()) < n_ + 1) {
      const Eigen::VectorXd origin = pts_.row(chosen[0]).transpose();
      {
        Eigen::MatrixXd D(n_, static_cast<int>(chosen.size()) - 1);
        for (size_t k = 1; k < chosen.size(); ++k)
          D.col(static_cast<int>(k - 1)) = pts_.row(chosen[k]).transpose() - origin;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(D);
        basis = Eigen::MatrixXd(qr.householderQ()) .leftCols(D.cols());
      }
      int best = -1;
      double bestd = 1e-8 * scale_;
      for (int p = 0; p < m_; ++p) {
        Eigen::VectorXd d = pts_.row(p).transpose() - origin;
        d -= basis * (basis.transpose() * d);
        const double nd = d.norm();
        if (nd > bestd) { bestd = nd; best = p; }
      }
      if (best < 0)
        fail(ErrorCode::DegenerateBody, "points are not full-dimensional");
      chosen.push_back(best);
    }
    interior_ = Eigen::VectorXd::Zero(n_);
    for (int v : chosen) interior_ += pts_.row(v).transpose();
    interior_ /= static_cast<double>(chosen.size());
    // n+1 facets, one per omitted vertex
    std::sort(chosen.begin(), chosen.end());
    for (int omit = 0; omit <= n_; ++omit) {
      Facet f;
      for (int k = 0; k <= n_; ++k)
        if (k != omit) f.verts.push_back(chosen[k]);
      fit_plane(f.verts, interior_, f.normal, f.offset);
      f.neighbors.assign(n_, -1);
      facets_.push_back(std::move(f));
    }
    // adjacency inside the simplex: ridge omitting verts[i] of facet a is
    // shared with the facet whose omitted vertex is verts[i]
    for (int a = 0; a <= n_; ++a) {
      for (int i = 0; i < n_; ++i) {
        const int v = facets_[a].verts[i];
        for (int b = 0; b <= n_; ++b) {
          if (b == a) continue;
          if (std::find(facets_[b].verts.begin(), facets_[b].verts.end(), v) ==
              facets_[b].verts.end()) {
            facets_[a].neighbors[i] = b;
            break;
          }
        }
      }
    }
  }

  void distribute_initial(const std::vector<int>& order) {
    witness_.assign(m_, -1);
    for (int p : order) {
      int best = -1;
      double bestd = eps_;
      for (size_t f = 0; f < facets_.size(); ++f) {
        const double d = dist(facets_[f], p);
        if (d > bestd) { bestd = d; best = static_cast<int>(f); }
      }
      if (best >= 0) {
        facets_[best].outside.push_back(p);
        witness_[p] = best;
      }
    }
  }

  void insert_point(int p) {
    // visible region by BFS over the adjacency graph
    std::vector<int> visible;
    std::vector<char> seen(facets_.size(), 0);
    std::vector<int> stack{witness_[p]};
    seen[witness_[p]] = 1;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      visible.push_back(f);
      for (int g : facets_[f].neighbors) {
        if (g < 0 || seen[g] || !facets_[g].alive) continue;
        seen[g] = 1;
        if (dist(facets_[g], p) > eps_) stack.push_back(g);
        else seen[g] = 2;  // horizon neighbor, keep out of visible set
      }
    }
    for (int f : visible) seen[f] = 3;

    // horizon ridges: (ridge verts, outside facet, its slot)
    struct Horizon { std::vector<int> ridge; int out_facet; int out_slot; };
    std::vector<Horizon> horizon;
    for (int f : visible) {
      for (int i = 0; i < n_; ++i) {
        const int g = facets_[f].neighbors[i];
        if (g < 0) throw BuildFailure{};
        if (seen[g] == 3) continue;  // internal ridge
        Horizon h;
        for (int k = 0; k < n_; ++k)
          if (k != i) h.ridge.push_back(facets_[f].verts[k]);
        h.out_facet = g;
        h.out_slot = -1;
        for (int k = 0; k < n_; ++k) {
          const int nb = facets_[g].neighbors[k];
          if (nb == f) { h.out_slot = k; break; }
        }
        if (h.out_slot < 0) throw BuildFailure{};
        horizon.push_back(std::move(h));
      }
    }
    if (horizon.empty()) throw BuildFailure{};

    // cone of new facets
    std::vector<int> fresh;
    std::map<std::vector<int>, std::pair<int, int>> open_ridges;
    for (const Horizon& h : horizon) {
      Facet nf;
      nf.verts = h.ridge;
      nf.verts.push_back(p);
      std::sort(nf.verts.begin(), nf.verts.end());
      fit_plane(nf.verts, interior_, nf.normal, nf.offset);
      nf.neighbors.assign(n_, -1);
      const int id = static_cast<int>(facets_.size());
      // wire the horizon ridge
      for (int i = 0; i < n_; ++i) {
        if (nf.verts[i] == p) { nf.neighbors[i] = h.out_facet; break; }
      }
      facets_.push_back(std::move(nf));
      facets_[h.out_facet].neighbors[h.out_slot] = id;
      fresh.push_back(id);
      // ridges between new facets all contain p
      for (int i = 0; i < n_; ++i) {
        Facet& me = facets_[id];
        if (me.verts[i] == p) continue;
        std::vector<int> ridge;
        for (int k = 0; k < n_; ++k)
          if (k != i) ridge.push_back(me.verts[k]);
        auto it = open_ridges.find(ridge);
        if (it == open_ridges.end()) {
          open_ridges.emplace(std::move(ridge), std::make_pair(id, i));
        } else {
          me.neighbors[i] = it->second.first;
          facets_[it->second.first].neighbors[it->second.second] = id;
          open_ridges.erase(it);
        }
      }
    }
    if (!open_ridges.empty()) throw BuildFailure{};

    // retire visible facets, redistribute their conflict lists
    std::vector<int> orphans;
    for (int f : visible) {
      facets_[f].alive = false;
      for (int q : facets_[f].outside)
        if (q != p && witness_[q] == f) orphans.push_back(q);
      facets_[f].outside.clear();
    }
    witness_[p] = -1;
    std::sort(orphans.begin(), orphans.end());
    for (int q : orphans) {
      int best = -1;
      double bestd = eps_;
      for (int f : fresh) {
        const double d = dist(facets_[f], q);
        if (d > bestd) { bestd = d; best = f; }
      }
      witness_[q] = best;
      if (best >= 0) facets_[best].outside.push_back(q);
    }
  }

  const Eigen::MatrixXd& pts_;
  int n_, m_;
  double scale_, eps_;
  uint64_t seed_;
  Eigen::VectorXd interior_;
  std::vector<Facet> facets_;
  std::vector<int> witness_;
};

// merge near-identical planes and refit each through its incident points
void merge_planes(const Eigen::MatrixXd& pts, std::vector<Facet>& facets,
                  const Eigen::VectorXd& interior, double scale,
                  Eigen::MatrixXd& normals, Eigen::VectorXd& offsets) {
  const int n = static_cast<int>(pts.cols());
  std::vector<int> alive;
  for (size_t i = 0; i < facets.size(); ++i)
    if (facets[i].alive) alive.push_back(static_cast<int>(i));
  const int F = static_cast<int>(alive.size());

  // sort by first normal component, then sliding-window pairwise merge;
  // coplanar duplicates agree to fp noise so the window can stay tight
  std::vector<int> idx(F);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return facets[alive[a]].normal[0] < facets[alive[b]].normal[0];
  });
  std::vector<int> group(F, -1);
  int n_groups = 0;
  const double ntol = 1e-7, otol = 1e-7 * scale;
  for (int a = 0; a < F; ++a) {
    const Facet& fa = facets[alive[idx[a]]];
    if (group[idx[a]] < 0) group[idx[a]] = n_groups++;
    for (int b = a + 1; b < F; ++b) {
      const Facet& fb = facets[alive[idx[b]]];
      if (fb.normal[0] - fa.normal[0] > ntol) break;
      if (group[idx[b]] >= 0) continue;
      if ((fa.normal - fb.normal).lpNorm<Eigen::Infinity>() < ntol &&
          std::abs(fa.offset - fb.offset) < otol) {
        group[idx[b]] = group[idx[a]];
      }
    }
  }

  std::vector<std::vector<int>> members(n_groups);   // incident vertex ids
  for (int a = 0; a < F; ++a)
    for (int v : facets[alive[a]].verts) members[group[a]].push_back(v);
  normals.resize(n_groups, n);
  offsets.resize(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    auto& mv = members[g];
    std::sort(mv.begin(), mv.end());
    mv.erase(std::unique(mv.begin(), mv.end()), mv.end());
    Eigen::MatrixXd V(static_cast<int>(mv.size()), n);
    for (size_t k = 0; k < mv.size(); ++k) V.row(static_cast<int>(k)) = pts.row(mv[k]);
    const Eigen::RowVectorXd c = V.colwise().mean();
    Eigen::MatrixXd D = V.rowwise() - c;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
    Eigen::VectorXd nrm = svd.matrixV().col(n - 1);
    double off = nrm.dot(c);
    if (nrm.dot(interior) > off) { nrm = -nrm; off = -off; }
    normals.row(g) = nrm;
    offsets[g] = off;
  }
}

bool point_in_hull_lp(const Eigen::MatrixXd& pts, const std::vector<int>& others,
                      int candidate) {
  const int n = static_cast<int>(pts.cols());
  const int k = static_cast<int>(others.size());
  Eigen::MatrixXd A(n + 1, k);
  for (int j = 0; j < k; ++j) {
    A.block(0, j, n, 1) = pts.row(others[j]).transpose();
    A(n, j) = 1.0;
  }
  Eigen::VectorXd b(n + 1);
  b.head(n) = pts.row(candidate).transpose();
  b[n] = 1.0;
  LpResult r = lp_standard_min(A, b, Eigen::VectorXd::Zero(k));
  return r.ok();
}

HullResult finalize(const Eigen::MatrixXd& pts, std::vector<Facet> facets,
                    bool perturbed) {
  const int n = static_cast<int>(pts.cols());
  const double scale = std::max(1e-12, pts.array().abs().maxCoeff());
  HullResult out;
  out.perturbed = perturbed;

  std::vector<int> vset;
  for (const Facet& f : facets) {
    if (!f.alive) continue;
    out.simplices.push_back(f.verts);
    for (int v : f.verts) vset.push_back(v);
  }
  std::sort(vset.begin(), vset.end());
  vset.erase(std::unique(vset.begin(), vset.end()), vset.end());

  // interior reference for orientation: centroid of hull vertices
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
  for (int v : vset) centroid += pts.row(v).transpose();
  centroid /= static_cast<double>(vset.size());

  merge_planes(pts, facets, centroid, scale, out.facet_normals, out.facet_offsets);

  // verify every input point is inside every refit plane
  const double verify_tol = (perturbed ? 3e-7 : 1e-8) * scale;
  Eigen::MatrixXd prod = pts * out.facet_normals.transpose();  // m x F
  for (int g = 0; g < out.facet_normals.rows(); ++g) {
    if (prod.col(g).maxCoeff() > out.facet_offsets[g] + verify_tol)
      throw BuildFailure{};
  }

  if (perturbed) {
    // perturbation can promote boundary points to vertices; filter them out
    std::vector<int> confirmed;
    for (int v : vset) {
      std::vector<int> others;
      for (int w : vset)
        if (w != v) others.push_back(w);
      if (!point_in_hull_lp(pts, others, v)) confirmed.push_back(v);
    }
    vset = std::move(confirmed);
  }
  out.vertices = vset;

  // Exact volume: cone each boundary simplex to the vertex centroid. The
  // determinants always use the original coordinates, even when the
  // combinatorics came from a perturbed build.
  double vol = 0.0;
  Eigen::MatrixXd M(n, n);
  for (const auto& simplex : out.simplices) {
    for (int i = 0; i < n; ++i)
      M.col(i) = pts.row(simplex[i]).transpose() - centroid;
    vol += std::abs(M.determinant());
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  out.volume = vol / fact;
  return out;
}

}  // namespace

HullResult convex_hull(const Eigen::MatrixXd& points, uint64_t seed) {
  const int n = static_cast<int>(points.cols());
  const int m = static_cast<int>(points.rows());
  if (n < 1 || n > MAX_DIM)
    fail(ErrorCode::Unsupported, "hull dimension out of range");
  if (m < n + 1)
    fail(ErrorCode::DegenerateBody, "too few points for a full-dimensional hull");
  const double scale = std::max(1e-12, points.array().abs().maxCoeff());

  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::MatrixXd build = points;
    bool perturbed = false;
    if (attempt > 0) {
      perturbed = true;
      const double eta = std::pow(10.0, attempt - 1) * 1e-9 * scale;
      CounterRng rng(seed + 1000003ULL * attempt, 23);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
          build(i, j) += eta * rng.gaussian(static_cast<uint64_t>(i) * n + j);
    }
    try {
      Builder builder(build, seed + attempt);
      std::vector<Facet> facets = builder.run();
      return finalize(points, std::move(facets), perturbed);
    } catch (const BuildFailure&) {
      continue;
    }
  }
  fail(ErrorCode::DegenerateBody, "hull construction failed after retries");
}

double hull_volume(const Eigen::MatrixXd& points) {
  return convex_hull(points).volume;
}

}  // namespace cpl
