#include "hupq/cramer_wold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "hupq/reflection.hpp"

namespace hupq {
namespace {

void check_directions(const QuadricSurface& S, const Hyperplane& H1, const Hyperplane& H2) {
  if (static_cast<int>(H1.u.size()) != S.dim() || static_cast<int>(H2.u.size()) != S.dim())
    throw std::invalid_argument("projection hyperplanes must match the surface dimension");
  if (std::abs(H1.s) > 1e-9 || std::abs(H2.s) > 1e-9)
    throw std::invalid_argument("projection hyperplanes must pass through the origin");
  if (is_isotropic(S, H1.u) || is_isotropic(S, H2.u))
    throw std::invalid_argument("projection normals must be non-isotropic");
  if (std::abs(H1.u.dot(H2.u)) >= 1.0 - 1e-12)
    throw std::invalid_argument("projection normals must be distinct");
}

// Real roots of eval_p(S, y + t u) = Q(u) t^2 + 2 b_affine(y, u) t + P(y).
std::vector<double> lift_roots(const QuadricSurface& S, const Vec& y, const Vec& u) {
  const double A = q_form(S, u);
  const double B = b_affine(S, y, u);
  const double C = eval_p(S, y);
  const double sc = std::max({std::abs(A), std::abs(B), std::abs(C), 1.0});
  std::vector<double> roots;
  if (std::abs(A) <= 1e-14 * sc) {
    if (std::abs(B) > 1e-14 * sc) roots.push_back(-C / (2.0 * B));
    return roots;
  }
  const double disc = B * B - A * C;
  if (disc < -1e-12 * sc * sc) return roots;
  if (disc <= 1e-12 * sc * sc) {
    roots.push_back(-B / A);
    return roots;
  }
  // Cancellation-safe split: the larger-magnitude root first, the other via
  // the product of roots.
  const double q = -(B + std::copysign(std::sqrt(disc), B == 0.0 ? 1.0 : B));
  roots.push_back(q / A);
  roots.push_back(C / q);
  return roots;
}

struct Lift {
  Vec x;
  int atom;  // index into the source projection
};

std::vector<Lift> lift_cloud(const QuadricSurface& S, const AtomicMeasure& p, const Mat& V,
                             const Vec& u, double tol) {
  std::vector<Lift> cloud;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vec y = V * p.atoms[k];
    for (double t : lift_roots(S, y, u)) {
      const Vec x = y + t * u;
      bool dup = false;
      for (const Lift& L : cloud)
        if (L.atom == static_cast<int>(k) && (L.x - x).norm() <= tol) {
          dup = true;
          break;
        }
      if (!dup) cloud.push_back({x, static_cast<int>(k)});
    }
  }
  return cloud;
}

}  // namespace

std::pair<AtomicMeasure, AtomicMeasure> forward(const QuadricSurface& S, const AtomicMeasure& mu,
                                                const Hyperplane& H1, const Hyperplane& H2) {
  check_directions(S, H1, H2);
  return {project_to_hyperplane(mu, H1), project_to_hyperplane(mu, H2)};
}

Reconstruction reconstruct(const QuadricSurface& S, const Hyperplane& H1, const Hyperplane& H2,
                           const AtomicMeasure& p1, const AtomicMeasure& p2, double tol) {
  check_directions(S, H1, H2);
  Reconstruction out;

  const double tv = 0.5 * (p1.total_variation() + p2.total_variation());
  if (tv <= 1e-15) {
    out.status = ReconstructStatus::Recovered;
    out.notes.push_back("both projections vanish; only the zero measure projects to them");
    return out;
  }
  if (p1.size() == 0 || p2.size() == 0) {
    out.notes.push_back("one projection vanishes while the other does not");
    return out;
  }

  const Vec u1 = H1.u.normalized();
  const Vec u2 = H2.u.normalized();
  const Mat V1 = hyperplane_basis(H1.u);
  const Mat V2 = hyperplane_basis(H2.u);
  const std::vector<Lift> L1 = lift_cloud(S, p1, V1, u1, tol);
  const std::vector<Lift> L2 = lift_cloud(S, p2, V2, u2, tol);
  if (L1.empty() || L2.empty()) {
    out.notes.push_back("a projected atom has no lift onto the surface");
    return out;
  }

  // Candidate support: mutual nearest neighbors of the two lift clouds
  // within the matching radius. Both clouds discretize the same support, so
  // a genuine atom appears in each and pairs with itself.
  auto nearest = [](const std::vector<Lift>& cloud, const Vec& x) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double d = (cloud[i].x - x).norm();
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return std::make_pair(best, bd);
  };
  std::vector<Vec> cand;
  for (std::size_t i = 0; i < L1.size(); ++i) {
    const auto [j, dij] = nearest(L2, L1[i].x);
    if (dij > tol) continue;
    const auto [ii, dji] = nearest(L1, L2[j].x);
    if (ii != i) continue;
    const Vec mid = 0.5 * (L1[i].x + L2[j].x);
    bool dup = false;
    for (const Vec& c : cand)
      if ((c - mid).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) cand.push_back(mid);
  }
  if (cand.empty()) {
    out.notes.push_back("the two lift clouds share no point within the matching radius");
    return out;
  }

  // Weight matching: one equation per projected atom, summing the candidate
  // weights inside its fiber.
  const int n1 = static_cast<int>(p1.size());
  const int n2 = static_cast<int>(p2.size());
  const int nc = static_cast<int>(cand.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n1 + n2, nc);
  Eigen::VectorXcd rhs(n1 + n2);
  for (int i = 0; i < n1; ++i) rhs(i) = p1.weights[i];
  for (int i = 0; i < n2; ++i) rhs(n1 + i) = p2.weights[i];
  for (int c = 0; c < nc; ++c) {
    const Vec pr1 = V1.transpose() * cand[c];
    const Vec pr2 = V2.transpose() * cand[c];
    for (int i = 0; i < n1; ++i)
      if ((pr1 - p1.atoms[i]).norm() <= 2.0 * tol) M(i, c) = 1.0;
    for (int i = 0; i < n2; ++i)
      if ((pr2 - p2.atoms[i]).norm() <= 2.0 * tol) M(n1 + i, c) = 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  const double smax = sig(0);
  const double smin = sig(sig.size() - 1);
  const bool deficient = nc > n1 + n2 || smax <= 0.0 || smin / smax <= 1e-8;
  if (deficient) {
    out.status = ReconstructStatus::Ambiguous;
    Eigen::VectorXcd kv = svd.matrixV().col(nc - 1);
    for (int c = 0; c < nc; ++c) out.kernel_witness.add(cand[c], kv(c));
    out.notes.push_back(
        "the weight-matching system is rank deficient: this direction pair is "
        "exceptional for the candidate support");
    return out;
  }

  const Eigen::VectorXcd wsol = svd.solve(rhs);
  const double resid = (M * wsol - rhs).norm();
  if (resid >= tol * tv) {
    out.notes.push_back("no weight assignment on the candidate support matches both projections");
    return out;
  }
  AtomicMeasure rec;
  const double wmax = wsol.cwiseAbs().maxCoeff();
  for (int c = 0; c < nc; ++c)
    if (std::abs(wsol(c)) > 1e-10 * wmax) rec.add(cand[c], wsol(c));
  const auto [q1, q2] = forward(S, rec, H1, H2);
  if (measure_deviation(q1, p1, tol) > tol * std::max(1.0, tv) ||
      measure_deviation(q2, p2, tol) > tol * std::max(1.0, tv)) {
    out.notes.push_back("solved weights fail the forward check against the projections");
    return out;
  }
  out.status = ReconstructStatus::Recovered;
  out.measure = std::move(rec);
  return out;
}

bool uniqueness_demo(const QuadricSurface& S, const Hyperplane& H1, const Hyperplane& H2,
                     const AtomicMeasure& mu, const AtomicMeasure& nu, double tol) {
  const auto [a1, a2] = forward(S, mu, H1, H2);
  const auto [b1, b2] = forward(S, nu, H1, H2);
  const double mass = std::max(1.0, 0.5 * (mu.total_variation() + nu.total_variation()));
  if (measure_deviation(a1, b1, tol) > tol * mass || measure_deviation(a2, b2, tol) > tol * mass)
    throw std::invalid_argument("uniqueness_demo: the forward projections disagree");
  return measure_deviation(mu, nu, tol) <= tol * mass;
}

}  // namespace hupq
