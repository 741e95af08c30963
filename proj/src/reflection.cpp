#include "hupq/reflection.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace hupq {

bool is_isotropic(const QuadricSurface& S, const Vec& u, double tol) {
  const double bn = S.B.cwiseAbs().maxCoeff();
  return std::abs(q_form(S, u)) <= tol * std::max(1e-300, bn * u.squaredNorm());
}

namespace {

double reflect_denominator(const QuadricSurface& S, const Vec& u) {
  const double qu = q_form(S, u);
  if (is_isotropic(S, u))
    throw std::invalid_argument("reflection requires a non-isotropic normal");
  return qu;
}

}  // namespace

Vec q_reflect(const QuadricSurface& S, const Vec& u, const Vec& x) {
  const double qu = reflect_denominator(S, u);
  return x - (2.0 * b_affine(S, x, u) / qu) * u;
}

AffineMap q_reflect_map(const QuadricSurface& S, const Vec& u) {
  const double qu = reflect_denominator(S, u);
  const int d = S.dim();
  AffineMap map;
  map.A = Mat::Identity(d, d) - (2.0 / qu) * u * (S.B * u).transpose();
  map.b = -(2.0 * S.v.dot(u) / qu) * u;
  return map;
}

Vec adjoint_reflect(const QuadricSurface& S, const Vec& u, const Vec& xi) {
  const double qu = reflect_denominator(S, u);
  return xi - (2.0 * xi.dot(u) / qu) * (S.B * u);
}

double fiber_offset(const QuadricSurface& S, const Vec& u, const Vec& x) {
  const double qu = reflect_denominator(S, u);
  return -2.0 * b_affine(S, x, u) / qu;
}

Vec fiber_partner(const QuadricSurface& S, const Vec& u, const Vec& x) {
  return x + fiber_offset(S, u, x) * u;
}

bool line_in_surface(const QuadricSurface& S, const Vec& x, const Vec& u,
                     double tol) {
  const double sc = std::max(1.0, scale(S, x) + u.squaredNorm() * S.B.cwiseAbs().maxCoeff());
  return std::abs(q_form(S, u)) <= tol * sc && std::abs(b_affine(S, x, u)) <= tol * sc &&
         std::abs(eval_p(S, x)) <= tol * sc;
}

EuIntersection intersect_Eu_family(const QuadricSurface& S,
                                   const std::vector<Vec>& normals,
                                   double tol) {
  const int d = S.dim();

  Vec center = Vec::Zero(d);
  if (S.v.norm() > 0.0) {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(S.B);
    center = cod.solve(-S.v);
    if ((S.B * center + S.v).norm() > 1e-9 * (1.0 + S.v.norm()))
      throw std::invalid_argument("surface has no center");
  }
  const double level = -eval_p(S, center);
  const double ltol = tol * (1.0 + std::abs(level));

  // Constraints B(y, u_j) = 0 in centered coordinates y = x - center.
  Mat kernel;
  if (normals.empty()) {
    kernel = Mat::Identity(d, d);
  } else {
    Mat C(static_cast<int>(normals.size()), d);
    for (std::size_t j = 0; j < normals.size(); ++j)
      C.row(static_cast<int>(j)) = (S.B * normals[j]).transpose();
    Eigen::FullPivLU<Mat> lu(C);
    lu.setThreshold(1e-10);
    kernel = lu.kernel();
    if (lu.dimensionOfKernel() == 0) kernel = Mat::Zero(d, 0);
  }

  EuIntersection out;
  if (kernel.cols() == 0) {
    out.kind = std::abs(level) <= ltol ? EuIntersection::Kind::CenterOnly
                                       : EuIntersection::Kind::Empty;
    return out;
  }

  // Orthonormalize and diagonalize the restricted form.
  const int nk = static_cast<int>(kernel.cols());
  Eigen::HouseholderQR<Mat> qr(kernel);
  const Mat Wb = qr.householderQ() * Mat::Identity(d, nk);
  const Mat A = Wb.transpose() * S.B * Wb;
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  const Vec lam = es.eigenvalues();
  const Mat evec = es.eigenvectors();
  const double lscale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  const double ztol = tol * lscale;

  auto witness_from = [&](const Vec& y_restricted) {
    out.kind = EuIntersection::Kind::Witness;
    out.witness = center + Wb * y_restricted;
  };

  if (std::abs(level) <= ltol) {
    for (int i = 0; i < nk; ++i) {
      if (std::abs(lam(i)) <= ztol) {
        witness_from(evec.col(i));
        return out;
      }
    }
    if (lam(0) < -ztol && lam(nk - 1) > ztol) {
      // Eigenvectors are A-orthogonal, so this mix is exactly null for Q.
      witness_from(evec.col(nk - 1) / std::sqrt(lam(nk - 1)) +
                   evec.col(0) / std::sqrt(-lam(0)));
      return out;
    }
    out.kind = EuIntersection::Kind::CenterOnly;
    return out;
  }

  if (level > ltol && lam(nk - 1) > ztol) {
    witness_from(std::sqrt(level / lam(nk - 1)) * evec.col(nk - 1));
    return out;
  }
  if (level < -ltol && lam(0) < -ztol) {
    witness_from(std::sqrt(level / lam(0)) * evec.col(0));
    return out;
  }
  out.kind = EuIntersection::Kind::Empty;
  return out;
}

}  // namespace hupq
