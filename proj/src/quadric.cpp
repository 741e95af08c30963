#include "hupq/quadric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace hupq {

namespace {

constexpr double kTiny = 1e-300;

double inf_norm(const Mat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

QuadricSurface::QuadricSurface(Mat B_, Vec v_, double rho_)
    : B(std::move(B_)), v(std::move(v_)), rho(rho_) {
  const auto d = v.size();
  if (d < 2) throw std::invalid_argument("QuadricSurface: dimension must be >= 2");
  if (B.rows() != d || B.cols() != d)
    throw std::invalid_argument("QuadricSurface: B must be d x d");
  B = ((B + B.transpose()) / 2.0).eval();
  if (inf_norm(B) == 0.0 && v.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("QuadricSurface: B and v must not both vanish");
}

Hyperplane::Hyperplane(Vec u_, double s_) : u(std::move(u_)), s(s_) {
  const double n = u.norm();
  if (!(n > 0.0)) throw std::invalid_argument("Hyperplane: normal must be nonzero");
  u /= n;
  s /= n;
}

double eval_p(const QuadricSurface& S, const Vec& x) {
  return x.dot(S.B * x) + 2.0 * S.v.dot(x) - S.rho;
}

double scale(const QuadricSurface& S, const Vec& x) {
  const double xn = x.norm();
  return inf_norm(S.B) * xn * xn + S.v.norm() * xn + std::abs(S.rho);
}

bool on_surface(const QuadricSurface& S, const Vec& x, double tol) {
  return std::abs(eval_p(S, x)) <= tol * std::max(1.0, scale(S, x));
}

double q_form(const QuadricSurface& S, const Vec& u) { return u.dot(S.B * u); }

double b_form(const QuadricSurface& S, const Vec& x, const Vec& u) {
  return x.dot(S.B * u);
}

double b_affine(const QuadricSurface& S, const Vec& x, const Vec& u) {
  return b_form(S, x, u) + S.v.dot(u);
}

const char* to_string(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Point: return "point";
    case ConicClass::Empty: return "empty";
    case ConicClass::Parabola: return "parabola";
    case ConicClass::ParallelLines: return "parallel-lines";
    case ConicClass::SingleLine: return "single-line";
    case ConicClass::Hyperbola: return "hyperbola";
    case ConicClass::IntersectingLines: return "intersecting-lines";
    default: return "line";
  }
}

ConicFiber fiber_conic(const QuadricSurface& S, const Vec& x, const Vec& u1,
                       const Vec& v2) {
  if (std::abs(u1.norm() - 1.0) > 1e-9 || std::abs(v2.norm() - 1.0) > 1e-9 ||
      std::abs(u1.dot(v2)) > 1e-9)
    throw std::invalid_argument("fiber_conic: (u1, v2) must be orthonormal");
  return ConicFiber{q_form(S, u1), b_form(S, u1, v2), q_form(S, v2),
                    b_affine(S, x, u1), b_affine(S, x, v2)};
}

double discriminant(const ConicFiber& f) { return f.a * f.c - f.b * f.b; }

ConicClass classify_conic(const ConicFiber& f, double tol) {
  const double coeff_scale = std::max({std::abs(f.a), std::abs(f.b), std::abs(f.c),
                                       std::abs(f.p), std::abs(f.q)});
  if (coeff_scale == 0.0)
    throw std::invalid_argument("classify_conic: all coefficients vanish");
  const double quad_scale = std::max({std::abs(f.a), std::abs(f.b), std::abs(f.c)});
  if (quad_scale <= tol * coeff_scale) return ConicClass::Line;

  Eigen::Matrix3d M;
  M << f.a, f.b, f.p, f.b, f.c, f.q, f.p, f.q, 0.0;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < 3; ++i)
    if (sv(i) > tol * sv(0)) ++rank;

  const double delta = discriminant(f);
  const double thr = tol * quad_scale * quad_scale;
  if (delta > thr) return rank == 3 ? ConicClass::Ellipse : ConicClass::Point;
  if (delta < -thr)
    return rank == 3 ? ConicClass::Hyperbola : ConicClass::IntersectingLines;
  if (rank == 3) return ConicClass::Parabola;
  return rank == 2 ? ConicClass::ParallelLines : ConicClass::SingleLine;
}

DirectionSplit decompose_direction(const Vec& u1, const Vec& u2) {
  Vec a = u1 / std::max(u1.norm(), kTiny);
  Vec b = u2 / std::max(u2.norm(), kTiny);
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  Vec w = b - c * a;
  const double sn = w.norm();
  if (sn <= 1e-12)
    throw std::invalid_argument("decompose_direction: directions are parallel");
  return DirectionSplit{std::atan2(sn, c), w / sn};
}

QuadricSurface translate_surface(const QuadricSurface& S, const Vec& x0) {
  const double rho2 = S.rho - q_form(S, x0) - 2.0 * S.v.dot(x0);
  return QuadricSurface(S.B, S.B * x0 + S.v, rho2);
}

QuadricSurface linear_pullback(const QuadricSurface& S, const Mat& T) {
  Eigen::FullPivLU<Mat> lu(T);
  if (!lu.isInvertible())
    throw std::invalid_argument("linear_pullback: T must be invertible");
  return QuadricSurface(T.transpose() * S.B * T, T.transpose() * S.v, S.rho);
}

Hyperplane translate_hyperplane(const Hyperplane& H, const Vec& xi0) {
  return Hyperplane(H.u, H.s - H.u.dot(xi0));
}

Hyperplane adjoint_transport(const Hyperplane& H, const Mat& T) {
  Eigen::FullPivLU<Mat> lu(T);
  if (!lu.isInvertible())
    throw std::invalid_argument("adjoint_transport: T must be invertible");
  Vec w = lu.solve(H.u);  // T^*(H_{u,s}) = { zeta : <zeta, T^{-1} u> = s }
  return Hyperplane(w, H.s);
}

std::optional<Vec> solve_quadric_point(const Mat& A, const Vec& w, double c,
                                       double tol) {
  const auto m = A.rows();
  if (m == 0) {
    if (std::abs(c) <= tol) return Vec(0);
    return std::nullopt;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(((A + A.transpose()) / 2.0).eval());
  const Vec lam = es.eigenvalues();
  const Mat U = es.eigenvectors();
  const Vec wt = U.transpose() * w;

  const double lscale = lam.cwiseAbs().maxCoeff();
  const double ltau = tol * std::max(lscale, 1.0);
  const double wtau = tol * std::max(w.norm(), 1.0);

  // A null direction with a live linear term solves the equation outright.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(lam(i)) <= ltau && std::abs(wt(i)) > wtau) {
      Vec y = Vec::Zero(m);
      y(i) = -c / (2.0 * wt(i));
      return U * y;
    }
  }

  // Complete squares on the non-null directions; the centered level decides.
  Vec y0 = Vec::Zero(m);
  double c2 = c;
  double lpos = 0.0, lneg = 0.0;
  Eigen::Index ipos = -1, ineg = -1;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(lam(i)) <= ltau) continue;
    y0(i) = -wt(i) / lam(i);
    c2 -= wt(i) * wt(i) / lam(i);
    if (lam(i) > lpos) { lpos = lam(i); ipos = i; }
    if (lam(i) < lneg) { lneg = lam(i); ineg = i; }
  }
  const double ctau = tol * std::max({std::abs(c), std::abs(c2 - c), 1.0});
  if (std::abs(c2) <= ctau) return U * y0;
  if (c2 < 0.0 && ipos >= 0) {
    y0(ipos) += std::sqrt(-c2 / lpos);
    return U * y0;
  }
  if (c2 > 0.0 && ineg < 0) return std::nullopt;
  if (c2 > 0.0) {
    y0(ineg) += std::sqrt(c2 / (-lneg));
    return U * y0;
  }
  return std::nullopt;
}

std::optional<Vec> any_point(const QuadricSurface& S) {
  auto z = solve_quadric_point(S.B, S.v, -S.rho);
  if (!z) return std::nullopt;
  return refine_to_surface(S, *z);
}

std::optional<Vec> sample_point(const QuadricSurface& S, std::mt19937_64& rng,
                                int retries) {
  const int d = S.dim();
  const double bn = inf_norm(S.B);
  double rc = 1.0 + std::sqrt((std::abs(S.rho) + S.v.norm()) / std::max(bn, 1e-9));
  rc = std::min(rc, 1e3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int it = 0; it < retries; ++it) {
    Vec z(d), w(d);
    for (int i = 0; i < d; ++i) z(i) = rc * gauss(rng);
    for (int i = 0; i < d; ++i) w(i) = gauss(rng);
    const double wn = w.norm();
    if (wn < 1e-12) continue;
    w /= wn;
    const double a2 = q_form(S, w);
    const double a1 = 2.0 * b_affine(S, z, w);
    const double a0 = eval_p(S, z);
    double t;
    if (std::abs(a2) <= 1e-14 * (std::abs(a1) + std::abs(a0))) {
      if (std::abs(a1) <= kTiny) continue;
      t = -a0 / a1;
    } else {
      const double disc = a1 * a1 - 4.0 * a2 * a0;
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      const double qq = -(a1 + (a1 >= 0.0 ? sq : -sq)) / 2.0;
      const double t1 = qq / a2;
      if (std::abs(qq) <= kTiny) {
        t = t1;
      } else {
        const double t2 = a0 / qq;
        t = (rng() & 1u) ? t1 : t2;
      }
    }
    Vec x = refine_to_surface(S, z + t * w);
    if (on_surface(S, x)) return x;
  }
  return std::nullopt;
}

Vec refine_to_surface(const QuadricSurface& S, Vec x, int iters) {
  for (int it = 0; it < iters; ++it) {
    Vec g = 2.0 * (S.B * x + S.v);
    const double gn2 = g.squaredNorm();
    if (gn2 <= kTiny) break;
    x -= (eval_p(S, x) / gn2) * g;
  }
  return x;
}

GlobalClass classify_global(const QuadricSurface& S, double tol) {
  const int d = S.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(S.B);
  const Vec lam = es.eigenvalues();
  const double lscale = lam.cwiseAbs().maxCoeff();
  const double ltau = tol * std::max(lscale, kTiny);
  int pos = 0, neg = 0, zero = 0;
  for (int i = 0; i < d; ++i) {
    if (lam(i) > ltau) ++pos;
    else if (lam(i) < -ltau) ++neg;
    else ++zero;
  }
  auto planar = [d](const char* two, const char* many) { return d == 2 ? two : many; };
  GlobalClass out{"", pos, neg, zero};
  if (pos + neg == 0) {
    out.tag = planar("line", "hyperplane");
    return out;
  }
  // Try to center: B x_c = -v, consistent iff v has no component in ker B.
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(S.B);
  Vec xc = cod.solve(-S.v);
  const bool centered =
      (S.B * xc + S.v).norm() <= 1e-8 * std::max(1.0, S.v.norm() + lscale * xc.norm());
  if (!centered) {
    out.tag = (zero > 1) ? planar("parabola", "parabolic-cylinder")
                         : planar("parabola", "paraboloid");
    return out;
  }
  double level = -eval_p(S, xc);
  int np = pos, nn = neg;
  if (nn > np) {  // the set is invariant under negating P
    std::swap(np, nn);
    level = -level;
  }
  const double ltol = tol * std::max(1.0, scale(S, xc));
  if (zero == 0 && nn == 0) {
    if (level > ltol) {
      bool round = true;
      for (int i = 1; i < d; ++i)
        if (std::abs(lam(i) - lam(0)) > tol * std::max(1.0, lscale)) round = false;
      out.tag = round ? planar("circle", "sphere") : planar("ellipse", "ellipsoid");
    } else if (level < -ltol) {
      out.tag = "empty";
    } else {
      out.tag = "point";
    }
    return out;
  }
  if (zero == 0) {
    out.tag = std::abs(level) <= ltol ? "cone" : planar("hyperbola", "hyperboloid");
    return out;
  }
  if (np + nn == 1) {
    if (level > ltol) out.tag = planar("parallel-lines", "parallel-hyperplanes");
    else if (level < -ltol) out.tag = "empty";
    else out.tag = planar("line", "hyperplane");
    return out;
  }
  out.tag = "cylinder";
  return out;
}

}  // namespace hupq
