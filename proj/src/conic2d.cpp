#include "hupq/conic2d.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hupq {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string frac(long long p, long long q) {
  return "(" + std::to_string(p) + "/" + std::to_string(q) + ") pi";
}

Vec rot90(const Vec& w) {
  Vec n(2);
  n << -w(1), w(0);
  return n;
}

bool parallel2(const Vec& a, const Vec& b, double tol) {
  return std::abs(a(0) * b(1) - a(1) * b(0)) <= tol * a.norm() * b.norm();
}

// Undirected line angle in [0, pi).
double line_angle(const Vec& m) {
  double a = std::atan2(m(1), m(0));
  if (a < 0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

QuadricSurface canonical_of(ConicModel m) {
  Mat B(2, 2);
  Vec v(2);
  B.setZero();
  v.setZero();
  switch (m) {
    case ConicModel::Line: v << 0, 0.5; return {B, v, 0.0};
    case ConicModel::Parabola: B(0, 0) = 1; v << 0, -0.5; return {B, v, 0.0};
    case ConicModel::Circle: B.setIdentity(); return {B, v, 1.0};
    case ConicModel::Hyperbola: B(0, 1) = B(1, 0) = 0.5; return {B, v, 1.0};
    case ConicModel::IntersectingLines: B(0, 1) = B(1, 0) = 0.5; return {B, v, 0.0};
    case ConicModel::ParallelLines: B(0, 0) = 1; return {B, v, 1.0};
    case ConicModel::Point: B.setIdentity(); return {B, v, 0.0};
    case ConicModel::Empty: B.setIdentity(); return {B, v, -1.0};
  }
  throw std::logic_error("canonical_of: unreachable");
}

NormalizedConic make(ConicModel m, Mat A, Vec b) {
  return NormalizedConic{m, AffineMap{std::move(A), std::move(b)}, canonical_of(m)};
}

}  // namespace

const char* to_string(ConicModel m) {
  switch (m) {
    case ConicModel::Line: return "line";
    case ConicModel::Parabola: return "parabola";
    case ConicModel::Circle: return "circle";
    case ConicModel::Hyperbola: return "hyperbola";
    case ConicModel::IntersectingLines: return "intersecting-lines";
    case ConicModel::ParallelLines: return "parallel-lines";
    case ConicModel::Point: return "point";
    case ConicModel::Empty: return "empty";
  }
  return "?";
}

namespace {

// Best p/q for a plain real under |x - p/q|, denominators up to maxden.
RationalVerdict best_fraction(double x, long long maxden) {
  RationalVerdict best;
  best.maxden = maxden;
  if (std::abs(x) > 9e15) {
    best.err = std::abs(x);  // out of integer range; report the trivial 0/1
    return best;
  }
  best.p = std::llround(x);
  best.q = 1;
  best.err = std::abs(x - static_cast<double>(best.p));

  auto consider = [&](long long p, long long q) {
    if (q < 1 || q > maxden) return;
    const double err = std::abs(x - static_cast<double>(p) / static_cast<double>(q));
    if (err < best.err) {
      best.p = p;
      best.q = q;
      best.err = err;
    }
  };

  // Convergents h/k of x; at the denominator cap, the one admissible
  // semiconvergent. Errors are compared directly, so no half-rule is needed.
  long long hm2 = 0, km2 = 1, hm1 = 1, km1 = 0;
  double y = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fa = std::floor(y);
    if (std::abs(fa) > 9e15) break;
    const double kd = fa * static_cast<double>(km1) + static_cast<double>(km2);
    if (kd > static_cast<double>(maxden)) {
      if (km1 > 0) {
        const long long acap = (maxden - km2) / km1;
        if (acap >= 1) consider(acap * hm1 + hm2, acap * km1 + km2);
      }
      break;
    }
    const long long a = static_cast<long long>(fa);
    const long long h = a * hm1 + hm2;
    const long long k = a * km1 + km2;
    consider(h, k);
    hm2 = hm1;
    km2 = km1;
    hm1 = h;
    km1 = k;
    const double rem = y - fa;
    if (rem < 1e-15) break;
    y = 1.0 / rem;
  }
  return best;
}

}  // namespace

RationalVerdict rational_angle(double theta, long long maxden, double tol) {
  if (maxden < 1) throw std::invalid_argument("rational_angle: maxden must be positive");
  if (!std::isfinite(theta)) throw std::invalid_argument("rational_angle: angle must be finite");
  RationalVerdict best = best_fraction(theta / kPi, maxden);
  // The minimizer is shared, but the reported error lives in angle units.
  if (best.q >= 1)
    best.err = std::abs(theta - kPi * (static_cast<double>(best.p) / static_cast<double>(best.q)));
  best.rational = best.err <= tol;
  return best;
}

RationalVerdict rational_ratio(double x, long long maxden, double tol) {
  if (maxden < 1) throw std::invalid_argument("rational_ratio: maxden must be positive");
  if (!std::isfinite(x)) throw std::invalid_argument("rational_ratio: value must be finite");
  RationalVerdict best = best_fraction(x, maxden);
  best.rational = best.err <= tol;
  return best;
}

NormalizedConic normalize_conic(const QuadricSurface& S, double tol) {
  if (S.dim() != 2) throw std::invalid_argument("normalize_conic: dimension must be 2");

  Eigen::SelfAdjointEigenSolver<Mat> es(S.B);
  const Vec lam = es.eigenvalues();  // ascending
  const Mat E = es.eigenvectors();
  const double bnorm = std::max(std::abs(lam(0)), std::abs(lam(1)));
  const double vnorm = S.v.norm();
  const double mscale = std::max({bnorm, vnorm, std::abs(S.rho)});

  Mat A(2, 2);
  Vec b(2);

  if (bnorm <= tol * mscale) {
    // affine equation 2<v,x> = rho
    if (vnorm > tol * mscale) {
      const Vec n = S.v / vnorm;
      A.col(0) = rot90(n);
      A.col(1) = n;
      b = (S.rho / (2.0 * vnorm)) * n;
      return make(ConicModel::Line, A, b);
    }
    if (std::abs(S.rho) > tol * mscale)
      return make(ConicModel::Empty, Mat::Identity(2, 2), Vec::Zero(2));
    throw std::invalid_argument("normalize_conic: surface is the whole plane at tolerance");
  }

  const bool small0 = std::abs(lam(0)) <= tol * bnorm;
  const bool small1 = std::abs(lam(1)) <= tol * bnorm;

  if (small0 || small1) {
    // rank one: lambda <e,x>^2 + 2 ve <e,x> + 2 vf <f,x> = rho
    const int iN = small0 ? 1 : 0;
    const double lambda = lam(iN);
    const Vec e = E.col(iN);
    const Vec f = E.col(1 - iN);
    const double ve = S.v.dot(e);
    const double vf = S.v.dot(f);
    const double sc1 = std::max({std::abs(lambda), vnorm, std::abs(S.rho)});
    const double xi0 = -ve / lambda;

    if (std::abs(vf) > tol * sc1) {
      const double alpha = -lambda / (2.0 * vf);
      const double eta0 = (S.rho + ve * ve / lambda) / (2.0 * vf);
      A.col(0) = e;
      A.col(1) = alpha * f;
      b = xi0 * e + eta0 * f;
      return make(ConicModel::Parabola, A, b);
    }

    const double k = S.rho + ve * ve / lambda;
    const double ktol = tol * std::max(1.0, std::abs(S.rho) + ve * ve / std::abs(lambda));
    if (std::abs(k) <= ktol) {
      A.col(0) = f;
      A.col(1) = e;
      return make(ConicModel::Line, A, xi0 * e);
    }
    if (k / lambda > 0) {
      const double a = std::sqrt(k / lambda);
      A.col(0) = a * e;
      A.col(1) = f;
      return make(ConicModel::ParallelLines, A, xi0 * e);
    }
    A.col(0) = e;
    A.col(1) = f;
    return make(ConicModel::Empty, A, xi0 * e);
  }

  // full rank: center the form, P(c + z) = <z,Bz> - k
  const Vec c = -(E * (E.transpose() * S.v).cwiseQuotient(lam));
  const double k = -eval_p(S, c);
  const double ktol = tol * std::max(1.0, scale(S, c));

  if (lam(0) * lam(1) > 0) {
    if (std::abs(k) <= ktol) return make(ConicModel::Point, E, c);
    if (k / lam(1) > 0) {
      A.col(0) = std::sqrt(k / lam(0)) * E.col(0);
      A.col(1) = std::sqrt(k / lam(1)) * E.col(1);
      return make(ConicModel::Circle, A, c);
    }
    return make(ConicModel::Empty, E, c);
  }

  // indefinite: lam(0) < 0 < lam(1)
  if (std::abs(k) <= ktol) {
    const Vec d0 = E.col(0) / std::sqrt(-lam(0));
    const Vec d1 = E.col(1) / std::sqrt(lam(1));
    A.col(0) = d0 + d1;
    A.col(1) = d0 - d1;
    return make(ConicModel::IntersectingLines, A, c);
  }
  const Vec ep = (k > 0) ? E.col(1) : E.col(0);  // eigendirection whose sign matches k
  const Vec em = (k > 0) ? E.col(0) : E.col(1);
  const double lp = std::abs((k > 0) ? lam(1) : lam(0));
  const double lm = std::abs((k > 0) ? lam(0) : lam(1));
  const double ak = std::abs(k);
  const Vec zp = std::sqrt(ak / lp) * ep;
  const Vec zm = std::sqrt(ak / lm) * em;
  A.col(0) = 0.5 * (zp + zm);
  A.col(1) = 0.5 * (zp - zm);
  return make(ConicModel::Hyperbola, A, c);
}

Decision2D decide_2d(const QuadricSurface& S, const Vec& w1, const Vec& w2,
                     const DecideOptions& opts) {
  if (S.dim() != 2 || w1.size() != 2 || w2.size() != 2)
    throw std::invalid_argument("decide_2d: planar inputs required");
  if (w1.norm() == 0.0 || w2.norm() == 0.0)
    throw std::invalid_argument("decide_2d: zero line direction");
  if (parallel2(w1, w2, 1e-12))
    throw std::invalid_argument("decide_2d: needs two distinct lines");

  const NormalizedConic nc = normalize_conic(S);
  Decision2D out;
  out.notes.push_back(std::string("planar model: ") + to_string(nc.model));

  Vec m1 = nc.map.A.transpose() * w1;
  Vec m2 = nc.map.A.transpose() * w2;
  m1.normalize();
  m2.normalize();

  // The certificate candidates are built on the canonical model and carried
  // to the input frame by the model map; the transform picks up only a
  // unimodular factor on each line, so vanishing is preserved exactly.
  auto certify = [&](const AtomicMeasure& model_cert, const std::string& how) {
    AtomicMeasure cert = pushforward(model_cert, nc.map);
    const Hyperplane L1(rot90(w1), 0.0), L2(rot90(w2), 0.0);
    const VanishReport r1 =
        verify_vanishing(cert, L1, opts.tol, opts.grid_points, opts.extent);
    const VanishReport r2 =
        verify_vanishing(cert, L2, opts.tol, opts.grid_points, opts.extent);
    if (r1.pass && r2.pass) {
      out.verdict = Verdict::NOT_HUP;
      out.certificate = std::move(cert);
      out.notes.push_back(how);
    } else {
      out.verdict = Verdict::UNDECIDED;
      out.notes.push_back("certificate failed verification (max residual " +
                          fmt(std::max(r1.max_abs, r2.max_abs)) + "); verdict withheld");
    }
  };

  switch (nc.model) {
    case ConicModel::Empty:
      out.verdict = Verdict::HUP;
      out.rule = "th:dim2(degenerate)";
      out.notes.push_back("empty surface carries only the zero measure");
      return out;

    case ConicModel::Point:
      out.verdict = Verdict::HUP;
      out.rule = "th:dim2(degenerate)";
      out.notes.push_back("one-point support: the transform has constant modulus");
      return out;

    case ConicModel::Line:
      out.verdict = Verdict::HUP;
      out.rule = "th:dim2(i)";
      return out;

    case ConicModel::Parabola:
      out.verdict = Verdict::HUP;
      out.rule = "th:dim2(ii)";
      return out;

    case ConicModel::Circle: {
      const double a1 = line_angle(m1);
      const double a2 = line_angle(m2);
      double phi = a2 - a1;
      if (phi < 0) phi += kPi;
      if (phi < 1e-12 || kPi - phi < 1e-12)
        throw std::invalid_argument("decide_2d: needs two distinct lines");
      const RationalVerdict rv = rational_angle(phi, opts.maxden);
      out.rule = "th:dim2(iii)";
      if (!rv.rational) {
        out.verdict = Verdict::HUP;
        out.notes.push_back("line angle " + fmt(phi) + " has no rational multiple of pi with q <= " +
                            std::to_string(rv.maxden) + "; closest " + frac(rv.p, rv.q) +
                            " misses by " + fmt(rv.err));
        return out;
      }
      if (rv.q > 4096) {
        out.verdict = Verdict::UNDECIDED;
        out.notes.push_back("line angle " + frac(rv.p, rv.q) +
                            ": signed orbit of 2q atoms exceeds the certificate size cap");
        return out;
      }
      // Signed orbit of the group generated by the two line mirrors: q
      // rotation images with weight +1, q mirror images with weight -1.
      // The base angle keeps distance pi/(3q) from every mirror, so the
      // orbit is free and the 2q atoms are distinct.
      const long long q = rv.q;
      const double psi = a1 + kPi / (3.0 * static_cast<double>(q));
      AtomicMeasure orbit;
      for (long long m = 0; m < q; ++m) {
        const double step = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(q);
        Vec xr(2), xf(2);
        xr << std::cos(psi + step), std::sin(psi + step);
        xf << std::cos(2.0 * a1 - psi + step), std::sin(2.0 * a1 - psi + step);
        orbit.add(xr, Cplx(1.0, 0.0));
        orbit.add(xf, Cplx(-1.0, 0.0));
      }
      certify(orbit, "line angle " + frac(rv.p, rv.q) + ": signed dihedral orbit, " +
                         std::to_string(2 * q) + " atoms");
      return out;
    }

    case ConicModel::Hyperbola:
    case ConicModel::IntersectingLines: {
      out.rule = nc.model == ConicModel::Hyperbola ? "th:dim2(iv)" : "th:dim2(v)";
      Vec mirrored(2);
      mirrored << -m1(0), m1(1);
      if (parallel2(mirrored, m2, 1e-9)) {
        out.verdict = Verdict::UNDECIDED;
        out.notes.push_back(
            "second line is the axis mirror of the first; outside the decision rule");
      } else {
        out.verdict = Verdict::HUP;
      }
      return out;
    }

    case ConicModel::ParallelLines: {
      out.rule = "th:dim2(vi)";
      const bool vert1 = std::abs(m1(0)) <= 1e-9;
      const bool vert2 = std::abs(m2(0)) <= 1e-9;
      if (!vert1 && !vert2) {
        out.verdict = Verdict::HUP;
        return out;
      }
      const Vec& other = vert1 ? m2 : m1;
      if (std::abs(other(1)) > 1e-9) {
        out.verdict = Verdict::UNDECIDED;
        out.notes.push_back(
            "one line is parallel to the surface; no decision rule applies");
        return out;
      }
      // Axis pair: difference of a two-atom column on each component line;
      // the transform factors as 2i sin(xi_1) (1 - e^{i xi_2}).
      AtomicMeasure prod;
      Vec x(2);
      x << 1, 0;
      prod.add(x, Cplx(1.0, 0.0));
      x << -1, 0;
      prod.add(x, Cplx(-1.0, 0.0));
      x << 1, 1;
      prod.add(x, Cplx(-1.0, 0.0));
      x << -1, 1;
      prod.add(x, Cplx(1.0, 0.0));
      certify(prod, "line along the surface plus its orthogonal: product certificate, 4 atoms");
      return out;
    }
  }
  throw std::logic_error("decide_2d: unreachable");
}

}  // namespace hupq
