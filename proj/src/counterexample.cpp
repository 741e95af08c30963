#include "hupq/counterexample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hupq/coxeter.hpp"

namespace hupq {

AtomicMeasure two_point(const QuadricSurface& S, const Hyperplane& H,
                        std::mt19937_64& rng, int retries) {
  if (S.dim() != H.dim()) throw std::invalid_argument("two_point: dimension mismatch");
  if (is_isotropic(S, H.u)) throw std::invalid_argument("two_point: isotropic normal");
  for (int i = 0; i < retries; ++i) {
    auto x = sample_point(S, rng, 8);
    if (!x) continue;
    const double t = fiber_offset(S, H.u, *x);
    if (std::abs(t) < 1e-6 * (1.0 + x->norm())) continue;
    const Vec y = refine_to_surface(S, *x + t * H.u);
    if (!on_surface(S, y)) continue;
    AtomicMeasure mu;
    mu.add(*x, std::exp(Cplx(0.0, -H.s * H.u.dot(*x))));
    mu.add(y, -std::exp(Cplx(0.0, -H.s * H.u.dot(y))));
    return mu;
  }
  throw std::runtime_error(
      "two_point: reflection fixes every sampled point; the projection along "
      "the normal looks one-to-one");
}

AtomicMeasure antipodal_pair(const Vec& x) {
  if (x.norm() == 0.0) throw std::invalid_argument("antipodal_pair: zero point");
  AtomicMeasure mu;
  mu.add(x, Cplx(1.0, 0.0));
  mu.add(-x, Cplx(-1.0, 0.0));
  return mu;
}

AtomicMeasure sphere_lattice(double radius, const Vec& u, double s1, double s2,
                             int k) {
  if (radius <= 0.0) throw std::invalid_argument("sphere_lattice: radius must be positive");
  if (u.size() < 2) throw std::invalid_argument("sphere_lattice: dimension must be >= 2");
  if (k < 1) throw std::invalid_argument("sphere_lattice: k must be >= 1");
  const double sep = std::abs(s2 - s1);
  if (sep == 0.0) throw std::invalid_argument("sphere_lattice: offsets must differ");
  const double x1 = static_cast<double>(k) * std::numbers::pi / sep;
  if (x1 > radius * (1.0 + 1e-12))
    throw std::domain_error("sphere_lattice: separation below the admissibility threshold");
  const double rp = std::sqrt(std::max(0.0, radius * radius - x1 * x1));
  const double mid = 0.5 * (s1 + s2);

  Vec un = u.normalized();
  const Vec pt = hyperplane_basis(un).col(0);
  // With symmetric offsets +-(s2-s1)/2 the pair (1, (-1)^{k-1}) cancels both
  // planes termwise; shifting the offsets by mid multiplies each weight by
  // e^{-i mid <atom,u>}.
  const Cplx w_plus = std::exp(Cplx(0.0, -mid * x1));
  const Cplx w_minus =
      (k % 2 == 1 ? 1.0 : -1.0) * std::exp(Cplx(0.0, mid * x1));
  AtomicMeasure mu;
  mu.add(x1 * un + rp * pt, w_plus);
  mu.add(-x1 * un + rp * pt, w_minus);
  return mu;
}

AtomicMeasure orbit_antisymmetrization(const std::vector<Mat>& elements,
                                       double radius, std::mt19937_64& rng) {
  if (radius <= 0.0)
    throw std::invalid_argument("orbit_antisymmetrization: radius must be positive");
  AtomicMeasure mu = generic_orbit(elements, rng);
  for (Vec& a : mu.atoms) a *= radius;
  return mu;
}

AtomicMeasure alternating_lattice(const QuadricSurface& S,
                                  const std::vector<Hyperplane>& planes,
                                  const Vec& x, double alpha) {
  if (planes.empty()) throw std::invalid_argument("alternating_lattice: no planes");
  if (planes.size() > 20) throw std::invalid_argument("alternating_lattice: too many planes");
  if (alpha == 0.0) throw std::invalid_argument("alternating_lattice: alpha must be nonzero");
  const int d = S.dim();
  for (const Hyperplane& H : planes)
    if (H.dim() != d || x.size() != d)
      throw std::invalid_argument("alternating_lattice: dimension mismatch");

  const std::size_t m = planes.size();
  AtomicMeasure mu;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Vec atom = x;
    Cplx w(1.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::size_t{1} << j)) {
        atom += alpha * planes[j].u;
        w *= -std::exp(Cplx(0.0, -planes[j].s * alpha));
      }
    }
    mu.add(std::move(atom), w);
  }
  return mu;
}

AtomicMeasure lift_fiber_certificate(const QuadricSurface& S, const Vec& x,
                                     const Vec& u1, const Vec& v2,
                                     const AtomicMeasure& planar, double tol) {
  if (planar.dim() != 2 && planar.size() > 0)
    throw std::invalid_argument("lift_fiber_certificate: planar certificate required");
  if (!on_surface(S, x))
    throw std::invalid_argument("lift_fiber_certificate: base point off the surface");
  const ConicFiber f = fiber_conic(S, x, u1, v2);
  const double coeff =
      std::abs(f.a) + 2.0 * std::abs(f.b) + std::abs(f.c) + 2.0 * (std::abs(f.p) + std::abs(f.q));
  AtomicMeasure mu;
  for (std::size_t i = 0; i < planar.size(); ++i) {
    const double s = planar.atoms[i](0);
    const double t = planar.atoms[i](1);
    const double val =
        f.a * s * s + 2.0 * f.b * s * t + f.c * t * t + 2.0 * f.p * s + 2.0 * f.q * t;
    const double r2 = s * s + t * t;
    if (std::abs(val) > tol * std::max(1.0, coeff * std::max(1.0, r2)))
      throw std::invalid_argument("lift_fiber_certificate: planar atom off the section");
    mu.add(x + s * u1 + t * v2, planar.weights[i]);
  }
  return mu;
}

}  // namespace hupq
