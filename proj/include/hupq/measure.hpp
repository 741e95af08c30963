#pragma once

#include <complex>
#include <random>
#include <vector>

#include "hupq/quadric.hpp"

namespace hupq {

using Cplx = std::complex<double>;

//! Finite complex combination of point masses, mu = sum_k w_k delta_{x_k}.
//! Atom positions are not required to be distinct until merged() is called.
struct AtomicMeasure {
  std::vector<Vec> atoms;
  std::vector<Cplx> weights;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms[0].size()); }
  std::size_t size() const { return atoms.size(); }
  double total_variation() const;
  void add(Vec x, Cplx w);
};

//! Canonical form: atoms within `radius` of each other are combined, and
//! atoms whose combined weight is negligible against the total variation are
//! dropped. The zero measure comes back empty.
AtomicMeasure merged(const AtomicMeasure& mu, double radius = 1e-9);

AtomicMeasure negated(const AtomicMeasure& mu);
AtomicMeasure scaled(const AtomicMeasure& mu, Cplx factor);

//! Fourier transform mu_hat(xi) = sum_k w_k exp(i <x_k, xi>).
Cplx char_fn(const AtomicMeasure& mu, const Vec& xi);

//! Weight twist w_k -> w_k exp(i s <x_k, u>); atoms unchanged.
AtomicMeasure modulate(const AtomicMeasure& mu, const Vec& u, double s);

//! x -> A x + b; A may be rectangular.
struct AffineMap {
  Mat A;
  Vec b;
};

//! Image measure under an affine map, merged.
AtomicMeasure pushforward(const AtomicMeasure& mu, const AffineMap& map);

//! Deterministic orthonormal basis of the orthogonal complement of u,
//! as the columns of a d x (d-1) matrix.
Mat hyperplane_basis(const Vec& u);

//! Orthogonal projection onto H (required to pass through the origin),
//! in the coordinates of hyperplane_basis(H.u).
AtomicMeasure project_to_hyperplane(const AtomicMeasure& mu, const Hyperplane& H);

//! Largest leftover atom weight of merged(a - b); zero iff a = b as measures.
double measure_deviation(const AtomicMeasure& a, const AtomicMeasure& b,
                         double radius = 1e-9);

//! Cartesian evaluation grid origin + sum_i c_i dirs_i, c_i equispaced in
//! [-extent, extent] with `points` samples per axis. dirs columns orthonormal.
struct GridSpec {
  Vec origin;
  Mat dirs;
  double extent = 20.0;
  int points = 64;
};

//! Grid spanning H_{u,s} around s u.
GridSpec hyperplane_grid(const Hyperplane& H, int points = 64, double extent = 20.0);

struct VanishReport {
  double max_abs = 0.0;
  Vec argmax;
  bool pass = false;
};

//! Max |mu_hat| over the grid; pass iff max <= tol * total variation.
//! Throws if the grid does not lie inside H.
VanishReport verify_vanishing(const AtomicMeasure& mu, const Hyperplane& H,
                              const GridSpec& grid, double tol);
VanishReport verify_vanishing(const AtomicMeasure& mu, const Hyperplane& H,
                              double tol = 1e-10, int points = 64,
                              double extent = 20.0);

//! Residuals (relative to total variation) of the two reflection identities
//! tied to vanishing on H_{u,s}: the twisted measure nu = e^{i s <x,u>} mu
//! must satisfy R nu = -nu, and mu_hat must satisfy the reflected functional
//! equation at frequency samples. Requires Q(u) != 0.
struct FundCheck {
  double dev_pushforward = 0.0;
  double dev_pointwise = 0.0;
};
FundCheck check_fund_equivalences(const QuadricSurface& S, const AtomicMeasure& mu,
                                  const Hyperplane& H, int samples,
                                  std::mt19937_64& rng);

//! sum_k w_k P(x_k) exp(i <x_k, xi>); within rounding of zero for measures
//! supported on S, since applying P(D) to mu_hat multiplies atoms by P(x_k).
Cplx apply_PD(const QuadricSurface& S, const AtomicMeasure& mu, const Vec& xi);

}  // namespace hupq
