#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"

namespace hupq {

//! Both orthogonal hyperplane projections of mu, in hyperplane_basis
//! coordinates. Requires through-origin hyperplanes with non-isotropic,
//! non-parallel normals; mass is conserved per projection.
std::pair<AtomicMeasure, AtomicMeasure> forward(const QuadricSurface& S,
                                                const AtomicMeasure& mu,
                                                const Hyperplane& H1,
                                                const Hyperplane& H2);

enum class ReconstructStatus { Recovered, Ambiguous, Infeasible };

struct Reconstruction {
  ReconstructStatus status = ReconstructStatus::Infeasible;
  //! Populated when status == Recovered.
  AtomicMeasure measure;
  //! Populated when status == Ambiguous: a nonzero measure on the candidate
  //! support whose projections onto both hyperplanes vanish.
  AtomicMeasure kernel_witness;
  std::vector<std::string> notes;
};

//! Inverts the two projections by lifting every projected atom back onto S
//! along the corresponding normal (each lift solves a scalar quadratic, so
//! at most two points), pairing the two lift clouds by mutual nearest
//! neighbors within `tol`, and solving the linear system that matches summed
//! candidate weights to every projected atom weight.
//!
//! Recovered: full column rank, small residual, and the forward projections
//! of the result reproduce p1 and p2. Ambiguous: the matching system is rank
//! deficient (exceptional direction pair or degenerate support); the least
//! singular direction is returned as kernel_witness. Infeasible: no candidate
//! support or no consistent weight assignment exists.
Reconstruction reconstruct(const QuadricSurface& S, const Hyperplane& H1,
                           const Hyperplane& H2, const AtomicMeasure& p1,
                           const AtomicMeasure& p2, double tol = 1e-7);

//! True iff mu and nu coincide as atomic measures (atoms and weights within
//! tol). Throws when their forward projections disagree, since the question
//! "do equal projections force equal measures" is only posed for equal
//! projections.
bool uniqueness_demo(const QuadricSurface& S, const Hyperplane& H1,
                     const Hyperplane& H2, const AtomicMeasure& mu,
                     const AtomicMeasure& nu, double tol = 1e-7);

}  // namespace hupq
