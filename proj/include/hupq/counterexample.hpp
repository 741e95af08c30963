#pragma once

#include <random>
#include <vector>

#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"
#include "hupq/reflection.hpp"

namespace hupq {

//! Two atoms x and its reflection partner y across the fiber of H.u, with
//! weights e^{-i s <x,u>} and -e^{-i s <y,u>}. The transform vanishes on all
//! of H_{u,s} because the partner differs by a shift along u. Requires a
//! non-isotropic normal and a sampled point the reflection actually moves;
//! throws after `retries` draws without one.
AtomicMeasure two_point(const QuadricSurface& S, const Hyperplane& H,
                        std::mt19937_64& rng, int retries = 256);

//! delta_x - delta_{-x}; transform 2i sin<x,xi>, which vanishes on H_{u,0}
//! exactly when x is parallel to u.
AtomicMeasure antipodal_pair(const Vec& x);

//! Two atoms +-x1 u + r' p on the radius-`radius` sphere annihilating both
//! H_{u,s1} and H_{u,s2}, where x1 = k pi / |s2 - s1| (admissible only when.
//! x1 <= radius; throws otherwise) and r' fills up the radius. Asymmetric
//! offsets are absorbed into the weights.
AtomicMeasure sphere_lattice(double radius, const Vec& u, double s1, double s2,
                             int k = 1);

//! Signed free orbit sum_g det(g) delta_{radius g x0} of a finite orthogonal
//! group; annihilates every mirror hyperplane of the group.
AtomicMeasure orbit_antisymmetrization(const std::vector<Mat>& elements,
                                       double radius, std::mt19937_64& rng);

//! Product measure on the lattice x + alpha {0,1}^m along the plane normals:
//! atom x + alpha sum_{j in T} u_j carries weight prod_{j in T}(-e^{-i s_j
//! alpha}). Its transform factors as prod_j (1 - e^{i alpha (<u_j,xi> -
//! s_j)}), zero on every H_{u_j,s_j}. Atoms stay on S when the normals are
//! isotropic, mutually B-orthogonal, and undeflected at x; the caller
//! verifies that.
AtomicMeasure alternating_lattice(const QuadricSurface& S,
                                  const std::vector<Hyperplane>& planes,
                                  const Vec& x, double alpha = 1.0);

//! Carry a planar certificate with atoms (s,t) into R^d as x + s u1 + t v2.
//! Each planar atom must satisfy the section equation of (S, x, u1, v2);
//! throws otherwise. Weights are unchanged.
AtomicMeasure lift_fiber_certificate(const QuadricSurface& S, const Vec& x,
                                     const Vec& u1, const Vec& v2,
                                     const AtomicMeasure& planar,
                                     double tol = 1e-8);

}  // namespace hupq
