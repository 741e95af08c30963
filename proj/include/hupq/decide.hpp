#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"
#include "hupq/verdict.hpp"

namespace hupq {

//! Outcome of a uniqueness decision. A NOT_HUP verdict always carries a
//! certificate that has been re-verified against the original input: every
//! atom on the surface (tol 1e-9), measure nonzero, and grid Fourier
//! vanishing on every hyperplane below tol * total variation.
struct Decision {
  Verdict verdict = Verdict::UNDECIDED;
  std::string rule;
  std::optional<AtomicMeasure> certificate;
  std::vector<std::string> notes;
};

//! One hyperplane. Non-isotropic normal: hunts for a reflection-moved point
//! and certifies NOT_HUP with a two-atom pair; if every sampled point is
//! fixed, the projection along the normal is one-to-one and the verdict is
//! HUP. Isotropic normal: solves for a point of the surface where the fiber
//! line stays inside it; such a line carries a two-atom annihilator
//! (NOT_HUP), and its absence makes every fiber meet the surface once (HUP).
Decision decide_single(const QuadricSurface& S, const Hyperplane& H,
                       const DecideOptions& opts = {});

//! Two hyperplanes with independent, non-isotropic normals. Reduces to the
//! planar catalogue on the sections x + span(u1, v2): the quadratic part of
//! the section is shared by every base point, so the verdict-relevant data
//! (dihedral angle, axis-mirror condition, degenerate-direction alignment)
//! are computed frame-invariantly; certificates are built on one explicit
//! section, lifted, and re-verified on both full hyperplanes.
Decision decide_two_intersecting(const QuadricSurface& S, const Hyperplane& H1,
                                 const Hyperplane& H2, const DecideOptions& opts = {});

//! Exactly three parallel hyperplanes sharing a non-isotropic normal.
//! HUP when the offset differences (s2-s1, s3-s1) have irrational ratio up
//! to opts.maxden (integer relations with coefficients summing to zero);
//! UNDECIDED otherwise, since no converse construction is known.
Decision decide_parallel_family(const QuadricSurface& S, const Vec& u,
                                const std::vector<double>& offsets,
                                const DecideOptions& opts = {});

//! Hyperplanes through the origin with isotropic normals over a centered
//! surface. HUP iff the common undeflected set (B(x,u_j) + <v,u_j> = 0 for
//! all j, intersected with S) is empty or a single point; a witness point
//! yields an antipodal or alternating-lattice certificate.
Decision decide_isotropic_family(const QuadricSurface& S,
                                 const std::vector<Hyperplane>& planes,
                                 const DecideOptions& opts = {});

//! Sphere of the given radius, parallel hyperplanes. Two offsets: HUP iff
//! the separation is below pi/radius; at or above it, a verified two-atom
//! lattice certificate is produced, and a note flags the disagreement with
//! the stated pi/2 threshold. Three or more offsets: any close pair decides
//! HUP, else the offset-difference ratio test applies.
Decision decide_sphere_parallel(double radius, const Vec& u,
                                const std::vector<double>& offsets,
                                const DecideOptions& opts = {});

//! Sphere of the given radius, hyperplanes through the origin. HUP iff the
//! group generated by the mirror reflections is infinite; finite groups give
//! a signed free-orbit certificate.
Decision decide_sphere_concurrent(double radius, const std::vector<Vec>& normals,
                                  const DecideOptions& opts = {});

//! Dispatcher over the shape of the hyperplane family: single plane,
//! parallel family (sphere-like surfaces are congruence-normalized first),
//! concurrent families (sphere reflection groups, isotropic families), and
//! two intersecting planes via the section catalogue. Families outside every
//! rule are scanned subset-wise: a HUP subset settles HUP, and a subset
//! certificate is accepted only if it verifies against all planes.
Decision decide(const QuadricSurface& S, const std::vector<Hyperplane>& planes,
                const DecideOptions& opts = {});

}  // namespace hupq
