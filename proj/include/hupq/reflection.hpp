#pragma once

#include <vector>

#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"

namespace hupq {

//! Q(u) negligible against |B| |u|^2; reflections in u are then undefined.
bool is_isotropic(const QuadricSurface& S, const Vec& u, double tol = 1e-12);

//! R_{u,v}(x) = x - 2 (B(x,u) + <v,u>) / Q(u) * u. Maps S to S, involutive,
//! and preserves every line x + R u. Throws for isotropic u.
Vec q_reflect(const QuadricSurface& S, const Vec& u, const Vec& x);

//! Same map in affine form (for measure transport).
AffineMap q_reflect_map(const QuadricSurface& S, const Vec& u);

//! Transpose action on frequencies: xi - (2 <xi,u> / Q(u)) B u.
Vec adjoint_reflect(const QuadricSurface& S, const Vec& u, const Vec& xi);

//! Displacement t with q_reflect(x) = x + t u.
double fiber_offset(const QuadricSurface& S, const Vec& u, const Vec& x);

//! For x on S, the second intersection of the line x + R u with S.
Vec fiber_partner(const QuadricSurface& S, const Vec& u, const Vec& x);

//! Whether the full line x + R u lies inside S (needs Q(u) = 0,
//! B(x,u) + <v,u> = 0 and x on S).
bool line_in_surface(const QuadricSurface& S, const Vec& x, const Vec& u,
                     double tol = 1e-9);

//! Structure of the common degeneracy set of a family of normals: the set of
//! x on S with B(x,u_j) + <v,u_j> = 0 for every j. Through each such x and
//! isotropic u_j the surface contains the whole line x + R u_j.
struct EuIntersection {
  enum class Kind { Empty, CenterOnly, Witness };
  Kind kind = Kind::Empty;
  Vec witness;  // set for Kind::Witness; distinct from the center
};

//! Decides Empty / CenterOnly / Witness analytically: restrict Q to the
//! common kernel of the constraints and compare eigenvalue signs with the
//! level the surface cuts. Requires a centered description (throws when B y =
//! -v has no solution).
EuIntersection intersect_Eu_family(const QuadricSurface& S,
                                   const std::vector<Vec>& normals,
                                   double tol = 1e-9);

}  // namespace hupq
