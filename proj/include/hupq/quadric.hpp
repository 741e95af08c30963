#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>

namespace hupq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

//! Level set S = { x : <x,Bx> + 2<v,x> - rho = 0 } in R^d, d >= 2.
//! B is symmetrized on construction; (B, v) must not both vanish.
struct QuadricSurface {
  Mat B;
  Vec v;
  double rho;

  QuadricSurface(Mat B_, Vec v_, double rho_);
  int dim() const { return static_cast<int>(v.size()); }
};

//! Affine hyperplane H_{u,s} = { xi : <xi,u> = s }; u is stored unit-length.
struct Hyperplane {
  Vec u;
  double s;

  Hyperplane(Vec u_, double s_);
  int dim() const { return static_cast<int>(u.size()); }
};

//! Defining polynomial P(x) = <x,Bx> + 2<v,x> - rho.
double eval_p(const QuadricSurface& S, const Vec& x);

//! Magnitude reference ||B||_inf ||x||^2 + ||v|| ||x|| + |rho| for relative tests.
double scale(const QuadricSurface& S, const Vec& x);

//! |P(x)| <= tol * max(1, scale(S,x)).
bool on_surface(const QuadricSurface& S, const Vec& x, double tol = 1e-9);

//! Quadratic form Q(u) = <u,Bu>.
double q_form(const QuadricSurface& S, const Vec& u);

//! Bilinear form B(x,u) = <x,Bu>.
double b_form(const QuadricSurface& S, const Vec& x, const Vec& u);

//! B(x,u) + <v,u>; zero exactly when x is fixed by the reflection along u.
double b_affine(const QuadricSurface& S, const Vec& x, const Vec& u);

//! Coefficients of the planar section through x spanned by (u1, v2):
//! P(x + s u1 + t v2) = a s^2 + 2b st + c t^2 + 2p s + 2q t  for x on S.
struct ConicFiber {
  double a, b, c, p, q;
};

enum class ConicClass {
  Ellipse,
  Point,
  Empty,
  Parabola,
  ParallelLines,
  SingleLine,
  Hyperbola,
  IntersectingLines,
  Line
};

const char* to_string(ConicClass c);

//! Requires orthonormal (u1, v2). Exact in exact arithmetic for x on S.
ConicFiber fiber_conic(const QuadricSurface& S, const Vec& x, const Vec& u1, const Vec& v2);

//! a c - b^2; positive for the elliptic family, negative for the hyperbolic one.
double discriminant(const ConicFiber& f);

//! Classifies the zero set of a s^2 + 2b st + c t^2 + 2p s + 2q t.
//! Degeneracy is read off the singular values of the bordered 3x3 matrix
//! at tolerance tol relative to the coefficient magnitude. Throws if every
//! coefficient vanishes (the section would be a full plane, not a conic).
ConicClass classify_conic(const ConicFiber& f, double tol = 1e-9);

//! Orthonormalization of a direction pair: u2 = cos(theta) u1 + sin(theta) v2
//! with theta in (0, pi) and <u1, v2> = 0. Throws for parallel input.
struct DirectionSplit {
  double theta;
  Vec v2;
};
DirectionSplit decompose_direction(const Vec& u1, const Vec& u2);

// Reframing maps. Uniqueness of a pair (S, Lambda) is invariant under spatial
// translation of S, translation of Lambda, and the joint action
// S -> T^{-1}(S), Lambda -> T^*(Lambda) of an invertible linear map.
QuadricSurface translate_surface(const QuadricSurface& S, const Vec& x0);   // S - x0
QuadricSurface linear_pullback(const QuadricSurface& S, const Mat& T);      // T^{-1}(S)
Hyperplane translate_hyperplane(const Hyperplane& H, const Vec& xi0);       // H - xi0
Hyperplane adjoint_transport(const Hyperplane& H, const Mat& T);            // T^*(H)

//! Solve <z,Az> + 2<w,z> + c = 0 or prove the set empty; A need not be
//! definite. The witness is built from the eigenstructure of A.
std::optional<Vec> solve_quadric_point(const Mat& A, const Vec& w, double c,
                                       double tol = 1e-12);

//! Deterministic point of S, or nullopt when S is provably empty.
std::optional<Vec> any_point(const QuadricSurface& S);

//! Random point of S via ray casting from Gaussian base points; nullopt after
//! `retries` misses (e.g. S empty or measure-zero thin).
std::optional<Vec> sample_point(const QuadricSurface& S, std::mt19937_64& rng,
                                int retries = 64);

//! Newton polish along the gradient; keeps x on S to near machine precision.
Vec refine_to_surface(const QuadricSurface& S, Vec x, int iters = 3);

//! Coarse global type for reporting. For d = 2 the names follow the planar
//! catalogue (ellipse, parabola, ...), for d >= 3 their solid counterparts.
struct GlobalClass {
  std::string tag;
  int positive, negative, zero;  // inertia of B at classification tolerance
};
GlobalClass classify_global(const QuadricSurface& S, double tol = 1e-9);

}  // namespace hupq
