#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"
#include "hupq/verdict.hpp"

namespace hupq {

//! Closest multiple of pi: is theta within tol (in angle units, radians) of
//! (p/q) pi for some q <= maxden? p/q is always the best candidate found,
//! reduced; err = |theta - (p/q) pi|.
struct RationalVerdict {
  bool rational = false;
  long long p = 0;
  long long q = 1;
  long long maxden = 1;
  double err = 0.0;
};

//! Continued-fraction scan of theta/pi over convergents and denominator-capped
//! semiconvergents; the returned p/q minimizes the error among denominators
//! up to maxden.
RationalVerdict rational_angle(double theta, long long maxden = 1000000,
                               double tol = 1e-12);

//! Same scan for a plain ratio (no pi): best p/q with |x - p/q| <= tol.
RationalVerdict rational_ratio(double x, long long maxden = 1000000,
                               double tol = 1e-12);

//! Affine models for planar quadrics. Circle stands for the ellipse family,
//! IntersectingLines for the degenerate hyperbola, Line for both a rank-one
//! double line and a purely affine equation.
enum class ConicModel {
  Line,
  Parabola,
  Circle,
  Hyperbola,
  IntersectingLines,
  ParallelLines,
  Point,
  Empty
};

const char* to_string(ConicModel m);

//! Frame change T(x) = A x + b carrying the canonical model onto the input
//! surface, S = T(model). Spatial data (atoms) transport forward by T;
//! frequency directions transport into the model frame by A^T.
struct NormalizedConic {
  ConicModel model;
  AffineMap map;
  QuadricSurface canonical;
};

NormalizedConic normalize_conic(const QuadricSurface& S, double tol = 1e-9);

//! Outcome of the planar catalogue. The certificate, when present, lives in
//! the input frame and has been re-verified on both input lines.
struct Decision2D {
  Verdict verdict = Verdict::UNDECIDED;
  std::string rule;
  std::optional<AtomicMeasure> certificate;
  std::vector<std::string> notes;
};

//! Uniqueness decision for a planar quadric against two distinct frequency
//! lines through the origin, given by direction vectors w1, w2. Throws for
//! parallel directions or dim != 2.
Decision2D decide_2d(const QuadricSurface& S, const Vec& w1, const Vec& w2,
                     const DecideOptions& opts = {});

}  // namespace hupq
