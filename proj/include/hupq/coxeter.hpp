#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hupq/conic2d.hpp"
#include "hupq/measure.hpp"
#include "hupq/quadric.hpp"

namespace hupq {

//! Unit normals through the origin, sign-canonicalized (first nonzero
//! component positive) and deduplicated. Throws on a zero normal.
std::vector<Vec> canonical_mirrors(const std::vector<Vec>& normals, double tol = 1e-9);

//! Euclidean reflection across the mirror with normal n.
Mat householder(const Vec& n);

//! Dihedral angle between two mirrors, in [0, pi/2].
double mirror_angle(const Vec& n1, const Vec& n2);

//! Closure of the mirror normals under mutual reflection. complete=false
//! means the count passed cap and roots holds the partial closure.
struct RootClosure {
  std::vector<Vec> roots;
  bool complete = false;
};
RootClosure root_closure(const std::vector<Vec>& normals, int cap = 5000,
                         double tol = 1e-8);

//! Elements of the group generated by the mirror reflections, identity
//! included. complete=false means the count passed cap.
struct GroupClosure {
  std::vector<Mat> elements;
  bool complete = false;
};
GroupClosure group_closure(const std::vector<Vec>& normals, int cap = 20000,
                           double tol = 1e-8);

enum class CoxeterType { Finite, Infinite, Inconclusive };

const char* to_string(CoxeterType t);

struct CoxeterReport {
  CoxeterType type = CoxeterType::Inconclusive;
  long long order = 0;                           //!< Finite: group order
  std::vector<Mat> elements;                     //!< Finite: every element
  std::vector<Vec> roots;                        //!< mirror closure reached
  bool root_overflow = false;                    //!< closure passed its cap
  std::optional<std::pair<Vec, Vec>> witness;    //!< Infinite: mirror pair
  std::optional<RationalVerdict> witness_angle;  //!< angle evidence for the pair
  long long cap = 0;                             //!< bound that stopped a search
  std::string detail;
};

//! Finite / infinite decision for the reflection group of a mirror family.
//! A mirror pair whose angle has no rational relation to pi (denominators up
//! to maxden) proves Infinite and is reported as the witness; a mirror
//! closure that outgrows root_cap is also reported Infinite (with the cap),
//! since distinct mirrors inject into group elements and the cap exceeds
//! every catalogued non-dihedral family; a closed root system with a full
//! element enumeration proves Finite. A closed root system whose element
//! count passes group_cap is Inconclusive.
CoxeterReport is_infinite(const std::vector<Vec>& normals, long long maxden = 1000000,
                          int root_cap = 5000, int group_cap = 20000);

//! det(g) for an orthogonal element; exactly +-1 up to rounding.
double sign_character(const Mat& g);

//! Signed orbit measure sum_g det(g) delta_{g x0} for a base point drawn on
//! the unit sphere; redraws until no non-identity element moves x0 by less
//! than min_gap, so the orbit is free and has exactly |G| atoms.
AtomicMeasure generic_orbit(const std::vector<Mat>& elements, std::mt19937_64& rng,
                            int retries = 64, double min_gap = 1e-6);

}  // namespace hupq
