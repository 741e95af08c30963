#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hupq/cramer_wold.hpp"
#include "hupq/coxeter.hpp"

using namespace hupq;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

Cplx weight_sum(const AtomicMeasure& mu) {
  Cplx s(0.0, 0.0);
  for (const Cplx& w : mu.weights) s += w;
  return s;
}

// Atoms on the unit circle at the D4 orbit of a generic base angle.
AtomicMeasure d4_orbit(const std::vector<Mat>& elements, bool signed_weights) {
  const Vec x0 = v2(std::cos(0.31), std::sin(0.31));
  AtomicMeasure mu;
  double w = 1.0;
  for (const Mat& g : elements) {
    mu.add(g * x0, signed_weights ? Cplx(0.5 * sign_character(g), 0.0) : Cplx(w, 0.0));
    w += 0.13;
  }
  return mu;
}

}  // namespace

TEST_CASE("forward: projections conserve mass and drop one coordinate") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Hyperplane H1(v2(1, 0), 0.0), H2(v2(1, 1).normalized(), 0.0);
  AtomicMeasure mu;
  mu.add(v2(0.6, 0.8), Cplx(3.0, 0.0));
  mu.add(v2(-1.0, 0.0), Cplx(-2.0, 0.0));
  const auto [p1, p2] = forward(circle, mu, H1, H2);
  CHECK(p1.size() == 2);
  CHECK(p2.size() == 2);
  CHECK(p1.atoms[0].size() == 1);
  CHECK(std::abs(weight_sum(p1) - weight_sum(mu)) <= 1e-12);
  CHECK(std::abs(weight_sum(p2) - weight_sum(mu)) <= 1e-12);
}

TEST_CASE("forward rejects offset planes, parallel pairs and isotropic normals") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  AtomicMeasure mu;
  mu.add(v2(1, 0), Cplx(1.0, 0.0));
  CHECK_THROWS_AS(forward(circle, mu, Hyperplane(v2(1, 0), 0.5), Hyperplane(v2(0, 1), 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(forward(circle, mu, Hyperplane(v2(1, 0), 0.0), Hyperplane(v2(-1, 0), 0.0)),
                  std::invalid_argument);
  const QuadricSurface cone((Mat(3, 3) << 1, 0, 0, 0, 1, 0, 0, 0, -1).finished(),
                            Vec::Zero(3), 0.0);
  AtomicMeasure nu;
  nu.add(v3(1, 0, 1), Cplx(1.0, 0.0));
  CHECK_THROWS_AS(forward(cone, nu, Hyperplane(v3(1, 0, 1).normalized(), 0.0),
                          Hyperplane(v3(0, 1, 0), 0.0)),
                  std::invalid_argument);
}

TEST_CASE("reconstruct: two projections determine the circle measure") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Hyperplane H1(v2(1, 0), 0.0), H2(v2(1, 1).normalized(), 0.0);
  AtomicMeasure mu;
  mu.add(v2(0.6, 0.8), Cplx(3.0, 0.0));
  mu.add(v2(-1.0, 0.0), Cplx(-2.0, 0.0));
  const auto [p1, p2] = forward(circle, mu, H1, H2);
  const Reconstruction r = reconstruct(circle, H1, H2, p1, p2);
  REQUIRE(r.status == ReconstructStatus::Recovered);
  CHECK(measure_deviation(r.measure, mu, 1e-7) <= 1e-8);
}

TEST_CASE("reconstruct: empty projections give the zero measure") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Reconstruction r = reconstruct(circle, Hyperplane(v2(1, 0), 0.0),
                                       Hyperplane(v2(0, 1), 0.0), {}, {});
  REQUIRE(r.status == ReconstructStatus::Recovered);
  CHECK(r.measure.size() == 0);
}

TEST_CASE("reconstruct: projections outside the shadow are infeasible") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  AtomicMeasure q1, q2;
  Vec z(1);
  z << 5.0;
  q1.add(z, Cplx(1.0, 0.0));
  z << 0.0;
  q2.add(z, Cplx(1.0, 0.0));
  const Reconstruction r =
      reconstruct(circle, Hyperplane(v2(1, 0), 0.0), Hyperplane(v2(0, 1), 0.0), q1, q2);
  CHECK(r.status == ReconstructStatus::Infeasible);
  REQUIRE(!r.notes.empty());
  CHECK(r.notes[0].find("no lift") != std::string::npos);
}

TEST_CASE("reconstruct: random measures on a sphere and a paraboloid round trip") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> natoms(1, 6);

  const QuadricSurface sphere(Mat::Identity(3, 3), Vec::Zero(3), 1.0);
  const QuadricSurface parab((Mat(3, 3) << 1, 0, 0, 0, 1, 0, 0, 0, 0).finished(),
                             v3(0, 0, -0.5), 0.0);
  const Hyperplane H1(v3(1, 0, 0), 0.0);
  const Hyperplane H2(v3(1, 1, 1).normalized(), 0.0);

  for (int trial = 0; trial < 8; ++trial) {
    for (const QuadricSurface& S : {sphere, parab}) {
      AtomicMeasure mu;
      const int n = natoms(rng);
      for (int k = 0; k < n; ++k) {
        const auto x = sample_point(S, rng);
        REQUIRE(x.has_value());
        mu.add(*x, Cplx(g(rng), g(rng)));
      }
      mu = merged(mu);
      if (mu.size() == 0) continue;
      const auto [p1, p2] = forward(S, mu, H1, H2);
      const Reconstruction r = reconstruct(S, H1, H2, p1, p2);
      REQUIRE(r.status == ReconstructStatus::Recovered);
      CHECK(measure_deviation(r.measure, mu, 1e-7) <= 1e-8 * std::max(1.0, mu.total_variation()));
    }
  }
}

TEST_CASE("reconstruct: the quarter-turn direction pair is exceptional for a D4 orbit") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Hyperplane H1(v2(1, 0), 0.0);
  const Hyperplane H2(v2(std::cos(kPi / 4), std::sin(kPi / 4)), 0.0);
  const GroupClosure gc = group_closure({H1.u, H2.u});
  REQUIRE(gc.complete);
  REQUIRE(gc.elements.size() == 8);

  const AtomicMeasure gen = d4_orbit(gc.elements, false);
  const auto [p1, p2] = forward(circle, gen, H1, H2);
  const Reconstruction r = reconstruct(circle, H1, H2, p1, p2);
  REQUIRE(r.status == ReconstructStatus::Ambiguous);
  REQUIRE(!r.notes.empty());
  CHECK(r.notes[0].find("rank deficient") != std::string::npos);
  CHECK(r.kernel_witness.size() == 8);
  CHECK(r.kernel_witness.total_variation() > 1e-6);

  // The kernel projects to zero along both directions, so its transform
  // vanishes on both frequency lines.
  const auto [k1, k2] = forward(circle, r.kernel_witness, H1, H2);
  CHECK(k1.total_variation() <= 1e-9);
  CHECK(k2.total_variation() <= 1e-9);
  CHECK(verify_vanishing(r.kernel_witness, H1).pass);
  CHECK(verify_vanishing(r.kernel_witness, H2).pass);
}

TEST_CASE("uniqueness_demo: equal projections, equal or unequal measures") {
  const QuadricSurface circle(Mat::Identity(2, 2), Vec::Zero(2), 1.0);
  const Hyperplane H1(v2(1, 0), 0.0);
  const Hyperplane H2(v2(std::cos(kPi / 4), std::sin(kPi / 4)), 0.0);
  const GroupClosure gc = group_closure({H1.u, H2.u});
  const AtomicMeasure mu = d4_orbit(gc.elements, false);

  CHECK(uniqueness_demo(circle, H1, H2, mu, mu));

  // Adding the signed orbit leaves both projections unchanged but moves
  // the measure: the projections do not determine it here.
  AtomicMeasure nu = mu;
  const AtomicMeasure kernel = d4_orbit(gc.elements, true);
  for (std::size_t k = 0; k < kernel.size(); ++k) nu.add(kernel.atoms[k], kernel.weights[k]);
  CHECK(!uniqueness_demo(circle, H1, H2, mu, nu));

  AtomicMeasure other;
  other.add(v2(0, 1), Cplx(1.0, 0.0));
  CHECK_THROWS_AS(uniqueness_demo(circle, H1, H2, mu, other), std::invalid_argument);
}
