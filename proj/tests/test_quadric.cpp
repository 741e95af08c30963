#include <doctest.h>

#include <cmath>
#include <random>

#include "hupq/quadric.hpp"

using namespace hupq;

namespace {

QuadricSurface random_surface(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat B(d, d);
  Vec v(d);
  for (int i = 0; i < d; ++i) {
    v(i) = g(rng);
    for (int j = 0; j < d; ++j) B(i, j) = g(rng);
  }
  return QuadricSurface(B, v, g(rng));
}

QuadricSurface unit_sphere(int d) {
  return QuadricSurface(Mat::Identity(d, d), Vec::Zero(d), 1.0);
}

}  // namespace

TEST_CASE("surface constructor validates and symmetrizes") {
  Mat B(2, 2);
  B << 1.0, 2.0, 0.0, 1.0;
  QuadricSurface S(B, Vec::Zero(2), 1.0);
  CHECK(S.B(0, 1) == doctest::Approx(1.0));
  CHECK(S.B(1, 0) == doctest::Approx(1.0));
  CHECK_THROWS(QuadricSurface(Mat::Zero(2, 2), Vec::Zero(2), 1.0));
  CHECK_THROWS(QuadricSurface(Mat::Identity(3, 3), Vec::Zero(2), 1.0));
}

TEST_CASE("hyperplane normalizes its normal and offset together") {
  Vec u(2);
  u << 3.0, 0.0;
  Hyperplane H(u, 6.0);
  CHECK(H.u(0) == doctest::Approx(1.0));
  CHECK(H.s == doctest::Approx(2.0));
  CHECK_THROWS(Hyperplane(Vec::Zero(2), 1.0));
}

TEST_CASE("eval_p and forms on the unit sphere") {
  auto S = unit_sphere(3);
  Vec x(3);
  x << 0.0, 0.0, 1.0;
  CHECK(eval_p(S, x) == doctest::Approx(0.0));
  CHECK(on_surface(S, x));
  Vec u(3);
  u << 1.0, 0.0, 0.0;
  CHECK(q_form(S, u) == doctest::Approx(1.0));
  CHECK(b_affine(S, x, u) == doctest::Approx(0.0));
}

TEST_CASE("fiber conic matches direct substitution") {
  // Oracle: evaluate P on the section plane directly.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> st(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto S = random_surface(rng, d);
    auto x = sample_point(S, rng);
    if (!x) continue;
    std::normal_distribution<double> g(0.0, 1.0);
    Vec a(d), b(d);
    for (int i = 0; i < d; ++i) a(i) = g(rng);
    for (int i = 0; i < d; ++i) b(i) = g(rng);
    if (a.norm() < 1e-6) continue;
    a.normalize();
    b -= a.dot(b) * a;
    if (b.norm() < 1e-6) continue;
    b.normalize();
    auto f = fiber_conic(S, *x, a, b);
    for (int k = 0; k < 10; ++k) {
      const double s = st(rng), t = st(rng);
      const double direct = eval_p(S, *x + s * a + t * b);
      const double viaf = f.a * s * s + 2.0 * f.b * s * t + f.c * t * t +
                          2.0 * f.p * s + 2.0 * f.q * t;
      CHECK(std::abs(direct - viaf) <=
            1e-9 * std::max(1.0, scale(S, *x + s * a + t * b)));
    }
  }
}

TEST_CASE("fiber conic requires an orthonormal frame") {
  auto S = unit_sphere(3);
  Vec x(3), u1(3), v2(3);
  x << 0.0, 0.0, 1.0;
  u1 << 1.0, 0.0, 0.0;
  v2 << 1.0, 0.0, 0.0;
  CHECK_THROWS(fiber_conic(S, x, u1, v2));
}

TEST_CASE("tangent-plane fiber through the sphere pole is a point") {
  auto S = unit_sphere(3);
  Vec x(3), u1(3), v2(3);
  x << 0.0, 0.0, 1.0;
  u1 << 1.0, 0.0, 0.0;
  v2 << 0.0, 1.0, 0.0;
  auto f = fiber_conic(S, x, u1, v2);
  CHECK(f.a == doctest::Approx(1.0));
  CHECK(f.b == doctest::Approx(0.0));
  CHECK(f.c == doctest::Approx(1.0));
  CHECK(f.p == doctest::Approx(0.0));
  CHECK(f.q == doctest::Approx(0.0));
  CHECK(discriminant(f) == doctest::Approx(1.0));
  CHECK(classify_conic(f) == ConicClass::Point);
}

TEST_CASE("conic classification catalogue") {
  CHECK(classify_conic({1, 0, 1, 0, 0}) == ConicClass::Point);
  CHECK(classify_conic({1, 0, -1, 0, 0}) == ConicClass::IntersectingLines);
  CHECK(classify_conic({0, 0, 0, 1, 0}) == ConicClass::Line);
  CHECK(classify_conic({1, 0, 1, 0.3, 0.1}) == ConicClass::Ellipse);
  CHECK(classify_conic({1, 0, -1, 0.3, 0.1}) == ConicClass::Hyperbola);
  CHECK(classify_conic({1, 0, 0, 0, 0.5}) == ConicClass::Parabola);
  CHECK(classify_conic({1, 0, 0, 0.5, 0}) == ConicClass::ParallelLines);
  CHECK(classify_conic({1, 0, 0, 0, 0}) == ConicClass::SingleLine);
  CHECK_THROWS(classify_conic({0, 0, 0, 0, 0}));
}

TEST_CASE("classification is stable under swapping the frame directions") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 3;
    auto S = random_surface(rng, d);
    auto x = sample_point(S, rng);
    if (!x) continue;
    std::normal_distribution<double> g(0.0, 1.0);
    Vec a(d), b(d);
    for (int i = 0; i < d; ++i) a(i) = g(rng);
    for (int i = 0; i < d; ++i) b(i) = g(rng);
    a.normalize();
    b -= a.dot(b) * a;
    if (b.norm() < 1e-6) continue;
    b.normalize();
    auto f1 = fiber_conic(S, *x, a, b);
    auto f2 = fiber_conic(S, *x, b, a);
    CHECK(discriminant(f1) == doctest::Approx(discriminant(f2)));
  }
}

TEST_CASE("decompose_direction") {
  Vec e1(3), e2(3);
  e1 << 1, 0, 0;
  e2 << 0, 1, 0;
  auto ds = decompose_direction(e1, e2);
  CHECK(ds.theta == doctest::Approx(M_PI / 2));
  CHECK((ds.v2 - e2).norm() == doctest::Approx(0.0));

  Vec m(3);
  m << 1, 1, 0;
  auto ds2 = decompose_direction(e1, m);
  CHECK(ds2.theta == doctest::Approx(M_PI / 4));
  CHECK((ds2.v2 - e2).norm() == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS(decompose_direction(e1, e1));
  CHECK_THROWS(decompose_direction(e1, Vec(-e1)));
}

TEST_CASE("reframing maps preserve membership") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto S = random_surface(rng, d);
    Vec x0(d);
    for (int i = 0; i < d; ++i) x0(i) = g(rng);
    Mat T(d, d);
    do {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) T(i, j) = g(rng);
    } while (std::abs(T.determinant()) < 0.1);

    auto St = translate_surface(S, x0);
    auto Sl = linear_pullback(S, T);
    Vec y(d);
    for (int i = 0; i < d; ++i) y(i) = g(rng);
    CHECK(eval_p(St, y - x0) ==
          doctest::Approx(eval_p(S, y)).epsilon(1e-8));
    CHECK(eval_p(Sl, y) == doctest::Approx(eval_p(S, T * y)).epsilon(1e-8));

    Hyperplane H(Vec::Random(d), g(rng));
    auto Ht = adjoint_transport(H, T);
    Vec xi(d);
    for (int i = 0; i < d; ++i) xi(i) = g(rng);
    // Project xi onto H, push through T^T, check membership in T^*(H).
    Vec on_h = xi + (H.s - H.u.dot(xi)) * H.u;
    CHECK(std::abs(Ht.u.dot(T.transpose() * on_h) - Ht.s) <=
          1e-8 * (1.0 + on_h.norm() * T.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("solve_quadric_point finds witnesses and proves emptiness") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g(0.0, 1.0);
  int found = 0, empty = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    Mat A(m, m);
    Vec w(m);
    for (int i = 0; i < m; ++i) {
      w(i) = g(rng);
      for (int j = 0; j < m; ++j) A(i, j) = g(rng);
    }
    A = ((A + A.transpose()) / 2.0).eval();
    const double c = 2.0 * g(rng);
    auto z = solve_quadric_point(A, w, c);
    auto value = [&](const Vec& y) { return y.dot(A * y) + 2.0 * w.dot(y) + c; };
    if (z) {
      ++found;
      CHECK(std::abs(value(*z)) <=
            1e-7 * std::max(1.0, std::abs(c) + w.norm() * z->norm() +
                                     z->squaredNorm()));
    } else {
      // Oracle: the value never changes sign on a coarse lattice.
      ++empty;
      double lo = 1e300, hi = -1e300;
      std::uniform_real_distribution<double> box(-10.0, 10.0);
      for (int k = 0; k < 2000; ++k) {
        Vec y(m);
        for (int i = 0; i < m; ++i) y(i) = box(rng);
        const double val = value(y);
        lo = std::min(lo, val);
        hi = std::max(hi, val);
      }
      CHECK(lo * hi > 0.0);
    }
  }
  CHECK(found > 0);
  CHECK(empty > 0);
}

TEST_CASE("sampled points lie on the surface") {
  std::mt19937_64 rng(15);
  int produced = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto S = random_surface(rng, d);
    auto x = sample_point(S, rng);
    if (!x) continue;
    ++produced;
    CHECK(on_surface(S, *x, 1e-10));
  }
  CHECK(produced > 50);
}

TEST_CASE("any_point agrees with emptiness of the surface") {
  auto Sempty = QuadricSurface(Mat::Identity(3, 3), Vec::Zero(3), -1.0);
  CHECK_FALSE(any_point(Sempty).has_value());
  auto S = unit_sphere(4);
  auto x = any_point(S);
  REQUIRE(x.has_value());
  CHECK(on_surface(S, *x, 1e-10));
}

TEST_CASE("global classification tags") {
  CHECK(classify_global(unit_sphere(3)).tag == "sphere");
  CHECK(classify_global(unit_sphere(2)).tag == "circle");

  Mat B = Mat::Zero(3, 3);
  B(0, 0) = 1.0;
  B(1, 1) = 1.0;
  Vec v = Vec::Zero(3);
  v(2) = -0.5;
  CHECK(classify_global(QuadricSurface(B, v, 0.0)).tag == "paraboloid");

  Mat Bc = Mat::Identity(3, 3);
  Bc(2, 2) = -1.0;
  CHECK(classify_global(QuadricSurface(Bc, Vec::Zero(3), 0.0)).tag == "cone");
  CHECK(classify_global(QuadricSurface(Bc, Vec::Zero(3), 1.0)).tag == "hyperboloid");

  Mat Bl = Mat::Zero(2, 2);
  Bl(0, 0) = 1.0;
  CHECK(classify_global(QuadricSurface(Bl, Vec::Zero(2), 1.0)).tag == "parallel-lines");
  CHECK(classify_global(QuadricSurface(Mat::Identity(2, 2), Vec::Zero(2), 0.0)).tag ==
        "point");
  CHECK(classify_global(QuadricSurface(Mat::Identity(2, 2), Vec::Zero(2), -1.0)).tag ==
        "empty");
  Vec vl(2);
  vl << 0.0, 1.0;
  CHECK(classify_global(QuadricSurface(Mat::Zero(2, 2), vl, 0.0)).tag == "line");
}
