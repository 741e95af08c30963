#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hupq/decide.hpp"
#include "hupq/measure.hpp"

using namespace hupq;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

QuadricSurface unit_sphere(int d) {
  return QuadricSurface(Mat::Identity(d, d), Vec::Zero(d), 1.0);
}

bool note_mentions(const Decision& d, const std::string& part) {
  for (const auto& n : d.notes)
    if (n.find(part) != std::string::npos) return true;
  return false;
}

// The NOT_HUP contract: a verified certificate against the original input.
void check_certified(const Decision& d, const QuadricSurface& S,
                     const std::vector<Hyperplane>& planes) {
  REQUIRE(d.verdict == Verdict::NOT_HUP);
  REQUIRE(d.certificate.has_value());
  CHECK(d.certificate->total_variation() > 1e-9);
  for (const Vec& a : d.certificate->atoms) CHECK(on_surface(S, a, 1e-9));
  for (const Hyperplane& H : planes) CHECK(verify_vanishing(*d.certificate, H).pass);
}

}  // namespace

TEST_CASE("decide_single: a sphere never pairs with one hyperplane") {
  const QuadricSurface S = unit_sphere(3);
  const Hyperplane H(v3(0, 0, 1), 0.2);
  const Decision d = decide_single(S, H);
  CHECK(d.rule == "cor:c(ii)");
  check_certified(d, S, {H});
  CHECK(d.certificate->size() == 2);

  std::mt19937_64 rng(3);
  const FundCheck fc = check_fund_equivalences(S, *d.certificate, H, 32, rng);
  CHECK(fc.dev_pushforward <= 1e-10);
  CHECK(fc.dev_pointwise <= 1e-10);
}

TEST_CASE("decide_single: surfaces with no moved point force uniqueness") {
  // One-point surface: no reflection pair exists.
  const Decision d = decide_single(QuadricSurface(Mat::Identity(3, 3), Vec::Zero(3), 0.0),
                                   Hyperplane(v3(1, 0, 0), 0.0));
  CHECK(d.verdict == Verdict::HUP);
  CHECK(d.rule == "cor:c(i)");
}

TEST_CASE("decide_single: isotropic normal splits on the flat direction") {
  // Paraboloid x3 = x1^2 + x2^2 against a horizontal plane: every fiber
  // line meets the surface once.
  const QuadricSurface par(diag3(1, 1, 0), v3(0, 0, -0.5), 0.0);
  const Decision dh = decide_single(par, Hyperplane(v3(0, 0, 1), 0.7));
  CHECK(dh.verdict == Verdict::HUP);
  CHECK(dh.rule == "cor:c(iii)");

  // Cylinder x1^2 + x2^2 = 1 along the same normal: the rulings stay inside.
  const QuadricSurface cyl(diag3(1, 1, 0), Vec::Zero(3), 1.0);
  const Hyperplane H(v3(0, 0, 1), 0.7);
  const Decision dc = decide_single(cyl, H);
  CHECK(dc.rule == "cor:c(iii)");
  check_certified(dc, cyl, {H});
}

TEST_CASE("decide_parallel_family: offset relation decides") {
  const QuadricSurface cyl(diag3(1, 1, 0), Vec::Zero(3), 1.0);
  const Vec u = v3(1, 0, 0);

  DecideOptions small;
  small.maxden = 50;
  const Decision d50 = decide_parallel_family(cyl, u, {0.0, std::sqrt(2.0), std::sqrt(3.0)}, small);
  CHECK(d50.verdict == Verdict::HUP);
  CHECK(d50.rule == "prop:parallel");

  const Decision dfull =
      decide_parallel_family(cyl, u, {0.0, std::sqrt(2.0), std::sqrt(3.0)});
  CHECK(dfull.verdict == Verdict::HUP);

  const Decision drel = decide_parallel_family(cyl, u, {1.0, 2.0, 3.0});
  CHECK(drel.verdict == Verdict::UNDECIDED);
  CHECK(note_mentions(drel, "integer relation"));

  CHECK(decide_parallel_family(cyl, u, {0.0, 1.0, std::sqrt(2.0)}).verdict == Verdict::HUP);

  CHECK_THROWS_AS(decide_parallel_family(cyl, u, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(decide_parallel_family(cyl, v3(0, 0, 1), {0.0, 1.0, 2.0}),
                  std::invalid_argument);
  CHECK(decide_parallel_family(cyl, u, {0.0, 0.0, 1.0}).verdict == Verdict::UNDECIDED);
}

TEST_CASE("decide_sphere_parallel: separation threshold and offset triples") {
  const Vec u = v3(0, 0, 1);

  const Decision wide = decide_sphere_parallel(1.0, u, {-2.0, 2.0});
  CHECK(wide.rule == "prop:sphere(ii)");
  check_certified(wide, unit_sphere(3), {Hyperplane(u, -2.0), Hyperplane(u, 2.0)});
  CHECK(note_mentions(wide, "verdict differs from the stated criterion"));

  const Decision narrow = decide_sphere_parallel(1.0, u, {-0.25, 0.25});
  CHECK(narrow.verdict == Verdict::HUP);
  CHECK(narrow.rule == "prop:sphere(ii)");

  // A close pair anywhere in the family decides on its own.
  const Decision close = decide_sphere_parallel(1.0, u, {0.0, std::sqrt(2.0), std::sqrt(3.0)});
  CHECK(close.verdict == Verdict::HUP);
  CHECK(close.rule == "prop:sphere(ii)");

  // All separations past the threshold: the offset-relation rule takes over.
  const Decision triple =
      decide_sphere_parallel(1.0, u, {0.0, 3.2, 3.2 * (1.0 + std::sqrt(2.0))});
  CHECK(triple.verdict == Verdict::HUP);
  CHECK(triple.rule == "prop:sphere(iii)");

  const Decision rel = decide_sphere_parallel(1.0, u, {0.0, 3.2, 6.4});
  CHECK(rel.verdict == Verdict::UNDECIDED);
  CHECK(rel.rule == "prop:sphere(iii)");

  CHECK_THROWS_AS(decide_sphere_parallel(-1.0, u, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(decide_sphere_parallel(1.0, u, {0.5}), std::invalid_argument);
}

TEST_CASE("decide_isotropic_family: undeflected set decides") {
  const Mat B = diag3(1, 1, -1);
  const Vec u = v3(1, 0, 1).normalized();

  // One-sheet hyperboloid: witness off the axis, lattice certificate.
  const QuadricSurface one(B, Vec::Zero(3), 1.0);
  const Hyperplane H(u, 0.0);
  const Decision done = decide_isotropic_family(one, {H});
  CHECK(done.rule == "prop:iso2(iii)");
  check_certified(done, one, {H});

  // Two-sheet hyperboloid: the undeflected set misses the surface.
  const QuadricSurface two(B, Vec::Zero(3), -1.0);
  const Decision dtwo = decide_isotropic_family(two, {H});
  CHECK(dtwo.verdict == Verdict::HUP);
  CHECK(dtwo.rule == "prop:iso2(ii)");
  CHECK(note_mentions(dtwo, "empty"));

  // Cone with two isotropic planes: only the apex is undeflected.
  const QuadricSurface cone(B, Vec::Zero(3), 0.0);
  const Decision dc = decide_isotropic_family(
      cone, {Hyperplane(u, 0.0), Hyperplane(v3(-1, 0, 1).normalized(), 0.0)});
  CHECK(dc.verdict == Verdict::HUP);
  CHECK(dc.rule == "prop:iso2(ii)");
  CHECK(note_mentions(dc, "single point"));

  // Cone with one plane: the apex line itself carries an antipodal pair.
  const Decision dl = decide_isotropic_family(cone, {Hyperplane(u, 0.0)});
  CHECK(dl.rule == "prop:iso2(iii)");
  check_certified(dl, cone, {Hyperplane(u, 0.0)});
  CHECK(dl.certificate->size() == 2);

  CHECK_THROWS_AS(decide_isotropic_family(one, {Hyperplane(v3(1, 0, 0), 0.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(decide_isotropic_family(one, {Hyperplane(u, 0.5)}),
                  std::invalid_argument);
}

TEST_CASE("decide_sphere_concurrent: group finiteness decides") {
  const double r = std::sqrt(0.5);
  const std::vector<Vec> b3 = {v3(r, -r, 0), v3(0, r, -r), v3(0, 0, 1)};
  const Decision fin = decide_sphere_concurrent(1.0, b3);
  CHECK(fin.rule == "th:cox");
  std::vector<Hyperplane> planes;
  for (const Vec& n : b3) planes.emplace_back(n, 0.0);
  check_certified(fin, unit_sphere(3), planes);
  CHECK(fin.certificate->size() == 48);
  CHECK(note_mentions(fin, "order 48"));

  const Decision inf =
      decide_sphere_concurrent(1.0, {v3(1, 0, 0), v3(std::cos(1.0), std::sin(1.0), 0)});
  CHECK(inf.verdict == Verdict::HUP);
  CHECK(inf.rule == "th:cox");
  CHECK(note_mentions(inf, "infinite"));
}

TEST_CASE("decide_two_intersecting: elliptic sections follow the dihedral angle") {
  const QuadricSurface S = unit_sphere(3);
  const Hyperplane H1(v3(1, 0, 0), 0.0);
  const Hyperplane H4(v3(std::cos(kPi / 4), std::sin(kPi / 4), 0), 0.0);
  const Decision rat = decide_two_intersecting(S, H1, H4);
  CHECK(rat.rule == "th:dim2(iii)");
  check_certified(rat, S, {H1, H4});
  CHECK(rat.certificate->size() == 8);

  const Hyperplane Hirr(v3(std::cos(1.0), std::sin(1.0), 0), 0.0);
  const Decision irr = decide_two_intersecting(S, H1, Hirr);
  CHECK(irr.verdict == Verdict::HUP);
  CHECK(irr.rule == "th:dim2(iii)");

  CHECK_THROWS_AS(decide_two_intersecting(S, H1, Hyperplane(v3(-1, 0, 0), 0.3)),
                  std::invalid_argument);
  const QuadricSurface cyl(diag3(1, 1, 0), Vec::Zero(3), 1.0);
  CHECK_THROWS_AS(
      decide_two_intersecting(cyl, Hyperplane(v3(0, 0, 1), 0.0), Hyperplane(v3(1, 0, 0), 0.0)),
      std::invalid_argument);
}

TEST_CASE("decide_two_intersecting: degenerate section families") {
  // Parabolic cylinder: every section is a parabola.
  const QuadricSurface pcyl(diag3(1, 0, 0), v3(0, -0.5, 0), 0.0);
  const Decision dp = decide_two_intersecting(pcyl, Hyperplane(v3(1, 0, 0), 0.0),
                                              Hyperplane(v3(1, 1, 0).normalized(), 0.0));
  CHECK(dp.verdict == Verdict::HUP);
  CHECK(dp.rule == "th:dim2(ii)");

  // Slab pair x1 = +-1: parallel-line sections. A frequency line along the
  // components blocks the rule; generic lines decide.
  const QuadricSurface slab(diag3(1, 0, 0), Vec::Zero(3), 1.0);
  const Decision blocked = decide_two_intersecting(slab, Hyperplane(v3(1, 0, 0), 0.0),
                                                   Hyperplane(v3(1, 1, 0).normalized(), 0.0));
  CHECK(blocked.verdict == Verdict::UNDECIDED);
  CHECK(blocked.rule == "th:dim2(vi)");
  CHECK(note_mentions(blocked, "degenerate parallel-line sections"));

  const Decision generic =
      decide_two_intersecting(slab, Hyperplane(v3(1, 1, 0).normalized(), 0.0),
                              Hyperplane(v3(2, 1, 0).normalized(), 0.0));
  CHECK(generic.verdict == Verdict::HUP);
  CHECK(generic.rule == "th:dim2(vi)");
}

TEST_CASE("decide: degenerate and duplicate inputs") {
  const std::vector<Hyperplane> one = {Hyperplane(v3(0, 0, 1), 0.2)};
  const Decision dempty = decide(QuadricSurface(Mat::Identity(3, 3), Vec::Zero(3), -1.0), one);
  CHECK(dempty.verdict == Verdict::HUP);
  CHECK(dempty.rule == "th:dim2(degenerate)");

  const Decision dpoint = decide(QuadricSurface(Mat::Identity(3, 3), Vec::Zero(3), 0.0), one);
  CHECK(dpoint.verdict == Verdict::HUP);
  CHECK(dpoint.rule == "th:dim2(degenerate)");

  // The same plane written twice, once with the flipped normal.
  const QuadricSurface S = unit_sphere(3);
  const Decision dup =
      decide(S, {Hyperplane(v3(0, 0, 1), 0.2), Hyperplane(v3(0, 0, -1), -0.2)});
  CHECK(dup.rule == "cor:c(ii)");
  check_certified(dup, S, one);

  CHECK_THROWS_AS(decide(S, {}), std::invalid_argument);
  CHECK_THROWS_AS(decide(S, {Hyperplane(v2(1, 0), 0.0)}), std::invalid_argument);
}

TEST_CASE("decide: planar hyperbola against its axis pair stays open") {
  const QuadricSurface hyp((Mat(2, 2) << 1, 0, 0, -1).finished(), Vec::Zero(2), 1.0);
  const Decision exc = decide(hyp, {Hyperplane(v2(1, 0), 0.0), Hyperplane(v2(0, 1), 0.0)});
  CHECK(exc.verdict == Verdict::UNDECIDED);
  CHECK(exc.rule == "th:dim2(iv)");

  const Decision gen = decide(hyp, {Hyperplane(v2(1, 0), 0.0), Hyperplane(v2(2, 1), 0.0)});
  CHECK(gen.verdict == Verdict::HUP);
  CHECK(gen.rule == "th:dim2(iv)");

  // The (1,1) normal is a null direction of the form, so this pair routes
  // through the single-plane rule instead and still lands on uniqueness.
  const Decision iso = decide(hyp, {Hyperplane(v2(1, 0), 0.0), Hyperplane(v2(1, 1), 0.0)});
  CHECK(iso.verdict == Verdict::HUP);
  CHECK(iso.rule == "cor:c(iii)");
  CHECK(note_mentions(iso, "one hyperplane alone"));
}

TEST_CASE("decide: congruence carries sphere rules to ellipsoids") {
  const QuadricSurface ell(diag3(4, 1, 1), Vec::Zero(3), 4.0);
  const std::vector<Hyperplane> planes = {Hyperplane(v3(0, 1, 0), -2.0),
                                          Hyperplane(v3(0, 1, 0), 2.0)};
  const Decision d = decide(ell, planes);
  CHECK(d.rule == "prop:sphere(ii)");
  check_certified(d, ell, planes);
  CHECK(note_mentions(d, "congruence"));
}

TEST_CASE("decide: cylinder parallel families fall to the offset-relation rule") {
  const QuadricSurface cyl(diag3(1, 1, 0), Vec::Zero(3), 1.0);
  const Vec u = v3(1, 0, 0);
  const Decision hup = decide(cyl, {Hyperplane(u, 0.0), Hyperplane(u, std::sqrt(2.0)),
                                    Hyperplane(u, std::sqrt(3.0))});
  CHECK(hup.verdict == Verdict::HUP);
  CHECK(hup.rule == "prop:parallel");
  CHECK(note_mentions(hup, "offset triple"));

  const Decision und =
      decide(cyl, {Hyperplane(u, 1.0), Hyperplane(u, 2.0), Hyperplane(u, 3.0)});
  CHECK(und.verdict == Verdict::UNDECIDED);
  CHECK(und.rule == "prop:parallel");

  const Decision pair = decide(cyl, {Hyperplane(u, 0.0), Hyperplane(u, 1.0)});
  CHECK(pair.verdict == Verdict::UNDECIDED);
  CHECK(note_mentions(pair, "two parallel planes"));
}

TEST_CASE("decide: mixed isotropy pair has no rule") {
  const QuadricSurface pcyl(diag3(1, 0, 0), v3(0, -0.5, 0), 0.0);
  const Decision d =
      decide(pcyl, {Hyperplane(v3(1, 0, 0), 0.3), Hyperplane(v3(0, 0, 1), 0.0)});
  CHECK(d.verdict == Verdict::UNDECIDED);
  CHECK(d.rule == "none");
  CHECK(note_mentions(d, "mixed pair"));
}

TEST_CASE("decide: subset scan finds the deciding subfamily") {
  const QuadricSurface S = unit_sphere(3);
  // Not concurrent, but the two x1-planes sit closer than pi and decide alone.
  const Decision d = decide(S, {Hyperplane(v3(1, 0, 0), 0.0), Hyperplane(v3(1, 0, 0), 1.0),
                                Hyperplane(v3(0, 1, 0), 0.5)});
  CHECK(d.verdict == Verdict::HUP);
  CHECK(note_mentions(d, "parallel subfamily"));
}

TEST_CASE("decide: concurrent families off the origin are shifted first") {
  const QuadricSurface S = unit_sphere(3);
  const Vec w = v3(0.2, 0.3, 0.4);
  const Vec n1 = v3(1, 0, 0), n2 = v3(0, 1, 0), n3 = v3(1, 1, 1).normalized();
  const Decision d = decide(S, {Hyperplane(n1, n1.dot(w)), Hyperplane(n2, n2.dot(w)),
                                Hyperplane(n3, n3.dot(w))});
  CHECK(d.verdict == Verdict::HUP);
  CHECK(d.rule == "th:cox");
  CHECK(note_mentions(d, "share a frequency point"));

  // The same family with mirror-compatible angles is not a uniqueness pair.
  const std::vector<Vec> axes = {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)};
  std::vector<Hyperplane> planes;
  for (const Vec& n : axes) planes.emplace_back(n, n.dot(w));
  const Decision fin = decide(S, planes);
  check_certified(fin, S, planes);
  CHECK(fin.rule == "th:cox");
}
