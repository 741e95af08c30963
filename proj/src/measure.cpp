#include "hupq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hupq/reflection.hpp"

namespace hupq {

double AtomicMeasure::total_variation() const {
  double tv = 0.0;
  for (const Cplx& w : weights) tv += std::abs(w);
  return tv;
}

void AtomicMeasure::add(Vec x, Cplx w) {
  atoms.push_back(std::move(x));
  weights.push_back(w);
}

namespace {

// Greedy clustering: every atom joins the first representative within
// `radius`, weights accumulate, positions keep the first-seen value.
AtomicMeasure cluster(const AtomicMeasure& mu, double radius) {
  AtomicMeasure out;
  for (std::size_t k = 0; k < mu.atoms.size(); ++k) {
    bool found = false;
    for (std::size_t j = 0; j < out.atoms.size(); ++j) {
      if ((mu.atoms[k] - out.atoms[j]).norm() <= radius) {
        out.weights[j] += mu.weights[k];
        found = true;
        break;
      }
    }
    if (!found) out.add(mu.atoms[k], mu.weights[k]);
  }
  return out;
}

}  // namespace

AtomicMeasure merged(const AtomicMeasure& mu, double radius) {
  const double tv_pre = mu.total_variation();
  AtomicMeasure clustered = cluster(mu, radius);
  AtomicMeasure out;
  for (std::size_t k = 0; k < clustered.atoms.size(); ++k) {
    if (std::abs(clustered.weights[k]) > 1e-14 * tv_pre)
      out.add(clustered.atoms[k], clustered.weights[k]);
  }
  return out;
}

AtomicMeasure negated(const AtomicMeasure& mu) { return scaled(mu, Cplx(-1.0, 0.0)); }

AtomicMeasure scaled(const AtomicMeasure& mu, Cplx factor) {
  AtomicMeasure out = mu;
  for (Cplx& w : out.weights) w *= factor;
  return out;
}

Cplx char_fn(const AtomicMeasure& mu, const Vec& xi) {
  Cplx sum(0.0, 0.0);
  for (std::size_t k = 0; k < mu.atoms.size(); ++k)
    sum += mu.weights[k] * std::exp(Cplx(0.0, mu.atoms[k].dot(xi)));
  return sum;
}

AtomicMeasure modulate(const AtomicMeasure& mu, const Vec& u, double s) {
  AtomicMeasure out = mu;
  for (std::size_t k = 0; k < out.atoms.size(); ++k)
    out.weights[k] *= std::exp(Cplx(0.0, s * out.atoms[k].dot(u)));
  return out;
}

AtomicMeasure pushforward(const AtomicMeasure& mu, const AffineMap& map) {
  AtomicMeasure out;
  for (std::size_t k = 0; k < mu.atoms.size(); ++k)
    out.add(map.A * mu.atoms[k] + map.b, mu.weights[k]);
  return merged(out);
}

Mat hyperplane_basis(const Vec& u) {
  const int d = static_cast<int>(u.size());
  const Vec n = u.normalized();
  Vec hv = n;
  hv(0) -= 1.0;
  if (hv.norm() < 1e-12) return Mat::Identity(d, d).rightCols(d - 1);
  hv.normalize();
  const Mat H = Mat::Identity(d, d) - 2.0 * hv * hv.transpose();
  return H.rightCols(d - 1);
}

AtomicMeasure project_to_hyperplane(const AtomicMeasure& mu, const Hyperplane& H) {
  if (std::abs(H.s) > 1e-9)
    throw std::invalid_argument("projection target must pass through the origin");
  const Mat V = hyperplane_basis(H.u);
  AtomicMeasure out;
  for (std::size_t k = 0; k < mu.atoms.size(); ++k)
    out.add(V.transpose() * mu.atoms[k], mu.weights[k]);
  return merged(out);
}

double measure_deviation(const AtomicMeasure& a, const AtomicMeasure& b,
                         double radius) {
  AtomicMeasure diff = a;
  for (std::size_t k = 0; k < b.atoms.size(); ++k) diff.add(b.atoms[k], -b.weights[k]);
  const AtomicMeasure clustered = cluster(diff, radius);
  double dev = 0.0;
  for (const Cplx& w : clustered.weights) dev = std::max(dev, std::abs(w));
  return dev;
}

GridSpec hyperplane_grid(const Hyperplane& H, int points, double extent) {
  GridSpec g;
  g.origin = H.s * H.u;
  g.dirs = hyperplane_basis(H.u);
  g.points = points;
  g.extent = extent;
  return g;
}

VanishReport verify_vanishing(const AtomicMeasure& mu, const Hyperplane& H,
                              const GridSpec& grid, double tol) {
  const int m = static_cast<int>(grid.dirs.cols());
  if (grid.points < 2 || grid.extent <= 0.0)
    throw std::invalid_argument("degenerate evaluation grid");
  if (std::abs(grid.origin.dot(H.u) - H.s) > 1e-9 * (1.0 + std::abs(H.s)))
    throw std::invalid_argument("grid origin is off the hyperplane");
  for (int j = 0; j < m; ++j) {
    if (std::abs(grid.dirs.col(j).dot(H.u)) > 1e-9)
      throw std::invalid_argument("grid axis leaves the hyperplane");
  }
  const Mat gram = grid.dirs.transpose() * grid.dirs - Mat::Identity(m, m);
  if (gram.cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("grid axes must be orthonormal");

  // Per-atom phases split as <x, origin> + sum_i c_i <x, dir_i>.
  const std::size_t n = mu.atoms.size();
  std::vector<double> base(n);
  std::vector<std::vector<double>> along(n, std::vector<double>(m));
  for (std::size_t k = 0; k < n; ++k) {
    base[k] = mu.atoms[k].dot(grid.origin);
    for (int j = 0; j < m; ++j) along[k][j] = mu.atoms[k].dot(grid.dirs.col(j));
  }

  std::vector<int> idx(m, 0);
  std::vector<double> coeff(m);
  auto axis_value = [&](int k) {
    return -grid.extent + 2.0 * grid.extent * k / (grid.points - 1);
  };
  for (int j = 0; j < m; ++j) coeff[j] = axis_value(0);

  VanishReport report;
  std::vector<int> best_idx(m, 0);
  while (true) {
    Cplx sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double phase = base[k];
      for (int j = 0; j < m; ++j) phase += coeff[j] * along[k][j];
      sum += mu.weights[k] * std::exp(Cplx(0.0, phase));
    }
    const double mag = std::abs(sum);
    if (mag > report.max_abs) {
      report.max_abs = mag;
      best_idx = idx;
    }
    int j = 0;
    for (; j < m; ++j) {
      if (++idx[j] < grid.points) {
        coeff[j] = axis_value(idx[j]);
        break;
      }
      idx[j] = 0;
      coeff[j] = axis_value(0);
    }
    if (j == m) break;
  }

  report.argmax = grid.origin;
  for (int j = 0; j < m; ++j) report.argmax += axis_value(best_idx[j]) * grid.dirs.col(j);
  report.pass = report.max_abs <= tol * mu.total_variation();
  return report;
}

VanishReport verify_vanishing(const AtomicMeasure& mu, const Hyperplane& H,
                              double tol, int points, double extent) {
  return verify_vanishing(mu, H, hyperplane_grid(H, points, extent), tol);
}

FundCheck check_fund_equivalences(const QuadricSurface& S, const AtomicMeasure& mu,
                                  const Hyperplane& H, int samples,
                                  std::mt19937_64& rng) {
  const double qu = q_form(S, H.u);
  if (std::abs(qu) < 1e-12)
    throw std::invalid_argument("reflection requires a non-isotropic normal");
  const double tv = mu.total_variation();
  FundCheck out;
  if (tv == 0.0) return out;

  const AtomicMeasure nu = modulate(mu, H.u, H.s);
  const AtomicMeasure rnu = pushforward(nu, q_reflect_map(S, H.u));
  out.dev_pushforward = measure_deviation(rnu, negated(nu)) / tv;

  // nu_hat(xi) = -exp(-2i <u,v> <u,xi> / Q(u)) nu_hat(R_u^* xi).
  const double vu = S.v.dot(H.u);
  std::normal_distribution<double> gauss(0.0, 2.0);
  double worst = 0.0;
  const int d = S.dim();
  for (int t = 0; t < samples; ++t) {
    Vec xi(d);
    for (int i = 0; i < d; ++i) xi(i) = gauss(rng);
    const Cplx lhs = char_fn(nu, xi);
    const Cplx phase = std::exp(Cplx(0.0, -2.0 * vu * H.u.dot(xi) / qu));
    const Cplx rhs = -phase * char_fn(nu, adjoint_reflect(S, H.u, xi));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  out.dev_pointwise = worst / tv;
  return out;
}

Cplx apply_PD(const QuadricSurface& S, const AtomicMeasure& mu, const Vec& xi) {
  Cplx sum(0.0, 0.0);
  for (std::size_t k = 0; k < mu.atoms.size(); ++k)
    sum += mu.weights[k] * eval_p(S, mu.atoms[k]) * std::exp(Cplx(0.0, mu.atoms[k].dot(xi)));
  return sum;
}

}  // namespace hupq
