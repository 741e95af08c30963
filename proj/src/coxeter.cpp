#include "hupq/coxeter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace hupq {

namespace {

// Set of vectors with tolerance-aware membership. Buckets are cells of a
// grid much coarser than the tolerance; a query probes every cell a point
// within tol of the candidate could fall into, so duplicates cannot hide
// across cell boundaries.
class QuantizedSet {
 public:
  explicit QuantizedSet(double tol) : tol_(tol), grid_(tol * 1000.0) {}

  // True if a vector within tol was already present; inserts otherwise.
  bool contains_or_insert(const Vec& x) {
    const int d = static_cast<int>(x.size());
    std::vector<std::vector<std::int64_t>> probes(d);
    std::vector<std::int64_t> primary(d);
    for (int i = 0; i < d; ++i) {
      const std::int64_t k = static_cast<std::int64_t>(std::floor(x(i) / grid_));
      primary[i] = k;
      probes[i].push_back(k);
      const double lo = x(i) - static_cast<double>(k) * grid_;
      if (lo < 2 * tol_) probes[i].push_back(k - 1);
      if (grid_ - lo < 2 * tol_) probes[i].push_back(k + 1);
    }
    std::vector<std::int64_t> cell(d);
    if (scan(x, probes, cell, 0)) return true;
    buckets_[key_of(primary)].push_back(static_cast<int>(items_.size()));
    items_.push_back(x);
    return false;
  }

 private:
  bool scan(const Vec& x, const std::vector<std::vector<std::int64_t>>& probes,
            std::vector<std::int64_t>& cell, int i) {
    if (i == static_cast<int>(cell.size())) {
      auto it = buckets_.find(key_of(cell));
      if (it == buckets_.end()) return false;
      for (int idx : it->second)
        if ((items_[idx] - x).norm() <= tol_) return true;
      return false;
    }
    for (std::int64_t k : probes[i]) {
      cell[i] = k;
      if (scan(x, probes, cell, i + 1)) return true;
    }
    return false;
  }

  static std::string key_of(const std::vector<std::int64_t>& cell) {
    std::string key(cell.size() * sizeof(std::int64_t), '\0');
    std::memcpy(key.data(), cell.data(), key.size());
    return key;
  }

  double tol_;
  double grid_;
  std::unordered_map<std::string, std::vector<int>> buckets_;
  std::vector<Vec> items_;
};

Vec canonicalize(Vec n) {
  n.normalize();
  for (int i = 0; i < n.size(); ++i) {
    if (std::abs(n(i)) > 1e-12) {
      if (n(i) < 0) n = -n;
      break;
    }
  }
  return n;
}

Vec flatten(const Mat& g) {
  Vec x(g.size());
  int k = 0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) x(k++) = g(i, j);
  return x;
}

// First mirror pair whose angle stays away from every (p/q) pi, or nullopt.
std::optional<std::pair<std::pair<Vec, Vec>, RationalVerdict>> irrational_pair(
    const std::vector<Vec>& mirrors, long long maxden, std::size_t limit) {
  const std::size_t n = std::min(mirrors.size(), limit);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ang = mirror_angle(mirrors[i], mirrors[j]);
      const RationalVerdict rv = rational_angle(ang, maxden);
      if (!rv.rational) return {{{mirrors[i], mirrors[j]}, rv}};
    }
  }
  return std::nullopt;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

const char* to_string(CoxeterType t) {
  switch (t) {
    case CoxeterType::Finite: return "finite";
    case CoxeterType::Infinite: return "infinite";
    default: return "inconclusive";
  }
}

std::vector<Vec> canonical_mirrors(const std::vector<Vec>& normals, double tol) {
  std::vector<Vec> out;
  for (const Vec& n : normals) {
    if (n.norm() <= 0.0) throw std::invalid_argument("canonical_mirrors: zero normal");
    Vec c = canonicalize(n);
    bool dup = false;
    for (const Vec& m : out)
      if ((m - c).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

Mat householder(const Vec& n) {
  const double nn = n.squaredNorm();
  if (nn == 0.0) throw std::invalid_argument("householder: zero normal");
  return Mat::Identity(n.size(), n.size()) - (2.0 / nn) * (n * n.transpose());
}

double mirror_angle(const Vec& n1, const Vec& n2) {
  const double c = std::abs(n1.normalized().dot(n2.normalized()));
  return std::acos(std::min(1.0, c));
}

RootClosure root_closure(const std::vector<Vec>& normals, int cap, double tol) {
  RootClosure rc;
  QuantizedSet seen(tol);
  std::deque<int> work;
  auto push = [&](const Vec& r) -> bool {
    Vec c = canonicalize(r);
    if (seen.contains_or_insert(c)) return true;
    rc.roots.push_back(std::move(c));
    work.push_back(static_cast<int>(rc.roots.size()) - 1);
    return static_cast<int>(rc.roots.size()) <= cap;
  };
  for (const Vec& n : canonical_mirrors(normals, tol)) {
    if (!push(n)) return rc;
  }
  while (!work.empty()) {
    const int i = work.front();
    work.pop_front();
    const Mat H = householder(rc.roots[i]);
    for (std::size_t j = 0; j < rc.roots.size(); ++j) {
      if (!push(H * rc.roots[j])) return rc;
      if (!push(householder(rc.roots[j]) * rc.roots[i])) return rc;
    }
  }
  rc.complete = true;
  return rc;
}

GroupClosure group_closure(const std::vector<Vec>& normals, int cap, double tol) {
  GroupClosure gc;
  const std::vector<Vec> mirrors = canonical_mirrors(normals, tol);
  if (mirrors.empty()) throw std::invalid_argument("group_closure: no mirrors");
  const int d = static_cast<int>(mirrors[0].size());
  std::vector<Mat> gens;
  gens.reserve(mirrors.size());
  for (const Vec& n : mirrors) gens.push_back(householder(n));

  QuantizedSet seen(tol);
  std::deque<int> work;
  auto push = [&](Mat g) -> bool {
    if (seen.contains_or_insert(flatten(g))) return true;
    gc.elements.push_back(std::move(g));
    work.push_back(static_cast<int>(gc.elements.size()) - 1);
    return static_cast<int>(gc.elements.size()) <= cap;
  };
  push(Mat::Identity(d, d));
  while (!work.empty()) {
    const int i = work.front();
    work.pop_front();
    for (const Mat& h : gens) {
      if (!push(h * gc.elements[i])) return gc;
    }
  }
  gc.complete = true;
  return gc;
}

CoxeterReport is_infinite(const std::vector<Vec>& normals, long long maxden,
                          int root_cap, int group_cap) {
  CoxeterReport rep;
  const std::vector<Vec> mirrors = canonical_mirrors(normals);
  if (mirrors.empty()) throw std::invalid_argument("is_infinite: no mirrors");

  // An irrational dihedral angle between two mirrors generates an infinite
  // dihedral subgroup, so it settles the question before any closure runs.
  if (auto w = irrational_pair(mirrors, maxden, mirrors.size())) {
    rep.type = CoxeterType::Infinite;
    rep.witness = w->first;
    rep.witness_angle = w->second;
    rep.detail = "mirror pair at angle " + fmt(mirror_angle(w->first.first, w->first.second)) +
                 " with no rational multiple of pi up to denominator " +
                 std::to_string(maxden);
    return rep;
  }

  RootClosure rc = root_closure(mirrors, root_cap);
  rep.roots = rc.roots;
  if (!rc.complete) {
    rep.root_overflow = true;
    if (auto w = irrational_pair(rc.roots, maxden, 200)) {
      rep.type = CoxeterType::Infinite;
      rep.witness = w->first;
      rep.witness_angle = w->second;
      rep.detail = "root closure produced a mirror pair with an irrational angle";
      return rep;
    }
    // Distinct mirrors inject into group elements, so a runaway mirror count
    // is read as infinite. A finite dihedral factor of order above the cap
    // would be misread here; the cap is far beyond every catalogued family
    // that is not plain dihedral.
    rep.type = CoxeterType::Infinite;
    rep.cap = root_cap;
    rep.detail = "root closure exceeded " + std::to_string(root_cap) +
                 " distinct mirrors; treated as an infinite mirror family";
    return rep;
  }

  GroupClosure gc = group_closure(mirrors, group_cap);
  if (!gc.complete) {
    rep.type = CoxeterType::Inconclusive;
    rep.cap = group_cap;
    rep.detail = "root system closed with " + std::to_string(rc.roots.size()) +
                 " mirrors but the element count exceeds " + std::to_string(group_cap);
    return rep;
  }
  rep.type = CoxeterType::Finite;
  rep.elements = std::move(gc.elements);
  rep.order = static_cast<long long>(rep.elements.size());
  rep.detail = "finite reflection group of order " + std::to_string(rep.order) +
               " with " + std::to_string(rc.roots.size()) + " mirrors";
  return rep;
}

double sign_character(const Mat& g) { return g.determinant() < 0 ? -1.0 : 1.0; }

AtomicMeasure generic_orbit(const std::vector<Mat>& elements, std::mt19937_64& rng,
                            int retries, double min_gap) {
  if (elements.empty()) throw std::invalid_argument("generic_orbit: no elements");
  const int d = static_cast<int>(elements[0].rows());
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < retries; ++attempt) {
    Vec x0(d);
    for (int i = 0; i < d; ++i) x0(i) = gauss(rng);
    if (x0.norm() < 1e-6) continue;
    x0.normalize();
    bool free_orbit = true;
    for (const Mat& g : elements) {
      if ((g - Mat::Identity(d, d)).norm() < 1e-12) continue;
      if ((g * x0 - x0).norm() <= min_gap) {
        free_orbit = false;
        break;
      }
    }
    if (!free_orbit) continue;
    AtomicMeasure mu;
    for (const Mat& g : elements) mu.add(g * x0, Cplx(sign_character(g), 0.0));
    return mu;
  }
  throw std::runtime_error("generic_orbit: no free base point found");
}

}  // namespace hupq
