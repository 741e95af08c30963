#include <cstdint>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hupq/conic2d.hpp"
#include "hupq/cramer_wold.hpp"
#include "hupq/decide.hpp"
#include "hupq/json_io.hpp"
#include "hupq/reflection.hpp"

namespace {

using namespace hupq;

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

QuadricSurface need_surface(const std::string& file) {
  if (file.empty()) throw std::invalid_argument("this command requires --surface");
  return surface_from_json(load_json_file(file));
}

std::vector<Hyperplane> need_hyperplanes(const std::string& file) {
  if (file.empty()) throw std::invalid_argument("this command requires --hyperplanes");
  return hyperplanes_from_json(load_json_file(file));
}

AtomicMeasure need_measure(const std::string& file, const char* flag) {
  if (file.empty()) throw std::invalid_argument(std::string("this command requires ") + flag);
  return measure_from_json(load_json_file(file));
}

int run(int argc, char** argv) {
  CLI::App app{"uniqueness decisions for quadratic hypersurfaces against hyperplane families"};
  app.require_subcommand(1);

  std::string surface_file, hyperplanes_file, measure_file, proj1_file, proj2_file;
  DecideOptions opts;
  bool strict = false;
  int steps = 500;

  app.add_option("--surface", surface_file, "surface JSON file {B, v, rho}");
  app.add_option("--hyperplanes", hyperplanes_file, "hyperplane JSON file: {u, s} or an array");
  app.add_option("--measure", measure_file, "measure JSON file {atoms, weights}");
  auto* tol_opt =
      app.add_option("--tol", opts.tol, "vanishing tolerance relative to total variation");
  app.add_option("--maxden", opts.maxden, "denominator bound for rationality tests");
  app.add_option("--grid", opts.grid_points, "grid points per axis");
  app.add_option("--extent", opts.extent, "grid half-extent");
  app.add_option("--seed", opts.seed, "seed for randomized searches");
  app.add_flag("--strict", strict, "exit 4 on an UNDECIDED verdict");

  auto* c_classify = app.add_subcommand("classify", "surface type and section class");
  auto* c_decide = app.add_subcommand("decide", "uniqueness decision for (surface, hyperplanes)");
  auto* c_cex = app.add_subcommand("counterexample", "annihilating measure, when one exists");
  auto* c_verify = app.add_subcommand("verify-vanishing", "grid check of transform vanishing");
  auto* c_coxeter = app.add_subcommand("coxeter", "reflection group finiteness for the normals");
  auto* c_recon = app.add_subcommand("reconstruct", "measure from two hyperplane projections");
  auto* c_orbit = app.add_subcommand("orbit", "alternating reflection trajectory on a section");
  c_recon->add_option("--projection1", proj1_file, "first projected measure JSON");
  c_recon->add_option("--projection2", proj2_file, "second projected measure JSON");
  c_orbit->add_option("--steps", steps, "number of trajectory points");
  for (auto* sub : {c_classify, c_decide, c_cex, c_verify, c_coxeter, c_recon, c_orbit})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(c_classify)) {
    const QuadricSurface S = need_surface(surface_file);
    const GlobalClass g = classify_global(S);
    Json out{{"surface_type", g.tag},
             {"inertia", Json{{"positive", g.positive}, {"negative", g.negative}, {"zero", g.zero}}}};
    if (!hyperplanes_file.empty()) {
      const auto planes = need_hyperplanes(hyperplanes_file);
      if (planes.size() >= 2) {
        const DirectionSplit sp = decompose_direction(planes[0].u, planes[1].u);
        const Vec u1 = planes[0].u;
        const double a = q_form(S, u1);
        const double b = b_form(S, u1, sp.v2);
        const double c = q_form(S, sp.v2);
        Json fiber{{"discriminant", a * c - b * b}};
        if (auto x = any_point(S))
          fiber["class"] = to_string(classify_conic(fiber_conic(S, *x, u1, sp.v2)));
        else
          fiber["class"] = "empty";
        out["fiber"] = fiber;
      }
    }
    emit(out);
    return 0;
  }

  if (app.got_subcommand(c_decide) || app.got_subcommand(c_cex)) {
    const QuadricSurface S = need_surface(surface_file);
    const auto planes = need_hyperplanes(hyperplanes_file);
    const Decision dec = decide(S, planes, opts);
    if (app.got_subcommand(c_cex)) {
      if (dec.verdict != Verdict::NOT_HUP || !dec.certificate)
        throw std::invalid_argument("no annihilating measure was found for this input");
      emit(to_json(*dec.certificate));
      return 0;
    }
    emit(to_json(dec));
    return strict && dec.verdict == Verdict::UNDECIDED ? 4 : 0;
  }

  if (app.got_subcommand(c_verify)) {
    const AtomicMeasure mu = need_measure(measure_file, "--measure");
    const auto planes = need_hyperplanes(hyperplanes_file);
    VanishReport agg;
    agg.pass = true;
    for (const Hyperplane& H : planes) {
      const VanishReport rep = verify_vanishing(mu, H, opts.tol, opts.grid_points, opts.extent);
      if (rep.max_abs >= agg.max_abs) {
        agg.max_abs = rep.max_abs;
        agg.argmax = rep.argmax;
      }
      agg.pass = agg.pass && rep.pass;
    }
    emit(to_json(agg));
    return 0;
  }

  if (app.got_subcommand(c_coxeter)) {
    const auto planes = need_hyperplanes(hyperplanes_file);
    std::vector<Vec> normals;
    for (const Hyperplane& H : planes) normals.push_back(H.u);
    emit(to_json(is_infinite(normals, opts.maxden)));
    return 0;
  }

  if (app.got_subcommand(c_recon)) {
    const QuadricSurface S = need_surface(surface_file);
    const auto planes = need_hyperplanes(hyperplanes_file);
    if (planes.size() != 2)
      throw std::invalid_argument("reconstruct requires exactly two hyperplanes");
    const AtomicMeasure p1 = need_measure(proj1_file, "--projection1");
    const AtomicMeasure p2 = need_measure(proj2_file, "--projection2");
    // --tol here is the lift-matching radius; the default is the looser
    // reconstruction radius, not the vanishing tolerance.
    const double match_tol = tol_opt->count() > 0 ? opts.tol : 1e-7;
    emit(to_json(reconstruct(S, planes[0], planes[1], p1, p2, match_tol)));
    return 0;
  }

  // orbit
  const QuadricSurface S = need_surface(surface_file);
  const auto planes = need_hyperplanes(hyperplanes_file);
  if (planes.size() < 2) throw std::invalid_argument("orbit requires two hyperplanes");
  if (steps < 1) throw std::invalid_argument("orbit requires a positive --steps");
  std::mt19937_64 rng(opts.seed);
  auto x = sample_point(S, rng);
  if (!x) throw std::invalid_argument("the surface has no point to start the trajectory from");
  Json pts = Json::array();
  Vec cur = *x;
  for (int k = 0; k < steps; ++k) {
    Json p = Json::array();
    for (int i = 0; i < cur.size(); ++i) p.push_back(cur(i));
    pts.push_back(p);
    cur = q_reflect(S, planes[k % 2 == 0 ? 0 : 1].u, cur);
  }
  emit(Json{{"points", pts}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const JsonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
