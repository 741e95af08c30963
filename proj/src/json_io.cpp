#include "hupq/json_io.hpp"

#include <fstream>
#include <sstream>

namespace hupq {
namespace {

double number_at(const Json& j, const char* what) {
  if (!j.is_number()) throw JsonError(std::string(what) + " must be a number");
  return j.get<double>();
}

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw JsonError(std::string(what) + " must be an object with a \"" + key + "\" field");
  return j.at(key);
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonError(path + ": " + e.what());
  }
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw JsonError("vector must be a JSON array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number_at(j[i], "vector entry");
  return v;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw JsonError("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Mat m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw JsonError("matrix rows must be equal-length arrays");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = number_at(j[r][c], "matrix entry");
  }
  return m;
}

QuadricSurface surface_from_json(const Json& j) {
  return QuadricSurface(mat_from_json(field(j, "B", "surface")),
                        vec_from_json(field(j, "v", "surface")),
                        number_at(field(j, "rho", "surface"), "surface rho"));
}

Hyperplane hyperplane_from_json(const Json& j) {
  return Hyperplane(vec_from_json(field(j, "u", "hyperplane")),
                    number_at(field(j, "s", "hyperplane"), "hyperplane s"));
}

std::vector<Hyperplane> hyperplanes_from_json(const Json& j) {
  std::vector<Hyperplane> out;
  if (j.is_object()) {
    out.push_back(hyperplane_from_json(j));
    return out;
  }
  if (!j.is_array() || j.empty())
    throw JsonError("hyperplanes must be one object or a nonempty array of objects");
  for (const Json& e : j) out.push_back(hyperplane_from_json(e));
  return out;
}

AtomicMeasure measure_from_json(const Json& j) {
  const Json& atoms = field(j, "atoms", "measure");
  const Json& weights = field(j, "weights", "measure");
  if (!atoms.is_array() || !weights.is_array() || atoms.size() != weights.size())
    throw JsonError("measure atoms and weights must be arrays of equal length");
  AtomicMeasure mu;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    Cplx w;
    if (weights[k].is_number()) {
      w = Cplx(weights[k].get<double>(), 0.0);
    } else {
      w = Cplx(number_at(field(weights[k], "re", "weight"), "weight re"),
               number_at(field(weights[k], "im", "weight"), "weight im"));
    }
    mu.add(vec_from_json(atoms[k]), w);
  }
  return mu;
}

namespace {

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json mat_json(const Mat& m) {
  Json a = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

}  // namespace

Json to_json(const QuadricSurface& S) {
  return Json{{"B", mat_json(S.B)}, {"v", vec_json(S.v)}, {"rho", S.rho}};
}

Json to_json(const Hyperplane& H) { return Json{{"u", vec_json(H.u)}, {"s", H.s}}; }

Json to_json(const AtomicMeasure& mu) {
  Json atoms = Json::array();
  Json weights = Json::array();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    atoms.push_back(vec_json(mu.atoms[k]));
    weights.push_back(Json{{"re", mu.weights[k].real()}, {"im", mu.weights[k].imag()}});
  }
  return Json{{"atoms", atoms}, {"weights", weights}};
}

Json to_json(const Decision& dec) {
  Json j{{"verdict", to_string(dec.verdict)}, {"rule", dec.rule}, {"notes", dec.notes}};
  j["certificate"] = dec.certificate ? to_json(*dec.certificate) : Json(nullptr);
  return j;
}

Json to_json(const VanishReport& rep) {
  return Json{{"max_abs", rep.max_abs}, {"argmax", vec_json(rep.argmax)}, {"pass", rep.pass}};
}

Json to_json(const CoxeterReport& rep) {
  Json j{{"type", to_string(rep.type)}};
  switch (rep.type) {
    case CoxeterType::Finite:
      j["order"] = rep.order;
      break;
    case CoxeterType::Infinite:
      if (rep.witness) {
        Json w{{"u1", vec_json(rep.witness->first)}, {"u2", vec_json(rep.witness->second)}};
        w["angle"] = mirror_angle(rep.witness->first, rep.witness->second);
        if (rep.witness_angle) {
          w["nearest"] = Json{{"p", rep.witness_angle->p},
                              {"q", rep.witness_angle->q},
                              {"err", rep.witness_angle->err}};
        }
        j["witness"] = w;
      }
      if (rep.root_overflow) j["cap"] = rep.cap;
      break;
    case CoxeterType::Inconclusive:
      j["cap"] = rep.cap;
      break;
  }
  if (!rep.detail.empty()) j["detail"] = rep.detail;
  return j;
}

Json to_json(const Reconstruction& rec) {
  switch (rec.status) {
    case ReconstructStatus::Recovered:
      return to_json(rec.measure);
    case ReconstructStatus::Ambiguous: {
      Json j{{"verdict", "ambiguous"}, {"kernel", to_json(rec.kernel_witness)}};
      j["notes"] = rec.notes;
      return j;
    }
    case ReconstructStatus::Infeasible:
      break;
  }
  return Json{{"verdict", "infeasible"}, {"notes", rec.notes}};
}

}  // namespace hupq
