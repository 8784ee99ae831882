#include "nds/model_io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace nds {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(where + ": missing key \"" + key + "\"");
  }
  return *it;
}

int require_int(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) {
    throw ParseError(where + ": \"" + key + "\" must be an integer");
  }
  return v.get<int>();
}

Eigen::MatrixXd parse_matrix(const json& j, const char* key, int rows,
                             int cols, const std::string& where) {
  const json& arr = require(j, key, where);
  if (!arr.is_array()) {
    throw ParseError(where + ": \"" + key + "\" must be an array");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  if (arr.empty()) {
    if (rows != 0 && cols != 0) {
      throw ParseError(where + ": \"" + key + "\" is empty but dims say " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
    return m;
  }
  if (static_cast<int>(arr.size()) != rows) {
    throw ParseError(where + ": \"" + key + "\" has " +
                     std::to_string(arr.size()) + " rows, dims say " +
                     std::to_string(rows));
  }
  for (int r = 0; r < rows; ++r) {
    const json& row = arr[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ParseError(where + ": \"" + key + "\" row " + std::to_string(r) +
                       " must have " + std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw ParseError(where + ": \"" + key + "\" entry (" +
                         std::to_string(r) + "," + std::to_string(c) +
                         ") is not a number");
      }
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

Scm parse_phi(const json& j) {
  Scm phi;
  if (j.is_array()) {
    // dense nested array form
    const int rows = static_cast<int>(j.size());
    int cols = 0;
    if (rows > 0) {
      if (!j[0].is_array()) throw ParseError("phi: dense form must nest rows");
      cols = static_cast<int>(j[0].size());
    }
    Eigen::MatrixXd d(rows, cols);
    for (int r = 0; r < rows; ++r) {
      const json& row = j[r];
      if (!row.is_array() || static_cast<int>(row.size()) != cols) {
        throw ParseError("phi: dense row " + std::to_string(r) +
                         " has inconsistent length");
      }
      for (int c = 0; c < cols; ++c) d(r, c) = row[c].get<double>();
    }
    return Scm::from_dense(d);
  }
  if (!j.is_object()) {
    throw ParseError("phi: must be an object or a dense nested array");
  }
  phi.n_v_total = require_int(j, "rows", "phi");
  phi.n_z_total = require_int(j, "cols", "phi");
  const json& entries = require(j, "entries", "phi");
  if (!entries.is_array()) throw ParseError("phi: \"entries\" must be an array");
  for (size_t k = 0; k < entries.size(); ++k) {
    const json& e = entries[k];
    if (!e.is_array() || e.size() != 3) {
      throw ParseError("phi: entry " + std::to_string(k) +
                       " must be [row, col, value]");
    }
    phi.entries.push_back(
        {e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return phi;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  if (m.rows() == 0 || m.cols() == 0) return arr;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

NdsModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model: top level must be an object");

  NdsModel model;
  const json& subs = require(j, "subsystems", "model");
  if (!subs.is_array()) {
    throw ParseError("model: \"subsystems\" must be an array");
  }
  for (size_t i = 0; i < subs.size(); ++i) {
    const std::string where = "subsystem " + std::to_string(i);
    const json& sj = subs[i];
    if (!sj.is_object()) throw ParseError(where + ": must be an object");
    Subsystem s;
    s.dims.n_x = require_int(sj, "n_x", where);
    s.dims.n_e = require_int(sj, "n_e", where);
    s.dims.n_z = require_int(sj, "n_z", where);
    s.dims.n_v = require_int(sj, "n_v", where);
    s.dims.n_u = require_int(sj, "n_u", where);
    s.dims.n_y = require_int(sj, "n_y", where);
    const Dims& d = s.dims;
    if (d.n_x < 0 || d.n_e < 0 || d.n_z < 0 || d.n_v < 0 || d.n_u < 0 ||
        d.n_y < 0) {
      throw ParseError(where + ": negative dimension");
    }
    s.E = parse_matrix(sj, "E", d.n_e, d.n_x, where);
    s.A_xx = parse_matrix(sj, "A_xx", d.n_e, d.n_x, where);
    s.A_xv = parse_matrix(sj, "A_xv", d.n_e, d.n_v, where);
    s.B_x = parse_matrix(sj, "B_x", d.n_e, d.n_u, where);
    s.A_zx = parse_matrix(sj, "A_zx", d.n_z, d.n_x, where);
    s.A_zv = parse_matrix(sj, "A_zv", d.n_z, d.n_v, where);
    s.B_z = parse_matrix(sj, "B_z", d.n_z, d.n_u, where);
    s.C_x = parse_matrix(sj, "C_x", d.n_y, d.n_x, where);
    s.C_v = parse_matrix(sj, "C_v", d.n_y, d.n_v, where);
    s.D_u = parse_matrix(sj, "D_u", d.n_y, d.n_u, where);
    model.subsystems.push_back(std::move(s));
  }
  model.phi = parse_phi(require(j, "phi", "model"));

  const std::vector<Violation> violations = validate(model);
  if (!violations.empty()) {
    throw ValidationError("model: " + describe(violations));
  }
  return model;
}

NdsModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_model(text);
}

std::string model_to_json(const NdsModel& model) {
  const std::vector<Violation> violations = validate(model);
  if (!violations.empty()) {
    throw ValidationError("save: " + describe(violations));
  }

  json j;
  j["subsystems"] = json::array();
  for (const Subsystem& s : model.subsystems) {
    json sj;
    sj["n_x"] = s.dims.n_x;
    sj["n_e"] = s.dims.n_e;
    sj["n_z"] = s.dims.n_z;
    sj["n_v"] = s.dims.n_v;
    sj["n_u"] = s.dims.n_u;
    sj["n_y"] = s.dims.n_y;
    sj["E"] = matrix_to_json(s.E);
    sj["A_xx"] = matrix_to_json(s.A_xx);
    sj["A_xv"] = matrix_to_json(s.A_xv);
    sj["B_x"] = matrix_to_json(s.B_x);
    sj["A_zx"] = matrix_to_json(s.A_zx);
    sj["A_zv"] = matrix_to_json(s.A_zv);
    sj["B_z"] = matrix_to_json(s.B_z);
    sj["C_x"] = matrix_to_json(s.C_x);
    sj["C_v"] = matrix_to_json(s.C_v);
    sj["D_u"] = matrix_to_json(s.D_u);
    j["subsystems"].push_back(std::move(sj));
  }

  std::vector<ScmEntry> sorted = model.phi.entries;
  std::sort(sorted.begin(), sorted.end(), [](const ScmEntry& a, const ScmEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  json pj;
  pj["rows"] = model.phi.n_v_total;
  pj["cols"] = model.phi.n_z_total;
  pj["entries"] = json::array();
  for (const ScmEntry& e : sorted) {
    pj["entries"].push_back(json::array({e.row, e.col, e.value}));
  }
  j["phi"] = std::move(pj);
  return j.dump(2);
}

void save_model(const NdsModel& model, const std::string& path) {
  const std::string text = model_to_json(model);
  std::ofstream out(path);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << text << "\n";
}

}  // namespace nds
