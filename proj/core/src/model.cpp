#include "nds/model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace nds {

Eigen::MatrixXd Scm::dense() const {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n_v_total, n_z_total);
  for (const ScmEntry& e : entries) phi(e.row, e.col) = e.value;
  return phi;
}

Scm Scm::from_dense(const Eigen::MatrixXd& phi) {
  Scm s;
  s.n_v_total = static_cast<int>(phi.rows());
  s.n_z_total = static_cast<int>(phi.cols());
  for (int i = 0; i < phi.rows(); ++i) {
    for (int j = 0; j < phi.cols(); ++j) {
      if (phi(i, j) != 0.0) s.entries.push_back({i, j, phi(i, j)});
    }
  }
  return s;
}

Scm Scm::zero(int n_v_total, int n_z_total) {
  Scm s;
  s.n_v_total = n_v_total;
  s.n_z_total = n_z_total;
  return s;
}

namespace {

void check_shape(std::vector<Violation>& out, int index, const char* field,
                 const Eigen::MatrixXd& m, int rows, int cols) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream oss;
    oss << "expected " << rows << "x" << cols << ", got " << m.rows() << "x"
        << m.cols();
    out.push_back({index, field, oss.str()});
    return;
  }
  if (!m.allFinite()) {
    out.push_back({index, field, "non-finite entries"});
  }
}

}  // namespace

std::vector<Violation> validate(const NdsModel& model) {
  std::vector<Violation> out;

  int v_total = 0;
  int z_total = 0;
  for (int i = 0; i < static_cast<int>(model.subsystems.size()); ++i) {
    const Subsystem& s = model.subsystems[i];
    const Dims& d = s.dims;
    if (d.n_x < 1) out.push_back({i, "n_x", "state dimension must be >= 1"});
    if (d.n_e < 0 || d.n_z < 0 || d.n_v < 0 || d.n_u < 0 || d.n_y < 0) {
      out.push_back({i, "dims", "negative dimension"});
      continue;
    }
    check_shape(out, i, "E", s.E, d.n_e, d.n_x);
    check_shape(out, i, "A_xx", s.A_xx, d.n_e, d.n_x);
    check_shape(out, i, "A_xv", s.A_xv, d.n_e, d.n_v);
    check_shape(out, i, "B_x", s.B_x, d.n_e, d.n_u);
    check_shape(out, i, "A_zx", s.A_zx, d.n_z, d.n_x);
    check_shape(out, i, "A_zv", s.A_zv, d.n_z, d.n_v);
    check_shape(out, i, "B_z", s.B_z, d.n_z, d.n_u);
    check_shape(out, i, "C_x", s.C_x, d.n_y, d.n_x);
    check_shape(out, i, "C_v", s.C_v, d.n_y, d.n_v);
    check_shape(out, i, "D_u", s.D_u, d.n_y, d.n_u);
    v_total += d.n_v;
    z_total += d.n_z;
  }

  const Scm& phi = model.phi;
  if (phi.n_v_total != v_total) {
    std::ostringstream oss;
    oss << "phi rows " << phi.n_v_total << " != sum n_v " << v_total;
    out.push_back({-1, "phi", oss.str()});
  }
  if (phi.n_z_total != z_total) {
    std::ostringstream oss;
    oss << "phi cols " << phi.n_z_total << " != sum n_z " << z_total;
    out.push_back({-1, "phi", oss.str()});
  }
  std::set<std::pair<int, int>> seen;
  for (const ScmEntry& e : phi.entries) {
    if (e.row < 0 || e.row >= phi.n_v_total || e.col < 0 ||
        e.col >= phi.n_z_total) {
      std::ostringstream oss;
      oss << "entry (" << e.row << "," << e.col << ") out of bounds for "
          << phi.n_v_total << "x" << phi.n_z_total;
      out.push_back({-1, "phi", oss.str()});
      continue;
    }
    if (!std::isfinite(e.value)) {
      out.push_back({-1, "phi", "non-finite entry value"});
    }
    if (!seen.insert({e.row, e.col}).second) {
      std::ostringstream oss;
      oss << "duplicate entry (" << e.row << "," << e.col << ")";
      out.push_back({-1, "phi", oss.str()});
    }
  }
  return out;
}

Dims total_dims(const NdsModel& model) {
  Dims t;
  for (const Subsystem& s : model.subsystems) {
    t.n_x += s.dims.n_x;
    t.n_e += s.dims.n_e;
    t.n_z += s.dims.n_z;
    t.n_v += s.dims.n_v;
    t.n_u += s.dims.n_u;
    t.n_y += s.dims.n_y;
  }
  return t;
}

namespace {

struct Offsets {
  int x = 0, e = 0, z = 0, v = 0, u = 0, y = 0;
};

void place_block(Eigen::MatrixXd& dst, const Eigen::MatrixXd& src, int row,
                 int col) {
  if (src.rows() > 0 && src.cols() > 0) {
    dst.block(row, col, src.rows(), src.cols()) = src;
  }
}

}  // namespace

Stacked stack(const NdsModel& model) {
  const std::vector<Violation> violations = validate(model);
  if (!violations.empty()) {
    throw ValidationError("stack: " + describe(violations));
  }

  Stacked st;
  st.dims = total_dims(model);
  const Dims& t = st.dims;
  st.E = Eigen::MatrixXd::Zero(t.n_e, t.n_x);
  st.A_xx = Eigen::MatrixXd::Zero(t.n_e, t.n_x);
  st.A_xv = Eigen::MatrixXd::Zero(t.n_e, t.n_v);
  st.B_x = Eigen::MatrixXd::Zero(t.n_e, t.n_u);
  st.A_zx = Eigen::MatrixXd::Zero(t.n_z, t.n_x);
  st.A_zv = Eigen::MatrixXd::Zero(t.n_z, t.n_v);
  st.B_z = Eigen::MatrixXd::Zero(t.n_z, t.n_u);
  st.C_x = Eigen::MatrixXd::Zero(t.n_y, t.n_x);
  st.C_v = Eigen::MatrixXd::Zero(t.n_y, t.n_v);
  st.D_u = Eigen::MatrixXd::Zero(t.n_y, t.n_u);

  Offsets o;
  for (const Subsystem& s : model.subsystems) {
    place_block(st.E, s.E, o.e, o.x);
    place_block(st.A_xx, s.A_xx, o.e, o.x);
    place_block(st.A_xv, s.A_xv, o.e, o.v);
    place_block(st.B_x, s.B_x, o.e, o.u);
    place_block(st.A_zx, s.A_zx, o.z, o.x);
    place_block(st.A_zv, s.A_zv, o.z, o.v);
    place_block(st.B_z, s.B_z, o.z, o.u);
    place_block(st.C_x, s.C_x, o.y, o.x);
    place_block(st.C_v, s.C_v, o.y, o.v);
    place_block(st.D_u, s.D_u, o.y, o.u);
    o.x += s.dims.n_x;
    o.e += s.dims.n_e;
    o.z += s.dims.n_z;
    o.v += s.dims.n_v;
    o.u += s.dims.n_u;
    o.y += s.dims.n_y;
  }
  return st;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream oss;
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) oss << "; ";
    const Violation& v = violations[i];
    if (v.subsystem >= 0) oss << "subsystem " << v.subsystem << " ";
    oss << v.field << ": " << v.message;
  }
  return oss.str();
}

}  // namespace nds
