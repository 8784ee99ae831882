#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "nds/errors.hpp"

namespace nds {

/// Channel dimensions of one subsystem: state, descriptor rows, internal
/// output, internal input, external input, external output.
struct Dims {
  int n_x = 0;
  int n_e = 0;
  int n_z = 0;
  int n_v = 0;
  int n_u = 0;
  int n_y = 0;

  bool operator==(const Dims&) const = default;
};

/// One node of the network in rectangular descriptor form:
///   [E dx; z; y] = [A_xx A_xv B_x; A_zx A_zv B_z; C_x C_v D_u] [x; v; u]
/// E is n_e x n_x and may be rectangular and/or rank deficient.
struct Subsystem {
  Dims dims;
  Eigen::MatrixXd E;     // n_e x n_x
  Eigen::MatrixXd A_xx;  // n_e x n_x
  Eigen::MatrixXd A_xv;  // n_e x n_v
  Eigen::MatrixXd B_x;   // n_e x n_u
  Eigen::MatrixXd A_zx;  // n_z x n_x
  Eigen::MatrixXd A_zv;  // n_z x n_v
  Eigen::MatrixXd B_z;   // n_z x n_u
  Eigen::MatrixXd C_x;   // n_y x n_x
  Eigen::MatrixXd C_v;   // n_y x n_v
  Eigen::MatrixXd D_u;   // n_y x n_u
};

/// Sparse coordinate entry of the connection matrix.
struct ScmEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const ScmEntry&) const = default;
};

/// Subsystem connection matrix Phi routing stacked internal outputs to
/// stacked internal inputs, v = Phi * z. Stored sparse; densify explicitly.
struct Scm {
  int n_v_total = 0;  // rows
  int n_z_total = 0;  // cols
  std::vector<ScmEntry> entries;

  Eigen::MatrixXd dense() const;

  static Scm from_dense(const Eigen::MatrixXd& phi);
  static Scm zero(int n_v_total, int n_z_total);
};

/// A networked dynamic system: an ordered list of subsystems plus the SCM.
struct NdsModel {
  std::vector<Subsystem> subsystems;
  Scm phi;
};

/// Block-diagonal stack of all subsystem matrices, in list order.
struct Stacked {
  Dims dims;  // aggregate: each field is the sum over subsystems
  Eigen::MatrixXd E, A_xx, A_xv, B_x;
  Eigen::MatrixXd A_zx, A_zv, B_z;
  Eigen::MatrixXd C_x, C_v, D_u;
};

/// One validation failure; subsystem < 0 flags a model-level problem.
struct Violation {
  int subsystem = -1;
  std::string field;
  std::string message;
};

/// Structural checks: matrix shapes against dims, finiteness, SCM bounds
/// and duplicates, aggregate channel consistency. Violations are returned
/// as data, never thrown.
std::vector<Violation> validate(const NdsModel& model);

/// Aggregate dims (field-wise sums).
Dims total_dims(const NdsModel& model);

/// Block-diagonal assembly. Throws ValidationError when validate() fails.
Stacked stack(const NdsModel& model);

std::string describe(const std::vector<Violation>& violations);

}  // namespace nds
