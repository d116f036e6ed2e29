#include "articukit/refine.hpp"

#include "articukit/kinematics.hpp"
#include "articukit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace articukit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Jonker-Volgenant style shortest augmenting paths with potentials.
// Returns the column assigned to each row plus the dual variables.
struct SquareSolution {
  std::vector<int> row_col;
  std::vector<double> u;
  std::vector<double> v;
};

SquareSolution solve_square(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  SquareSolution sol;
  sol.row_col.assign(n, -1);
  sol.u.assign(n, 0.0);
  sol.v.assign(n, 0.0);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) sol.row_col[p[j] - 1] = j - 1;
  }
  for (int i = 1; i <= n; ++i) sol.u[i - 1] = u[i];
  for (int j = 1; j <= n; ++j) sol.v[j - 1] = v[j];
  return sol;
}

// Kuhn augmenting-path matching; adjacency given as column lists per row.
bool try_augment(int row, const std::vector<std::vector<int>>& adj, std::vector<char>& seen,
                 std::vector<int>& col_row) {
  for (int j : adj[row]) {
    if (seen[j]) continue;
    seen[j] = 1;
    if (col_row[j] < 0 || try_augment(col_row[j], adj, seen, col_row)) {
      col_row[j] = row;
      return true;
    }
  }
  return false;
}

int max_matching(const std::vector<std::vector<int>>& adj, int n_cols) {
  std::vector<int> col_row(n_cols, -1);
  int matched = 0;
  for (std::size_t r = 0; r < adj.size(); ++r) {
    std::vector<char> seen(n_cols, 0);
    if (try_augment(static_cast<int>(r), adj, seen, col_row)) ++matched;
  }
  return matched;
}

}  // namespace

Assignment hungarian(const Eigen::MatrixXd& cost) {
  const int h = static_cast<int>(cost.rows());
  const int l = static_cast<int>(cost.cols());
  if (h < 1 || l < 1) throw ValidationError("hungarian: empty cost matrix");
  if (h > l) throw ValidationError("hungarian: more rows than columns");
  if (!cost.allFinite()) throw ValidationError("hungarian: costs must be finite");
  if ((cost.array() < 0.0).any()) throw ValidationError("hungarian: costs must be nonnegative");

  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(l, l);
  padded.topRows(h) = cost;
  SquareSolution sol = solve_square(padded);

  const double tol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff());
  auto tight = [&](int i, int j) { return cost(i, j) - sol.u[i] - sol.v[j] <= tol; };

  bool ambiguous = false;
  for (int i = 0; i < h && !ambiguous; ++i) {
    int degree = 0;
    for (int j = 0; j < l; ++j) {
      if (tight(i, j) && ++degree > 1) {
        ambiguous = true;
        break;
      }
    }
  }

  std::vector<int> row_col(sol.row_col.begin(), sol.row_col.begin() + h);
  if (ambiguous) {
    // Columns a dummy row cannot absorb; the real rows must cover them.
    double v_star = *std::max_element(sol.v.begin(), sol.v.end());
    std::vector<char> deficient(l, 0);
    for (int j = 0; j < l; ++j) {
      deficient[j] = (h == l) || (sol.v[j] < v_star - tol);
    }

    std::vector<char> col_used(l, 0);
    for (int i = 0; i < h; ++i) {
      bool placed = false;
      for (int j = 0; j < l && !placed; ++j) {
        if (col_used[j] || !tight(i, j)) continue;
        col_used[j] = 1;
        // Remaining rows must saturate, and must cover every remaining
        // deficient column (Mendelsohn-Dulmage: both hold iff each side
        // can be saturated separately).
        std::vector<std::vector<int>> fwd;
        for (int r = i + 1; r < h; ++r) {
          std::vector<int> cols;
          for (int c = 0; c < l; ++c) {
            if (!col_used[c] && tight(r, c)) cols.push_back(c);
          }
          fwd.push_back(std::move(cols));
        }
        bool rows_ok = max_matching(fwd, l) == h - i - 1;
        bool cols_ok = true;
        if (rows_ok) {
          std::vector<std::vector<int>> rev;
          int needed = 0;
          for (int c = 0; c < l; ++c) {
            if (col_used[c] || !deficient[c]) continue;
            ++needed;
            std::vector<int> rows;
            for (int r = i + 1; r < h; ++r) {
              if (tight(r, c)) rows.push_back(r - i - 1);
            }
            rev.push_back(std::move(rows));
          }
          cols_ok = max_matching(rev, std::max(h - i - 1, 0)) == needed;
        }
        if (rows_ok && cols_ok) {
          row_col[i] = j;
          placed = true;
        } else {
          col_used[j] = 0;
        }
      }
      if (!placed) throw ValidationError("hungarian: internal tie resolution failed");
    }
  }

  Assignment out;
  out.pairs.reserve(h);
  for (int i = 0; i < h; ++i) {
    out.pairs.emplace_back(i, row_col[i]);
    out.total_cost += cost(i, row_col[i]);
  }
  return out;
}

namespace {

std::vector<Vec3> replan_points(const JointParams& psi, const PlanTemplate& tpl) {
  std::vector<Vec3> out;
  out.reserve(tpl.displacements.size());
  for (double d : tpl.displacements) {
    out.push_back(apply_joint_displacement(tpl.grasp_point, psi, d));
  }
  return out;
}

struct ObjectiveData {
  std::vector<Vec3> actual;                 // all rows
  const std::vector<PlanTemplate>* templates = nullptr;
};

ObjectiveData collect(const std::vector<Trajectory>& actuals,
                      const std::vector<PlanTemplate>& templates) {
  if (actuals.empty() || templates.empty() || actuals.size() != templates.size()) {
    throw ValidationError("trajectory objective: actuals and templates must align");
  }
  ObjectiveData data;
  data.templates = &templates;
  for (std::size_t b = 0; b < actuals.size(); ++b) {
    if (actuals[b].size() < 1) throw ValidationError("trajectory objective: empty trajectory");
    if (actuals[b].size() > templates[b].displacements.size()) {
      throw ValidationError("trajectory objective: more actual than planned waypoints");
    }
    data.actual.insert(data.actual.end(), actuals[b].waypoints.begin(),
                       actuals[b].waypoints.end());
  }
  return data;
}

Eigen::MatrixXd cost_matrix(const ObjectiveData& data, const JointParams& psi) {
  std::vector<Vec3> planned;
  for (const PlanTemplate& tpl : *data.templates) {
    std::vector<Vec3> pts = replan_points(psi, tpl);
    planned.insert(planned.end(), pts.begin(), pts.end());
  }
  Eigen::MatrixXd cost(data.actual.size(), planned.size());
  for (std::size_t i = 0; i < data.actual.size(); ++i) {
    for (std::size_t j = 0; j < planned.size(); ++j) {
      cost(static_cast<int>(i), static_cast<int>(j)) = (data.actual[i] - planned[j]).norm();
    }
  }
  return cost;
}

// Matched cost under a fixed assignment; cheaper than a Hungarian solve and
// differentiable in psi almost everywhere.
double matched_cost(const ObjectiveData& data, const Assignment& assignment,
                    const JointParams& psi) {
  std::vector<Vec3> planned;
  for (const PlanTemplate& tpl : *data.templates) {
    std::vector<Vec3> pts = replan_points(psi, tpl);
    planned.insert(planned.end(), pts.begin(), pts.end());
  }
  double total = 0.0;
  for (const auto& [r, c] : assignment.pairs) {
    total += (data.actual[static_cast<std::size_t>(r)] - planned[static_cast<std::size_t>(c)]).norm();
  }
  return total / static_cast<double>(data.actual.size());
}

JointParams apply_step(const JointParams& psi, const Eigen::VectorXd& x, const Vec3& e1,
                       const Vec3& e2) {
  Vec3 u = (psi.axis_dir + x[0] * e1 + x[1] * e2).normalized();
  Vec3 q = psi.origin;
  if (psi.type == JointType::Revolute) {
    q += x[2] * e1 + x[3] * e2;
  }
  return JointParams{u, q, psi.type};
}

// The executed waypoints all track one material point, so they lie on a
// circle around a revolute axis (a line along a prismatic one). Fitting that
// shape directly gives a second descent start in the right basin; the
// gradient steps alone tend to stall on short small-radius arcs.
std::optional<JointParams> geometric_candidate(const ObjectiveData& data,
                                               const JointParams& psi0) {
  const std::vector<Vec3>& pts = data.actual;
  const std::size_t need = psi0.type == JointType::Revolute ? 3 : 2;
  if (pts.size() < need) return std::nullopt;

  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : pts) cov += (p - mean) * (p - mean).transpose();
  if (!(cov.norm() > 0.0)) return std::nullopt;  // coincident points
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);

  if (psi0.type == JointType::Prismatic) {
    Vec3 dir = eig.eigenvectors().col(2);
    if (dir.dot(psi0.axis_dir) < 0.0) dir = -dir;
    return make_joint(dir, psi0.origin, JointType::Prismatic);
  }

  Vec3 normal = eig.eigenvectors().col(0);
  if (normal.dot(psi0.axis_dir) < 0.0) normal = -normal;
  Vec3 e1 = eig.eigenvectors().col(1);
  Vec3 e2 = eig.eigenvectors().col(2);
  // Kasa fit in plane coordinates: 2 x.c + d = |x|^2 with d = r^2 - |c|^2.
  Eigen::MatrixXd a(pts.size(), 3);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double x = e1.dot(pts[i] - mean);
    double y = e2.dot(pts[i] - mean);
    a(static_cast<int>(i), 0) = 2.0 * x;
    a(static_cast<int>(i), 1) = 2.0 * y;
    a(static_cast<int>(i), 2) = 1.0;
    b(static_cast<int>(i)) = x * x + y * y;
  }
  Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  Vec3 center = mean + sol[0] * e1 + sol[1] * e2;
  if (!center.allFinite()) return std::nullopt;
  return make_joint(normal, center, JointType::Revolute);
}

struct DescentResult {
  JointParams psi;
  double value = 0.0;
};

DescentResult descend(const ObjectiveData& data, const std::vector<Trajectory>& actuals,
                      const std::vector<PlanTemplate>& templates, const JointParams& start,
                      const RefineConfig& config) {
  JointParams psi = make_joint(start.axis_dir, start.origin, start.type);
  const int dof = psi.type == JointType::Revolute ? 4 : 2;

  double current = trajectory_objective(psi, actuals, templates).value;
  for (int outer = 0; outer < config.max_inner_iterations; ++outer) {
    Assignment assignment = hungarian(cost_matrix(data, psi));

    for (int step = 0; step < 30; ++step) {
      Vec3 e1, e2;
      rng::perpendicular_basis(psi.axis_dir, e1, e2);
      double here = matched_cost(data, assignment, psi);

      Eigen::VectorXd grad = Eigen::VectorXd::Zero(dof);
      for (int k = 0; k < dof; ++k) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dof);
        x[k] = config.grad_epsilon;
        double fwd = matched_cost(data, assignment, apply_step(psi, x, e1, e2));
        x[k] = -config.grad_epsilon;
        double bwd = matched_cost(data, assignment, apply_step(psi, x, e1, e2));
        grad[k] = (fwd - bwd) / (2.0 * config.grad_epsilon);
      }
      if (grad.norm() < 1e-15) break;

      // Walk the halving ladder and keep the best trial; taking the first
      // non-increasing step tends to hop across the valley without progress.
      double best_value = here;
      JointParams best_trial = psi;
      for (double alpha = config.step_size; alpha >= 1e-6; alpha *= 0.5) {
        JointParams trial = apply_step(psi, Eigen::VectorXd(-alpha * grad), e1, e2);
        double value = matched_cost(data, assignment, trial);
        if (value < best_value) {
          best_value = value;
          best_trial = trial;
        }
      }
      if (best_value >= here) break;
      psi = best_trial;
      if (here - best_value < config.tolerance) break;
    }

    double now = trajectory_objective(psi, actuals, templates).value;
    double gained = current - now;
    current = now;
    if (gained < config.tolerance) break;
  }
  return {psi, current};
}

}  // namespace

ObjectiveResult trajectory_objective(const JointParams& psi,
                                     const std::vector<Trajectory>& actuals,
                                     const std::vector<PlanTemplate>& templates) {
  ObjectiveData data = collect(actuals, templates);
  ObjectiveResult result;
  result.assignment = hungarian(cost_matrix(data, psi));
  result.value = result.assignment.total_cost / static_cast<double>(data.actual.size());
  return result;
}

ObjectiveResult trajectory_objective(const JointParams& psi, const Trajectory& actual,
                                     const PlanTemplate& plan_template) {
  return trajectory_objective(psi, std::vector<Trajectory>{actual},
                              std::vector<PlanTemplate>{plan_template});
}

JointParams refine_parameters(const JointParams& psi0, const std::vector<Trajectory>& actuals,
                              const std::vector<PlanTemplate>& templates,
                              const RefineConfig& config) {
  if (config.step_size <= 0.0 || config.max_inner_iterations < 1 || config.grad_epsilon <= 0.0 ||
      config.tolerance < 0.0) {
    throw ValidationError("refine_parameters: invalid config");
  }
  ObjectiveData data = collect(actuals, templates);

  DescentResult best = descend(data, actuals, templates, psi0, config);
  if (std::optional<JointParams> seed = geometric_candidate(data, psi0)) {
    DescentResult alt = descend(data, actuals, templates, *seed, config);
    if (alt.value < best.value) best = alt;
  }
  return best.psi;
}

JointParams refine_parameters(const JointParams& psi0, const Trajectory& actual,
                              const PlanTemplate& plan_template, const RefineConfig& config) {
  return refine_parameters(psi0, std::vector<Trajectory>{actual},
                           std::vector<PlanTemplate>{plan_template}, config);
}

}  // namespace articukit
