#include "gnep/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gnep/errors.hpp"

namespace gnep {

std::size_t LpProblem::add_var(double lb, double ub, double cost) {
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  for (auto& row : rows) row.coeffs.push_back(0.0);
  return objective.size() - 1;
}

void LpProblem::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  coeffs.resize(num_vars(), 0.0);
  rows.push_back(LpRow{std::move(coeffs), sense, rhs});
}

void LpProblem::validate() const {
  const std::size_t n = num_vars();
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("LpProblem: bound vectors do not match objective size");
  if (!std::isfinite(objective_offset))
    throw std::invalid_argument("LpProblem: objective offset is not finite");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j]))
      throw std::invalid_argument("LpProblem: objective coefficient " + std::to_string(j) +
                                  " is not finite");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInf || upper[j] == -kInf)
      throw std::invalid_argument("LpProblem: invalid bounds on variable " + std::to_string(j));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].coeffs.size() != n)
      throw std::invalid_argument("LpProblem: row " + std::to_string(r) + " has wrong length");
    if (!std::isfinite(rows[r].rhs))
      throw std::invalid_argument("LpProblem: row " + std::to_string(r) + " rhs is not finite");
    for (double a : rows[r].coeffs)
      if (!std::isfinite(a))
        throw std::invalid_argument("LpProblem: row " + std::to_string(r) +
                                    " has a non-finite coefficient");
  }
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Status : unsigned char { Basic, AtLower, AtUpper, FreeZero };

// Dense bounded-variable simplex. Column layout: structurals [0, n),
// logicals [n, n+m), artificials [n+m, n+2m). Row r reads
//   a_r^T x + s_r + sigma_r * art_r = rhs_r.
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opt)
      : p_(p), opt_(opt), n_(p.num_vars()), m_(p.num_rows()), cols_(n_ + 2 * m_) {
    const std::size_t size = m_ + n_;
    bland_after_ = opt.bland_after ? opt.bland_after : 20 * size;
    max_iter_ = opt.max_iterations ? opt.max_iterations : 200 * size + 1000;

    full_ = RowMatrix::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(cols_));
    rhs_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, 0.0);
    x_.assign(cols_, 0.0);
    status_.assign(cols_, Status::AtLower);
    head_.assign(m_, 0);

    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = p.lower[j];
      hi_[j] = p.upper[j];
      if (std::isfinite(lo_[j])) {
        status_[j] = Status::AtLower;
        x_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        status_[j] = Status::AtUpper;
        x_[j] = hi_[j];
      } else {
        status_[j] = Status::FreeZero;
        x_[j] = 0.0;
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const auto& row = p.rows[r];
      double activity = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        full_(idx(r), idx(j)) = row.coeffs[j];
        activity += row.coeffs[j] * x_[j];
      }
      rhs_(idx(r)) = row.rhs;
      const std::size_t s = n_ + r;
      full_(idx(r), idx(s)) = 1.0;
      switch (row.sense) {
        case RowSense::LessEqual: lo_[s] = 0.0; hi_[s] = kInf; break;
        case RowSense::Equal: lo_[s] = 0.0; hi_[s] = 0.0; break;
        case RowSense::GreaterEqual: lo_[s] = -kInf; hi_[s] = 0.0; break;
      }
      const double residual = row.rhs - activity;
      const std::size_t a = n_ + m_ + r;
      if (residual >= lo_[s] - opt_.feasibility_tol && residual <= hi_[s] + opt_.feasibility_tol) {
        head_[r] = s;
        status_[s] = Status::Basic;
        full_(idx(r), idx(a)) = 1.0;
        lo_[a] = hi_[a] = 0.0;
        status_[a] = Status::AtLower;
      } else {
        const double clamp = std::clamp(residual, lo_[s], hi_[s]);
        x_[s] = clamp;
        status_[s] = clamp == lo_[s] ? Status::AtLower : Status::AtUpper;
        const double sigma = residual - clamp > 0 ? 1.0 : -1.0;
        full_(idx(r), idx(a)) = sigma;
        head_[r] = a;
        status_[a] = Status::Basic;
        lo_[a] = 0.0;
        hi_[a] = kInf;
      }
    }
  }

  LpSolution run() {
    LpSolution sol;
    refactor();

    // Phase 1: drive artificial variables to zero.
    bool need_phase1 = false;
    cost_.assign(cols_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (head_[r] >= n_ + m_) {
        cost_[head_[r]] = 1.0;
        need_phase1 = true;
      }
    if (need_phase1) {
      if (iterate(/*phase_one=*/true) == Outcome::Unbounded)
        throw NumericalFailure("simplex: phase one reported unbounded");
      double infeasibility = 0.0;
      double scale = 1.0;
      for (std::size_t r = 0; r < m_; ++r) scale = std::max(scale, std::abs(rhs_(idx(r))));
      for (std::size_t r = 0; r < m_; ++r)
        if (head_[r] >= n_ + m_) infeasibility += std::abs(x_[head_[r]]);
      if (infeasibility > 1e-7 * scale) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      expel_artificials();
    }
    for (std::size_t a = n_ + m_; a < cols_; ++a) {
      lo_[a] = hi_[a] = 0.0;
      if (status_[a] != Status::Basic) {
        status_[a] = Status::AtLower;
        x_[a] = 0.0;
      }
    }

    // Phase 2.
    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = p_.objective[j];
    refactor();
    if (iterate(/*phase_one=*/false) == Outcome::Unbounded) {
      sol.status = LpStatus::Unbounded;
      sol.iterations = iterations_;
      return sol;
    }
    refactor();
    check_primal();

    sol.status = LpStatus::Optimal;
    sol.iterations = iterations_;
    sol.point.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    double obj = p_.objective_offset;
    for (std::size_t j = 0; j < n_; ++j) obj += p_.objective[j] * sol.point[j];
    sol.objective = obj;
    sol.columns.resize(n_ + m_);
    for (std::size_t j = 0; j < n_ + m_; ++j) sol.columns[j] = to_public(status_[j]);
    sol.basic_columns.resize(m_);
    for (std::size_t r = 0; r < m_; ++r)
      sol.basic_columns[r] = head_[r] < n_ + m_ ? static_cast<int>(head_[r]) : -1;
    return sol;
  }

 private:
  enum class Outcome { Optimal, Unbounded };

  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

  static ColumnStatus to_public(Status s) {
    switch (s) {
      case Status::Basic: return ColumnStatus::Basic;
      case Status::AtLower: return ColumnStatus::AtLower;
      case Status::AtUpper: return ColumnStatus::AtUpper;
      case Status::FreeZero: return ColumnStatus::FreeZero;
    }
    return ColumnStatus::AtLower;
  }

  // Recomputes the tableau and the basic values from the original data.
  void refactor() {
    if (m_ == 0) return;
    Eigen::MatrixXd basis(idx(m_), idx(m_));
    for (std::size_t r = 0; r < m_; ++r) basis.col(idx(r)) = full_.col(idx(head_[r]));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!(lu.rcond() > 1e-13)) throw NumericalFailure("simplex: basis matrix is singular");
    tableau_ = lu.solve(Eigen::MatrixXd(full_));
    Eigen::VectorXd rhs = rhs_;
    for (std::size_t j = 0; j < cols_; ++j)
      if (status_[j] != Status::Basic && x_[j] != 0.0) rhs -= full_.col(idx(j)) * x_[j];
    const Eigen::VectorXd xb = lu.solve(rhs);
    for (std::size_t r = 0; r < m_; ++r) x_[head_[r]] = xb(idx(r));
    pivots_since_refactor_ = 0;
  }

  Eigen::VectorXd reduced_costs() const {
    Eigen::VectorXd cb(idx(m_));
    for (std::size_t r = 0; r < m_; ++r) cb(idx(r)) = cost_[head_[r]];
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(cost_.data(), idx(cols_));
    if (m_ > 0) d.noalias() -= tableau_.transpose() * cb;
    return d;
  }

  bool eligible(std::size_t j, double dj) const {
    switch (status_[j]) {
      case Status::Basic: return false;
      case Status::AtLower: return hi_[j] > lo_[j] && dj < -opt_.optimality_tol;
      case Status::AtUpper: return hi_[j] > lo_[j] && dj > opt_.optimality_tol;
      case Status::FreeZero: return std::abs(dj) > opt_.optimality_tol;
    }
    return false;
  }

  Outcome iterate(bool phase_one) {
    std::size_t phase_iters = 0;
    std::size_t degenerate_run = 0;
    bool bland = false;
    const std::size_t limit_col = phase_one ? cols_ : n_ + m_;
    for (;;) {
      if (iterations_ >= max_iter_)
        throw NumericalFailure("simplex: iteration limit reached (" + std::to_string(max_iter_) +
                               ")");
      if (!bland && (phase_iters >= bland_after_ || degenerate_run >= opt_.bland_after_degenerate))
        bland = true;

      const Eigen::VectorXd d = reduced_costs();
      std::size_t enter = cols_;
      double best = 0.0;
      for (std::size_t j = 0; j < limit_col; ++j) {
        const double dj = d(idx(j));
        if (!eligible(j, dj)) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          enter = j;
        }
      }
      if (enter == cols_) return Outcome::Optimal;

      const double dir = d(idx(enter)) < 0 ? 1.0 : -1.0;
      // Ratio test: basic value in row r moves by rate_r * t.
      std::size_t leave_row = m_;
      double best_t = kInf;
      double best_pivot = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double alpha = tableau_(idx(r), idx(enter));
        if (std::abs(alpha) <= opt_.pivot_tol) continue;
        const double rate = -dir * alpha;
        const std::size_t b = head_[r];
        double lim;
        if (rate < 0) {
          if (!std::isfinite(lo_[b])) continue;
          lim = (x_[b] - lo_[b]) / -rate;
        } else {
          if (!std::isfinite(hi_[b])) continue;
          lim = (hi_[b] - x_[b]) / rate;
        }
        lim = std::max(lim, 0.0);
        const double tie = 1e-12 * (1.0 + best_t);
        bool take = false;
        if (leave_row == m_ || lim < best_t - tie) {
          take = true;
        } else if (lim <= best_t + tie) {
          take = bland ? b < head_[leave_row] : std::abs(alpha) > best_pivot;
        }
        if (take) {
          leave_row = r;
          best_t = lim;
          best_pivot = std::abs(alpha);
        }
      }
      const double span = hi_[enter] - lo_[enter];
      const bool can_flip = status_[enter] != Status::FreeZero && std::isfinite(span);
      if (leave_row == m_ && !can_flip) return Outcome::Unbounded;

      ++iterations_;
      ++phase_iters;
      if (can_flip && span <= best_t) {
        move_basics(enter, dir, span);
        x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        status_[enter] = dir > 0 ? Status::AtUpper : Status::AtLower;
        degenerate_run = span <= 1e-12 ? degenerate_run + 1 : 0;
        continue;
      }

      const std::size_t leaving = head_[leave_row];
      const double rate = -dir * tableau_(idx(leave_row), idx(enter));
      move_basics(enter, dir, best_t);
      x_[enter] += dir * best_t;
      if (rate < 0) {
        x_[leaving] = lo_[leaving];
        status_[leaving] = Status::AtLower;
      } else {
        x_[leaving] = hi_[leaving];
        status_[leaving] = Status::AtUpper;
      }
      if (leaving >= n_ + m_) {
        lo_[leaving] = hi_[leaving] = 0.0;
        x_[leaving] = 0.0;
        status_[leaving] = Status::AtLower;
      }
      pivot(leave_row, enter);
      degenerate_run = best_t <= 1e-12 ? degenerate_run + 1 : 0;
    }
  }

  void move_basics(std::size_t enter, double dir, double t) {
    if (t == 0.0) return;
    for (std::size_t r = 0; r < m_; ++r) x_[head_[r]] -= dir * t * tableau_(idx(r), idx(enter));
  }

  void pivot(std::size_t row, std::size_t enter) {
    const Eigen::Index pr = idx(row);
    const Eigen::Index pc = idx(enter);
    const double piv = tableau_(pr, pc);
    tableau_.row(pr) /= piv;
    for (Eigen::Index r = 0; r < tableau_.rows(); ++r) {
      if (r == pr) continue;
      const double f = tableau_(r, pc);
      if (f != 0.0) tableau_.row(r) -= f * tableau_.row(pr);
    }
    head_[row] = enter;
    status_[enter] = Status::Basic;
    if (++pivots_since_refactor_ >= opt_.refactor_every) refactor();
  }

  // After phase one, replace zero-valued basic artificials by real columns.
  void expel_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t a = head_[r];
      if (a < n_ + m_) continue;
      std::size_t best_col = cols_;
      double best = 1e-7;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (status_[j] == Status::Basic) continue;
        const double v = std::abs(tableau_(idx(r), idx(j)));
        if (v > best) {
          best = v;
          best_col = j;
        }
      }
      x_[a] = 0.0;
      if (best_col == cols_) continue;  // redundant row
      lo_[a] = hi_[a] = 0.0;
      status_[a] = Status::AtLower;
      pivot(r, best_col);
    }
    refactor();
  }

  void check_primal() const {
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t b = head_[r];
      const double v = x_[b];
      const double tol = 1e-6 * (1.0 + std::abs(v));
      if (v < lo_[b] - tol || v > hi_[b] + tol)
        throw NumericalFailure("simplex: basic variable " + std::to_string(b) +
                               " violates its bounds after refactorization");
    }
  }

  const LpProblem& p_;
  const LpOptions& opt_;
  std::size_t n_, m_, cols_;
  std::size_t bland_after_ = 0;
  std::size_t max_iter_ = 0;
  std::size_t iterations_ = 0;
  std::size_t pivots_since_refactor_ = 0;

  RowMatrix full_;
  RowMatrix tableau_;
  Eigen::VectorXd rhs_;
  std::vector<double> lo_, hi_, x_, cost_;
  std::vector<Status> status_;
  std::vector<std::size_t> head_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  Simplex simplex(problem, options);
  return simplex.run();
}

CornerCone extract_corner_cone(const LpSolution& solution, const LpProblem& problem) {
  if (solution.status != LpStatus::Optimal)
    throw std::invalid_argument("extract_corner_cone: solution is not optimal");
  const std::size_t n = problem.num_vars();
  const std::size_t m = problem.num_rows();
  if (solution.columns.size() != n + m || solution.basic_columns.size() != m)
    throw std::invalid_argument("extract_corner_cone: basis does not match problem");

  auto column = [&](std::size_t j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    if (j < n) {
      for (std::size_t r = 0; r < m; ++r) c(static_cast<Eigen::Index>(r)) = problem.rows[r].coeffs[j];
    } else {
      c(static_cast<Eigen::Index>(j - n)) = 1.0;
    }
    return c;
  };

  Eigen::MatrixXd basis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<int> row_of(n, -1);
  for (std::size_t r = 0; r < m; ++r) {
    const int b = solution.basic_columns[r];
    if (b < 0) {
      basis.col(static_cast<Eigen::Index>(r)) = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(m),
                                                                    static_cast<Eigen::Index>(r));
    } else {
      basis.col(static_cast<Eigen::Index>(r)) = column(static_cast<std::size_t>(b));
      if (static_cast<std::size_t>(b) < n) row_of[static_cast<std::size_t>(b)] = static_cast<int>(r);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  if (m > 0) {
    lu.compute(basis);
    if (!(lu.rcond() > 1e-13)) throw DegenerateBasis("extract_corner_cone: singular basis");
  }

  CornerCone cone;
  cone.apex = solution.point;
  for (std::size_t j = 0; j < n + m; ++j) {
    const ColumnStatus st = solution.columns[j];
    if (st == ColumnStatus::Basic) continue;
    if (st == ColumnStatus::FreeZero)
      throw DegenerateBasis("extract_corner_cone: free nonbasic column, cone is not pointed");
    const double dir = st == ColumnStatus::AtLower ? 1.0 : -1.0;
    std::vector<double> ray(n, 0.0);
    if (j < n) ray[j] = dir;
    if (m > 0) {
      const Eigen::VectorXd change = lu.solve(column(j));
      for (std::size_t k = 0; k < n; ++k)
        if (row_of[k] >= 0) ray[k] = -dir * change(row_of[k]);
    }
    double norm = 0.0;
    for (double v : ray) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= 1e-12)
      throw DegenerateBasis("extract_corner_cone: nonbasic column " + std::to_string(j) +
                            " yields a zero ray");
    for (double& v : ray) v /= norm;
    cone.rays.push_back(std::move(ray));
    cone.nonbasic_columns.push_back(static_cast<int>(j));
  }
  return cone;
}

}  // namespace gnep
