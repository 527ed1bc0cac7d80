#include "vcomp/lp.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "vcomp/errors.hpp"

namespace vcomp {

BigRational to_big(const Rational& r) {
  mpz_class num;
  mpz_class den;
  mpz_set_si(num.get_mpz_t(), r.num());
  mpz_set_si(den.get_mpz_t(), r.den());
  BigRational out(num, den);
  out.canonicalize();
  return out;
}

std::string to_string(const BigRational& r) { return r.get_num().get_str() + "/" + r.get_den().get_str(); }

namespace lp {
namespace {

/// Equality form  A x = b, x >= 0, b >= 0, with one slack per inequality and
/// one artificial per row lacking a +1 slack.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t orig = 0;
  std::size_t cols = 0;
  std::vector<std::vector<BigRational>> a;
  std::vector<BigRational> b;
  std::vector<int> sign;                // +1 or -1: how the original row was scaled
  std::vector<std::size_t> identity;    // per row: column holding +e_r (slack or artificial)
  std::vector<bool> artificial;         // per column
  std::vector<BigRational> cost;        // phase-2 cost per column
};

StandardForm standardize(const Problem& p) {
  if (p.objective.size() != p.num_vars) throw std::invalid_argument("objective size differs from variable count");
  StandardForm s;
  s.rows = p.rows.size();
  s.orig = p.num_vars;
  std::vector<Sense> senses;
  for (const auto& row : p.rows) {
    if (row.coeffs.size() != p.num_vars) throw std::invalid_argument("constraint size differs from variable count");
    Sense sense = row.sense;
    int sign = 1;
    if (sgn(row.rhs) < 0) {
      sign = -1;
      if (sense == Sense::LessEqual) sense = Sense::GreaterEqual;
      else if (sense == Sense::GreaterEqual) sense = Sense::LessEqual;
    }
    s.sign.push_back(sign);
    senses.push_back(sense);
  }
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (auto sense : senses) {
    if (sense != Sense::Equal) ++slacks;
    if (sense != Sense::LessEqual) ++artificials;
  }
  s.cols = s.orig + slacks + artificials;
  s.a.assign(s.rows, std::vector<BigRational>(s.cols));
  s.b.resize(s.rows);
  s.identity.resize(s.rows);
  s.artificial.assign(s.cols, false);
  s.cost.assign(s.cols, 0);
  for (std::size_t j = 0; j < s.orig; ++j) s.cost[j] = p.objective[j];
  std::size_t next_slack = s.orig;
  std::size_t next_art = s.orig + slacks;
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t j = 0; j < s.orig; ++j) {
      s.a[r][j] = p.rows[r].coeffs[j];
      if (s.sign[r] < 0) s.a[r][j] = -s.a[r][j];
    }
    s.b[r] = s.sign[r] < 0 ? BigRational(-p.rows[r].rhs) : p.rows[r].rhs;
    switch (senses[r]) {
      case Sense::LessEqual:
        s.a[r][next_slack] = 1;
        s.identity[r] = next_slack++;
        break;
      case Sense::GreaterEqual:
        s.a[r][next_slack++] = -1;
        s.a[r][next_art] = 1;
        s.artificial[next_art] = true;
        s.identity[r] = next_art++;
        break;
      case Sense::Equal:
        s.a[r][next_art] = 1;
        s.artificial[next_art] = true;
        s.identity[r] = next_art++;
        break;
    }
  }
  return s;
}

/// Recovers the original-problem duals from standardized row multipliers.
std::vector<BigRational> original_duals(const StandardForm& s, const std::vector<BigRational>& y_std) {
  std::vector<BigRational> y(s.rows);
  for (std::size_t r = 0; r < s.rows; ++r) y[r] = s.sign[r] < 0 ? BigRational(-y_std[r]) : y_std[r];
  return y;
}

// ---------------------------------------------------------------------------
// Exact tableau

class ExactTableau {
public:
  explicit ExactTableau(const StandardForm& s) : s_(s), live_(s.rows, true) {
    t_.assign(s.rows + 1, std::vector<BigRational>(s.cols + 1));
    for (std::size_t r = 0; r < s.rows; ++r) {
      for (std::size_t j = 0; j < s.cols; ++j) t_[r][j] = s.a[r][j];
      t_[r][s.cols] = s.b[r];
    }
    basis_ = s.identity;
  }

  /// Loads reduced costs for `cost` into the objective row.
  void set_objective(const std::vector<BigRational>& cost) {
    auto& z = t_[s_.rows];
    for (std::size_t j = 0; j <= s_.cols; ++j) z[j] = j < s_.cols ? cost[j] : BigRational(0);
    for (std::size_t r = 0; r < s_.rows; ++r) {
      if (!live_[r]) continue;
      const BigRational& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= s_.cols; ++j) {
        if (sgn(t_[r][j]) != 0) z[j] -= cb * t_[r][j];
      }
    }
  }

  /// Bland's rule iterations; returns false on unboundedness.
  bool optimize(const std::vector<bool>& allowed) {
    auto& z = t_[s_.rows];
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < s_.cols; ++j) {
        if (allowed[j] && sgn(z[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      BigRational best;
      for (std::size_t r = 0; r < s_.rows; ++r) {
        if (!live_[r] || sgn(t_[r][*enter]) <= 0) continue;
        BigRational ratio = t_[r][s_.cols] / t_[r][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    ++pivots_;
    auto& row = t_[pr];
    BigRational inv = 1 / row[pc];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= s_.cols; ++j) {
      if (sgn(row[j]) != 0) {
        row[j] *= inv;
        nz.push_back(j);
      }
    }
    for (std::size_t r = 0; r <= s_.rows; ++r) {
      if (r == pr || (r < s_.rows && !live_[r])) continue;
      if (sgn(t_[r][pc]) == 0) continue;
      BigRational f = t_[r][pc];
      for (auto j : nz) t_[r][j] -= f * row[j];
    }
    basis_[pr] = pc;
  }

  /// Pivots basic artificials out of the basis; rows that cannot be pivoted are redundant and dropped.
  void expel_artificials() {
    for (std::size_t r = 0; r < s_.rows; ++r) {
      if (!live_[r] || !s_.artificial[basis_[r]]) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < s_.cols; ++j) {
        if (!s_.artificial[j] && sgn(t_[r][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col) pivot(r, *col);
      else live_[r] = false;
    }
  }

  [[nodiscard]] BigRational objective_value() const { return -t_[s_.rows][s_.cols]; }
  [[nodiscard]] std::size_t pivots() const { return pivots_; }

  [[nodiscard]] std::vector<BigRational> primal() const {
    std::vector<BigRational> x(s_.cols);
    for (std::size_t r = 0; r < s_.rows; ++r) {
      if (live_[r]) x[basis_[r]] = t_[r][s_.cols];
    }
    return x;
  }

  /// Standardized duals y = c_B B^{-1}, read off the identity columns.
  [[nodiscard]] std::vector<BigRational> duals(const std::vector<BigRational>& cost) const {
    std::vector<BigRational> y(s_.rows);
    for (std::size_t k = 0; k < s_.rows; ++k) {
      if (!live_[k]) continue;
      std::size_t col = s_.identity[k];
      BigRational acc;
      for (std::size_t r = 0; r < s_.rows; ++r) {
        if (live_[r] && sgn(t_[r][col]) != 0) acc += cost[basis_[r]] * t_[r][col];
      }
      y[k] = acc;
    }
    return y;
  }

private:
  const StandardForm& s_;
  std::vector<std::vector<BigRational>> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> live_;
  std::size_t pivots_ = 0;
};

Solution finish(const StandardForm& s, const std::vector<BigRational>& x_std, const std::vector<BigRational>& y_std) {
  Solution sol;
  sol.status = Status::Optimal;
  sol.x.assign(x_std.begin(), x_std.begin() + static_cast<std::ptrdiff_t>(s.orig));
  sol.duals = original_duals(s, y_std);
  for (std::size_t j = 0; j < s.orig; ++j) sol.objective += s.cost[j] * sol.x[j];
  return sol;
}

Solution solve_standard_exact(const StandardForm& s) {
  ExactTableau tab(s);
  std::vector<BigRational> phase1(s.cols);
  bool any_artificial = false;
  for (std::size_t j = 0; j < s.cols; ++j) {
    if (s.artificial[j]) {
      phase1[j] = 1;
      any_artificial = true;
    }
  }
  std::vector<bool> allowed(s.cols, true);
  if (any_artificial) {
    tab.set_objective(phase1);
    tab.optimize(allowed);
    if (sgn(tab.objective_value()) > 0) {
      Solution sol;
      sol.status = Status::Infeasible;
      sol.pivots = tab.pivots();
      return sol;
    }
    tab.expel_artificials();
  }
  for (std::size_t j = 0; j < s.cols; ++j) allowed[j] = !s.artificial[j];
  tab.set_objective(s.cost);
  if (!tab.optimize(allowed)) {
    Solution sol;
    sol.status = Status::Unbounded;
    sol.pivots = tab.pivots();
    return sol;
  }
  Solution sol = finish(s, tab.primal(), tab.duals(s.cost));
  sol.pivots = tab.pivots();
  return sol;
}

// ---------------------------------------------------------------------------
// Double-precision basis search

std::optional<std::vector<std::size_t>> float_basis(const StandardForm& s, std::size_t& pivots) {
  constexpr double kEps = 1e-9;
  const std::size_t rows = s.rows;
  const std::size_t cols = s.cols;
  std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols + 1, 0.0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) t[r][j] = s.a[r][j].get_d();
    t[r][cols] = s.b[r].get_d();
  }
  std::vector<std::size_t> basis = s.identity;
  std::vector<bool> live(rows, true);

  auto set_objective = [&](const std::vector<double>& cost) {
    auto& z = t[rows];
    for (std::size_t j = 0; j <= cols; ++j) z[j] = j < cols ? cost[j] : 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!live[r] || cost[basis[r]] == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) z[j] -= cost[basis[r]] * t[r][j];
    }
  };
  auto pivot = [&](std::size_t pr, std::size_t pc) {
    ++pivots;
    double inv = 1.0 / t[pr][pc];
    for (std::size_t j = 0; j <= cols; ++j) t[pr][j] *= inv;
    t[pr][pc] = 1.0;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr || (r < rows && !live[r])) continue;
      double f = t[r][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) t[r][j] -= f * t[pr][j];
      t[r][pc] = 0.0;
    }
    basis[pr] = pc;
  };
  // Dantzig pricing, switching to Bland after a run of degenerate pivots.
  auto optimize = [&](const std::vector<bool>& allowed) -> bool {
    std::size_t degenerate = 0;
    for (std::size_t iter = 0; iter < 200000; ++iter) {
      const auto& z = t[rows];
      std::optional<std::size_t> enter;
      const bool bland = degenerate > 50;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allowed[j] || z[j] >= -kEps) continue;
        if (!enter || (!bland && z[j] < z[*enter])) enter = j;
        if (bland) break;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      double best = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        if (!live[r] || t[r][*enter] <= kEps) continue;
        double ratio = t[r][cols] / t[r][*enter];
        if (!leave || ratio < best - kEps || (ratio <= best + kEps && basis[r] < basis[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) return false;
      degenerate = best <= kEps ? degenerate + 1 : 0;
      pivot(*leave, *enter);
    }
    return false;
  };

  std::vector<double> phase1(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) phase1[j] = s.artificial[j] ? 1.0 : 0.0;
  std::vector<bool> allowed(cols, true);
  set_objective(phase1);
  if (!optimize(allowed)) return std::nullopt;
  if (-t[rows][cols] > 1e-7) return std::nullopt;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!s.artificial[basis[r]]) continue;
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < cols; ++j) {
      if (!s.artificial[j] && std::abs(t[r][j]) > kEps && (!col || std::abs(t[r][j]) > std::abs(t[r][*col]))) col = j;
    }
    if (!col) return std::nullopt;  // redundant row; leave it to the exact path
    pivot(r, *col);
  }
  std::vector<double> cost(cols);
  for (std::size_t j = 0; j < cols; ++j) cost[j] = s.cost[j].get_d();
  for (std::size_t j = 0; j < cols; ++j) allowed[j] = !s.artificial[j];
  set_objective(cost);
  if (!optimize(allowed)) return std::nullopt;
  return basis;
}

/// Solves M z = rhs exactly (M square, given by columns); nullopt when singular.
std::optional<std::vector<BigRational>> solve_square(std::vector<std::vector<BigRational>> m, std::vector<BigRational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(rhs[p], rhs[c]);
    BigRational inv = 1 / m[c][c];
    for (std::size_t j = c; j < n; ++j) m[c][j] *= inv;
    rhs[c] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(m[r][c]) == 0) continue;
      BigRational f = m[r][c];
      for (std::size_t j = c; j < n; ++j) {
        if (sgn(m[c][j]) != 0) m[r][j] -= f * m[c][j];
      }
      rhs[r] -= f * rhs[c];
    }
  }
  return rhs;
}

std::optional<Solution> certify_basis(const StandardForm& s, const std::vector<std::size_t>& basis) {
  const std::size_t n = s.rows;
  std::vector<std::vector<BigRational>> bmat(n, std::vector<BigRational>(n));
  std::vector<std::vector<BigRational>> bt(n, std::vector<BigRational>(n));
  std::vector<BigRational> cb(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      bmat[r][k] = s.a[r][basis[k]];
      bt[k][r] = s.a[r][basis[k]];
    }
    cb[r] = s.artificial[basis[r]] ? BigRational(0) : s.cost[basis[r]];
  }
  auto xb = solve_square(bmat, s.b);
  if (!xb) return std::nullopt;
  std::vector<BigRational> x(s.cols);
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn((*xb)[k]) < 0) return std::nullopt;
    if (s.artificial[basis[k]] && sgn((*xb)[k]) != 0) return std::nullopt;
    x[basis[k]] = (*xb)[k];
  }
  auto y = solve_square(bt, cb);
  if (!y) return std::nullopt;
  for (std::size_t j = 0; j < s.cols; ++j) {
    if (s.artificial[j]) continue;
    BigRational d = s.cost[j];
    for (std::size_t r = 0; r < n; ++r) {
      if (sgn(s.a[r][j]) != 0) d -= (*y)[r] * s.a[r][j];
    }
    if (sgn(d) < 0) return std::nullopt;
  }
  return finish(s, x, *y);
}

}  // namespace

Solution solve_exact(const Problem& problem) { return solve_standard_exact(standardize(problem)); }

Solution solve(const Problem& problem) {
  StandardForm s = standardize(problem);
  std::size_t pivots = 0;
  if (auto basis = float_basis(s, pivots)) {
    if (auto sol = certify_basis(s, *basis)) {
      sol->pivots = pivots;
      sol->float_guided = true;
      if (verify(problem, *sol).ok()) return *sol;
    }
  }
  return solve_standard_exact(s);
}

Certificate verify(const Problem& p, const Solution& sol) {
  Certificate cert;
  if (sol.status != Status::Optimal || sol.x.size() != p.num_vars || sol.duals.size() != p.rows.size()) return cert;
  cert.primal_feasible = true;
  cert.dual_feasible = true;
  cert.complementary_slackness = true;
  for (const auto& v : sol.x) {
    if (sgn(v) < 0) cert.primal_feasible = false;
  }
  BigRational by;
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    BigRational lhs;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      if (sgn(row.coeffs[j]) != 0 && sgn(sol.x[j]) != 0) lhs += row.coeffs[j] * sol.x[j];
    }
    BigRational slack = lhs - row.rhs;
    const BigRational& y = sol.duals[r];
    switch (row.sense) {
      case Sense::LessEqual:
        if (sgn(slack) > 0) cert.primal_feasible = false;
        if (sgn(y) > 0) cert.dual_feasible = false;
        break;
      case Sense::GreaterEqual:
        if (sgn(slack) < 0) cert.primal_feasible = false;
        if (sgn(y) < 0) cert.dual_feasible = false;
        break;
      case Sense::Equal:
        if (sgn(slack) != 0) cert.primal_feasible = false;
        break;
    }
    if (sgn(y) != 0 && sgn(slack) != 0) cert.complementary_slackness = false;
    by += row.rhs * y;
  }
  BigRational cx;
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    BigRational d = p.objective[j];
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
      if (sgn(p.rows[r].coeffs[j]) != 0 && sgn(sol.duals[r]) != 0) d -= sol.duals[r] * p.rows[r].coeffs[j];
    }
    if (sgn(d) < 0) cert.dual_feasible = false;
    if (sgn(d) != 0 && sgn(sol.x[j]) != 0) cert.complementary_slackness = false;
    cx += p.objective[j] * sol.x[j];
  }
  cert.objective_matches = cx == by && cx == sol.objective;
  return cert;
}

void write_text(std::ostream& os, const Problem& p) {
  auto var = [&p](std::size_t j) { return j < p.var_names.size() ? p.var_names[j] : "x" + std::to_string(j); };
  auto terms = [&](const std::vector<BigRational>& coeffs) {
    bool any = false;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (sgn(coeffs[j]) == 0) continue;
      os << ' ' << to_string(coeffs[j]) << ' ' << var(j);
      any = true;
    }
    if (!any) os << " 0/1";
  };
  os << "minimize\n ";
  terms(p.objective);
  os << "\nsubject to\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    os << ' ' << (row.name.empty() ? "c" + std::to_string(r) : row.name) << ':';
    terms(row.coeffs);
    os << (row.sense == Sense::LessEqual ? " <= " : row.sense == Sense::Equal ? " = " : " >= ") << to_string(row.rhs)
       << '\n';
  }
  os << "end\n";
}

}  // namespace lp
}  // namespace vcomp
