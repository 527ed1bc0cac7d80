#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "vcomp/rational.hpp"

namespace vcomp {

/// Arbitrary-precision rational used where values are ratios of determinants
/// (LP solutions, equilibrium distributions, expectations over them).
using BigRational = mpq_class;

BigRational to_big(const Rational& r);
/// "p/q" with explicit denominator, matching Rational::to_string().
std::string to_string(const BigRational& r);

namespace lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<BigRational> coeffs;  // one per variable
  Sense sense = Sense::LessEqual;
  BigRational rhs;
  std::string name;
};

/// minimize objective . x  subject to  rows,  x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<BigRational> objective;
  std::vector<Constraint> rows;
  std::vector<std::string> var_names;  // optional, used by write_text
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  BigRational objective;
  std::vector<BigRational> x;
  /// Row multipliers y of the dual  max b.y  s.t.  A^T y <= c,
  /// y <= 0 on <= rows, y >= 0 on >= rows, free on = rows.
  std::vector<BigRational> duals;
  std::size_t pivots = 0;
  /// True when the optimal basis was found in double precision and then certified exactly.
  bool float_guided = false;
};

/// Two-phase dense-tableau simplex in exact arithmetic with Bland's rule.
Solution solve_exact(const Problem& problem);

/// Finds a candidate optimal basis in double precision, reconstructs the basic
/// solution and the duals exactly and certifies them; falls back to
/// solve_exact whenever certification fails. The returned solution is always exact.
Solution solve(const Problem& problem);

struct Certificate {
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool complementary_slackness = false;
  bool objective_matches = false;  // c.x == b.y == reported objective
  [[nodiscard]] bool ok() const { return primal_feasible && dual_feasible && complementary_slackness && objective_matches; }
};

/// Independent optimality check of an Optimal solution from the original problem data.
Certificate verify(const Problem& problem, const Solution& solution);

/// Plain-text dump:
///   minimize
///     <coef> <var> ...
///   subject to
///     <name>: <coef> <var> ... (<=|=|>=) <rhs>
///   end
/// Coefficients are exact "p/q"; zero coefficients are omitted.
void write_text(std::ostream& os, const Problem& problem);

}  // namespace lp
}  // namespace vcomp
