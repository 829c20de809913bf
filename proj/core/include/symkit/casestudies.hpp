#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "symkit/jet.hpp"
#include "symkit/linop.hpp"
#include "symkit/structure.hpp"

namespace symkit {

// ---------------------------------------------------------------------------
// Free Schrodinger equation i psi_t + psi_xx = 0

/// L = i d/dt + d^2/dx^2 over (t, x), both translation variables.
OperatorPde schrodinger_pde();

/// Coefficients h_0..h_q with R = sum_j N^j(h_j), N(X) = X p + p X and
/// p = -i d/dx. R must be free of derivatives other than along x_axis.
std::vector<ExpPoly> to_h_form(const LinDiffOp& r, std::size_t x_axis);
LinDiffOp from_h_form(const std::vector<ExpPoly>& h, const ContextPtr& ctx, std::size_t x_axis);

struct Bidegree {
  unsigned t = 0;
  unsigned x = 0;
};

struct SchrodingerReport {
  unsigned q = 0;
  std::size_t dimension = 0;
  std::vector<LinDiffOp> basis;
  /// Per basis element: h_0..h_q.
  std::vector<std::vector<ExpPoly>> h_table;
  std::vector<std::vector<Bidegree>> bidegrees;
  /// deg_t h_j <= j and deg_x h_j <= q - j throughout.
  bool bidegrees_ok = true;
  /// Every basis element commutes with L on solutions.
  bool commutes = true;
};

/// Solves dh_j/dt = -dh_{j-1}/dx (j = 1..q), dh_0/dt = 0, dh_q/dx = 0 over
/// polynomials by integrating downward from h_q = g_q(t).
SchrodingerReport solve_recurrence(unsigned q);

/// h-form table and bidegree check for an arbitrary operator basis.
void fill_h_table(SchrodingerReport& report, std::size_t x_axis, std::size_t t_axis);

struct CrossValidation {
  unsigned q = 0;
  std::size_t recurrence_dimension = 0;
  std::size_t ansatz_dimension = 0;
  std::size_t stacked_rank = 0;
  bool bidegrees_ok = true;
};

/// Recurrence route vs. ansatz nullspace at weight zero. Throws SpanMismatch
/// naming an element of one basis outside the other's span.
CrossValidation cross_validate(unsigned q);

/// (lambda, mu) sample grid used to exclude exponential factors.
std::vector<std::pair<GaussRat, GaussRat>> exponential_grid();

struct ScanPoint {
  GaussRat lambda;
  GaussRat mu;
  unsigned q = 0;
  std::size_t dimension = 0;
};

/// operator_determining_solve at every (order, grid point), concurrently,
/// results in (order, grid) order.
std::vector<ScanPoint> scan_exponentials(const OperatorPde& pde, const std::vector<unsigned>& orders,
                                         const std::vector<std::pair<GaussRat, GaussRat>>& grid);

// ---------------------------------------------------------------------------
// Evolution equations u_t = G

/// u_t = u_yy over (t, y) with y a translation variable.
PdeSystem heat_equation(unsigned max_order = 4);

struct EvolutionCaps {
  unsigned jet_degree = 1;
  unsigned poly_degree = 2;
};

struct EvolutionRun {
  Weight weight;
  std::vector<std::vector<ExpPoly>> characteristics;
  std::vector<std::string> hints;
  /// Degree of each characteristic in the translation variables.
  std::vector<unsigned> translation_degrees;
  bool verified = true;
};

struct EvolutionReport {
  unsigned q = 0;
  /// Context the characteristics live in (budget raised as needed).
  JetContextPtr context;
  std::vector<EvolutionRun> runs;
  /// Dimension found at weight zero and the derived bound v - 1.
  std::size_t v = 0;
  bool degrees_within_bound = true;
  /// No characteristic of order >= 2 at a nonzero weight has a constant
  /// nonzero derivative with respect to its top-order jet coordinate.
  bool nonzero_weights_consistent = true;
  bool all_verified = true;
};

/// Sample weights: zero, then 1, -1, i, -i, 1+i on every translation slot.
std::vector<Weight> default_weight_samples(std::size_t translation_count);

/// Runs the evolutionary search at order q for each weight and verifies every
/// characteristic with apply_on_solutions.
EvolutionReport evolution_case(const PdeSystem& sys, unsigned q, const EvolutionCaps& caps,
                               const std::vector<Weight>& weights);

}  // namespace symkit
