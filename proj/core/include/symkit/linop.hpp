#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symkit/field.hpp"
#include "symkit/jet.hpp"
#include "symkit/poly.hpp"

namespace symkit {

/// Linear differential operator sum_J a_J(x) d^J in normal form
/// (coefficients to the left of derivatives). Multiindices run over every
/// variable of the coefficient context.
class LinDiffOp {
 public:
  using TermMap = std::map<Multiindex, ExpPoly, GrlexGreater>;

  LinDiffOp() = default;
  explicit LinDiffOp(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static LinDiffOp identity(ContextPtr ctx);
  /// Multiplication by a.
  static LinDiffOp multiplication(const ExpPoly& a);
  static LinDiffOp derivative(ContextPtr ctx, Multiindex j);
  static LinDiffOp derivative(ContextPtr ctx, std::size_t var, unsigned times = 1);
  /// a d^J.
  static LinDiffOp term(const ExpPoly& a, Multiindex j);

  const ContextPtr& context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Highest |J| with a nonzero coefficient (0 for the zero operator).
  unsigned order() const;
  ExpPoly coefficient(const Multiindex& j) const;

  void add_term(const Multiindex& j, const ExpPoly& a);

  LinDiffOp& operator+=(const LinDiffOp& rhs);
  LinDiffOp& operator-=(const LinDiffOp& rhs);
  LinDiffOp& operator*=(const GaussRat& c);
  friend LinDiffOp operator+(LinDiffOp a, const LinDiffOp& b) { return a += b; }
  friend LinDiffOp operator-(LinDiffOp a, const LinDiffOp& b) { return a -= b; }
  friend LinDiffOp operator*(LinDiffOp a, const GaussRat& c) { return a *= c; }
  friend LinDiffOp operator*(const GaussRat& c, LinDiffOp a) { return a *= c; }
  LinDiffOp operator-() const;

  /// Coefficient-wise partial derivative, i.e. [d/dvar, R].
  LinDiffOp partial(std::size_t var) const;
  /// R f.
  ExpPoly apply(const ExpPoly& f) const;
  LinDiffOp rebase(const ContextPtr& target) const;

  friend bool operator==(const LinDiffOp& a, const LinDiffOp& b) { return a.terms_ == b.terms_; }

  /// "(a)*D[x,x] + (b)*D[x] + c" style rendering.
  std::string to_string() const;

 private:
  void adopt(const LinDiffOp& other);

  ContextPtr ctx_;
  TermMap terms_;
};

/// A B via the generalized Leibniz rule.
LinDiffOp compose(const LinDiffOp& a, const LinDiffOp& b);
/// A B - B A.
LinDiffOp commutator(const LinDiffOp& a, const LinDiffOp& b);

/// Linear equation L psi = 0 with L = c d_t + M, c a nonzero constant and M
/// free of d_t. On solutions d_t acts as -c^{-1} M.
class OperatorPde {
 public:
  /// Throws InvalidOperator when L is not of that shape.
  OperatorPde(LinDiffOp l, std::size_t evolution_axis);

  const LinDiffOp& op() const { return l_; }
  const ContextPtr& context() const { return l_.context(); }
  std::size_t evolution_axis() const { return axis_; }
  /// -c^{-1} M.
  const LinDiffOp& flow() const { return flow_; }

  /// Eliminates every d_t from r using the flow.
  LinDiffOp reduce(const LinDiffOp& r) const;
  /// [R, L] reduced on solutions.
  LinDiffOp residual(const LinDiffOp& r) const;
  bool is_symmetry(const LinDiffOp& r) const { return residual(r).is_zero(); }

 private:
  LinDiffOp l_;
  std::size_t axis_;
  LinDiffOp flow_;
};

/// Polynomial solutions psi = sum_k t^k/k! F^k f, F the flow, for every
/// monomial f of total degree <= degree in the other variables. std::nullopt
/// when F depends on t or a series does not terminate within max_terms.
std::optional<std::vector<ExpPoly>> polynomial_solutions(const OperatorPde& pde, unsigned degree,
                                                         unsigned max_terms = 64);

struct OperatorAnsatz {
  unsigned order = 1;
  /// exp(weights . z); empty means all zero.
  Weight weights;
  /// Per independent variable; empty means default_degree_caps.
  std::vector<unsigned> degree_caps;
};

/// (q+1)(q+2)/2, the symmetry count of a second-order equation in 1+1
/// dimensions; default caps are this bound minus one.
std::size_t operator_dimension_bound(unsigned q);
/// bound - 1 for every independent variable.
std::vector<unsigned> default_degree_caps(const OperatorPde& pde, std::size_t bound);

struct OperatorResult {
  std::vector<LinDiffOp> basis;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
};

/// Symmetry operators R = exp(w.z) sum C t^k x^l d^J (no d_t, |J| <= q)
/// with [R, L] = 0 on solutions.
OperatorResult operator_determining_solve(const OperatorPde& pde, const OperatorAnsatz& ansatz);

}  // namespace symkit
