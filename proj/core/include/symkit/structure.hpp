#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symkit/jet.hpp"
#include "symkit/linalg.hpp"
#include "symkit/linop.hpp"
#include "symkit/poly.hpp"

namespace symkit {

enum class SymmetryKind { Operator, Evolutionary };

/// Kind-agnostic symmetry: coefficient functions keyed by slot. An operator
/// uses its derivative multiindices as slots, a characteristic uses {alpha}.
struct SymmetryElement {
  std::map<Multiindex, ExpPoly, GrlexGreater> components;

  static SymmetryElement from_operator(const LinDiffOp& r);
  static SymmetryElement from_characteristic(const std::vector<ExpPoly>& eta);
  LinDiffOp to_operator(const ContextPtr& ctx) const;
  std::vector<ExpPoly> to_characteristic(const ContextPtr& ctx, std::size_t n) const;

  bool is_zero() const { return components.empty(); }
  void add(const Multiindex& slot, const ExpPoly& value);
  SymmetryElement& operator+=(const SymmetryElement& rhs);
  SymmetryElement& operator-=(const SymmetryElement& rhs);
  SymmetryElement& operator*=(const GaussRat& c);
  friend SymmetryElement operator+(SymmetryElement a, const SymmetryElement& b) { return a += b; }
  friend SymmetryElement operator-(SymmetryElement a, const SymmetryElement& b) { return a -= b; }
  friend SymmetryElement operator*(SymmetryElement a, const GaussRat& c) { return a *= c; }
  friend SymmetryElement operator*(const GaussRat& c, SymmetryElement a) { return a *= c; }
  /// Every coefficient multiplied by f.
  SymmetryElement times(const ExpPoly& f) const;
  SymmetryElement partial(std::size_t var) const;
  SymmetryElement at_zero(std::span<const std::size_t> vars) const;
  bool depends_on(std::size_t var) const;

  friend bool operator==(const SymmetryElement& a, const SymmetryElement& b) {
    return a.components == b.components;
  }
};

/// Coefficient coordinates of a list of elements: one row per
/// (slot, weight, monomial) in graded-lex order, one column per element.
ExactMatrix coordinate_matrix(const std::vector<SymmetryElement>& elements);
/// Rank of the stacked coordinates.
std::size_t span_rank(const std::vector<SymmetryElement>& elements);
/// RREF basis of the span, rows in pivot order.
std::vector<SymmetryElement> canonicalize(const std::vector<SymmetryElement>& elements,
                                          const ContextPtr& ctx);
bool in_span(const std::vector<SymmetryElement>& basis, const SymmetryElement& x);

/// Finite-dimensional space of symmetries closed under the translations.
class SymmetrySpace {
 public:
  /// Throws InputError if the basis is linearly dependent or the filtration
  /// is not a nondecreasing list of prefix sizes ending at the dimension.
  SymmetrySpace(SymmetryKind kind, ContextPtr ctx, std::vector<SymmetryElement> basis,
                std::vector<std::size_t> translation_vars, std::vector<std::size_t> filtration = {});

  static SymmetrySpace from_operators(const std::vector<LinDiffOp>& ops, const ContextPtr& ctx);
  static SymmetrySpace from_characteristics(const std::vector<std::vector<ExpPoly>>& chars,
                                            const JetContextPtr& ctx);
  /// V^(0) within V^(1) within ... V^(qmax), solving per order. Empty caps
  /// select the default caps of each order.
  static SymmetrySpace operator_filtration(const OperatorPde& pde, unsigned qmax,
                                           const std::vector<unsigned>& caps = {});

  SymmetryKind kind() const { return kind_; }
  const ContextPtr& context() const { return ctx_; }
  const std::vector<SymmetryElement>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<std::size_t>& translation_vars() const { return translations_; }
  /// v^(q) for q = 0..qmax; empty when no filtration was recorded.
  const std::vector<std::size_t>& filtration() const { return filtration_; }
  /// The prefix space V^(q).
  SymmetrySpace sub_space(unsigned q) const;

  std::string render(std::size_t index) const;

 private:
  SymmetryKind kind_;
  ContextPtr ctx_;
  std::vector<SymmetryElement> basis_;
  std::vector<std::size_t> translations_;
  std::vector<std::size_t> filtration_;
};

/// Column j holds the coordinates of d(basis_j)/dz. Throws ClosureViolation.
ExactMatrix adjoint_matrix(const SymmetrySpace& space, std::size_t z);
std::vector<ExactMatrix> adjoint_matrices(const SymmetrySpace& space);

/// exp(lambda . z) sum_p z^p C_p with C_p free of the translation variables.
struct StructuredElement {
  Weight weight;
  /// Keyed by the power of each translation variable.
  std::map<Exponents, SymmetryElement, GrlexGreater> coefficients;

  SymmetryElement expand(const ContextPtr& ctx, const std::vector<std::size_t>& translation_vars) const;
  /// Highest power of translation variable s (0 when absent).
  unsigned degree(std::size_t s) const;
};

struct StructuredBlock {
  /// One per translation variable.
  std::vector<GaussRat> eigenvalues;
  std::vector<unsigned> nilpotency;
  /// Restriction of d/dz_s to the block, in the block basis.
  std::vector<ExactMatrix> restrictions;
  /// Ambient coordinates of the block basis (columns).
  ExactMatrix coordinates;
  std::vector<SymmetryElement> originals;
  std::vector<StructuredElement> elements;

  std::size_t dimension() const { return originals.size(); }
};

struct StructuredBasis {
  std::size_t ambient = 0;
  std::vector<StructuredBlock> blocks;
  std::size_t rho() const { return blocks.size(); }
};

struct StructureChecks {
  bool matrices_commute = true;
  bool direct_sum = true;
  bool degree_bound = true;
  bool coefficients_translation_free = true;
  bool expansion_reproduces = true;
  bool span_preserved = true;
  bool derivative_consistent = true;
  bool exp_ode = true;

  bool all() const {
    return matrices_commute && direct_sum && degree_bound && coefficients_translation_free &&
           expansion_reproduces && span_preserved && derivative_consistent && exp_ode;
  }
};

/// Rewrites the basis block by block as exp(lambda . z) times polynomials of
/// degree < k in each z. Throws IrrationalEigenvalue when some block has no
/// eigenvalue in Q(i), InvariantViolation when a verification fails.
StructuredBasis structured_basis(const SymmetrySpace& space);
StructureChecks check_structure(const SymmetrySpace& space, const StructuredBasis& sb);

struct DimensionReport {
  unsigned q = 0;
  std::size_t v = 0;
  std::size_t rho = 0;
  std::vector<std::size_t> r;
  std::vector<std::vector<GaussRat>> lambda;
  std::vector<std::vector<unsigned>> k;
  bool rho_le_v = true;
  bool sum_r_eq_v = true;
  bool k_in_range = true;
};

DimensionReport ansatz_dimensions(const SymmetrySpace& space, unsigned q);

}  // namespace symkit
