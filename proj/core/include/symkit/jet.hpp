#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symkit/field.hpp"
#include "symkit/poly.hpp"

namespace symkit {

using Multiindex = std::vector<unsigned>;

unsigned order_of(const Multiindex& j);

/// Variable context for jet space: x_1..x_m, then u_{alpha,J} for every
/// dependent variable alpha and every |J| <= max_order.
///
/// max_order is a hard budget. Nothing grows the context implicitly; an
/// operation that needs a jet coordinate beyond it throws OrderOverflow.
class JetContext {
 public:
  JetContext(std::vector<std::string> independents, std::vector<std::string> dependents,
             unsigned max_order, const std::vector<std::string>& translations = {});

  static std::shared_ptr<const JetContext> make(std::vector<std::string> independents,
                                                std::vector<std::string> dependents,
                                                unsigned max_order,
                                                const std::vector<std::string>& translations = {});

  std::size_t m() const { return independents_.size(); }
  std::size_t n() const { return dependents_.size(); }
  unsigned max_order() const { return max_order_; }
  const ContextPtr& vars() const { return vars_; }
  const std::vector<std::string>& independent_names() const { return independents_; }
  const std::vector<std::string>& dependent_names() const { return dependents_; }
  const std::vector<std::string>& translation_names() const { return translations_; }

  std::size_t independent(std::size_t l) const { return l; }
  /// Variable index of u_{alpha,J}; std::nullopt if |J| > max_order.
  std::optional<std::size_t> jet(std::size_t alpha, const Multiindex& j) const;
  /// As jet(), throwing OrderOverflow.
  std::size_t jet_or_throw(std::size_t alpha, const Multiindex& j) const;
  bool is_jet(std::size_t var) const { return var >= m(); }

  /// Same variables with a different budget.
  std::shared_ptr<const JetContext> with_max_order(unsigned max_order) const;

  static std::string jet_name(const std::string& dependent,
                              const std::vector<std::string>& independents, const Multiindex& j);

 private:
  std::vector<std::string> independents_;
  std::vector<std::string> dependents_;
  std::vector<std::string> translations_;
  unsigned max_order_;
  ContextPtr vars_;
  std::map<std::pair<std::size_t, Multiindex>, std::size_t> jet_index_;
};

using JetContextPtr = std::shared_ptr<const JetContext>;

/// Highest |J| of any jet coordinate p depends on (0 if none).
unsigned jet_order(const JetContext& ctx, const ExpPoly& p);

/// D_l p = dp/dx_l + sum u_{alpha,J+1_l} dp/du_{alpha,J}.
ExpPoly total_derivative(const JetContext& ctx, const ExpPoly& p, std::size_t l);
/// D_J p = D_1^{j_1} ... D_m^{j_m} p.
ExpPoly total_derivative(const JetContext& ctx, const ExpPoly& p, const Multiindex& j);

/// Generalized vector field sum xi_i d/dx_i + sum eta_alpha d/du_alpha.
struct GenVectorField {
  JetContextPtr ctx;
  std::vector<ExpPoly> xi;
  std::vector<ExpPoly> eta;

  GenVectorField() = default;
  GenVectorField(JetContextPtr context, std::vector<ExpPoly> xi_coeffs, std::vector<ExpPoly> eta_coeffs);

  static GenVectorField zero(JetContextPtr context);
  /// xi = 0, eta = characteristic.
  static GenVectorField evolutionary(JetContextPtr context, std::vector<ExpPoly> characteristic);

  /// Highest jet order present in any coefficient.
  unsigned order() const;
  /// Q_alpha = eta_alpha - sum_l xi_l u_{alpha,l}.
  std::vector<ExpPoly> characteristic() const;
  bool is_zero() const;

  GenVectorField& operator+=(const GenVectorField& rhs);
  GenVectorField& operator-=(const GenVectorField& rhs);
  GenVectorField& operator*=(const GaussRat& c);
  friend GenVectorField operator+(GenVectorField a, const GenVectorField& b) { return a += b; }
  friend GenVectorField operator-(GenVectorField a, const GenVectorField& b) { return a -= b; }
  friend GenVectorField operator*(const GaussRat& c, GenVectorField a) { return a *= c; }

  friend bool operator==(const GenVectorField& a, const GenVectorField& b) {
    return a.xi == b.xi && a.eta == b.eta;
  }

  std::string to_string() const;
};

/// Coefficients of pr Q: xi_l on d/dx_l and phi_{alpha,J} on d/du_{alpha,J}.
struct Prolongation {
  JetContextPtr ctx;
  std::vector<ExpPoly> xi;
  /// Keyed by the variable index of u_{alpha,J}.
  std::map<std::size_t, ExpPoly> coefficients;

  const ExpPoly& coefficient(std::size_t alpha, const Multiindex& j) const;
  /// Applies the prolonged field to f; f may only use jets of order <= up_to.
  ExpPoly apply(const ExpPoly& f) const;
};

/// phi_{alpha,J} = D_J(Q_alpha) + sum_l xi_l u_{alpha,J+1_l} for |J| <= up_to.
Prolongation prolong(const GenVectorField& q, unsigned up_to);

/// pr Q[f], prolonging exactly as far as f requires.
ExpPoly apply_prolonged(const GenVectorField& q, const ExpPoly& f);

/// xi3 = pr Q1[xi2] - pr Q2[xi1], eta3 = pr Q1[eta2] - pr Q2[eta1].
GenVectorField lie_bracket(const GenVectorField& q1, const GenVectorField& q2);

/// One principal derivative expressed through the others: u_{alpha,J} = value.
struct SolvedEntry {
  std::size_t alpha;
  Multiindex j;
  ExpPoly value;
};

/// System F_nu = 0, optionally in solved form for elimination on solutions.
class PdeSystem {
 public:
  /// Throws DegenerateEquation if some F_nu is constant.
  PdeSystem(JetContextPtr ctx, std::vector<ExpPoly> equations, std::vector<SolvedEntry> solved = {});

  /// u_{alpha,t} = rhs[alpha] for every dependent variable, t = x_{time_axis}.
  static PdeSystem evolution(JetContextPtr ctx, std::size_t time_axis, std::vector<ExpPoly> rhs);

  const JetContextPtr& context() const { return ctx_; }
  const std::vector<ExpPoly>& equations() const { return equations_; }
  const std::vector<SolvedEntry>& solved() const { return solved_; }
  bool has_solved_form() const { return !solved_.empty(); }
  /// The evolution axis when every solved entry is u_{alpha,t} for the same t.
  std::optional<std::size_t> time_axis() const;
  /// Highest jet order in the equations.
  unsigned order() const;

  /// Is u_{alpha,J} (by variable index) a derivative of a solved entry?
  bool is_principal(std::size_t var) const;
  /// Eliminates every principal derivative using the solved form and its
  /// total-derivative consequences. Throws NotSolvedForm if this cannot
  /// finish within the context's budget.
  ExpPoly reduce(const ExpPoly& p) const;

  /// Same system over a context with the same names (e.g. a larger budget).
  PdeSystem rebase(const JetContextPtr& target) const;

 private:
  JetContextPtr ctx_;
  std::vector<ExpPoly> equations_;
  std::vector<SolvedEntry> solved_;
};

/// Residuals pr Q[F_nu] reduced on solutions; all zero iff Q is a symmetry.
std::vector<ExpPoly> apply_on_solutions(const GenVectorField& q, const PdeSystem& sys);

/// Ansatz caps for evolutionary symmetry searches.
struct EvolutionAnsatz {
  /// Highest y-derivative order q of the characteristic.
  unsigned order = 1;
  /// Total degree cap in the jet coordinates.
  unsigned jet_degree = 1;
  /// Degree cap in each independent variable.
  unsigned poly_degree = 2;
  /// exp(weights . z) on the translation variables; empty means all zero.
  std::vector<GaussRat> weights;
};

struct EvolutionResult {
  /// One characteristic vector (one entry per dependent variable) per basis element.
  std::vector<std::vector<ExpPoly>> characteristics;
  std::vector<std::string> hints;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
};

/// Budget a context needs for evolution_determining_solve at order q.
unsigned evolution_budget(unsigned q, unsigned equation_order);

/// Characteristics of evolutionary symmetries within the ansatz caps.
/// Requires sys in evolution form and a context budget of at least
/// evolution_budget(ansatz.order, sys.order()).
EvolutionResult evolution_determining_solve(const PdeSystem& sys, const EvolutionAnsatz& ansatz);

}  // namespace symkit
