#pragma once

#include <vector>

#include "symkit/cli/problem.hpp"
#include "symkit/jet.hpp"
#include "symkit/linop.hpp"

namespace symkit::cli {

/// Constant value of an expression without variables.
GaussRat evaluate_constant(const Expr& e);
/// Weights, one per translation variable, from lambda items.
std::vector<Weight> evaluate_lambdas(const std::vector<LambdaItem>& items, std::size_t translation_count);

/// Coefficient context of the independents (translations restricted to them).
ContextPtr operator_context(const ProblemFile& p);
/// Jet context over vars/unknowns with the given budget.
JetContextPtr jet_context(const ProblemFile& p, unsigned max_order);

ExpPoly evaluate(const Expr& e, const JetContext& ctx);
/// e as a linear operator acting on the single unknown. Throws SemanticError
/// when e is not homogeneous linear in the unknown.
LinDiffOp evaluate_operator(const Expr& e, const ProblemFile& p, const ContextPtr& ctx);

/// True when the single equation is homogeneous linear in one unknown.
bool is_linear_problem(const ProblemFile& p);
/// L psi = 0 from the single equation; the evolution axis is the first
/// variable whose derivative occurs only at first order.
OperatorPde operator_pde(const ProblemFile& p);
/// u_t = G for every unknown; each equation must be D[u,t] = G.
PdeSystem evolution_system(const ProblemFile& p, unsigned max_order);

/// xi from components named after variables, eta from those named after unknowns.
GenVectorField field_of(const ProblemFile& p, const JetContextPtr& ctx);

}  // namespace symkit::cli
