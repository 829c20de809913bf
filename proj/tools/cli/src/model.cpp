#include "symkit/cli/model.hpp"

#include <algorithm>

namespace symkit::cli {

namespace {

std::size_t position(const std::vector<std::string>& names, const std::string& n) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
}

bool contains(const std::vector<std::string>& names, const std::string& n) {
  return position(names, n) < names.size();
}

/// f + O[u]: the part free of the unknown and the linear part.
struct Affine {
  ExpPoly f;
  LinDiffOp op;
};

}  // namespace

GaussRat evaluate_constant(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number:
      return GaussRat(mpq_class(e.text));
    case K::Imag:
      return GaussRat::imag_unit();
    case K::Symbol:
    case K::Derivative:
      throw SemanticError("expected a constant, found '" + render(e) + "'");
    case K::Neg:
      return -evaluate_constant(e.args[0]);
    case K::Add:
      return evaluate_constant(e.args[0]) + evaluate_constant(e.args[1]);
    case K::Sub:
      return evaluate_constant(e.args[0]) - evaluate_constant(e.args[1]);
    case K::Mul:
      return evaluate_constant(e.args[0]) * evaluate_constant(e.args[1]);
    case K::Div:
      return evaluate_constant(e.args[0]) / evaluate_constant(e.args[1]);
    case K::Pow: {
      GaussRat base = evaluate_constant(e.args[0]);
      GaussRat out(1);
      for (unsigned k = 0; k < e.exponent; ++k) out *= base;
      return out;
    }
  }
  return GaussRat{};
}

std::vector<Weight> evaluate_lambdas(const std::vector<LambdaItem>& items, std::size_t translation_count) {
  std::vector<Weight> out;
  for (const auto& item : items) {
    Weight w;
    for (const auto& e : item) w.push_back(evaluate_constant(e));
    if (translation_count == 0 && w.size() == 1 && w[0].is_zero()) w.clear();
    if (w.size() != translation_count) {
      throw SemanticError("lambda entry has " + std::to_string(w.size()) + " components, expected " +
                          std::to_string(translation_count) + " (one per translation variable)");
    }
    out.push_back(std::move(w));
  }
  return out;
}

ContextPtr operator_context(const ProblemFile& p) {
  for (const auto& t : p.translations) {
    if (!contains(p.vars, t)) {
      throw SemanticError("translation '" + t + "' must be an independent variable for operator problems");
    }
  }
  return VarContext::independents(p.vars, p.translations);
}

JetContextPtr jet_context(const ProblemFile& p, unsigned max_order) {
  if (p.vars.empty() || p.unknowns.empty()) throw SemanticError("declare vars and unknowns first");
  return JetContext::make(p.vars, p.unknowns, max_order, p.translations);
}

ExpPoly evaluate(const Expr& e, const JetContext& ctx) {
  using K = Expr::Kind;
  const ContextPtr& vars = ctx.vars();
  switch (e.kind) {
    case K::Number:
    case K::Imag:
      return ExpPoly::constant(vars, evaluate_constant(e));
    case K::Symbol: {
      std::size_t l = position(ctx.independent_names(), e.text);
      if (l < ctx.m()) return ExpPoly::variable(vars, ctx.independent(l));
      std::size_t a = position(ctx.dependent_names(), e.text);
      if (a < ctx.n()) return ExpPoly::variable(vars, ctx.jet_or_throw(a, Multiindex(ctx.m(), 0)));
      throw UnknownVariable(e.text);
    }
    case K::Derivative: {
      std::size_t a = position(ctx.dependent_names(), e.text);
      if (a >= ctx.n()) throw UnknownVariable(e.text);
      Multiindex j(ctx.m(), 0);
      for (const auto& v : e.vars) {
        std::size_t l = position(ctx.independent_names(), v);
        if (l >= ctx.m()) throw UnknownVariable(v);
        ++j[l];
      }
      return ExpPoly::variable(vars, ctx.jet_or_throw(a, j));
    }
    case K::Neg:
      return -evaluate(e.args[0], ctx);
    case K::Add:
      return evaluate(e.args[0], ctx) + evaluate(e.args[1], ctx);
    case K::Sub:
      return evaluate(e.args[0], ctx) - evaluate(e.args[1], ctx);
    case K::Mul:
      return evaluate(e.args[0], ctx) * evaluate(e.args[1], ctx);
    case K::Div: {
      ExpPoly d = evaluate(e.args[1], ctx);
      if (!d.is_constant()) throw SemanticError("division by a non-constant '" + render(e.args[1]) + "'");
      return evaluate(e.args[0], ctx) * d.constant_term().inv();
    }
    case K::Pow:
      return evaluate(e.args[0], ctx).pow(e.exponent);
  }
  return ExpPoly(vars);
}

namespace {

Affine affine(const Expr& e, const ProblemFile& p, const ContextPtr& ctx) {
  using K = Expr::Kind;
  auto nonlinear = [&] { return SemanticError("'" + render(e) + "' is not linear in " + p.unknowns[0]); };
  switch (e.kind) {
    case K::Number:
    case K::Imag:
      return {ExpPoly::constant(ctx, evaluate_constant(e)), LinDiffOp(ctx)};
    case K::Symbol:
      if (e.text == p.unknowns[0]) return {ExpPoly(ctx), LinDiffOp::identity(ctx)};
      return {ExpPoly::variable(ctx, ctx->index_of(e.text)), LinDiffOp(ctx)};
    case K::Derivative: {
      Multiindex j(ctx->size(), 0);
      for (const auto& v : e.vars) ++j[ctx->index_of(v)];
      return {ExpPoly(ctx), LinDiffOp::derivative(ctx, j)};
    }
    case K::Neg: {
      Affine a = affine(e.args[0], p, ctx);
      return {-a.f, -a.op};
    }
    case K::Add:
    case K::Sub: {
      Affine a = affine(e.args[0], p, ctx);
      Affine b = affine(e.args[1], p, ctx);
      if (e.kind == K::Add) return {a.f + b.f, a.op + b.op};
      return {a.f - b.f, a.op - b.op};
    }
    case K::Mul: {
      Affine a = affine(e.args[0], p, ctx);
      Affine b = affine(e.args[1], p, ctx);
      if (!a.op.is_zero() && !b.op.is_zero()) throw nonlinear();
      Affine out{a.f * b.f, LinDiffOp(ctx)};
      if (!b.op.is_zero() && !a.f.is_zero()) out.op = compose(LinDiffOp::multiplication(a.f), b.op);
      if (!a.op.is_zero() && !b.f.is_zero()) out.op = compose(LinDiffOp::multiplication(b.f), a.op);
      return out;
    }
    case K::Div: {
      Affine d = affine(e.args[1], p, ctx);
      if (!d.op.is_zero() || !d.f.is_constant()) {
        throw SemanticError("division by a non-constant '" + render(e.args[1]) + "'");
      }
      GaussRat inv = d.f.constant_term().inv();
      Affine a = affine(e.args[0], p, ctx);
      return {a.f * inv, a.op * inv};
    }
    case K::Pow: {
      Affine a = affine(e.args[0], p, ctx);
      if (a.op.is_zero()) return {a.f.pow(e.exponent), LinDiffOp(ctx)};
      if (e.exponent == 1) return a;
      throw nonlinear();
    }
  }
  return {ExpPoly(ctx), LinDiffOp(ctx)};
}

}  // namespace

LinDiffOp evaluate_operator(const Expr& e, const ProblemFile& p, const ContextPtr& ctx) {
  if (p.unknowns.size() != 1) throw SemanticError("operator problems need exactly one unknown");
  Affine a = affine(e, p, ctx);
  if (!a.f.is_zero()) {
    throw SemanticError("'" + render(e) + "' has a part free of " + p.unknowns[0] + "; it must be homogeneous");
  }
  return a.op;
}

bool is_linear_problem(const ProblemFile& p) {
  if (p.equations.size() != 1 || p.unknowns.size() != 1) return false;
  try {
    const auto& eq = p.equations[0];
    evaluate_operator(Expr::binary(Expr::Kind::Sub, eq.lhs, eq.rhs), p, operator_context(p));
    return true;
  } catch (const SemanticError&) {
    return false;
  }
}

OperatorPde operator_pde(const ProblemFile& p) {
  if (p.equations.size() != 1) throw SemanticError("an operator problem needs exactly one equation");
  ContextPtr ctx = operator_context(p);
  const auto& eq = p.equations[0];
  LinDiffOp l = evaluate_operator(Expr::binary(Expr::Kind::Sub, eq.lhs, eq.rhs), p, ctx);
  for (std::size_t v = 0; v < ctx->size(); ++v) {
    bool first = false;
    bool other = false;
    for (const auto& [j, a] : l.terms()) {
      if (j[v] == 0) continue;
      if (j[v] == 1 && order_of(j) == 1) {
        first = true;
      } else {
        other = true;
      }
    }
    if (first && !other) return OperatorPde(std::move(l), v);
  }
  throw SemanticError("the equation has no variable that enters only through a first derivative");
}

PdeSystem evolution_system(const ProblemFile& p, unsigned max_order) {
  JetContextPtr ctx = jet_context(p, max_order);
  if (p.equations.size() != p.unknowns.size()) {
    throw NotSolvedForm("evolution form needs one equation D[u,t] = G per unknown");
  }
  std::vector<ExpPoly> rhs(ctx->n());
  std::vector<bool> seen(ctx->n(), false);
  std::optional<std::size_t> axis;
  for (const auto& eq : p.equations) {
    const Expr* lhs = &eq.lhs;
    const Expr* g = &eq.rhs;
    if (!(lhs->kind == Expr::Kind::Derivative && lhs->vars.size() == 1) &&
        eq.rhs.kind == Expr::Kind::Derivative && eq.rhs.vars.size() == 1) {
      std::swap(lhs, g);
    }
    if (lhs->kind != Expr::Kind::Derivative || lhs->vars.size() != 1) {
      throw NotSolvedForm("line " + std::to_string(eq.line) + ": expected D[u,t] = G");
    }
    std::size_t a = position(p.unknowns, lhs->text);
    std::size_t t = position(p.vars, lhs->vars[0]);
    if (seen[a]) throw NotSolvedForm("two equations for " + lhs->text);
    if (axis && *axis != t) throw NotSolvedForm("all equations must share the evolution variable");
    seen[a] = true;
    axis = t;
    rhs[a] = evaluate(*g, *ctx);
  }
  return PdeSystem::evolution(ctx, *axis, std::move(rhs));
}

GenVectorField field_of(const ProblemFile& p, const JetContextPtr& ctx) {
  if (p.field.empty()) throw SemanticError("no 'field' statement");
  GenVectorField q = GenVectorField::zero(ctx);
  for (const auto& fc : p.field) {
    ExpPoly v = evaluate(fc.value, *ctx);
    std::size_t l = position(ctx->independent_names(), fc.name);
    if (l < ctx->m()) {
      q.xi[l] += v;
    } else {
      q.eta[position(ctx->dependent_names(), fc.name)] += v;
    }
  }
  return q;
}

}  // namespace symkit::cli
