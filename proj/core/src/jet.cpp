#include "symkit/jet.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "symkit/error.hpp"
#include "symkit/linalg.hpp"

namespace symkit {

unsigned order_of(const Multiindex& j) {
  unsigned s = 0;
  for (unsigned x : j) s += x;
  return s;
}

namespace {

/// Multiindices of length m and order k, lexicographically descending.
void multiindices_of_order(std::size_t m, unsigned k, std::vector<Multiindex>& out) {
  Multiindex cur(m, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
    if (pos + 1 == m) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (m == 0) return;
  rec(0, k);
}

/// Variables with a nonzero exponent (or exponential weight) in p.
std::vector<std::size_t> present_vars(const ExpPoly& p) {
  std::set<std::size_t> vars;
  if (!p.context()) return {};
  const auto& ctx = *p.context();
  for (const auto& [w, poly] : p.groups()) {
    for (std::size_t s = 0; s < w.size(); ++s) {
      if (!w[s].is_zero()) vars.insert(ctx.translations()[s]);
    }
    for (const auto& [e, c] : poly.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] > 0) vars.insert(i);
      }
    }
  }
  return {vars.begin(), vars.end()};
}

void require_same(const JetContext& ctx, const ExpPoly& p) {
  if (p.context() && !same_context(p.context(), ctx.vars())) {
    throw VariableMismatch("expression does not belong to this jet context");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// JetContext

JetContext::JetContext(std::vector<std::string> independents, std::vector<std::string> dependents,
                       unsigned max_order, const std::vector<std::string>& translations)
    : independents_(std::move(independents)),
      dependents_(std::move(dependents)),
      translations_(translations),
      max_order_(max_order) {
  if (independents_.empty()) throw InputError("a jet context needs at least one independent variable");
  if (dependents_.empty()) throw InputError("a jet context needs at least one dependent variable");
  std::vector<VarInfo> vars;
  for (const auto& x : independents_) vars.push_back(VarInfo{x, VarKind::Independent, -1, {}});
  for (std::size_t a = 0; a < dependents_.size(); ++a) {
    for (unsigned k = 0; k <= max_order_; ++k) {
      std::vector<Multiindex> js;
      multiindices_of_order(m(), k, js);
      for (auto& j : js) {
        jet_index_.emplace(std::make_pair(a, j), vars.size());
        vars.push_back(VarInfo{jet_name(dependents_[a], independents_, j),
                               k == 0 ? VarKind::Dependent : VarKind::Jet, static_cast<int>(a), j});
      }
    }
  }
  vars_ = VarContext::make(std::move(vars), translations);
}

std::shared_ptr<const JetContext> JetContext::make(std::vector<std::string> independents,
                                                   std::vector<std::string> dependents,
                                                   unsigned max_order,
                                                   const std::vector<std::string>& translations) {
  return std::make_shared<const JetContext>(std::move(independents), std::move(dependents), max_order,
                                            translations);
}

std::optional<std::size_t> JetContext::jet(std::size_t alpha, const Multiindex& j) const {
  auto it = jet_index_.find({alpha, j});
  if (it == jet_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t JetContext::jet_or_throw(std::size_t alpha, const Multiindex& j) const {
  if (alpha >= n() || j.size() != m()) throw InputError("malformed jet coordinate request");
  auto idx = jet(alpha, j);
  if (!idx) {
    throw OrderOverflow(jet_name(dependents_[alpha], independents_, j) + " exceeds the jet budget " +
                        std::to_string(max_order_));
  }
  return *idx;
}

std::shared_ptr<const JetContext> JetContext::with_max_order(unsigned max_order) const {
  return make(independents_, dependents_, max_order, translations_);
}

std::string JetContext::jet_name(const std::string& dependent,
                                 const std::vector<std::string>& independents, const Multiindex& j) {
  if (order_of(j) == 0) return dependent;
  bool single = std::all_of(independents.begin(), independents.end(),
                            [](const std::string& s) { return s.size() == 1; });
  std::string out = dependent + "_";
  if (single) {
    for (std::size_t l = 0; l < j.size(); ++l) out += std::string(j[l], independents[l][0]);
    return out;
  }
  out += "{";
  bool first = true;
  for (std::size_t l = 0; l < j.size(); ++l) {
    if (j[l] == 0) continue;
    if (!first) out += ",";
    first = false;
    out += independents[l];
    if (j[l] > 1) out += "^" + std::to_string(j[l]);
  }
  return out + "}";
}

unsigned jet_order(const JetContext& ctx, const ExpPoly& p) {
  unsigned best = 0;
  for (std::size_t v : present_vars(p)) {
    if (ctx.is_jet(v)) best = std::max(best, order_of(ctx.vars()->var(v).multiindex));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Total derivatives

ExpPoly total_derivative(const JetContext& ctx, const ExpPoly& p, std::size_t l) {
  require_same(ctx, p);
  if (l >= ctx.m()) throw InputError("total derivative axis out of range");
  ExpPoly out = p.partial(ctx.independent(l));
  if (!out.context()) out = ExpPoly(ctx.vars());
  for (std::size_t v : present_vars(p)) {
    if (!ctx.is_jet(v)) continue;
    const VarInfo& info = ctx.vars()->var(v);
    Multiindex up = info.multiindex;
    ++up[l];
    std::size_t target = ctx.jet_or_throw(static_cast<std::size_t>(info.dependent), up);
    out += ExpPoly::variable(ctx.vars(), target) * p.partial(v);
  }
  return out;
}

ExpPoly total_derivative(const JetContext& ctx, const ExpPoly& p, const Multiindex& j) {
  ExpPoly out = p;
  for (std::size_t l = 0; l < j.size(); ++l)
    for (unsigned k = 0; k < j[l]; ++k) out = total_derivative(ctx, out, l);
  return out;
}

// ---------------------------------------------------------------------------
// GenVectorField

GenVectorField::GenVectorField(JetContextPtr context, std::vector<ExpPoly> xi_coeffs,
                               std::vector<ExpPoly> eta_coeffs)
    : ctx(std::move(context)), xi(std::move(xi_coeffs)), eta(std::move(eta_coeffs)) {
  if (xi.size() != ctx->m() || eta.size() != ctx->n()) {
    throw DimensionMismatch("vector field needs m xi and n eta coefficients");
  }
  for (auto& c : xi) {
    require_same(*ctx, c);
    if (!c.context()) c = ExpPoly(ctx->vars());
  }
  for (auto& c : eta) {
    require_same(*ctx, c);
    if (!c.context()) c = ExpPoly(ctx->vars());
  }
}

GenVectorField GenVectorField::zero(JetContextPtr context) {
  std::vector<ExpPoly> xi(context->m(), ExpPoly(context->vars()));
  std::vector<ExpPoly> eta(context->n(), ExpPoly(context->vars()));
  return GenVectorField(std::move(context), std::move(xi), std::move(eta));
}

GenVectorField GenVectorField::evolutionary(JetContextPtr context, std::vector<ExpPoly> characteristic) {
  std::vector<ExpPoly> xi(context->m(), ExpPoly(context->vars()));
  return GenVectorField(std::move(context), std::move(xi), std::move(characteristic));
}

unsigned GenVectorField::order() const {
  unsigned q = 0;
  for (const auto& c : xi) q = std::max(q, jet_order(*ctx, c));
  for (const auto& c : eta) q = std::max(q, jet_order(*ctx, c));
  return q;
}

std::vector<ExpPoly> GenVectorField::characteristic() const {
  std::vector<ExpPoly> out = eta;
  for (std::size_t a = 0; a < ctx->n(); ++a) {
    for (std::size_t l = 0; l < ctx->m(); ++l) {
      if (xi[l].is_zero()) continue;
      Multiindex e(ctx->m(), 0);
      e[l] = 1;
      out[a] -= xi[l] * ExpPoly::variable(ctx->vars(), ctx->jet_or_throw(a, e));
    }
  }
  return out;
}

bool GenVectorField::is_zero() const {
  return std::all_of(xi.begin(), xi.end(), [](const ExpPoly& c) { return c.is_zero(); }) &&
         std::all_of(eta.begin(), eta.end(), [](const ExpPoly& c) { return c.is_zero(); });
}

GenVectorField& GenVectorField::operator+=(const GenVectorField& rhs) {
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += rhs.xi[i];
  for (std::size_t a = 0; a < eta.size(); ++a) eta[a] += rhs.eta[a];
  return *this;
}

GenVectorField& GenVectorField::operator-=(const GenVectorField& rhs) {
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] -= rhs.xi[i];
  for (std::size_t a = 0; a < eta.size(); ++a) eta[a] -= rhs.eta[a];
  return *this;
}

GenVectorField& GenVectorField::operator*=(const GaussRat& c) {
  for (auto& x : xi) x *= c;
  for (auto& e : eta) e *= c;
  return *this;
}

std::string GenVectorField::to_string() const {
  std::string out;
  auto append = [&](const ExpPoly& c, const std::string& name) {
    if (c.is_zero()) return;
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")*d/d" + name;
  };
  for (std::size_t l = 0; l < xi.size(); ++l) append(xi[l], ctx->independent_names()[l]);
  for (std::size_t a = 0; a < eta.size(); ++a) append(eta[a], ctx->dependent_names()[a]);
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Prolongation

namespace {

/// Computes phi_{alpha,J} on demand with memoized D_J(Q_alpha).
class LazyProlongation {
 public:
  explicit LazyProlongation(const GenVectorField& q) : q_(q), ctx_(*q.ctx), chars_(q.characteristic()) {}

  ExpPoly phi(std::size_t alpha, const Multiindex& j) {
    ExpPoly out = dq(alpha, j);
    for (std::size_t l = 0; l < ctx_.m(); ++l) {
      if (q_.xi[l].is_zero()) continue;
      Multiindex up = j;
      ++up[l];
      out += q_.xi[l] * ExpPoly::variable(ctx_.vars(), ctx_.jet_or_throw(alpha, up));
    }
    return out;
  }

  ExpPoly apply(const ExpPoly& f) {
    require_same(ctx_, f);
    ExpPoly out(ctx_.vars());
    for (std::size_t l = 0; l < ctx_.m(); ++l) {
      if (!q_.xi[l].is_zero()) out += q_.xi[l] * f.partial(ctx_.independent(l));
    }
    for (std::size_t v : present_vars(f)) {
      if (!ctx_.is_jet(v)) continue;
      const VarInfo& info = ctx_.vars()->var(v);
      ExpPoly coeff = phi(static_cast<std::size_t>(info.dependent), info.multiindex);
      if (!coeff.is_zero()) out += coeff * f.partial(v);
    }
    return out;
  }

 private:
  const ExpPoly& dq(std::size_t alpha, const Multiindex& j) {
    auto key = std::make_pair(alpha, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ExpPoly value;
    auto first = std::find_if(j.begin(), j.end(), [](unsigned x) { return x > 0; });
    if (first == j.end()) {
      value = chars_[alpha];
    } else {
      std::size_t l = static_cast<std::size_t>(first - j.begin());
      Multiindex down = j;
      --down[l];
      value = total_derivative(ctx_, dq(alpha, down), l);
    }
    return memo_.emplace(std::move(key), std::move(value)).first->second;
  }

  const GenVectorField& q_;
  const JetContext& ctx_;
  std::vector<ExpPoly> chars_;
  std::map<std::pair<std::size_t, Multiindex>, ExpPoly> memo_;
};

}  // namespace

const ExpPoly& Prolongation::coefficient(std::size_t alpha, const Multiindex& j) const {
  auto idx = ctx->jet(alpha, j);
  auto it = idx ? coefficients.find(*idx) : coefficients.end();
  if (it == coefficients.end()) {
    throw OrderOverflow("prolongation was not computed for " +
                        JetContext::jet_name(ctx->dependent_names()[alpha], ctx->independent_names(), j));
  }
  return it->second;
}

ExpPoly Prolongation::apply(const ExpPoly& f) const {
  require_same(*ctx, f);
  ExpPoly out(ctx->vars());
  for (std::size_t l = 0; l < ctx->m(); ++l) {
    if (!xi[l].is_zero()) out += xi[l] * f.partial(ctx->independent(l));
  }
  for (std::size_t v : present_vars(f)) {
    if (!ctx->is_jet(v)) continue;
    auto it = coefficients.find(v);
    if (it == coefficients.end()) {
      throw OrderOverflow("prolongation was not computed for " + ctx->vars()->var(v).name);
    }
    out += it->second * f.partial(v);
  }
  return out;
}

Prolongation prolong(const GenVectorField& q, unsigned up_to) {
  Prolongation out{q.ctx, q.xi, {}};
  LazyProlongation lazy(q);
  for (std::size_t a = 0; a < q.ctx->n(); ++a) {
    for (unsigned k = 0; k <= up_to; ++k) {
      std::vector<Multiindex> js;
      multiindices_of_order(q.ctx->m(), k, js);
      for (const auto& j : js) {
        out.coefficients.emplace(q.ctx->jet_or_throw(a, j), lazy.phi(a, j));
      }
    }
  }
  return out;
}

ExpPoly apply_prolonged(const GenVectorField& q, const ExpPoly& f) {
  LazyProlongation lazy(q);
  return lazy.apply(f);
}

GenVectorField lie_bracket(const GenVectorField& q1, const GenVectorField& q2) {
  if (!same_context(q1.ctx->vars(), q2.ctx->vars())) {
    throw VariableMismatch("lie_bracket: fields live in different jet contexts");
  }
  LazyProlongation p1(q1);
  LazyProlongation p2(q2);
  GenVectorField out = GenVectorField::zero(q1.ctx);
  for (std::size_t l = 0; l < q1.ctx->m(); ++l) out.xi[l] = p1.apply(q2.xi[l]) - p2.apply(q1.xi[l]);
  for (std::size_t a = 0; a < q1.ctx->n(); ++a) out.eta[a] = p1.apply(q2.eta[a]) - p2.apply(q1.eta[a]);
  return out;
}

// ---------------------------------------------------------------------------
// PdeSystem

namespace {

bool dominates(const Multiindex& j, const Multiindex& base) {
  for (std::size_t i = 0; i < j.size(); ++i)
    if (j[i] < base[i]) return false;
  return true;
}

/// Memoized elimination of principal derivatives for one system.
class Reducer {
 public:
  explicit Reducer(const PdeSystem& sys) : sys_(sys), ctx_(*sys.context()) {}

  ExpPoly reduce(const ExpPoly& p, unsigned depth = 0) {
    if (depth > kDepthLimit) throw NotSolvedForm("elimination does not terminate");
    ExpPoly cur = p;
    for (std::size_t v : present_vars(p)) {
      if (!sys_.is_principal(v)) continue;
      cur = cur.substitute(v, value_of(v, depth));
    }
    return cur;
  }

 private:
  static constexpr unsigned kDepthLimit = 256;

  const ExpPoly& value_of(std::size_t var, unsigned depth) {
    auto it = memo_.find(var);
    if (it != memo_.end()) return it->second;
    if (!in_progress_.insert(var).second) {
      throw NotSolvedForm("solved form refers to itself through " + ctx_.vars()->var(var).name);
    }
    const VarInfo& info = ctx_.vars()->var(var);
    const auto alpha = static_cast<std::size_t>(info.dependent);
    const SolvedEntry* entry = nullptr;
    for (const auto& e : sys_.solved()) {
      if (e.alpha == alpha && dominates(info.multiindex, e.j)) {
        entry = &e;
        break;
      }
    }
    ExpPoly value;
    try {
      if (info.multiindex == entry->j) {
        value = reduce(entry->value, depth + 1);
      } else {
        std::size_t l = 0;
        while (info.multiindex[l] == entry->j[l]) ++l;
        Multiindex down = info.multiindex;
        --down[l];
        const ExpPoly& lower = value_of(ctx_.jet_or_throw(alpha, down), depth + 1);
        value = reduce(total_derivative(ctx_, lower, l), depth + 1);
      }
    } catch (const OrderOverflow& e) {
      throw NotSolvedForm(std::string("elimination exceeds the jet budget: ") + e.what());
    }
    in_progress_.erase(var);
    return memo_.emplace(var, std::move(value)).first->second;
  }

  const PdeSystem& sys_;
  const JetContext& ctx_;
  std::map<std::size_t, ExpPoly> memo_;
  std::set<std::size_t> in_progress_;
};

}  // namespace

PdeSystem::PdeSystem(JetContextPtr ctx, std::vector<ExpPoly> equations, std::vector<SolvedEntry> solved)
    : ctx_(std::move(ctx)), equations_(std::move(equations)), solved_(std::move(solved)) {
  if (equations_.empty()) throw DegenerateEquation("a system needs at least one equation");
  for (auto& f : equations_) {
    require_same(*ctx_, f);
    if (f.is_constant()) throw DegenerateEquation("equation is constant: " + f.to_string() + " = 0");
  }
  for (auto& s : solved_) {
    if (s.alpha >= ctx_->n() || s.j.size() != ctx_->m() || order_of(s.j) == 0) {
      throw NotSolvedForm("solved entries must name a derivative of a dependent variable");
    }
    ctx_->jet_or_throw(s.alpha, s.j);
    require_same(*ctx_, s.value);
    if (!s.value.context()) s.value = ExpPoly(ctx_->vars());
  }
}

PdeSystem PdeSystem::evolution(JetContextPtr ctx, std::size_t time_axis, std::vector<ExpPoly> rhs) {
  if (rhs.size() != ctx->n()) throw DimensionMismatch("one right-hand side per dependent variable");
  if (time_axis >= ctx->m()) throw InputError("time axis out of range");
  std::vector<ExpPoly> eqs;
  std::vector<SolvedEntry> solved;
  Multiindex et(ctx->m(), 0);
  et[time_axis] = 1;
  for (std::size_t a = 0; a < rhs.size(); ++a) {
    for (std::size_t v : present_vars(rhs[a])) {
      if (ctx->is_jet(v) && ctx->vars()->var(v).multiindex[time_axis] > 0) {
        throw NotSolvedForm("right-hand side contains the time derivative " + ctx->vars()->var(v).name);
      }
    }
    eqs.push_back(ExpPoly::variable(ctx->vars(), ctx->jet_or_throw(a, et)) - rhs[a]);
    solved.push_back(SolvedEntry{a, et, rhs[a]});
  }
  return PdeSystem(std::move(ctx), std::move(eqs), std::move(solved));
}

std::optional<std::size_t> PdeSystem::time_axis() const {
  if (solved_.empty()) return std::nullopt;
  std::optional<std::size_t> axis;
  for (const auto& s : solved_) {
    if (order_of(s.j) != 1) return std::nullopt;
    std::size_t l = static_cast<std::size_t>(std::find(s.j.begin(), s.j.end(), 1u) - s.j.begin());
    if (axis && *axis != l) return std::nullopt;
    axis = l;
  }
  std::vector<bool> covered(ctx_->n(), false);
  for (const auto& s : solved_) covered[s.alpha] = true;
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) return std::nullopt;
  return axis;
}

unsigned PdeSystem::order() const {
  unsigned d = 0;
  for (const auto& f : equations_) d = std::max(d, jet_order(*ctx_, f));
  return d;
}

bool PdeSystem::is_principal(std::size_t var) const {
  if (!ctx_->is_jet(var)) return false;
  const VarInfo& info = ctx_->vars()->var(var);
  for (const auto& s : solved_) {
    if (s.alpha == static_cast<std::size_t>(info.dependent) && dominates(info.multiindex, s.j)) return true;
  }
  return false;
}

ExpPoly PdeSystem::reduce(const ExpPoly& p) const {
  Reducer r(*this);
  return r.reduce(p);
}

PdeSystem PdeSystem::rebase(const JetContextPtr& target) const {
  if (target->independent_names() != ctx_->independent_names() ||
      target->dependent_names() != ctx_->dependent_names()) {
    throw VariableMismatch("rebase: contexts declare different variables");
  }
  std::vector<ExpPoly> eqs;
  for (const auto& f : equations_) eqs.push_back(f.rebase(target->vars()));
  std::vector<SolvedEntry> solved;
  for (const auto& s : solved_) solved.push_back(SolvedEntry{s.alpha, s.j, s.value.rebase(target->vars())});
  return PdeSystem(target, std::move(eqs), std::move(solved));
}

std::vector<ExpPoly> apply_on_solutions(const GenVectorField& q, const PdeSystem& sys) {
  if (!sys.has_solved_form()) throw NotSolvedForm("system has no solved form");
  if (!same_context(q.ctx->vars(), sys.context()->vars())) {
    throw VariableMismatch("field and system live in different jet contexts");
  }
  Reducer reducer(sys);
  LazyProlongation lazy(q);
  std::vector<ExpPoly> out;
  try {
    for (const auto& f : sys.equations()) out.push_back(reducer.reduce(lazy.apply(f)));
  } catch (const OrderOverflow& e) {
    throw NotSolvedForm(std::string("prolongation exceeds the jet budget: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evolutionary determining systems

unsigned evolution_budget(unsigned q, unsigned equation_order) {
  return std::max(q + equation_order, 1u);
}

namespace {

void monomials_up_to(std::size_t nvars, unsigned max_degree, std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> cur(nvars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
    if (pos == nvars) {
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(0, max_degree);
}

struct RowKey {
  std::size_t equation;
  Weight weight;
  Exponents exponents;

  bool operator<(const RowKey& o) const {
    if (equation != o.equation) return equation < o.equation;
    if (weight != o.weight) return WeightLess{}(weight, o.weight);
    return GrlexGreater{}(exponents, o.exponents);
  }
};

}  // namespace

EvolutionResult evolution_determining_solve(const PdeSystem& sys, const EvolutionAnsatz& ansatz) {
  auto axis = sys.time_axis();
  if (!axis) throw NotSolvedForm("evolutionary search requires the form u_t = G(u, u_y, ...)");
  const JetContext& ctx = *sys.context();
  const unsigned d = sys.order();
  if (ctx.max_order() < evolution_budget(ansatz.order, d)) {
    throw OrderOverflow("jet budget " + std::to_string(ctx.max_order()) + " is below the required " +
                        std::to_string(evolution_budget(ansatz.order, d)));
  }
  Weight weight = ansatz.weights;
  if (weight.empty()) weight.assign(ctx.vars()->translation_count(), GaussRat{});
  if (weight.size() != ctx.vars()->translation_count()) {
    throw DimensionMismatch("one exponential weight per translation variable");
  }

  // Parametric jet coordinates: no derivative along the time axis.
  std::vector<std::size_t> jet_vars;
  for (std::size_t v = ctx.m(); v < ctx.vars()->size(); ++v) {
    const VarInfo& info = ctx.vars()->var(v);
    if (info.multiindex[*axis] == 0 && order_of(info.multiindex) <= ansatz.order) jet_vars.push_back(v);
  }
  std::vector<std::vector<unsigned>> jet_monos;
  monomials_up_to(jet_vars.size(), ansatz.jet_degree, jet_monos);
  std::sort(jet_monos.begin(), jet_monos.end(), GrlexGreater{});

  std::vector<Exponents> indep_monos;
  {
    Exponents cur(ctx.m(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == ctx.m()) {
        indep_monos.push_back(cur);
        return;
      }
      for (unsigned v = 0; v <= ansatz.poly_degree; ++v) {
        cur[pos] = v;
        rec(pos + 1);
      }
    };
    rec(0);
    std::sort(indep_monos.begin(), indep_monos.end(), GrlexGreater{});
  }

  struct Column {
    std::size_t alpha;
    ExpPoly value;
  };
  std::vector<Column> columns;
  for (std::size_t a = 0; a < ctx.n(); ++a) {
    for (const auto& jm : jet_monos) {
      for (const auto& im : indep_monos) {
        Exponents e(ctx.vars()->size(), 0);
        for (std::size_t l = 0; l < ctx.m(); ++l) e[l] = im[l];
        for (std::size_t k = 0; k < jet_vars.size(); ++k) e[jet_vars[k]] = jm[k];
        columns.push_back(Column{a, ExpPoly::monomial(ctx.vars(), weight, e, GaussRat(1))});
      }
    }
  }

  Reducer reducer(sys);
  std::map<RowKey, SparseSystem::Row> rows;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::vector<ExpPoly> eta(ctx.n(), ExpPoly(ctx.vars()));
    eta[columns[c].alpha] = columns[c].value;
    GenVectorField q = GenVectorField::evolutionary(sys.context(), std::move(eta));
    LazyProlongation lazy(q);
    for (std::size_t nu = 0; nu < sys.equations().size(); ++nu) {
      ExpPoly residual;
      try {
        residual = reducer.reduce(lazy.apply(sys.equations()[nu]));
      } catch (const OrderOverflow& e) {
        throw NotSolvedForm(std::string("prolongation exceeds the jet budget: ") + e.what());
      }
      for (auto& t : residual.coeff_extract()) {
        rows[RowKey{nu, std::move(t.weight), std::move(t.exponents)}].emplace_back(c, std::move(t.coeff));
      }
    }
  }

  SparseSystem system(columns.size());
  for (auto& [key, row] : rows) system.add_row(std::move(row));

  EvolutionResult out;
  out.unknowns = columns.size();
  out.equations = rows.size();
  out.rank = system.rank();
  for (const auto& v : system.nullspace()) {
    std::vector<ExpPoly> eta(ctx.n(), ExpPoly(ctx.vars()));
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (!v[c].is_zero()) eta[columns[c].alpha] += columns[c].value * v[c];
    }
    out.characteristics.push_back(std::move(eta));
  }

  for (const auto& s : sys.solved()) {
    const ExpPoly& g = s.value;
    const std::string& name = ctx.dependent_names()[s.alpha];
    if (jet_order(ctx, g) > ansatz.order) {
      out.hints.push_back("CapTooSmall: the flow of " + name + " (eta = " + g.to_string() + ") has order " +
                          std::to_string(jet_order(ctx, g)) + " > q = " + std::to_string(ansatz.order));
    } else if (g.degree_in(std::span<const std::size_t>(jet_vars)) > ansatz.jet_degree) {
      out.hints.push_back("CapTooSmall: the flow of " + name + " exceeds the jet-degree cap " +
                          std::to_string(ansatz.jet_degree));
    } else if (!is_zero_weight(weight)) {
      out.hints.push_back("CapTooSmall: the flow of " + name +
                          " has no exponential factor and is excluded by the nonzero weight");
    }
  }
  return out;
}

}  // namespace symkit
