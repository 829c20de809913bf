#include "symkit/casestudies.hpp"

#include <algorithm>
#include <future>

#include "symkit/error.hpp"
#include "symkit/linalg.hpp"

namespace symkit {

namespace {

constexpr std::size_t kT = 0;
constexpr std::size_t kX = 1;

LinDiffOp momentum(const ContextPtr& ctx, std::size_t x_axis) {
  return LinDiffOp::derivative(ctx, x_axis) * GaussRat(0, -1);
}

GaussRat power(const GaussRat& base, unsigned k) {
  GaussRat out(1);
  for (unsigned i = 0; i < k; ++i) out *= base;
  return out;
}

struct TermKeyLess {
  bool operator()(const std::pair<Weight, Exponents>& a, const std::pair<Weight, Exponents>& b) const {
    if (a.first != b.first) return WeightLess{}(a.first, b.first);
    return GrlexGreater{}(a.second, b.second);
  }
};

/// X p + p X.
LinDiffOp anticommute(const LinDiffOp& x, const LinDiffOp& p) { return compose(x, p) + compose(p, x); }

}  // namespace

OperatorPde schrodinger_pde() {
  ContextPtr ctx = VarContext::independents({"t", "x"}, {"t", "x"});
  LinDiffOp l = LinDiffOp::derivative(ctx, kT) * GaussRat::imag_unit() + LinDiffOp::derivative(ctx, kX, 2);
  return OperatorPde(std::move(l), kT);
}

std::vector<ExpPoly> to_h_form(const LinDiffOp& r, std::size_t x_axis) {
  const ContextPtr& ctx = r.context();
  if (!ctx) return {ExpPoly()};
  for (const auto& [j, a] : r.terms()) {
    for (std::size_t v = 0; v < j.size(); ++v) {
      if (v != x_axis && j[v] > 0) throw InvalidOperator("h-form needs an operator in d/dx only");
    }
  }
  const unsigned q = r.order();
  const LinDiffOp p = momentum(ctx, x_axis);
  std::vector<ExpPoly> h(q + 1, ExpPoly(ctx));
  LinDiffOp rest = r;
  for (unsigned s = q + 1; s-- > 0;) {
    Multiindex j(ctx->size(), 0);
    j[x_axis] = s;
    h[s] = rest.coefficient(j) * power(GaussRat(0, -2), s).inv();
    if (h[s].is_zero()) continue;
    LinDiffOp n = LinDiffOp::multiplication(h[s]);
    for (unsigned k = 0; k < s; ++k) n = anticommute(n, p);
    rest -= n;
  }
  if (!rest.is_zero()) throw InvariantViolation("h-form elimination left a remainder");
  return h;
}

LinDiffOp from_h_form(const std::vector<ExpPoly>& h, const ContextPtr& ctx, std::size_t x_axis) {
  const LinDiffOp p = momentum(ctx, x_axis);
  LinDiffOp out(ctx);
  for (std::size_t s = 0; s < h.size(); ++s) {
    if (h[s].is_zero()) continue;
    LinDiffOp n = LinDiffOp::multiplication(h[s]);
    for (std::size_t k = 0; k < s; ++k) n = anticommute(n, p);
    out += n;
  }
  return out;
}

void fill_h_table(SchrodingerReport& report, std::size_t x_axis, std::size_t t_axis) {
  report.h_table.clear();
  report.bidegrees.clear();
  report.bidegrees_ok = true;
  for (const auto& r : report.basis) {
    std::vector<ExpPoly> h = to_h_form(r, x_axis);
    h.resize(report.q + 1, ExpPoly(r.context()));
    std::vector<Bidegree> degs;
    for (unsigned j = 0; j < h.size(); ++j) {
      Bidegree d{h[j].degree_in(t_axis), h[j].degree_in(x_axis)};
      if (!h[j].is_zero() && (d.t > j || d.x + j > report.q)) report.bidegrees_ok = false;
      degs.push_back(d);
    }
    report.h_table.push_back(std::move(h));
    report.bidegrees.push_back(std::move(degs));
  }
}

SchrodingerReport solve_recurrence(unsigned q) {
  const OperatorPde pde = schrodinger_pde();
  const ContextPtr& ctx = pde.context();
  const unsigned cap = static_cast<unsigned>(operator_dimension_bound(q) - 1);
  const std::size_t per = cap + 1;
  const std::size_t params = (q + 1) * per;

  auto t_power = [&](unsigned k) {
    Exponents e(ctx->size(), 0);
    e[kT] = k;
    return ExpPoly::monomial(ctx, Weight(ctx->translation_count()), e, GaussRat(1));
  };

  // hlin[j][p]: contribution of parameter p = (j', k) to h_j; parameter
  // (j', k) is the coefficient of t^k in the integration function of h_j'.
  std::vector<std::vector<ExpPoly>> hlin(q + 1, std::vector<ExpPoly>(params, ExpPoly(ctx)));
  for (unsigned k = 0; k <= cap; ++k) hlin[q][q * per + k] = t_power(k);
  for (unsigned j = q; j >= 1; --j) {
    for (std::size_t p = 0; p < params; ++p) {
      if (!hlin[j][p].is_zero()) hlin[j - 1][p] = -hlin[j][p].partial(kT).antiderivative(kX);
    }
    for (unsigned k = 0; k <= cap; ++k) hlin[j - 1][(j - 1) * per + k] += t_power(k);
  }

  std::map<std::pair<Weight, Exponents>, SparseSystem::Row, TermKeyLess> rows;
  for (std::size_t p = 0; p < params; ++p) {
    for (auto& t : hlin[0][p].partial(kT).coeff_extract()) {
      rows[{std::move(t.weight), std::move(t.exponents)}].emplace_back(p, std::move(t.coeff));
    }
  }
  SparseSystem system(params);
  for (auto& [key, row] : rows) system.add_row(std::move(row));

  SchrodingerReport report;
  report.q = q;
  for (const auto& v : system.nullspace()) {
    std::vector<ExpPoly> h(q + 1, ExpPoly(ctx));
    for (unsigned j = 0; j <= q; ++j)
      for (std::size_t p = 0; p < params; ++p)
        if (!v[p].is_zero() && !hlin[j][p].is_zero()) h[j] += hlin[j][p] * v[p];
    LinDiffOp r = from_h_form(h, ctx, kX);
    if (!pde.is_symmetry(r)) report.commutes = false;
    report.basis.push_back(std::move(r));
  }
  report.dimension = report.basis.size();
  fill_h_table(report, kX, kT);
  return report;
}

CrossValidation cross_validate(unsigned q) {
  const OperatorPde pde = schrodinger_pde();
  SchrodingerReport rec = solve_recurrence(q);
  OperatorAnsatz ansatz;
  ansatz.order = q;
  OperatorResult ans = operator_determining_solve(pde, ansatz);

  std::vector<SymmetryElement> a;
  std::vector<SymmetryElement> b;
  for (const auto& r : rec.basis) a.push_back(SymmetryElement::from_operator(r));
  for (const auto& r : ans.basis) b.push_back(SymmetryElement::from_operator(r));
  std::vector<SymmetryElement> both = a;
  both.insert(both.end(), b.begin(), b.end());

  CrossValidation out;
  out.q = q;
  out.recurrence_dimension = span_rank(a);
  out.ansatz_dimension = span_rank(b);
  out.stacked_rank = span_rank(both);

  if (out.recurrence_dimension != out.stacked_rank || out.ansatz_dimension != out.stacked_rank) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!in_span(b, a[i])) {
        throw SpanMismatch("recurrence element " + rec.basis[i].to_string() + " is not in the ansatz span");
      }
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!in_span(a, b[i])) {
        throw SpanMismatch("ansatz element " + ans.basis[i].to_string() + " is not in the recurrence span");
      }
    }
    throw SpanMismatch("bases are linearly dependent");
  }

  SchrodingerReport from_ansatz;
  from_ansatz.q = q;
  from_ansatz.basis = ans.basis;
  fill_h_table(from_ansatz, kX, kT);
  out.bidegrees_ok = rec.bidegrees_ok && from_ansatz.bidegrees_ok;
  return out;
}

std::vector<std::pair<GaussRat, GaussRat>> exponential_grid() {
  const GaussRat one(1);
  const GaussRat i = GaussRat::imag_unit();
  const GaussRat zero;
  return {{one, zero}, {-one, zero}, {zero, one}, {zero, -one},
          {i, zero},   {-i, zero},   {zero, i},   {one + i, one + i}};
}

std::vector<ScanPoint> scan_exponentials(const OperatorPde& pde, const std::vector<unsigned>& orders,
                                         const std::vector<std::pair<GaussRat, GaussRat>>& grid) {
  if (pde.context()->translation_count() != 2) {
    throw DimensionMismatch("the exponential scan expects two translation variables");
  }
  std::vector<std::future<ScanPoint>> jobs;
  for (unsigned q : orders) {
    for (const auto& [lambda, mu] : grid) {
      jobs.push_back(std::async(std::launch::async, [&pde, q, lambda, mu] {
        OperatorAnsatz ansatz;
        ansatz.order = q;
        ansatz.weights = {lambda, mu};
        return ScanPoint{lambda, mu, q, operator_determining_solve(pde, ansatz).basis.size()};
      }));
    }
  }
  std::vector<ScanPoint> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

PdeSystem heat_equation(unsigned max_order) {
  JetContextPtr ctx = JetContext::make({"t", "y"}, {"u"}, std::max(max_order, 2u), {"y"});
  ExpPoly u_yy = ExpPoly::variable(ctx->vars(), ctx->jet_or_throw(0, {0, 2}));
  return PdeSystem::evolution(ctx, 0, {u_yy});
}

std::vector<Weight> default_weight_samples(std::size_t translation_count) {
  const GaussRat one(1);
  const GaussRat i = GaussRat::imag_unit();
  std::vector<Weight> out{Weight(translation_count, GaussRat{})};
  if (translation_count == 0) return out;
  for (const GaussRat& c : {one, -one, i, -i, one + i}) out.emplace_back(translation_count, c);
  return out;
}

EvolutionReport evolution_case(const PdeSystem& input, unsigned q, const EvolutionCaps& caps,
                               const std::vector<Weight>& weights) {
  const unsigned budget = evolution_budget(q, input.order());
  PdeSystem sys = input.context()->max_order() >= budget
                      ? input
                      : input.rebase(input.context()->with_max_order(budget));
  const JetContextPtr& ctx = sys.context();
  const auto& tvars = ctx->vars()->translations();

  EvolutionReport out;
  out.q = q;
  out.context = ctx;
  std::optional<std::size_t> v;
  for (const auto& w : weights) {
    EvolutionAnsatz ansatz;
    ansatz.order = q;
    ansatz.jet_degree = caps.jet_degree;
    ansatz.poly_degree = caps.poly_degree;
    ansatz.weights = w;
    EvolutionResult res = evolution_determining_solve(sys, ansatz);

    EvolutionRun run;
    run.weight = w;
    run.hints = std::move(res.hints);
    for (auto& eta : res.characteristics) {
      auto residuals = apply_on_solutions(GenVectorField::evolutionary(ctx, eta), sys);
      if (!std::all_of(residuals.begin(), residuals.end(), [](const ExpPoly& r) { return r.is_zero(); })) {
        run.verified = false;
      }
      unsigned deg = 0;
      for (const auto& c : eta) deg = std::max(deg, c.degree_in(std::span<const std::size_t>(tvars)));
      run.translation_degrees.push_back(deg);

      if (!is_zero_weight(w)) {
        unsigned ord = 0;
        for (const auto& c : eta) ord = std::max(ord, jet_order(*ctx, c));
        if (ord >= 2) {
          for (const auto& c : eta) {
            for (std::size_t var = ctx->m(); var < ctx->vars()->size(); ++var) {
              if (order_of(ctx->vars()->var(var).multiindex) != ord || !c.depends_on(var)) continue;
              ExpPoly d = c.partial(var);
              if (d.is_constant() && !d.is_zero()) out.nonzero_weights_consistent = false;
            }
          }
        }
      }
      run.characteristics.push_back(std::move(eta));
    }
    if (is_zero_weight(w) && !v) v = run.characteristics.size();
    out.all_verified = out.all_verified && run.verified;
    out.runs.push_back(std::move(run));
  }

  out.v = v.value_or(0);
  for (const auto& run : out.runs) {
    if (!is_zero_weight(run.weight) || out.v == 0) continue;
    for (unsigned d : run.translation_degrees)
      if (d + 1 > out.v) out.degrees_within_bound = false;
  }
  return out;
}

}  // namespace symkit
