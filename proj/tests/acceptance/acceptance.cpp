// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "symkit/casestudies.hpp"
#include "symkit/structure.hpp"

using namespace symkit;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail = what;
    passed = passed && ok;
  }
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s  %d  %-44s %7.2fs%s%s\n", o.passed ? "PASS" : "FAIL", number, title.c_str(), secs,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
  if (!o.passed) ++failures;
}

constexpr std::size_t kT = 0;
constexpr std::size_t kX = 1;

bool bidegrees_hold(const std::vector<ExpPoly>& h, unsigned q) {
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j].is_zero()) continue;
    if (h[j].degree_in(kT) > j || h[j].degree_in(kX) > q - j) return false;
  }
  return true;
}

bool contains_zero_weight(const EvolutionReport& rep, const ExpPoly& eta) {
  for (const auto& r : rep.runs) {
    if (!is_zero_weight(r.weight)) continue;
    std::vector<SymmetryElement> basis;
    for (const auto& c : r.characteristics) basis.push_back(SymmetryElement::from_characteristic(c));
    return in_span(basis, SymmetryElement::from_characteristic({eta.rebase(rep.context->vars())}));
  }
  return false;
}

bool residual_zero(const GenVectorField& q, const PdeSystem& sys) {
  for (const auto& r : apply_on_solutions(q, sys)) {
    if (!r.is_zero()) return false;
  }
  return true;
}

}  // namespace

int main() {
  const OperatorPde schrodinger = schrodinger_pde();

  criterion(1, "dimension formula v(q) = (q+1)(q+2)/2, q <= 4", [&] {
    Outcome o;
    SymmetrySpace v4 = SymmetrySpace::operator_filtration(schrodinger, 4);
    const std::vector<std::size_t> expected = {1, 3, 6, 10, 15};
    o.require(v4.filtration() == expected, "filtration differs from 1, 3, 6, 10, 15");
    for (unsigned q = 0; q <= 4; ++q) {
      OperatorAnsatz a;
      a.order = q;
      std::size_t v = operator_determining_solve(schrodinger, a).basis.size();
      o.require(v == (q + 1) * (q + 2) / 2, "direct solve at q = " + std::to_string(q) + " gave " + std::to_string(v));
    }
    return o;
  });

  criterion(2, "recurrence and ansatz spans agree, q <= 4", [&] {
    Outcome o;
    for (unsigned q = 0; q <= 4; ++q) {
      CrossValidation cv = cross_validate(q);
      std::size_t v = operator_dimension_bound(q);
      o.require(cv.recurrence_dimension == v && cv.ansatz_dimension == v && cv.stacked_rank == v,
                "rank mismatch at q = " + std::to_string(q));
    }
    return o;
  });

  criterion(3, "exponential weights excluded, q = 1, 2, 3", [&] {
    Outcome o;
    auto grid = exponential_grid();
    o.require(grid.size() == 8, "grid does not have 8 points");
    for (const auto& [l, m] : grid) o.require(!(l.is_zero() && m.is_zero()), "grid contains (0, 0)");
    auto scan = scan_exponentials(schrodinger, {1, 2, 3}, grid);
    o.require(scan.size() == 24, "scan size");
    for (const auto& p : scan) {
      o.require(p.dimension == 0, "nonzero dimension at q = " + std::to_string(p.q) + ", (" + p.lambda.to_string() +
                                      ", " + p.mu.to_string() + ")");
    }
    return o;
  });

  criterion(4, "bidegrees deg_t h_j <= j, deg_x h_j <= q - j", [&] {
    Outcome o;
    for (unsigned q = 0; q <= 4; ++q) {
      SchrodingerReport rec = solve_recurrence(q);
      o.require(rec.bidegrees_ok, "recurrence report at q = " + std::to_string(q));
      for (const auto& h : rec.h_table) o.require(bidegrees_hold(h, q), "recurrence h at q = " + std::to_string(q));
      OperatorAnsatz a;
      a.order = q;
      for (const auto& r : operator_determining_solve(schrodinger, a).basis) {
        o.require(bidegrees_hold(to_h_form(r, kX), q), "ansatz h at q = " + std::to_string(q));
      }
    }
    return o;
  });

  SymmetrySpace v2 = SymmetrySpace::operator_filtration(schrodinger, 2);

  criterion(5, "structure of V(2): commuting nilpotent blocks", [&] {
    Outcome o;
    o.require(v2.dimension() == 6, "dim V(2) != 6");
    auto g = adjoint_matrices(v2);
    o.require(g.size() == 2, "expected two adjoint matrices");
    o.require(g[0] * g[1] == g[1] * g[0], "G(t) and G(x) do not commute");
    for (const auto& m : g) o.require(char_poly(m) == UniPoly::monomial(6), "char_poly is not lambda^6");
    StructuredBasis sb = structured_basis(v2);
    std::size_t total = 0;
    for (const auto& b : sb.blocks) {
      total += b.dimension();
      for (std::size_t s = 0; s < b.nilpotency.size(); ++s) {
        unsigned k = b.nilpotency[s];
        o.require(k >= 1 && k <= b.dimension(), "k out of range");
        o.require(b.eigenvalues[s].is_zero(), "nonzero eigenvalue");
        for (const auto& e : b.elements) o.require(e.degree(s) < k, "degree bound violated");
      }
    }
    o.require(total == 6, "block sizes do not sum to 6");
    o.require(check_structure(v2, sb).all(), "structure checks failed");
    return o;
  });

  criterion(6, "d/dz block_exp = G block_exp; derivatives match blocks", [&] {
    Outcome o;
    for (const SymmetrySpace* space : {&v2}) {
      StructuredBasis sb = structured_basis(*space);
      for (const auto& b : sb.blocks) {
        for (std::size_t s = 0; s < b.restrictions.size(); ++s) {
          std::size_t z = space->translation_vars()[s];
          ExpPolyMatrix e = block_exp(b.restrictions[s], b.eigenvalues[s], b.nilpotency[s], space->context(), z);
          o.require(partial(e, z) == multiply(b.restrictions[s], e), "block_exp ODE fails");
        }
      }
      o.require(check_structure(*space, sb).derivative_consistent, "structured derivatives inconsistent");
    }
    return o;
  });

  criterion(7, "closure of commutators and Lie brackets", [&] {
    Outcome o;
    SymmetrySpace v3 = SymmetrySpace::operator_filtration(schrodinger, 3);
    std::vector<LinDiffOp> low;
    for (const auto& e : v2.basis()) low.push_back(e.to_operator(v2.context()));
    for (std::size_t a = 0; a < low.size(); ++a) {
      for (std::size_t b = a + 1; b < low.size(); ++b) {
        LinDiffOp c = commutator(low[a], low[b]);
        o.require(schrodinger.is_symmetry(c), "commutator is not a symmetry");
        o.require(in_span(v3.basis(), SymmetryElement::from_operator(c)), "commutator outside V(3)");
      }
    }

    PdeSystem heat = heat_equation(12);
    JetContextPtr ctx = heat.context();
    std::vector<GenVectorField> fields;
    for (unsigned q = 0; q <= 2; ++q) {
      EvolutionReport rep = evolution_case(heat_equation(), q, {}, {Weight(1)});
      for (const auto& c : rep.runs[0].characteristics) {
        fields.push_back(GenVectorField::evolutionary(ctx, {c[0].rebase(ctx->vars())}));
      }
    }
    o.require(fields.size() >= 6, "too few heat symmetries");
    for (const auto& f : fields) o.require(residual_zero(f, heat), "heat symmetry has nonzero residual");
    for (std::size_t a = 0; a < fields.size(); ++a) {
      for (std::size_t b = a + 1; b < fields.size(); ++b) {
        o.require(residual_zero(lie_bracket(fields[a], fields[b]), heat), "heat bracket has nonzero residual");
      }
    }
    return o;
  });

  criterion(8, "property suites", [&] {
    Outcome o;
    testing::Gen gen(0xacce97);
    for (int n = 0; n < 1000; ++n) {
      GaussRat a = gen.scalar();
      GaussRat b = gen.scalar();
      GaussRat c = gen.scalar();
      bool ok = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) && a + b == b + a && a * b == b * a &&
                a * (b + c) == a * b + a * c && a + GaussRat{} == a && a * GaussRat(1) == a && a - a == GaussRat{};
      if (!a.is_zero()) ok = ok && a * a.inv() == GaussRat(1);
      o.require(ok, "field axiom");
    }

    auto jctx = JetContext::make({"t", "x"}, {"u"}, 5);
    for (int n = 0; n < 100; ++n) {
      GenVectorField a = gen.field(jctx, 1);
      GenVectorField b = gen.field(jctx, 1);
      GenVectorField c = gen.field(jctx, 1);
      GenVectorField j = lie_bracket(lie_bracket(a, b), c) + lie_bracket(lie_bracket(b, c), a) +
                         lie_bracket(lie_bracket(c, a), b);
      o.require(j.is_zero(), "Jacobi identity for lie_bracket");
    }

    ContextPtr octx = VarContext::independents({"t", "x"}, {"t", "x"});
    for (int n = 0; n < 100; ++n) {
      LinDiffOp a = gen.op(octx, 2, 2, 2, true);
      LinDiffOp b = gen.op(octx, 2, 2, 2, true);
      LinDiffOp c = gen.op(octx, 2, 2, 2, true);
      LinDiffOp j = commutator(commutator(a, b), c) + commutator(commutator(b, c), a) +
                    commutator(commutator(c, a), b);
      o.require(j.is_zero(), "Jacobi identity for commutator");
    }

    auto dctx = JetContext::make({"t", "x"}, {"u", "v"}, 6);
    for (int n = 0; n < 100; ++n) {
      ExpPoly p = gen.jet_poly(*dctx, 2, 4, 3);
      ExpPoly tx = total_derivative(*dctx, total_derivative(*dctx, p, 0), 1);
      ExpPoly xt = total_derivative(*dctx, total_derivative(*dctx, p, 1), 0);
      o.require(tx == xt, "D_t D_x != D_x D_t");
    }
    return o;
  });

  criterion(9, "heat equation evolutionary symmetries", [&] {
    Outcome o;
    PdeSystem heat = heat_equation();
    const JetContext& c = *heat.context();
    auto jet = [&](unsigned jy) { return ExpPoly::variable(c.vars(), c.jet_or_throw(0, {0, jy})); };
    ExpPoly t = ExpPoly::variable(c.vars(), kT);
    ExpPoly y = ExpPoly::variable(c.vars(), std::size_t{1});

    EvolutionReport q1 = evolution_case(heat, 1, {}, default_weight_samples(1));
    ExpPoly galilei = GaussRat(2) * t * jet(1) + y * jet(0);
    o.require(contains_zero_weight(q1, jet(1)), "q = 1 span lacks u_y");
    o.require(contains_zero_weight(q1, galilei), "q = 1 span lacks 2t u_y + y u");
    o.require(q1.all_verified, "q = 1 characteristic failed verification");
    for (const ExpPoly& eta : {jet(1), galilei}) {
      o.require(residual_zero(GenVectorField::evolutionary(heat.context(), {eta}), heat),
                "named characteristic has nonzero residual");
    }

    EvolutionReport q2 = evolution_case(heat, 2, {}, default_weight_samples(1));
    o.require(contains_zero_weight(q2, jet(2)), "q = 2 span lacks u_yy");
    o.require(q2.all_verified, "q = 2 characteristic failed verification");
    o.require(q2.nonzero_weights_consistent, "nonzero weight run has constant leading coefficient");
    return o;
  });

  std::printf("%s: %d failing\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
