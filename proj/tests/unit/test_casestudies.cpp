#include <doctest.h>

#include "generators.hpp"
#include "symkit/casestudies.hpp"
#include "symkit/error.hpp"

using namespace symkit;

namespace {

/// N(X) = X p + p X with p = -i d/dx, applied j times.
LinDiffOp n_power(const LinDiffOp& x, std::size_t x_axis, std::size_t j) {
  LinDiffOp p = LinDiffOp::derivative(x.context(), x_axis) * (-GaussRat::imag_unit());
  LinDiffOp out = x;
  for (std::size_t k = 0; k < j; ++k) out = compose(out, p) + compose(p, out);
  return out;
}

bool contains(const std::vector<EvolutionRun>& runs, const JetContext& ctx, const ExpPoly& eta) {
  for (const auto& r : runs) {
    if (!is_zero_weight(r.weight)) continue;
    std::vector<SymmetryElement> basis;
    for (const auto& c : r.characteristics) basis.push_back(SymmetryElement::from_characteristic(c));
    return in_span(basis, SymmetryElement::from_characteristic({eta.rebase(ctx.vars())}));
  }
  return false;
}

}  // namespace

TEST_CASE("Schrodinger equation setup") {
  OperatorPde pde = schrodinger_pde();
  CHECK(pde.evolution_axis() == 0);
  CHECK(pde.context()->translation_count() == 2);
  CHECK(pde.op().to_string() == "(1)*D[x,x] + (i)*D[t]");
}

TEST_CASE("h-form agrees with repeated anticommutators") {
  auto ctx = schrodinger_pde().context();
  testing::Gen gen(0xc0);
  for (int n = 0; n < 60; ++n) {
    std::vector<ExpPoly> h;
    std::size_t q = gen.index(4);
    for (std::size_t j = 0; j <= q; ++j) h.push_back(gen.poly(ctx, 3, 3));
    LinDiffOp direct(ctx);
    for (std::size_t j = 0; j <= q; ++j) direct += n_power(LinDiffOp::multiplication(h[j]), 1, j);
    REQUIRE(from_h_form(h, ctx, 1) == direct);
    auto back = to_h_form(direct, 1);
    back.resize(h.size(), ExpPoly(ctx));
    REQUIRE(from_h_form(back, ctx, 1) == direct);
  }
  CHECK_THROWS_AS(to_h_form(LinDiffOp::derivative(ctx, 0), 1), InvalidOperator);
}

TEST_CASE("recurrence solutions") {
  SchrodingerReport r0 = solve_recurrence(0);
  CHECK(r0.dimension == 1);
  REQUIRE(r0.h_table.size() == 1);
  CHECK(r0.h_table[0][0].is_constant());

  SchrodingerReport r1 = solve_recurrence(1);
  CHECK(r1.dimension == 3);
  CHECK(r1.bidegrees_ok);
  CHECK(r1.commutes);
  for (const auto& h : r1.h_table) {
    REQUIRE(h.size() == 2);
    CHECK(h[1].partial(1).is_zero());
    CHECK(h[0].partial(0).is_zero());
    CHECK(h[1].partial(0) == -h[0].partial(1));
    CHECK(h[1].degree_in(std::size_t{0}) <= 1);
    CHECK(h[0].degree_in(std::size_t{1}) <= 1);
  }

  CHECK(solve_recurrence(3).dimension == 10);
}

TEST_CASE("both routes agree") {
  for (unsigned q = 0; q <= 2; ++q) {
    CrossValidation cv = cross_validate(q);
    CHECK(cv.recurrence_dimension == operator_dimension_bound(q));
    CHECK(cv.ansatz_dimension == cv.recurrence_dimension);
    CHECK(cv.stacked_rank == cv.ansatz_dimension);
    CHECK(cv.bidegrees_ok);
  }
}

TEST_CASE("exponential grid") {
  auto grid = exponential_grid();
  CHECK(grid.size() == 8);
  for (const auto& [l, m] : grid) CHECK_FALSE((l.is_zero() && m.is_zero()));
  auto scan = scan_exponentials(schrodinger_pde(), {1}, grid);
  REQUIRE(scan.size() == 8);
  for (std::size_t k = 0; k < scan.size(); ++k) {
    CHECK(scan[k].dimension == 0);
    CHECK(scan[k].lambda == grid[k].first);
    CHECK(scan[k].mu == grid[k].second);
  }
}

TEST_CASE("heat equation evolution case") {
  PdeSystem heat = heat_equation();
  const JetContext& c = *heat.context();
  auto jet = [&](unsigned jy) { return ExpPoly::variable(c.vars(), c.jet_or_throw(0, {0, jy})); };
  ExpPoly t = ExpPoly::variable(c.vars(), std::size_t{0});
  ExpPoly y = ExpPoly::variable(c.vars(), std::size_t{1});

  EvolutionReport q0 = evolution_case(heat, 0, {}, {Weight(1)});
  CHECK(contains(q0.runs, *q0.context, jet(0)));

  EvolutionReport q1 = evolution_case(heat, 1, {}, default_weight_samples(1));
  CHECK(contains(q1.runs, *q1.context, jet(1)));
  CHECK(contains(q1.runs, *q1.context, GaussRat(2) * t * jet(1) + y * jet(0)));
  CHECK(q1.all_verified);
  CHECK(q1.runs.size() == 6);

  EvolutionReport q2 = evolution_case(heat, 2, {}, default_weight_samples(1));
  CHECK(contains(q2.runs, *q2.context, jet(2)));
  CHECK(q2.all_verified);
  CHECK(q2.nonzero_weights_consistent);
  CHECK(q2.degrees_within_bound);
  for (const auto& r : q2.runs) {
    if (!is_zero_weight(r.weight)) CHECK(r.characteristics.empty());
  }
}

TEST_CASE("sample weights") {
  auto w = default_weight_samples(2);
  REQUIRE(w.size() == 6);
  CHECK(is_zero_weight(w[0]));
  CHECK(w[3] == Weight{GaussRat::imag_unit(), GaussRat::imag_unit()});
}
