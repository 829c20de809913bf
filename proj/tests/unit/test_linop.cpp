#include <doctest.h>

#include "generators.hpp"
#include "symkit/casestudies.hpp"
#include "symkit/error.hpp"
#include "symkit/linop.hpp"
#include "symkit/structure.hpp"

using namespace symkit;

namespace {

struct Ops {
  ContextPtr ctx = VarContext::independents({"t", "x"}, {"t", "x"});
  GaussRat i = GaussRat::imag_unit();
  ExpPoly t = ExpPoly::variable(ctx, "t");
  ExpPoly x = ExpPoly::variable(ctx, "x");
  LinDiffOp one = LinDiffOp::identity(ctx);
  LinDiffOp dt = LinDiffOp::derivative(ctx, 0);
  LinDiffOp dx = LinDiffOp::derivative(ctx, 1);
  LinDiffOp l = i * dt + LinDiffOp::derivative(ctx, 1, 2);

  LinDiffOp mul(const ExpPoly& a) const { return LinDiffOp::multiplication(a); }
};

std::vector<SymmetryElement> elements(const std::vector<LinDiffOp>& ops) {
  std::vector<SymmetryElement> out;
  for (const auto& r : ops) out.push_back(SymmetryElement::from_operator(r));
  return out;
}

bool same_span(const std::vector<LinDiffOp>& a, const std::vector<LinDiffOp>& b) {
  auto ea = elements(a);
  auto eb = elements(b);
  auto all = ea;
  all.insert(all.end(), eb.begin(), eb.end());
  std::size_t r = span_rank(all);
  return r == span_rank(ea) && r == span_rank(eb);
}

}  // namespace

TEST_CASE_FIXTURE(Ops, "composition examples") {
  CHECK(compose(dx, mul(x)) == compose(mul(x), dx) + one);
  LinDiffOp a = mul(t * x) * GaussRat(3) + compose(mul(x.pow(2)), dx);
  CHECK(compose(one, a) == a);
  CHECK(compose(a, one) == a);
  CHECK(compose(LinDiffOp::derivative(ctx, 1, 2), mul(x.pow(2))) ==
        compose(mul(x.pow(2)), LinDiffOp::derivative(ctx, 1, 2)) + GaussRat(4) * compose(mul(x), dx) +
            GaussRat(2) * one);
}

TEST_CASE_FIXTURE(Ops, "commutator examples") {
  LinDiffOp p = -i * dx;
  CHECK(commutator(mul(x), p) == i * one);
  CHECK(commutator(l, l).is_zero());
  CHECK(commutator(p, l).is_zero());
}

TEST_CASE_FIXTURE(Ops, "rendering and order") {
  LinDiffOp r = compose(mul(t), dx) - mul(x) * (i * GaussRat::ratio(1, 2));
  CHECK(r.order() == 1);
  CHECK(r.to_string() == "(t)*D[x] + (-1/2*i*x)");
  CHECK(LinDiffOp(ctx).order() == 0);
}

TEST_CASE("property: composition matches successive application") {
  auto ctx = VarContext::independents({"t", "x"}, {"t", "x"});
  testing::Gen gen(0x11);
  for (int n = 0; n < 150; ++n) {
    LinDiffOp a = gen.op(ctx, 2, 3, 2, true);
    LinDiffOp b = gen.op(ctx, 2, 3, 2, true);
    ExpPoly f = gen.poly(ctx, 4, 4, true);
    REQUIRE(compose(a, b).apply(f) == a.apply(b.apply(f)));
  }
}

TEST_CASE("property: composition is associative, commutator satisfies Jacobi") {
  auto ctx = VarContext::independents({"t", "x"}, {"t", "x"});
  testing::Gen gen(0x12);
  for (int n = 0; n < 120; ++n) {
    LinDiffOp a = gen.op(ctx, 2, 2, 2, true);
    LinDiffOp b = gen.op(ctx, 2, 2, 2, true);
    LinDiffOp c = gen.op(ctx, 2, 2, 2, true);
    REQUIRE(compose(compose(a, b), c) == compose(a, compose(b, c)));
    LinDiffOp jacobi = commutator(commutator(a, b), c) + commutator(commutator(b, c), a) +
                       commutator(commutator(c, a), b);
    REQUIRE(jacobi.is_zero());
    REQUIRE(commutator(a, b) == -commutator(b, a));
  }
}

TEST_CASE_FIXTURE(Ops, "operator equations") {
  OperatorPde pde(l, 0);
  CHECK(pde.flow() == i * LinDiffOp::derivative(ctx, 1, 2));
  CHECK(pde.reduce(dt) == i * LinDiffOp::derivative(ctx, 1, 2));
  CHECK(pde.reduce(compose(mul(t), dt)) == compose(mul(t), i * LinDiffOp::derivative(ctx, 1, 2)));
  CHECK(pde.is_symmetry(dx));
  CHECK_FALSE(pde.is_symmetry(mul(x)));
  CHECK_THROWS_AS(OperatorPde(LinDiffOp::derivative(ctx, 1, 2), 0), InvalidOperator);
  CHECK_THROWS_AS(OperatorPde(compose(mul(x), dt) + dx, 0), InvalidOperator);
  CHECK_THROWS_AS(OperatorPde(dt + compose(dt, dx), 0), InvalidOperator);
}

TEST_CASE_FIXTURE(Ops, "polynomial solutions") {
  OperatorPde pde(l, 0);
  auto sols = polynomial_solutions(pde, 3);
  REQUIRE(sols);
  CHECK(sols->size() == 4);
  for (const auto& psi : *sols) CHECK(l.apply(psi).is_zero());
  CHECK(std::count(sols->begin(), sols->end(), x.pow(2) + GaussRat(2) * i * t) == 1);

  OperatorPde growing(dt - compose(mul(x), dx), 0);
  CHECK_FALSE(polynomial_solutions(growing, 1, 8).has_value());
}

TEST_CASE_FIXTURE(Ops, "Schrodinger symmetry operators") {
  OperatorPde pde(l, 0);
  OperatorAnsatz ansatz;
  ansatz.order = 1;
  OperatorResult r1 = operator_determining_solve(pde, ansatz);
  CHECK(r1.basis.size() == 3);
  CHECK(same_span(r1.basis, {one, dx, compose(mul(t), dx) - mul(x) * (i * GaussRat::ratio(1, 2))}));

  ansatz.order = 2;
  CHECK(operator_determining_solve(pde, ansatz).basis.size() == 6);

  ansatz.weights = {GaussRat(1), GaussRat{}};
  CHECK(operator_determining_solve(pde, ansatz).basis.empty());
  ansatz.weights = {GaussRat{}, GaussRat::imag_unit()};
  CHECK(operator_determining_solve(pde, ansatz).basis.empty());
}

TEST_CASE_FIXTURE(Ops, "every returned operator passes both oracles") {
  OperatorPde pde(l, 0);
  auto sols = polynomial_solutions(pde, 5);
  REQUIRE(sols);
  for (unsigned q = 0; q <= 3; ++q) {
    OperatorAnsatz ansatz;
    ansatz.order = q;
    for (const auto& r : operator_determining_solve(pde, ansatz).basis) {
      REQUIRE(pde.residual(r).is_zero());
      for (const auto& psi : *sols) REQUIRE(l.apply(r.apply(psi)).is_zero());
    }
  }
}

TEST_CASE_FIXTURE(Ops, "commutators close on the lower-order span") {
  OperatorPde pde(l, 0);
  std::vector<std::vector<LinDiffOp>> by_order;
  for (unsigned q = 0; q <= 3; ++q) {
    OperatorAnsatz ansatz;
    ansatz.order = q;
    by_order.push_back(operator_determining_solve(pde, ansatz).basis);
  }
  for (unsigned q1 = 1; q1 <= 2; ++q1) {
    for (unsigned q2 = 1; q2 <= 2; ++q2) {
      auto target = elements(by_order[q1 + q2 - 1]);
      for (const auto& a : by_order[q1]) {
        for (const auto& b : by_order[q2]) {
          LinDiffOp c = pde.reduce(commutator(a, b));
          REQUIRE(in_span(target, SymmetryElement::from_operator(c)));
        }
      }
    }
  }
}

TEST_CASE_FIXTURE(Ops, "heat operator symmetries") {
  OperatorPde pde(dt - LinDiffOp::derivative(ctx, 1, 2), 0);
  OperatorAnsatz ansatz;
  ansatz.order = 1;
  auto basis = operator_determining_solve(pde, ansatz).basis;
  CHECK(basis.size() == 3);
  CHECK(same_span(basis, {one, dx, compose(mul(t), dx) + mul(x) * GaussRat::ratio(1, 2)}));
  CHECK(operator_dimension_bound(3) == 10);
  CHECK(default_degree_caps(pde, 6) == std::vector<unsigned>{5, 5});
}
