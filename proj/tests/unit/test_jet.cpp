#include <doctest.h>

#include "generators.hpp"
#include "symkit/error.hpp"
#include "symkit/jet.hpp"
#include "symkit/structure.hpp"

using namespace symkit;

namespace {

struct Heat {
  JetContextPtr ctx = JetContext::make({"t", "y"}, {"u"}, 6, {"y"});
  PdeSystem sys = PdeSystem::evolution(ctx, 0, {jet({0, 2})});

  ExpPoly var(std::size_t l) const { return ExpPoly::variable(ctx->vars(), l); }
  ExpPoly jet(const Multiindex& j) const { return ExpPoly::variable(ctx->vars(), ctx->jet_or_throw(0, j)); }
  GenVectorField evo(const ExpPoly& eta) const { return GenVectorField::evolutionary(ctx, {eta}); }

  bool annihilates(const GenVectorField& q) const {
    for (const auto& r : apply_on_solutions(q, sys)) {
      if (!r.is_zero()) return false;
    }
    return true;
  }
};

/// Value of p after replacing u_J by d^J f; f is a function of the
/// independents only.
ExpPoly on_function(const JetContext& ctx, const ExpPoly& p, const ExpPoly& f) {
  ExpPoly out = p;
  for (std::size_t v = ctx.m(); v < ctx.vars()->size(); ++v) {
    if (!out.depends_on(v)) continue;
    const Multiindex& j = ctx.vars()->var(v).multiindex;
    ExpPoly d = f;
    for (std::size_t l = 0; l < j.size(); ++l) {
      for (unsigned k = 0; k < j[l]; ++k) d = d.partial(l);
    }
    out = out.substitute(v, d);
  }
  return out;
}

}  // namespace

TEST_CASE("jet variable layout and names") {
  auto ctx = JetContext::make({"t", "x"}, {"u"}, 2);
  CHECK(ctx->vars()->size() == 2 + 6);
  CHECK(ctx->jet(0, {0, 0}) == std::size_t{2});
  CHECK(ctx->vars()->var(*ctx->jet(0, {1, 1})).name == "u_tx");
  CHECK(ctx->vars()->var(*ctx->jet(0, {0, 2})).name == "u_xx");
  CHECK_FALSE(ctx->jet(0, {3, 0}).has_value());
  CHECK_THROWS_AS(ctx->jet_or_throw(0, {3, 0}), OrderOverflow);
  CHECK(JetContext::jet_name("u", {"x1", "x2"}, {2, 1}) == "u_{x1^2,x2}");
  CHECK(ctx->with_max_order(4)->vars()->size() == 2 + 15);
}

TEST_CASE_FIXTURE(Heat, "total derivative examples") {
  ExpPoly u = jet({0, 0});
  ExpPoly uy = jet({0, 1});
  CHECK(total_derivative(*ctx, u * uy, 1) == uy.pow(2) + u * jet({0, 2}));
  CHECK(total_derivative(*ctx, var(1), 1) == ExpPoly::constant(ctx->vars(), GaussRat(1)));
  CHECK(total_derivative(*ctx, uy, 0) == jet({1, 1}));
  CHECK(total_derivative(*ctx, u, Multiindex{1, 2}) == jet({1, 2}));
  CHECK_THROWS_AS(total_derivative(*ctx, jet({0, 6}), 1), OrderOverflow);
}

TEST_CASE("property: total derivatives commute") {
  auto ctx = JetContext::make({"t", "x"}, {"u", "v"}, 4);
  testing::Gen gen(0x7001);
  for (int n = 0; n < 150; ++n) {
    ExpPoly p = gen.jet_poly(*ctx, 2, 4, 3);
    ExpPoly a = total_derivative(*ctx, total_derivative(*ctx, p, 0), 1);
    ExpPoly b = total_derivative(*ctx, total_derivative(*ctx, p, 1), 0);
    REQUIRE(a == b);
  }
}

TEST_CASE("property: total derivative agrees with differentiation of a substituted function") {
  auto ctx = JetContext::make({"t", "x"}, {"u"}, 4, {"x"});
  testing::Gen gen(0x7002);
  std::vector<std::size_t> indep = {0, 1};
  for (int n = 0; n < 150; ++n) {
    ExpPoly p = gen.jet_poly(*ctx, 2, 3, 3);
    ExpPoly f = gen.poly(ctx->vars(), indep, 3, 3, true);
    std::size_t l = gen.index(2);
    REQUIRE(on_function(*ctx, total_derivative(*ctx, p, l), f) == on_function(*ctx, p, f).partial(l));
    Multiindex j = {static_cast<unsigned>(gen.integer(0, 1)), static_cast<unsigned>(gen.integer(0, 1))};
    ExpPoly direct = on_function(*ctx, p, f);
    for (std::size_t k = 0; k < 2; ++k) {
      for (unsigned r = 0; r < j[k]; ++r) direct = direct.partial(k);
    }
    REQUIRE(on_function(*ctx, total_derivative(*ctx, p, j), f) == direct);
  }
}

TEST_CASE_FIXTURE(Heat, "prolongation examples") {
  GenVectorField dx(ctx, {ExpPoly(ctx->vars()), ExpPoly::constant(ctx->vars(), GaussRat(1))}, {ExpPoly(ctx->vars())});
  Prolongation p = prolong(dx, 3);
  for (const auto& [v, c] : p.coefficients) CHECK(c.is_zero());

  CHECK(prolong(evo(jet({0, 1})), 1).coefficient(0, {0, 1}) == jet({0, 2}));
  ExpPoly u = jet({0, 0});
  CHECK(prolong(evo(u.pow(2)), 1).coefficient(0, {0, 1}) == GaussRat(2) * u * jet({0, 1}));
  CHECK(prolong(evo(u.pow(2)), 2).coefficient(0, {0, 2}) ==
        GaussRat(2) * jet({0, 1}).pow(2) + GaussRat(2) * u * jet({0, 2}));
}

TEST_CASE_FIXTURE(Heat, "Lie bracket examples") {
  ExpPoly zero(ctx->vars());
  ExpPoly one = ExpPoly::constant(ctx->vars(), GaussRat(1));
  GenVectorField dy(ctx, {zero, one}, {zero});
  GenVectorField dt(ctx, {one, zero}, {zero});
  GenVectorField ydu(ctx, {zero, zero}, {var(1)});
  GenVectorField du(ctx, {zero, zero}, {one});
  CHECK(lie_bracket(dy, ydu) == du);
  CHECK(lie_bracket(dy, dt).is_zero());
  GenVectorField q = evo(jet({0, 1}) * jet({0, 0}) + var(1));
  CHECK(lie_bracket(q, q).is_zero());
}

TEST_CASE("property: Lie bracket is bilinear, antisymmetric and satisfies Jacobi") {
  auto ctx = JetContext::make({"t", "x"}, {"u"}, 5);
  testing::Gen gen(0x7003);
  for (int n = 0; n < 120; ++n) {
    GenVectorField a = gen.field(ctx, 1);
    GenVectorField b = gen.field(ctx, 1);
    GenVectorField c = gen.field(ctx, 1);
    GaussRat s = gen.gauss(4, 3);
    REQUIRE(lie_bracket(a, b) + lie_bracket(b, a) == GenVectorField::zero(ctx));
    REQUIRE(lie_bracket(s * a + b, c) == s * lie_bracket(a, c) + lie_bracket(b, c));
    GenVectorField jacobi = lie_bracket(lie_bracket(a, b), c) + lie_bracket(lie_bracket(b, c), a) +
                            lie_bracket(lie_bracket(c, a), b);
    REQUIRE(jacobi.is_zero());
  }
}

TEST_CASE("property: prolongation is linear in the field") {
  auto ctx = JetContext::make({"t", "x"}, {"u", "v"}, 4);
  testing::Gen gen(0x7004);
  for (int n = 0; n < 100; ++n) {
    GenVectorField a = gen.field(ctx, 1);
    GenVectorField b = gen.field(ctx, 1);
    GaussRat s = gen.gauss();
    GaussRat r = gen.gauss();
    Prolongation pa = prolong(a, 2);
    Prolongation pb = prolong(b, 2);
    Prolongation ps = prolong(s * a + r * b, 2);
    for (std::size_t v = ctx->m(); v < ctx->vars()->size(); ++v) {
      const Multiindex& j = ctx->vars()->var(v).multiindex;
      if (order_of(j) > 2) continue;
      std::size_t alpha = static_cast<std::size_t>(ctx->vars()->var(v).dependent);
      REQUIRE(ps.coefficient(alpha, j) == s * pa.coefficient(alpha, j) + r * pb.coefficient(alpha, j));
    }
  }
}

TEST_CASE_FIXTURE(Heat, "symmetries of the heat equation on solutions") {
  ExpPoly u = jet({0, 0});
  ExpPoly uy = jet({0, 1});
  CHECK(annihilates(evo(uy)));
  CHECK(annihilates(evo(GaussRat(2) * var(0) * uy + var(1) * u)));
  auto res = apply_on_solutions(evo(u.pow(2)), sys);
  REQUIRE(res.size() == 1);
  CHECK(res[0] == GaussRat(-2) * uy.pow(2));
}

TEST_CASE_FIXTURE(Heat, "solved-form reduction") {
  CHECK(sys.is_principal(ctx->jet_or_throw(0, {1, 0})));
  CHECK(sys.is_principal(ctx->jet_or_throw(0, {2, 1})));
  CHECK_FALSE(sys.is_principal(ctx->jet_or_throw(0, {0, 3})));
  CHECK(sys.reduce(jet({2, 0})) == jet({0, 4}));
  CHECK(sys.reduce(jet({1, 1}) * jet({0, 0})) == jet({0, 3}) * jet({0, 0}));
  CHECK(sys.reduce(jet({3, 0})) == jet({0, 6}));
  CHECK_THROWS_AS(sys.reduce(jet({3, 1})), NotSolvedForm);
  CHECK(sys.time_axis() == std::size_t{0});
  CHECK(sys.order() == 2);
  CHECK_THROWS_AS(PdeSystem(ctx, {ExpPoly::constant(ctx->vars(), GaussRat(1))}), DegenerateEquation);
  CHECK_THROWS_AS(PdeSystem::evolution(ctx, 0, {jet({1, 0})}), NotSolvedForm);
}

TEST_CASE_FIXTURE(Heat, "evolution determining solve on the heat equation") {
  auto span_contains = [&](const std::vector<std::vector<ExpPoly>>& chars, const ExpPoly& eta) {
    std::vector<SymmetryElement> basis;
    for (const auto& c : chars) basis.push_back(SymmetryElement::from_characteristic(c));
    return in_span(basis, SymmetryElement::from_characteristic({eta}));
  };
  EvolutionAnsatz ansatz;
  ansatz.order = 1;
  EvolutionResult r1 = evolution_determining_solve(sys, ansatz);
  CHECK(span_contains(r1.characteristics, jet({0, 1})));
  CHECK(span_contains(r1.characteristics, GaussRat(2) * var(0) * jet({0, 1}) + var(1) * jet({0, 0})));
  for (const auto& c : r1.characteristics) CHECK(annihilates(evo(c[0])));

  ansatz.order = 0;
  CHECK(span_contains(evolution_determining_solve(sys, ansatz).characteristics, jet({0, 0})));

  ansatz.order = 2;
  EvolutionResult r2 = evolution_determining_solve(sys, ansatz);
  CHECK(span_contains(r2.characteristics, jet({0, 2})));

  auto small = ctx->with_max_order(2);
  CHECK_THROWS_AS(evolution_determining_solve(sys.rebase(small), ansatz), OrderOverflow);
}

TEST_CASE_FIXTURE(Heat, "brackets of computed symmetries stay symmetries") {
  EvolutionAnsatz ansatz;
  ansatz.order = 2;
  auto chars = evolution_determining_solve(sys, ansatz).characteristics;
  REQUIRE(chars.size() >= 3);
  for (std::size_t a = 0; a < chars.size(); ++a) {
    for (std::size_t b = a + 1; b < chars.size(); ++b) {
      REQUIRE(annihilates(lie_bracket(evo(chars[a][0]), evo(chars[b][0]))));
    }
  }
}
