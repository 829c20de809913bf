#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "symkit/error.hpp"
#include "symkit/linalg.hpp"

using namespace symkit;

namespace {

ExactMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<Vector> out;
  for (const auto& r : rows) {
    Vector v;
    for (long x : r) v.push_back(GaussRat(x));
    out.push_back(v);
  }
  return ExactMatrix::from_rows(out);
}

ExactMatrix jordan(std::size_t n, const GaussRat& lambda) {
  ExactMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    m(k, k) = lambda;
    if (k + 1 < n) m(k, k + 1) = GaussRat(1);
  }
  return m;
}

ExactMatrix random_matrix(testing::Gen& gen, std::size_t r, std::size_t c, double density) {
  ExactMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (gen.coin(density)) m(i, j) = gen.gauss(5, 3);
    }
  }
  return m;
}

bool is_zero_matrix(const ExpPolyMatrix& m) {
  for (const auto& row : m) {
    for (const auto& e : row) {
      if (!e.is_zero()) return false;
    }
  }
  return true;
}

ExpPolyMatrix difference(ExpPolyMatrix a, const ExpPolyMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
  }
  return a;
}

}  // namespace

TEST_CASE("nullspace examples") {
  CHECK(nullspace(ExactMatrix::identity(3)).empty());
  CHECK(nullspace(ExactMatrix(2, 3)).size() == 3);
  auto k = nullspace(mat({{1, 1}, {2, 2}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == Vector{GaussRat(-1), GaussRat(1)});
}

TEST_CASE("char_poly examples") {
  ExactMatrix d = mat({{2, 0}, {0, 3}});
  CHECK(char_poly(d) == UniPoly::linear(GaussRat(2)) * UniPoly::linear(GaussRat(3)));
  CHECK(char_poly(jordan(2, GaussRat{})) == UniPoly::monomial(2));
  CHECK(char_poly(ExactMatrix(5, 5)) == UniPoly::monomial(5));
  CHECK_THROWS_AS(char_poly(ExactMatrix(2, 3)), NonSquare);
}

TEST_CASE("property: char_poly agrees with the Cayley-Hamilton theorem and the trace") {
  testing::Gen gen(314);
  for (int n = 0; n < 60; ++n) {
    std::size_t size = 1 + gen.index(5);
    ExactMatrix m = random_matrix(gen, size, size, 0.6);
    UniPoly p = char_poly(m);
    REQUIRE(p.degree() == static_cast<int>(size));
    REQUIRE(p.leading() == GaussRat(1));
    REQUIRE(p.coeff(size - 1) == -m.trace());
    REQUIRE(p.eval(m).is_zero());
  }
}

TEST_CASE("property: rref is idempotent and nullspace vectors are annihilated") {
  testing::Gen gen(2718);
  for (int n = 0; n < 100; ++n) {
    ExactMatrix m = random_matrix(gen, 1 + gen.index(6), 1 + gen.index(6), 0.4);
    RrefResult r = rref(m);
    REQUIRE(rref(r.reduced).reduced == r.reduced);
    auto kernel = nullspace(m);
    REQUIRE(kernel.size() + rank(m) == m.cols());
    for (const auto& v : kernel) {
      Vector image = m * v;
      for (const auto& c : image) REQUIRE(c.is_zero());
    }
  }
}

TEST_CASE("property: sparse elimination matches the dense nullspace") {
  testing::Gen gen(1618);
  for (int n = 0; n < 100; ++n) {
    ExactMatrix m = random_matrix(gen, 1 + gen.index(8), 1 + gen.index(8), 0.3);
    SparseSystem s(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      SparseSystem::Row row;
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!m(r, c).is_zero()) row.emplace_back(c, m(r, c));
      }
      s.add_row(row);
    }
    REQUIRE(s.rank() == rank(m));
    REQUIRE(s.nullspace() == nullspace(m));
  }
}

TEST_CASE("solve_in_span") {
  ExactMatrix basis = mat({{1, 0}, {0, 1}, {1, 1}});
  ExactMatrix rhs = mat({{2}, {3}, {5}});
  auto ok = solve_in_span(basis, rhs);
  REQUIRE(ok.coordinates);
  CHECK(*ok.coordinates == mat({{2}, {3}}));
  auto bad = solve_in_span(basis, mat({{1, 2}, {1, 3}, {1, 5}}));
  CHECK_FALSE(bad.coordinates);
  CHECK(bad.failing_column == 0);
}

TEST_CASE("Gaussian rational roots") {
  UniPoly p = UniPoly::linear(GaussRat::imag_unit()) * UniPoly::linear(GaussRat::imag_unit()) *
              UniPoly::linear(GaussRat::ratio(-3, 2));
  RootSplit s = gaussian_rational_roots(p);
  REQUIRE(s.roots.size() == 2);
  CHECK(s.cofactor.degree() == 0);
  UniPoly irreducible(std::vector<GaussRat>{GaussRat(-2), GaussRat{}, GaussRat(1)});
  RootSplit t = gaussian_rational_roots(irreducible * UniPoly::linear(GaussRat(1)));
  REQUIRE(t.roots.size() == 1);
  CHECK(t.roots[0].first == GaussRat(1));
  CHECK(t.cofactor.degree() == 2);
}

TEST_CASE("common_decompose examples") {
  auto one = common_decompose({jordan(2, GaussRat{})});
  REQUIRE(one.rho() == 1);
  CHECK(one.blocks[0].eigenvalues[0] == GaussRat{});
  CHECK(one.blocks[0].nilpotency[0] == 2);

  auto two = common_decompose({mat({{1, 0}, {0, 2}}), mat({{3, 0}, {0, 4}})});
  REQUIRE(two.rho() == 2);
  std::vector<std::pair<GaussRat, GaussRat>> pairs;
  for (const auto& b : two.blocks) {
    CHECK(b.dimension() == 1);
    pairs.emplace_back(*b.eigenvalues[0], *b.eigenvalues[1]);
  }
  CHECK(std::count(pairs.begin(), pairs.end(), std::make_pair(GaussRat(1), GaussRat(3))) == 1);
  CHECK(std::count(pairs.begin(), pairs.end(), std::make_pair(GaussRat(2), GaussRat(4))) == 1);

  CHECK_THROWS_AS(common_decompose({jordan(2, GaussRat{}), mat({{1, 0}, {0, 2}})}), NotCommuting);

  auto irrational = common_decompose({mat({{0, 2}, {1, 0}})});
  CHECK_FALSE(irrational.fully_resolved());
  REQUIRE(irrational.rho() == 1);
  CHECK(irrational.blocks[0].undecomposed);
  CHECK_FALSE(irrational.blocks[0].eigenvalues[0].has_value());
}

TEST_CASE("property: decomposition of commuting families") {
  testing::Gen gen(4242);
  for (int n = 0; n < 40; ++n) {
    // Conjugate block-diagonal Jordan data by a random invertible matrix.
    std::size_t size = 2 + gen.index(4);
    ExactMatrix p;
    do {
      p = random_matrix(gen, size, size, 0.7);
    } while (rank(p) != size);
    auto pinv_solve = solve_in_span(p, ExactMatrix::identity(size));
    ExactMatrix pinv = *pinv_solve.coordinates;
    ExactMatrix a(size, size);
    ExactMatrix b(size, size);
    std::size_t k = 0;
    while (k < size) {
      std::size_t len = std::min<std::size_t>(1 + gen.index(3), size - k);
      GaussRat la = GaussRat(gen.integer(-2, 2));
      GaussRat lb = GaussRat(gen.integer(-2, 2)) * GaussRat::imag_unit();
      for (std::size_t j = 0; j < len; ++j) {
        a(k + j, k + j) = la;
        b(k + j, k + j) = lb;
        if (j + 1 < len) a(k + j, k + j + 1) = GaussRat(1);
      }
      k += len;
    }
    ExactMatrix ga = p * a * pinv;
    ExactMatrix gb = p * b * pinv;
    BlockDecomposition d = common_decompose({ga, gb});
    REQUIRE(d.fully_resolved());
    std::size_t total = 0;
    ExactMatrix all(size, 0);
    for (const auto& blk : d.blocks) {
      total += blk.dimension();
      all = all.hstack(blk.basis);
      for (std::size_t s = 0; s < 2; ++s) {
        const ExactMatrix& g = s == 0 ? ga : gb;
        REQUIRE(g * blk.basis == blk.basis * blk.restrictions[s]);
        unsigned kk = blk.nilpotency[s];
        ExactMatrix shifted = blk.restrictions[s] - ExactMatrix::identity(blk.dimension()) * *blk.eigenvalues[s];
        REQUIRE(shifted.power(kk).is_zero());
        if (kk > 1) REQUIRE_FALSE(shifted.power(kk - 1).is_zero());
      }
    }
    REQUIRE(total == size);
    REQUIRE(rank(all) == size);
  }
}

TEST_CASE("nilpotency index") {
  CHECK(nilpotency_index(jordan(3, GaussRat(2)), GaussRat(2)) == 3u);
  CHECK_FALSE(nilpotency_index(jordan(3, GaussRat(2)), GaussRat(1)).has_value());
  CHECK(nilpotency_index(ExactMatrix(2, 2), GaussRat{}) == 1u);
}

TEST_CASE("block_exp examples") {
  auto ctx = VarContext::independents({"z"}, {"z"});
  ExpPoly z = ExpPoly::variable(ctx, std::size_t{0});
  ExpPoly one = ExpPoly::constant(ctx, GaussRat(1));
  ExpPoly zero(ctx);

  auto e2 = block_exp(jordan(2, GaussRat{}), GaussRat{}, 2, ctx, 0);
  CHECK(e2 == ExpPolyMatrix{{one, z}, {zero, one}});

  GaussRat lambda = GaussRat::ratio(5, 2);
  auto e1 = block_exp(jordan(1, lambda), lambda, 1, ctx, 0);
  CHECK(e1 == ExpPolyMatrix{{ExpPoly::exponential(ctx, {lambda})}});

  auto e3 = block_exp(jordan(3, GaussRat{}), GaussRat{}, 3, ctx, 0);
  ExpPoly half_z2 = z.pow(2) * GaussRat::ratio(1, 2);
  CHECK(e3 == ExpPolyMatrix{{one, z, half_z2}, {zero, one, z}, {zero, zero, one}});

  CHECK_THROWS_AS(block_exp(jordan(3, GaussRat{}), GaussRat{}, 2, ctx, 0), NotNilpotentAtLambda);
}

TEST_CASE("property: block_exp solves its differential equation") {
  auto ctx = VarContext::independents({"z"}, {"z"});
  testing::Gen gen(99);
  for (int n = 0; n < 40; ++n) {
    std::size_t size = 1 + gen.index(4);
    GaussRat lambda = gen.gauss(3, 2);
    ExactMatrix g = jordan(size, lambda);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) g(i, j) = gen.gauss(3, 2);
    }
    auto e = block_exp(g, lambda, static_cast<unsigned>(size), ctx, 0);
    REQUIRE(is_zero_matrix(difference(partial(e, 0), multiply(g, e))));
  }
}
