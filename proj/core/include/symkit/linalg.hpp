#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symkit/field.hpp"
#include "symkit/poly.hpp"

namespace symkit {

using Vector = std::vector<GaussRat>;

/// Dense row-major matrix over GaussRat.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix from_rows(const std::vector<Vector>& rows);
  static ExactMatrix from_columns(const std::vector<Vector>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const;

  GaussRat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const GaussRat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  Vector row(std::size_t r) const;
  ExactMatrix transpose() const;
  /// Columns [first, first + count).
  ExactMatrix columns(std::size_t first, std::size_t count) const;
  ExactMatrix hstack(const ExactMatrix& right) const;
  GaussRat trace() const;
  ExactMatrix power(unsigned k) const;

  ExactMatrix& operator+=(const ExactMatrix& rhs);
  ExactMatrix& operator-=(const ExactMatrix& rhs);
  ExactMatrix& operator*=(const GaussRat& c);
  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(ExactMatrix a, const GaussRat& c) { return a *= c; }
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend Vector operator*(const ExactMatrix& a, const Vector& v);

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussRat> data_;
};

struct RrefResult {
  ExactMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Exact reduced row echelon form (zero rows kept at the bottom).
RrefResult rref(const ExactMatrix& m);
std::size_t rank(const ExactMatrix& m);
/// Kernel basis, one vector per free column, in pivot order: the free
/// column carries 1 and the pivot columns carry minus the reduced entries.
std::vector<Vector> nullspace(const ExactMatrix& m);

/// Solves basis * X = rhs when every column of rhs lies in the column span
/// of basis (basis must have full column rank). Returns std::nullopt and
/// the first failing column otherwise.
struct SpanSolve {
  std::optional<ExactMatrix> coordinates;
  std::size_t failing_column = 0;
};
SpanSolve solve_in_span(const ExactMatrix& basis, const ExactMatrix& rhs);

/// Incremental sparse Gauss-Jordan elimination for large homogeneous
/// systems. Rows are reduced as they arrive; only pivot rows are stored.
class SparseSystem {
 public:
  using Row = std::vector<std::pair<std::size_t, GaussRat>>;

  explicit SparseSystem(std::size_t cols) : cols_(cols), pivot_of_col_(cols, kNone) {}

  /// Adds one equation sum_j row[j].second * x[row[j].first] = 0.
  void add_row(Row row);

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivots_.size(); }
  std::size_t rows_added() const { return rows_added_; }
  /// Same layout as nullspace(ExactMatrix).
  std::vector<Vector> nullspace() const;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Pivot {
    std::size_t col;
    Row row;
  };

  std::size_t cols_;
  std::size_t rows_added_ = 0;
  std::vector<Pivot> pivots_;
  std::vector<std::size_t> pivot_of_col_;
};

/// Dense univariate polynomial c[0] + c[1] x + ... over GaussRat.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<GaussRat> coeffs);
  static UniPoly monomial(unsigned degree, const GaussRat& c = GaussRat(1));
  /// (x - root)
  static UniPoly linear(const GaussRat& root);

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<GaussRat>& coeffs() const { return coeffs_; }
  GaussRat coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : GaussRat{}; }
  GaussRat leading() const { return coeffs_.empty() ? GaussRat{} : coeffs_.back(); }

  GaussRat eval(const GaussRat& x) const;
  ExactMatrix eval(const ExactMatrix& m) const;

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  /// Exact division by (x - root); the remainder must vanish.
  UniPoly deflate(const GaussRat& root) const;

  friend bool operator==(const UniPoly&, const UniPoly&) = default;
  std::string to_string(const std::string& var = "lambda") const;

 private:
  void trim();
  std::vector<GaussRat> coeffs_;
};

/// det(x I - m), by Faddeev-LeVerrier.
UniPoly char_poly(const ExactMatrix& m);

/// Roots of p lying in Q(i), with multiplicities, and the cofactor that has
/// no such roots (degree 0 when p splits over Q(i)).
struct RootSplit {
  std::vector<std::pair<GaussRat, unsigned>> roots;
  UniPoly cofactor;
  /// True when the root search was skipped because coefficients were too large.
  bool search_incomplete = false;
};
RootSplit gaussian_rational_roots(const UniPoly& p);

/// One common primary component of a commuting family.
struct Block {
  /// Ambient coordinates; columns span the component.
  ExactMatrix basis;
  /// Per family member; empty when the member's restriction has no
  /// eigenvalue in Q(i) on this component.
  std::vector<std::optional<GaussRat>> eigenvalues;
  /// Per family member: smallest k with (G - lambda)^k = 0 here (0 when unknown).
  std::vector<unsigned> nilpotency;
  /// Per family member: restriction matrix in the block basis.
  std::vector<ExactMatrix> restrictions;
  bool undecomposed = false;
  std::vector<UniPoly> unresolved_factors;

  std::size_t dimension() const { return basis.cols(); }
};

struct BlockDecomposition {
  std::size_t ambient = 0;
  std::vector<Block> blocks;

  std::size_t rho() const { return blocks.size(); }
  bool fully_resolved() const;
};

/// Simultaneous primary decomposition of pairwise commuting square matrices.
/// Throws NotCommuting with the first offending pair.
BlockDecomposition common_decompose(const std::vector<ExactMatrix>& family);

/// Smallest k >= 1 with (m - lambda)^k = 0, or std::nullopt if none up to size.
std::optional<unsigned> nilpotency_index(const ExactMatrix& m, const GaussRat& lambda);

using ExpPolyMatrix = std::vector<std::vector<ExpPoly>>;

/// exp(G z) for G = lambda + N with N^k = 0, as exp(lambda z) times the
/// truncated series. z is a translation variable of ctx. Throws
/// NotNilpotentAtLambda if (G - lambda)^k != 0.
ExpPolyMatrix block_exp(const ExactMatrix& g, const GaussRat& lambda, unsigned k,
                        const ContextPtr& ctx, std::size_t z);

ExpPolyMatrix multiply(const ExactMatrix& a, const ExpPolyMatrix& b);
ExpPolyMatrix multiply(const ExpPolyMatrix& a, const ExpPolyMatrix& b);
ExpPolyMatrix partial(const ExpPolyMatrix& m, std::size_t var);

}  // namespace symkit
