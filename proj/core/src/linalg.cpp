#include "symkit/linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "symkit/error.hpp"

namespace symkit {

// ---------------------------------------------------------------------------
// ExactMatrix

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = GaussRat(1);
  return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  ExactMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw DimensionMismatch("ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<Vector>& cols, std::size_t rows) {
  ExactMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw DimensionMismatch("ragged columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const GaussRat& x) { return x.is_zero(); });
}

Vector ExactMatrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector ExactMatrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ExactMatrix ExactMatrix::columns(std::size_t first, std::size_t count) const {
  ExactMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

ExactMatrix ExactMatrix::hstack(const ExactMatrix& right) const {
  if (rows_ != right.rows_) throw DimensionMismatch("hstack: row counts differ");
  ExactMatrix out(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < right.cols_; ++c) out(r, cols_ + c) = right(r, c);
  }
  return out;
}

GaussRat ExactMatrix::trace() const {
  if (!is_square()) throw NonSquare();
  GaussRat t;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ExactMatrix ExactMatrix::power(unsigned k) const {
  if (!is_square()) throw NonSquare();
  ExactMatrix result = identity(rows_);
  for (unsigned i = 0; i < k; ++i) result = result * *this;
  return result;
}

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix sum shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ExactMatrix& ExactMatrix::operator-=(const ExactMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix difference shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ExactMatrix& ExactMatrix::operator*=(const GaussRat& c) {
  for (auto& x : data_) x *= c;
  return *this;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape");
  ExactMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const GaussRat& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Vector operator*(const ExactMatrix& a, const Vector& v) {
  if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector shape");
  Vector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (!a(i, k).is_zero() && !v[k].is_zero()) out[i] += a(i, k) * v[k];
  return out;
}

std::string ExactMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Elimination

RrefResult rref(const ExactMatrix& m) {
  RrefResult out{m, {}};
  ExactMatrix& a = out.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col).is_zero()) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(sel, c), a(row, c));
    }
    GaussRat inv = a(row, col).inv();
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      GaussRat f = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) {
        if (!a(row, c).is_zero()) a(r, c) -= f * a(row, c);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

std::size_t rank(const ExactMatrix& m) { return rref(m).pivots.size(); }

std::vector<Vector> nullspace(const ExactMatrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = GaussRat(1);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

SpanSolve solve_in_span(const ExactMatrix& basis, const ExactMatrix& rhs) {
  if (basis.rows() != rhs.rows()) throw DimensionMismatch("solve_in_span: row counts differ");
  const std::size_t r = basis.cols();
  RrefResult red = rref(basis.hstack(rhs));
  std::size_t basis_pivots = 0;
  for (std::size_t p : red.pivots) {
    if (p < r) {
      ++basis_pivots;
    } else {
      return SpanSolve{std::nullopt, p - r};
    }
  }
  if (basis_pivots != r) throw InputError("solve_in_span: basis is rank deficient");
  ExactMatrix x(r, rhs.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < rhs.cols(); ++j) x(i, j) = red.reduced(i, r + j);
  return SpanSolve{std::move(x), 0};
}

// ---------------------------------------------------------------------------
// SparseSystem

namespace {

using Row = SparseSystem::Row;

const GaussRat* find_entry(const Row& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

/// target += factor * src, both sorted by column.
Row axpy(const Row& target, const GaussRat& factor, const Row& src) {
  Row out;
  out.reserve(target.size() + src.size());
  auto a = target.begin();
  auto b = src.begin();
  while (a != target.end() || b != src.end()) {
    if (b == src.end() || (a != target.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == target.end() || b->first < a->first) {
      out.emplace_back(b->first, factor * b->second);
      ++b;
    } else {
      GaussRat v = a->second + factor * b->second;
      if (!v.is_zero()) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  return out;
}

}  // namespace

void SparseSystem::add_row(Row row) {
  ++rows_added_;
  std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  Row merged;
  for (auto& [c, v] : row) {
    if (c >= cols_) throw DimensionMismatch("sparse row column out of range");
    if (!merged.empty() && merged.back().first == c) {
      merged.back().second += v;
    } else {
      merged.emplace_back(c, std::move(v));
    }
  }
  Row acc;
  for (auto& e : merged) {
    if (!e.second.is_zero()) acc.push_back(std::move(e));
  }

  // Pivot rows contain no other pivot columns, so one pass clears them all.
  Row original = acc;
  for (const auto& [c, v] : original) {
    std::size_t p = pivot_of_col_[c];
    if (p == kNone) continue;
    acc = axpy(acc, -v, pivots_[p].row);
  }
  if (acc.empty()) return;

  const std::size_t col = acc.front().first;
  GaussRat inv = acc.front().second.inv();
  for (auto& e : acc) e.second *= inv;

  for (auto& piv : pivots_) {
    if (const GaussRat* f = find_entry(piv.row, col)) {
      GaussRat factor = -*f;
      piv.row = axpy(piv.row, factor, acc);
    }
  }
  pivot_of_col_[col] = pivots_.size();
  pivots_.push_back(Pivot{col, std::move(acc)});
}

std::vector<Vector> SparseSystem::nullspace() const {
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (pivot_of_col_[f] != kNone) continue;
    Vector v(cols_);
    v[f] = GaussRat(1);
    for (const auto& piv : pivots_) {
      if (const GaussRat* x = find_entry(piv.row, f)) v[piv.col] = -*x;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(std::vector<GaussRat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

UniPoly UniPoly::monomial(unsigned degree, const GaussRat& c) {
  std::vector<GaussRat> v(degree + 1);
  v[degree] = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::linear(const GaussRat& root) { return UniPoly({-root, GaussRat(1)}); }

GaussRat UniPoly::eval(const GaussRat& x) const {
  GaussRat acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ExactMatrix UniPoly::eval(const ExactMatrix& m) const {
  if (!m.is_square()) throw NonSquare();
  ExactMatrix acc(m.rows(), m.cols());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * m + ExactMatrix::identity(m.rows()) * *it;
  }
  return acc;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussRat> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return UniPoly(std::move(out));
}

UniPoly UniPoly::deflate(const GaussRat& root) const {
  if (degree() < 1) throw InputError("cannot deflate a constant polynomial");
  std::vector<GaussRat> q(coeffs_.size() - 1);
  GaussRat carry;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    carry = carry * root + coeffs_[k];
    q[k - 1] = carry;
  }
  if (!(carry * root + coeffs_[0]).is_zero()) throw InputError("deflate: not a root");
  return UniPoly(std::move(q));
}

std::string UniPoly::to_string(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const GaussRat& c = coeffs_[k];
    if (c.is_zero()) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    std::string piece;
    if (mono.empty()) {
      piece = c.to_string();
      if (!c.is_real() && sgn(c.re()) != 0) piece = "(" + piece + ")";
    } else if (c.is_one()) {
      piece = mono;
    } else if (c == GaussRat(-1)) {
      piece = "-" + mono;
    } else if (c.is_real() || sgn(c.re()) == 0) {
      piece = c.to_string() + "*" + mono;
    } else {
      piece = "(" + c.to_string() + ")*" + mono;
    }
    if (out.empty()) {
      out = piece;
    } else if (piece.front() == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

UniPoly char_poly(const ExactMatrix& m) {
  if (!m.is_square()) throw NonSquare();
  const std::size_t n = m.rows();
  std::vector<GaussRat> c(n + 1);
  c[n] = GaussRat(1);
  ExactMatrix acc(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    acc = m * acc + ExactMatrix::identity(n) * c[n - k + 1];
    c[n - k] = -(m * acc).trace() / GaussRat(static_cast<long>(k));
  }
  return UniPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Decomposition

bool BlockDecomposition::fully_resolved() const {
  return std::none_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.undecomposed; });
}

std::optional<unsigned> nilpotency_index(const ExactMatrix& m, const GaussRat& lambda) {
  if (!m.is_square()) throw NonSquare();
  ExactMatrix shifted = m - ExactMatrix::identity(m.rows()) * lambda;
  ExactMatrix power = shifted;
  for (unsigned k = 1; k <= std::max<std::size_t>(m.rows(), 1); ++k) {
    if (power.is_zero()) return k;
    power = power * shifted;
  }
  return std::nullopt;
}

namespace {

ExactMatrix restrict_to(const ExactMatrix& g, const ExactMatrix& basis) {
  SpanSolve s = solve_in_span(basis, g * basis);
  if (!s.coordinates) throw InvariantViolation("subspace is not invariant under the family");
  return *s.coordinates;
}

struct Piece {
  ExactMatrix basis;
  bool undecomposed = false;
  std::vector<UniPoly> factors;
};

std::vector<Piece> split_by(const ExactMatrix& g, const Piece& piece) {
  ExactMatrix local = restrict_to(g, piece.basis);
  RootSplit split = gaussian_rational_roots(char_poly(local));
  std::vector<Piece> out;
  const std::size_t r = local.rows();
  for (const auto& [root, mult] : split.roots) {
    ExactMatrix shifted = (local - ExactMatrix::identity(r) * root).power(mult);
    auto kernel = nullspace(shifted);
    Piece p{piece.basis * ExactMatrix::from_columns(kernel, r), piece.undecomposed, piece.factors};
    out.push_back(std::move(p));
  }
  if (split.cofactor.degree() > 0) {
    auto kernel = nullspace(split.cofactor.eval(local));
    Piece p{piece.basis * ExactMatrix::from_columns(kernel, r), true, piece.factors};
    p.factors.push_back(split.cofactor);
    out.push_back(std::move(p));
  }
  return out;
}

bool eigen_less(const Block& a, const Block& b) {
  for (std::size_t s = 0; s < a.eigenvalues.size(); ++s) {
    const auto& x = a.eigenvalues[s];
    const auto& y = b.eigenvalues[s];
    if (x.has_value() != y.has_value()) return x.has_value();
    if (x && *x != *y) return *x < *y;
  }
  return a.dimension() < b.dimension();
}

}  // namespace

BlockDecomposition common_decompose(const std::vector<ExactMatrix>& family) {
  BlockDecomposition out;
  if (family.empty()) return out;
  const std::size_t n = family.front().rows();
  for (const auto& g : family) {
    if (!g.is_square()) throw NonSquare();
    if (g.rows() != n) throw DimensionMismatch("family members differ in size");
  }
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (family[i] * family[j] != family[j] * family[i]) throw NotCommuting(i, j);

  out.ambient = n;
  if (n == 0) return out;

  std::vector<Piece> pieces{Piece{ExactMatrix::identity(n), false, {}}};
  for (const auto& g : family) {
    std::vector<Piece> next;
    for (const auto& p : pieces) {
      for (auto& q : split_by(g, p)) next.push_back(std::move(q));
    }
    pieces = std::move(next);
  }

  for (auto& p : pieces) {
    Block b;
    b.basis = std::move(p.basis);
    b.undecomposed = p.undecomposed;
    b.unresolved_factors = std::move(p.factors);
    for (const auto& g : family) {
      ExactMatrix local = restrict_to(g, b.basis);
      RootSplit split = gaussian_rational_roots(char_poly(local));
      if (split.roots.size() == 1 && split.cofactor.degree() == 0) {
        const GaussRat& lambda = split.roots.front().first;
        b.eigenvalues.emplace_back(lambda);
        b.nilpotency.push_back(nilpotency_index(local, lambda).value_or(0));
      } else {
        b.eigenvalues.emplace_back(std::nullopt);
        b.nilpotency.push_back(0);
        b.undecomposed = true;
      }
      b.restrictions.push_back(std::move(local));
    }
    out.blocks.push_back(std::move(b));
  }
  std::stable_sort(out.blocks.begin(), out.blocks.end(), eigen_less);
  return out;
}

// ---------------------------------------------------------------------------
// Truncated exponentials

ExpPolyMatrix block_exp(const ExactMatrix& g, const GaussRat& lambda, unsigned k,
                        const ContextPtr& ctx, std::size_t z) {
  if (!g.is_square()) throw NonSquare();
  const std::size_t n = g.rows();
  ExactMatrix nil = g - ExactMatrix::identity(n) * lambda;
  if (!nil.power(k).is_zero()) {
    throw NotNilpotentAtLambda("(G - " + lambda.to_string() + ")^" + std::to_string(k) + " != 0");
  }
  Weight weight(ctx->translation_count());
  if (!lambda.is_zero()) {
    auto slot = ctx->translation_slot(z);
    if (!slot) throw VariableMismatch("'" + ctx->var(z).name + "' is not a translation variable");
    weight[*slot] = lambda;
  }
  ExpPoly factor = ExpPoly::exponential(ctx, weight);
  ExpPoly zvar = ExpPoly::variable(ctx, z);

  ExpPolyMatrix out(n, std::vector<ExpPoly>(n, ExpPoly(ctx)));
  ExactMatrix power = ExactMatrix::identity(n);
  ExpPoly zpow = ExpPoly::constant(ctx, GaussRat(1));
  GaussRat factorial(1);
  for (unsigned s = 0; s < k; ++s) {
    if (s > 0) {
      power = power * nil;
      zpow *= zvar;
      factorial *= GaussRat(static_cast<long>(s));
    }
    ExpPoly scaled = zpow * factorial.inv();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!power(i, j).is_zero()) out[i][j] += scaled * power(i, j);
  }
  for (auto& row : out)
    for (auto& e : row) e = e * factor;
  return out;
}

ExpPolyMatrix multiply(const ExactMatrix& a, const ExpPolyMatrix& b) {
  if (a.cols() != b.size()) throw DimensionMismatch("matrix product shape");
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  ExpPolyMatrix out(a.rows(), std::vector<ExpPoly>(cols));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += b[k][j] * a(i, k);
    }
  return out;
}

ExpPolyMatrix multiply(const ExpPolyMatrix& a, const ExpPolyMatrix& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  ExpPolyMatrix out(a.size(), std::vector<ExpPoly>(cols));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw DimensionMismatch("matrix product shape");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

ExpPolyMatrix partial(const ExpPolyMatrix& m, std::size_t var) {
  ExpPolyMatrix out = m;
  for (auto& row : out)
    for (auto& e : row) e = e.partial(var);
  return out;
}

}  // namespace symkit
