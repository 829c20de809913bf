#include "symkit/linop.hpp"

#include <algorithm>
#include <functional>

#include "symkit/error.hpp"
#include "symkit/linalg.hpp"

namespace symkit {

namespace {

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// All I <= J componentwise.
void sub_multiindices(const Multiindex& j, std::vector<Multiindex>& out) {
  Multiindex cur(j.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == j.size()) {
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= j[pos]; ++v) {
      cur[pos] = v;
      rec(pos + 1);
    }
  };
  rec(0);
}

ExpPoly partial_multi(ExpPoly p, const Multiindex& j) {
  for (std::size_t v = 0; v < j.size(); ++v)
    for (unsigned k = 0; k < j[v]; ++k) p = p.partial(v);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinDiffOp

LinDiffOp LinDiffOp::identity(ContextPtr ctx) {
  return multiplication(ExpPoly::constant(std::move(ctx), GaussRat(1)));
}

LinDiffOp LinDiffOp::multiplication(const ExpPoly& a) {
  if (!a.context()) throw InputError("multiplication operator needs a context");
  return term(a, Multiindex(a.context()->size(), 0));
}

LinDiffOp LinDiffOp::derivative(ContextPtr ctx, Multiindex j) {
  ExpPoly one = ExpPoly::constant(ctx, GaussRat(1));
  return term(one, std::move(j));
}

LinDiffOp LinDiffOp::derivative(ContextPtr ctx, std::size_t var, unsigned times) {
  Multiindex j(ctx->size(), 0);
  j.at(var) = times;
  return derivative(std::move(ctx), std::move(j));
}

LinDiffOp LinDiffOp::term(const ExpPoly& a, Multiindex j) {
  if (!a.context()) throw InputError("operator term needs a context");
  if (j.size() != a.context()->size()) throw DimensionMismatch("multiindex length differs from context size");
  LinDiffOp out(a.context());
  out.add_term(j, a);
  return out;
}

unsigned LinDiffOp::order() const {
  unsigned q = 0;
  for (const auto& [j, a] : terms_) q = std::max(q, order_of(j));
  return q;
}

ExpPoly LinDiffOp::coefficient(const Multiindex& j) const {
  auto it = terms_.find(j);
  return it == terms_.end() ? ExpPoly(ctx_) : it->second;
}

void LinDiffOp::add_term(const Multiindex& j, const ExpPoly& a) {
  if (a.is_zero()) return;
  if (!ctx_) ctx_ = a.context();
  if (!same_context(ctx_, a.context())) throw VariableMismatch("operator coefficient from another context");
  if (j.size() != ctx_->size()) throw DimensionMismatch("multiindex length differs from context size");
  auto [it, inserted] = terms_.try_emplace(j, a);
  if (inserted) return;
  it->second += a;
  if (it->second.is_zero()) terms_.erase(it);
}

void LinDiffOp::adopt(const LinDiffOp& other) {
  if (!ctx_) {
    ctx_ = other.ctx_;
  } else if (other.ctx_ && !same_context(ctx_, other.ctx_)) {
    throw VariableMismatch("operators from different contexts");
  }
}

LinDiffOp& LinDiffOp::operator+=(const LinDiffOp& rhs) {
  adopt(rhs);
  for (const auto& [j, a] : rhs.terms_) add_term(j, a);
  return *this;
}

LinDiffOp& LinDiffOp::operator-=(const LinDiffOp& rhs) {
  adopt(rhs);
  for (const auto& [j, a] : rhs.terms_) add_term(j, -a);
  return *this;
}

LinDiffOp& LinDiffOp::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [j, a] : terms_) a *= c;
  return *this;
}

LinDiffOp LinDiffOp::operator-() const {
  LinDiffOp out = *this;
  return out *= GaussRat(-1);
}

LinDiffOp LinDiffOp::partial(std::size_t var) const {
  LinDiffOp out(ctx_);
  for (const auto& [j, a] : terms_) out.add_term(j, a.partial(var));
  return out;
}

ExpPoly LinDiffOp::apply(const ExpPoly& f) const {
  ExpPoly out(ctx_);
  for (const auto& [j, a] : terms_) out += a * partial_multi(f, j);
  return out;
}

LinDiffOp LinDiffOp::rebase(const ContextPtr& target) const {
  LinDiffOp out(target);
  for (const auto& [j, a] : terms_) {
    Multiindex k(target->size(), 0);
    for (std::size_t v = 0; v < j.size(); ++v) {
      if (j[v] > 0) k[target->index_of(ctx_->var(v).name)] = j[v];
    }
    out.add_term(k, a.rebase(target));
  }
  return out;
}

std::string LinDiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [j, a] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + a.to_string() + ")";
    if (order_of(j) == 0) continue;
    out += "*D[";
    bool first = true;
    for (std::size_t v = 0; v < j.size(); ++v) {
      for (unsigned k = 0; k < j[v]; ++k) {
        if (!first) out += ",";
        first = false;
        out += ctx_->var(v).name;
      }
    }
    out += "]";
  }
  return out;
}

LinDiffOp compose(const LinDiffOp& a, const LinDiffOp& b) {
  if (a.context() && b.context() && !same_context(a.context(), b.context())) {
    throw VariableMismatch("compose: operators from different contexts");
  }
  LinDiffOp out(a.context() ? a.context() : b.context());
  for (const auto& [j, ca] : a.terms()) {
    std::vector<Multiindex> subs;
    sub_multiindices(j, subs);
    for (const auto& [k, cb] : b.terms()) {
      for (const auto& i : subs) {
        ExpPoly db = partial_multi(cb, i);
        if (db.is_zero()) continue;
        mpz_class c = 1;
        Multiindex target(j.size());
        for (std::size_t v = 0; v < j.size(); ++v) {
          c *= binomial(j[v], i[v]);
          target[v] = j[v] - i[v] + k[v];
        }
        out.add_term(target, ca * db * GaussRat(mpq_class(c)));
      }
    }
  }
  return out;
}

LinDiffOp commutator(const LinDiffOp& a, const LinDiffOp& b) { return compose(a, b) - compose(b, a); }

// ---------------------------------------------------------------------------
// OperatorPde

OperatorPde::OperatorPde(LinDiffOp l, std::size_t evolution_axis) : l_(std::move(l)), axis_(evolution_axis) {
  if (!l_.context() || l_.is_zero()) throw InvalidOperator("the defining operator is zero");
  if (axis_ >= l_.context()->size()) throw InvalidOperator("evolution axis out of range");
  Multiindex et(l_.context()->size(), 0);
  et[axis_] = 1;
  LinDiffOp rest(l_.context());
  std::optional<GaussRat> c;
  for (const auto& [j, a] : l_.terms()) {
    if (j == et) {
      if (!a.is_constant()) throw InvalidOperator("the evolution derivative needs a constant coefficient");
      c = a.constant_term();
    } else if (j[axis_] > 0) {
      throw InvalidOperator("the evolution derivative may appear only at first order");
    } else {
      rest.add_term(j, a);
    }
  }
  if (!c) throw InvalidOperator("the operator has no first-order evolution derivative");
  flow_ = rest * (-c->inv());
}

LinDiffOp OperatorPde::reduce(const LinDiffOp& r) const {
  if (!r.context()) return r;
  if (!same_context(r.context(), context())) throw VariableMismatch("operator from another context");
  // powers[k] is d_t^k on solutions: P_k = dP_{k-1}/dt + P_{k-1} M.
  std::vector<LinDiffOp> powers{LinDiffOp::identity(context())};
  LinDiffOp out(context());
  for (const auto& [j, a] : r.terms()) {
    unsigned k = j[axis_];
    if (k == 0) {
      out.add_term(j, a);
      continue;
    }
    while (powers.size() <= k) {
      const LinDiffOp& prev = powers.back();
      powers.push_back(prev.partial(axis_) + compose(prev, flow_));
    }
    Multiindex rest = j;
    rest[axis_] = 0;
    out += compose(LinDiffOp::term(a, rest), powers[k]);
  }
  return out;
}

LinDiffOp OperatorPde::residual(const LinDiffOp& r) const { return reduce(commutator(r, l_)); }

std::optional<std::vector<ExpPoly>> polynomial_solutions(const OperatorPde& pde, unsigned degree,
                                                         unsigned max_terms) {
  const ContextPtr& ctx = pde.context();
  const std::size_t axis = pde.evolution_axis();
  for (const auto& [j, a] : pde.flow().terms()) {
    if (a.depends_on(axis)) return std::nullopt;
  }
  std::vector<Exponents> seeds;
  Exponents cur(ctx->size(), 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
    if (pos == ctx->size()) {
      seeds.push_back(cur);
      return;
    }
    unsigned hi = pos == axis ? 0 : left;
    for (unsigned v = 0; v <= hi; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(0, degree);
  std::sort(seeds.begin(), seeds.end(), GrlexGreater{});

  const Weight zero(ctx->translation_count());
  std::vector<ExpPoly> out;
  for (const auto& e : seeds) {
    ExpPoly term = ExpPoly::monomial(ctx, zero, e, GaussRat(1));
    ExpPoly psi = term;
    unsigned k = 0;
    while (!term.is_zero()) {
      if (++k > max_terms) return std::nullopt;
      Exponents tk(ctx->size(), 0);
      tk[axis] = 1;
      term = pde.flow().apply(term) * ExpPoly::monomial(ctx, zero, tk, GaussRat(1)) * GaussRat::ratio(1, k);
      psi += term;
    }
    out.push_back(std::move(psi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Determining systems

std::size_t operator_dimension_bound(unsigned q) {
  return static_cast<std::size_t>(q + 1) * (q + 2) / 2;
}

std::vector<unsigned> default_degree_caps(const OperatorPde& pde, std::size_t bound) {
  unsigned cap = bound == 0 ? 0 : static_cast<unsigned>(bound - 1);
  return std::vector<unsigned>(pde.context()->size(), cap);
}

namespace {

struct RowKey {
  Multiindex j;
  Weight weight;
  Exponents exponents;

  bool operator<(const RowKey& o) const {
    if (j != o.j) return GrlexGreater{}(j, o.j);
    if (weight != o.weight) return WeightLess{}(weight, o.weight);
    return GrlexGreater{}(exponents, o.exponents);
  }
};

}  // namespace

OperatorResult operator_determining_solve(const OperatorPde& pde, const OperatorAnsatz& ansatz) {
  const ContextPtr& ctx = pde.context();
  const std::size_t nv = ctx->size();
  std::vector<unsigned> caps = ansatz.degree_caps;
  if (caps.empty()) caps = default_degree_caps(pde, operator_dimension_bound(ansatz.order));
  if (caps.size() != nv) throw DimensionMismatch("one degree cap per independent variable");
  Weight weight = ansatz.weights;
  if (weight.empty()) weight.assign(ctx->translation_count(), GaussRat{});
  if (weight.size() != ctx->translation_count()) {
    throw DimensionMismatch("one exponential weight per translation variable");
  }

  std::vector<Multiindex> derivs;
  for (unsigned k = 0; k <= ansatz.order; ++k) {
    Multiindex cur(nv, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
      if (pos == nv) {
        if (left == 0) derivs.push_back(cur);
        return;
      }
      unsigned hi = pos == pde.evolution_axis() ? 0 : left;
      for (unsigned v = 0; v <= hi; ++v) {
        cur[pos] = v;
        rec(pos + 1, left - v);
      }
      cur[pos] = 0;
    };
    rec(0, k);
  }
  std::sort(derivs.begin(), derivs.end(), GrlexGreater{});

  std::vector<Exponents> monos;
  {
    Exponents cur(nv, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == nv) {
        monos.push_back(cur);
        return;
      }
      for (unsigned v = 0; v <= caps[pos]; ++v) {
        cur[pos] = v;
        rec(pos + 1);
      }
    };
    rec(0);
    std::sort(monos.begin(), monos.end(), GrlexGreater{});
  }

  std::vector<LinDiffOp> columns;
  columns.reserve(derivs.size() * monos.size());
  for (const auto& j : derivs) {
    for (const auto& e : monos) {
      columns.push_back(LinDiffOp::term(ExpPoly::monomial(ctx, weight, e, GaussRat(1)), j));
    }
  }

  std::map<RowKey, SparseSystem::Row> rows;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    LinDiffOp res = pde.residual(columns[c]);
    for (const auto& [j, a] : res.terms()) {
      for (auto& t : a.coeff_extract()) {
        rows[RowKey{j, std::move(t.weight), std::move(t.exponents)}].emplace_back(c, std::move(t.coeff));
      }
    }
  }

  SparseSystem system(columns.size());
  for (auto& [key, row] : rows) system.add_row(std::move(row));

  OperatorResult out;
  out.unknowns = columns.size();
  out.equations = rows.size();
  out.rank = system.rank();
  for (const auto& v : system.nullspace()) {
    LinDiffOp r(ctx);
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (!v[c].is_zero()) r += columns[c] * v[c];
    }
    out.basis.push_back(std::move(r));
  }
  return out;
}

}  // namespace symkit
