#include "symkit/structure.hpp"

#include <algorithm>

#include "symkit/error.hpp"

namespace symkit {

// ---------------------------------------------------------------------------
// SymmetryElement

SymmetryElement SymmetryElement::from_operator(const LinDiffOp& r) {
  SymmetryElement out;
  for (const auto& [j, a] : r.terms()) out.add(j, a);
  return out;
}

SymmetryElement SymmetryElement::from_characteristic(const std::vector<ExpPoly>& eta) {
  SymmetryElement out;
  for (std::size_t a = 0; a < eta.size(); ++a) out.add(Multiindex{static_cast<unsigned>(a)}, eta[a]);
  return out;
}

LinDiffOp SymmetryElement::to_operator(const ContextPtr& ctx) const {
  LinDiffOp out(ctx);
  for (const auto& [slot, value] : components) out.add_term(slot, value);
  return out;
}

std::vector<ExpPoly> SymmetryElement::to_characteristic(const ContextPtr& ctx, std::size_t n) const {
  std::vector<ExpPoly> out(n, ExpPoly(ctx));
  for (const auto& [slot, value] : components) out.at(slot.at(0)) += value;
  return out;
}

void SymmetryElement::add(const Multiindex& slot, const ExpPoly& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = components.try_emplace(slot, value);
  if (inserted) return;
  it->second += value;
  if (it->second.is_zero()) components.erase(it);
}

SymmetryElement& SymmetryElement::operator+=(const SymmetryElement& rhs) {
  for (const auto& [slot, value] : rhs.components) add(slot, value);
  return *this;
}

SymmetryElement& SymmetryElement::operator-=(const SymmetryElement& rhs) {
  for (const auto& [slot, value] : rhs.components) add(slot, -value);
  return *this;
}

SymmetryElement& SymmetryElement::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    components.clear();
    return *this;
  }
  for (auto& [slot, value] : components) value *= c;
  return *this;
}

SymmetryElement SymmetryElement::times(const ExpPoly& f) const {
  SymmetryElement out;
  for (const auto& [slot, value] : components) out.add(slot, value * f);
  return out;
}

SymmetryElement SymmetryElement::partial(std::size_t var) const {
  SymmetryElement out;
  for (const auto& [slot, value] : components) out.add(slot, value.partial(var));
  return out;
}

SymmetryElement SymmetryElement::at_zero(std::span<const std::size_t> vars) const {
  SymmetryElement out;
  for (const auto& [slot, value] : components) out.add(slot, value.at_zero(vars));
  return out;
}

bool SymmetryElement::depends_on(std::size_t var) const {
  return std::any_of(components.begin(), components.end(),
                     [&](const auto& kv) { return kv.second.depends_on(var); });
}

// ---------------------------------------------------------------------------
// Coordinates

namespace {

struct CoordKey {
  Multiindex slot;
  Weight weight;
  Exponents exponents;

  bool operator<(const CoordKey& o) const {
    if (slot != o.slot) return GrlexGreater{}(slot, o.slot);
    if (weight != o.weight) return WeightLess{}(weight, o.weight);
    return GrlexGreater{}(exponents, o.exponents);
  }
};

std::map<CoordKey, std::size_t> collect_keys(const std::vector<SymmetryElement>& elements) {
  std::map<CoordKey, std::size_t> keys;
  for (const auto& e : elements) {
    for (const auto& [slot, value] : e.components) {
      for (auto& t : value.coeff_extract()) keys.emplace(CoordKey{slot, t.weight, t.exponents}, 0);
    }
  }
  std::size_t i = 0;
  for (auto& [k, idx] : keys) idx = i++;
  return keys;
}

}  // namespace

ExactMatrix coordinate_matrix(const std::vector<SymmetryElement>& elements) {
  auto keys = collect_keys(elements);
  ExactMatrix m(keys.size(), elements.size());
  for (std::size_t c = 0; c < elements.size(); ++c) {
    for (const auto& [slot, value] : elements[c].components) {
      for (auto& t : value.coeff_extract()) m(keys.at(CoordKey{slot, t.weight, t.exponents}), c) = t.coeff;
    }
  }
  return m;
}

std::size_t span_rank(const std::vector<SymmetryElement>& elements) {
  return rank(coordinate_matrix(elements));
}

std::vector<SymmetryElement> canonicalize(const std::vector<SymmetryElement>& elements,
                                          const ContextPtr& ctx) {
  auto keys = collect_keys(elements);
  std::vector<CoordKey> by_row(keys.size());
  for (const auto& [k, idx] : keys) by_row[idx] = k;
  ExactMatrix m(keys.size(), elements.size());
  for (std::size_t c = 0; c < elements.size(); ++c) {
    for (const auto& [slot, value] : elements[c].components) {
      for (auto& t : value.coeff_extract()) m(keys.at(CoordKey{slot, t.weight, t.exponents}), c) = t.coeff;
    }
  }
  RrefResult red = rref(m.transpose());
  std::vector<SymmetryElement> out;
  for (std::size_t r = 0; r < red.pivots.size(); ++r) {
    SymmetryElement e;
    for (std::size_t k = 0; k < by_row.size(); ++k) {
      const GaussRat& c = red.reduced(r, k);
      if (c.is_zero()) continue;
      e.add(by_row[k].slot, ExpPoly::monomial(ctx, by_row[k].weight, by_row[k].exponents, c));
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool in_span(const std::vector<SymmetryElement>& basis, const SymmetryElement& x) {
  std::vector<SymmetryElement> all = basis;
  all.push_back(x);
  return span_rank(all) == span_rank(basis);
}

// ---------------------------------------------------------------------------
// SymmetrySpace

SymmetrySpace::SymmetrySpace(SymmetryKind kind, ContextPtr ctx, std::vector<SymmetryElement> basis,
                             std::vector<std::size_t> translation_vars, std::vector<std::size_t> filtration)
    : kind_(kind),
      ctx_(std::move(ctx)),
      basis_(std::move(basis)),
      translations_(std::move(translation_vars)),
      filtration_(std::move(filtration)) {
  for (std::size_t z : translations_) {
    if (!ctx_->translation_slot(z)) {
      throw InputError("'" + ctx_->var(z).name + "' is not a translation variable of the context");
    }
  }
  if (span_rank(basis_) != basis_.size()) throw InputError("symmetry basis is linearly dependent");
  if (!filtration_.empty()) {
    if (!std::is_sorted(filtration_.begin(), filtration_.end()) || filtration_.back() != basis_.size()) {
      throw InputError("filtration must be nondecreasing and end at the dimension");
    }
  }
}

SymmetrySpace SymmetrySpace::from_operators(const std::vector<LinDiffOp>& ops, const ContextPtr& ctx) {
  std::vector<SymmetryElement> basis;
  for (const auto& r : ops) basis.push_back(SymmetryElement::from_operator(r));
  return SymmetrySpace(SymmetryKind::Operator, ctx, std::move(basis), ctx->translations());
}

SymmetrySpace SymmetrySpace::from_characteristics(const std::vector<std::vector<ExpPoly>>& chars,
                                                  const JetContextPtr& ctx) {
  std::vector<SymmetryElement> basis;
  for (const auto& eta : chars) basis.push_back(SymmetryElement::from_characteristic(eta));
  return SymmetrySpace(SymmetryKind::Evolutionary, ctx->vars(), std::move(basis), ctx->vars()->translations());
}

SymmetrySpace SymmetrySpace::operator_filtration(const OperatorPde& pde, unsigned qmax,
                                                 const std::vector<unsigned>& caps) {
  const ContextPtr& ctx = pde.context();
  std::vector<SymmetryElement> acc;
  std::vector<std::size_t> filtration;
  for (unsigned q = 0; q <= qmax; ++q) {
    OperatorAnsatz ansatz;
    ansatz.order = q;
    ansatz.degree_caps = caps;
    OperatorResult res = operator_determining_solve(pde, ansatz);
    std::vector<SymmetryElement> layer;
    for (const auto& r : res.basis) layer.push_back(SymmetryElement::from_operator(r));
    layer = canonicalize(layer, ctx);
    std::vector<SymmetryElement> stacked = layer;
    stacked.insert(stacked.end(), acc.begin(), acc.end());
    if (span_rank(stacked) != layer.size()) {
      throw InvariantViolation("V^(" + std::to_string(q - 1) + ") is not contained in V^(" + std::to_string(q) + ")");
    }
    for (auto& e : layer) {
      if (!in_span(acc, e)) acc.push_back(std::move(e));
    }
    filtration.push_back(acc.size());
  }
  return SymmetrySpace(SymmetryKind::Operator, ctx, std::move(acc), ctx->translations(), std::move(filtration));
}

SymmetrySpace SymmetrySpace::sub_space(unsigned q) const {
  if (filtration_.empty()) return *this;
  if (q >= filtration_.size()) throw InputError("order " + std::to_string(q) + " is beyond the filtration");
  std::vector<SymmetryElement> prefix(basis_.begin(), basis_.begin() + static_cast<std::ptrdiff_t>(filtration_[q]));
  std::vector<std::size_t> filt(filtration_.begin(), filtration_.begin() + q + 1);
  return SymmetrySpace(kind_, ctx_, std::move(prefix), translations_, std::move(filt));
}

std::string SymmetrySpace::render(std::size_t index) const {
  const SymmetryElement& e = basis_.at(index);
  if (kind_ == SymmetryKind::Operator) return e.to_operator(ctx_).to_string();
  std::string out;
  for (const auto& [slot, value] : e.components) {
    if (!out.empty()) out += ", ";
    out += "eta" + std::to_string(slot.at(0)) + " = " + value.to_string();
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Adjoint matrices

ExactMatrix adjoint_matrix(const SymmetrySpace& space, std::size_t z) {
  const std::size_t n = space.dimension();
  std::vector<SymmetryElement> all = space.basis();
  for (const auto& b : space.basis()) all.push_back(b.partial(z));
  ExactMatrix coords = coordinate_matrix(all);
  if (n == 0) return ExactMatrix(0, 0);
  SpanSolve s = solve_in_span(coords.columns(0, n), coords.columns(n, n));
  if (!s.coordinates) {
    std::size_t j = s.failing_column;
    SymmetrySpace single(space.kind(), space.context(), {all[n + j]}, {});
    throw ClosureViolation(j, single.render(0));
  }
  return *s.coordinates;
}

std::vector<ExactMatrix> adjoint_matrices(const SymmetrySpace& space) {
  std::vector<ExactMatrix> out;
  for (std::size_t z : space.translation_vars()) out.push_back(adjoint_matrix(space, z));
  return out;
}

// ---------------------------------------------------------------------------
// Structured basis

SymmetryElement StructuredElement::expand(const ContextPtr& ctx,
                                          const std::vector<std::size_t>& translation_vars) const {
  SymmetryElement out;
  Weight w = weight;
  if (w.empty()) w.assign(ctx->translation_count(), GaussRat{});
  for (const auto& [p, c] : coefficients) {
    Exponents e(ctx->size(), 0);
    for (std::size_t s = 0; s < translation_vars.size(); ++s) e[translation_vars[s]] = p[s];
    out += c.times(ExpPoly::monomial(ctx, w, e, GaussRat(1)));
  }
  return out;
}

unsigned StructuredElement::degree(std::size_t s) const {
  unsigned d = 0;
  for (const auto& [p, c] : coefficients) d = std::max(d, p.at(s));
  return d;
}

namespace {

/// Weight over the context's translation slots for eigenvalues listed per
/// translation variable of the space.
Weight slot_weight(const ContextPtr& ctx, const std::vector<std::size_t>& tvars,
                   const std::vector<GaussRat>& lambda) {
  Weight w(ctx->translation_count(), GaussRat{});
  for (std::size_t s = 0; s < tvars.size(); ++s) w[*ctx->translation_slot(tvars[s])] = lambda[s];
  return w;
}

}  // namespace

StructuredBasis structured_basis(const SymmetrySpace& space) {
  const ContextPtr& ctx = space.context();
  const auto& tvars = space.translation_vars();
  const std::size_t n = space.dimension();
  const std::size_t g = tvars.size();
  StructuredBasis out;
  out.ambient = n;
  if (n == 0) return out;

  std::vector<ExactMatrix> mats = adjoint_matrices(space);
  BlockDecomposition dec;
  if (g == 0) {
    dec.ambient = n;
    Block b;
    b.basis = ExactMatrix::identity(n);
    dec.blocks.push_back(std::move(b));
  } else {
    dec = common_decompose(mats);
  }

  for (const auto& blk : dec.blocks) {
    if (blk.undecomposed) {
      std::string factors;
      for (const auto& f : blk.unresolved_factors) factors += (factors.empty() ? "" : ", ") + f.to_string();
      throw IrrationalEigenvalue("adjoint action has eigenvalues outside Q(i)" +
                                 (factors.empty() ? std::string() : ": " + factors));
    }
    StructuredBlock sb;
    sb.coordinates = blk.basis;
    sb.restrictions = blk.restrictions;
    sb.nilpotency = blk.nilpotency;
    for (const auto& l : blk.eigenvalues) sb.eigenvalues.push_back(*l);
    const std::size_t r = blk.dimension();

    for (std::size_t i = 0; i < r; ++i) {
      SymmetryElement e;
      for (std::size_t j = 0; j < n; ++j) {
        if (!blk.basis(j, i).is_zero()) e += space.basis()[j] * blk.basis(j, i);
      }
      sb.originals.push_back(std::move(e));
    }

    // E(z) = E(0) * prod_s exp(R_s z_s), E the row of block elements.
    std::vector<SymmetryElement> c0;
    for (const auto& e : sb.originals) c0.push_back(e.at_zero(tvars));
    ExpPolyMatrix x(r, std::vector<ExpPoly>(r, ExpPoly(ctx)));
    for (std::size_t i = 0; i < r; ++i) x[i][i] = ExpPoly::constant(ctx, GaussRat(1));
    for (std::size_t s = 0; s < g; ++s) {
      x = multiply(x, block_exp(sb.restrictions[s], sb.eigenvalues[s], sb.nilpotency[s], ctx, tvars[s]));
    }

    const Weight lambda = slot_weight(ctx, tvars, sb.eigenvalues);
    for (std::size_t i = 0; i < r; ++i) {
      StructuredElement el;
      el.weight = lambda;
      for (std::size_t k = 0; k < r; ++k) {
        for (const auto& [w, poly] : x[k][i].groups()) {
          if (w != lambda) throw InvariantViolation("block exponential carries an unexpected weight");
          for (const auto& [e, c] : poly.terms()) {
            Exponents p(g, 0);
            for (std::size_t s = 0; s < g; ++s) p[s] = e[tvars[s]];
            SymmetryElement term = c0[k] * c;
            auto [it, inserted] = el.coefficients.try_emplace(p, term);
            if (!inserted) {
              it->second += term;
              if (it->second.is_zero()) el.coefficients.erase(it);
            }
          }
        }
      }
      sb.elements.push_back(std::move(el));
    }
    out.blocks.push_back(std::move(sb));
  }

  StructureChecks checks = check_structure(space, out);
  if (!checks.all()) throw InvariantViolation("structured basis failed verification");
  return out;
}

StructureChecks check_structure(const SymmetrySpace& space, const StructuredBasis& sb) {
  StructureChecks out;
  const ContextPtr& ctx = space.context();
  const auto& tvars = space.translation_vars();
  const std::size_t g = tvars.size();
  if (space.dimension() == 0) return out;

  std::vector<ExactMatrix> mats = adjoint_matrices(space);
  for (std::size_t a = 0; a < mats.size(); ++a)
    for (std::size_t b = a + 1; b < mats.size(); ++b)
      if (mats[a] * mats[b] != mats[b] * mats[a]) out.matrices_commute = false;

  std::size_t total = 0;
  ExactMatrix stacked;
  for (const auto& blk : sb.blocks) {
    total += blk.dimension();
    stacked = stacked.cols() == 0 ? blk.coordinates : stacked.hstack(blk.coordinates);
  }
  out.direct_sum = total == sb.ambient && total == space.dimension() && rank(stacked) == total;

  std::vector<SymmetryElement> expanded_all;
  for (const auto& blk : sb.blocks) {
    std::vector<SymmetryElement> expanded;
    for (std::size_t i = 0; i < blk.dimension(); ++i) {
      const StructuredElement& el = blk.elements[i];
      for (std::size_t s = 0; s < g; ++s) {
        if (!el.coefficients.empty() && el.degree(s) >= blk.nilpotency[s]) out.degree_bound = false;
      }
      for (const auto& [p, c] : el.coefficients) {
        for (std::size_t z : tvars)
          if (c.depends_on(z)) out.coefficients_translation_free = false;
      }
      SymmetryElement e = el.expand(ctx, tvars);
      if (e != blk.originals[i]) out.expansion_reproduces = false;
      expanded.push_back(std::move(e));
    }

    for (std::size_t s = 0; s < g; ++s) {
      std::vector<SymmetryElement> all = expanded;
      for (const auto& e : expanded) all.push_back(e.partial(tvars[s]));
      ExactMatrix coords = coordinate_matrix(all);
      const std::size_t r = expanded.size();
      SpanSolve sol = solve_in_span(coords.columns(0, r), coords.columns(r, r));
      if (!sol.coordinates || *sol.coordinates != blk.restrictions[s]) out.derivative_consistent = false;

      ExpPolyMatrix ex = block_exp(blk.restrictions[s], blk.eigenvalues[s], blk.nilpotency[s], ctx, tvars[s]);
      if (partial(ex, tvars[s]) != multiply(blk.restrictions[s], ex)) out.exp_ode = false;
    }
    expanded_all.insert(expanded_all.end(), expanded.begin(), expanded.end());
  }

  std::vector<SymmetryElement> both = space.basis();
  both.insert(both.end(), expanded_all.begin(), expanded_all.end());
  const std::size_t rb = span_rank(space.basis());
  out.span_preserved = span_rank(expanded_all) == rb && span_rank(both) == rb;
  return out;
}

DimensionReport ansatz_dimensions(const SymmetrySpace& space, unsigned q) {
  DimensionReport out;
  out.q = q;
  SymmetrySpace sub = space.sub_space(q);
  out.v = sub.dimension();
  if (out.v == 0) return out;
  if (sub.translation_vars().empty()) {
    out.rho = 1;
    out.r.push_back(out.v);
    out.lambda.emplace_back();
    out.k.emplace_back();
  } else {
    BlockDecomposition dec = common_decompose(adjoint_matrices(sub));
    out.rho = dec.rho();
    for (const auto& b : dec.blocks) {
      out.r.push_back(b.dimension());
      std::vector<GaussRat> lam;
      for (const auto& l : b.eigenvalues) lam.push_back(l.value_or(GaussRat{}));
      out.lambda.push_back(std::move(lam));
      out.k.push_back(b.nilpotency);
      for (unsigned k : b.nilpotency) {
        if (k < 1 || k > b.dimension()) out.k_in_range = false;
      }
    }
  }
  std::size_t sum = 0;
  for (std::size_t r : out.r) sum += r;
  out.rho_le_v = out.rho <= out.v;
  out.sum_r_eq_v = sum == out.v;
  return out;
}

}  // namespace symkit
