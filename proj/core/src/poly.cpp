#include "symkit/poly.hpp"

#include <algorithm>
#include <numeric>

#include "symkit/error.hpp"

namespace symkit {

// ---------------------------------------------------------------------------
// VarContext

VarContext::VarContext(std::vector<VarInfo> vars, const std::vector<std::string>& translations)
    : vars_(std::move(vars)), slot_of_(vars_.size(), -1) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name.empty()) throw InputError("variable names must be non-empty");
    if (!by_name_.emplace(vars_[i].name, i).second) {
      throw InputError("duplicate variable name '" + vars_[i].name + "'");
    }
  }
  for (const auto& name : translations) {
    std::size_t idx = index_of(name);
    if (slot_of_[idx] >= 0) throw InputError("duplicate translation variable '" + name + "'");
    slot_of_[idx] = static_cast<int>(translations_.size());
    translations_.push_back(idx);
  }
}

ContextPtr VarContext::make(std::vector<VarInfo> vars, const std::vector<std::string>& translations) {
  return std::make_shared<const VarContext>(std::move(vars), translations);
}

ContextPtr VarContext::independents(const std::vector<std::string>& names,
                                    const std::vector<std::string>& translations) {
  std::vector<VarInfo> vars;
  vars.reserve(names.size());
  for (const auto& n : names) vars.push_back(VarInfo{n, VarKind::Independent, -1, {}});
  return make(std::move(vars), translations);
}

std::optional<std::size_t> VarContext::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t VarContext::index_of(std::string_view name) const {
  auto idx = find(name);
  if (!idx) throw UnknownVariable(std::string(name));
  return *idx;
}

std::optional<std::size_t> VarContext::translation_slot(std::size_t var) const {
  if (var >= slot_of_.size() || slot_of_[var] < 0) return std::nullopt;
  return static_cast<std::size_t>(slot_of_[var]);
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// Orders

unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = total_degree(a);
  unsigned db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

bool WeightLess::operator()(const Weight& a, const Weight& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool is_zero_weight(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](const GaussRat& x) { return x.is_zero(); });
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::constant(std::size_t nvars, const GaussRat& c) {
  MultiPoly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::monomial(Exponents e, const GaussRat& c) {
  MultiPoly p(e.size());
  p.add_term(e, c);
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && symkit::total_degree(terms_.begin()->first) == 0);
}

GaussRat MultiPoly::constant_term() const {
  if (terms_.empty()) return {};
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? GaussRat{} : it->second;
}

void MultiPoly::add_term(const Exponents& e, const GaussRat& c) {
  if (c.is_zero()) return;
  if (nvars_ == 0 && terms_.empty()) nvars_ = e.size();
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out(std::max(a.nvars_, b.nvars_));
  Exponents sum;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      sum.resize(ea.size());
      for (std::size_t i = 0; i < ea.size(); ++i) sum[i] = ea[i] + eb[i];
      out.add_term(sum, ca * cb);
    }
  }
  return out;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly MultiPoly::partial(std::size_t var) const {
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    --d[var];
    out.add_term(d, c * GaussRat(static_cast<long>(e[var])));
  }
  return out;
}

unsigned MultiPoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

unsigned MultiPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, symkit::total_degree(e));
  return d;
}

// ---------------------------------------------------------------------------
// ExpPoly

Weight ExpPoly::zero_weight() const {
  return Weight(ctx_ ? ctx_->translation_count() : 0, GaussRat{});
}

ExpPoly ExpPoly::constant(ContextPtr ctx, const GaussRat& c) {
  ExpPoly p(std::move(ctx));
  p.add_group(p.zero_weight(), MultiPoly::constant(p.ctx_->size(), c));
  return p;
}

ExpPoly ExpPoly::variable(ContextPtr ctx, std::size_t var) {
  ExpPoly p(std::move(ctx));
  if (var >= p.ctx_->size()) throw UnknownVariable("#" + std::to_string(var));
  Exponents e(p.ctx_->size(), 0);
  e[var] = 1;
  p.add_group(p.zero_weight(), MultiPoly::monomial(std::move(e), GaussRat(1)));
  return p;
}

ExpPoly ExpPoly::variable(ContextPtr ctx, std::string_view name) {
  std::size_t idx = ctx->index_of(name);
  return variable(std::move(ctx), idx);
}

ExpPoly ExpPoly::exponential(ContextPtr ctx, Weight weight) {
  return monomial(ctx, std::move(weight), Exponents(ctx->size(), 0), GaussRat(1));
}

ExpPoly ExpPoly::monomial(ContextPtr ctx, Weight weight, Exponents exponents, const GaussRat& c) {
  if (weight.size() != ctx->translation_count() || exponents.size() != ctx->size()) {
    throw VariableMismatch("weight or exponent vector does not match the context");
  }
  ExpPoly p(std::move(ctx));
  p.add_group(weight, MultiPoly::monomial(std::move(exponents), c));
  return p;
}

ExpPoly ExpPoly::from_terms(ContextPtr ctx, const std::vector<Term>& terms) {
  ExpPoly p(ctx);
  for (const auto& t : terms) p += monomial(ctx, t.weight, t.exponents, t.coeff);
  return p;
}

std::size_t ExpPoly::term_count() const {
  std::size_t n = 0;
  for (const auto& [w, p] : groups_) n += p.terms().size();
  return n;
}

bool ExpPoly::is_constant() const {
  if (groups_.empty()) return true;
  return groups_.size() == 1 && is_zero_weight(groups_.begin()->first) &&
         groups_.begin()->second.is_constant();
}

GaussRat ExpPoly::constant_term() const {
  for (const auto& [w, p] : groups_) {
    if (is_zero_weight(w)) return p.constant_term();
  }
  return {};
}

void ExpPoly::adopt(const ExpPoly& other) {
  if (!other.ctx_) return;
  if (!ctx_) {
    ctx_ = other.ctx_;
    return;
  }
  if (!same_context(ctx_, other.ctx_)) {
    throw VariableMismatch("expressions belong to different variable contexts");
  }
}

void ExpPoly::add_group(const Weight& w, const MultiPoly& p) {
  if (p.is_zero()) return;
  auto it = groups_.find(w);
  if (it == groups_.end()) {
    groups_.emplace(w, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) groups_.erase(it);
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& rhs) {
  adopt(rhs);
  for (const auto& [w, p] : rhs.groups_) add_group(w, p);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& rhs) {
  adopt(rhs);
  for (const auto& [w, p] : rhs.groups_) add_group(w, -p);
  return *this;
}

ExpPoly& ExpPoly::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    groups_.clear();
    return *this;
  }
  for (auto& [w, p] : groups_) p *= c;
  return *this;
}

ExpPoly& ExpPoly::operator*=(const ExpPoly& rhs) {
  adopt(rhs);
  GroupMap out;
  for (const auto& [wa, pa] : groups_) {
    for (const auto& [wb, pb] : rhs.groups_) {
      Weight w(wa.size());
      for (std::size_t i = 0; i < wa.size(); ++i) w[i] = wa[i] + wb[i];
      MultiPoly prod = pa * pb;
      if (prod.is_zero()) continue;
      auto it = out.find(w);
      if (it == out.end()) {
        out.emplace(std::move(w), std::move(prod));
      } else {
        it->second += prod;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  groups_ = std::move(out);
  return *this;
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly out = *this;
  for (auto& [w, p] : out.groups_) p = -p;
  return out;
}

ExpPoly ExpPoly::pow(unsigned k) const {
  if (!ctx_) return ExpPoly();
  ExpPoly result = constant(ctx_, GaussRat(1));
  ExpPoly base = *this;
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k > 0) base *= base;
  }
  return result;
}

ExpPoly ExpPoly::partial(std::size_t var) const {
  ExpPoly out(ctx_);
  if (!ctx_) return out;
  auto slot = ctx_->translation_slot(var);
  for (const auto& [w, p] : groups_) {
    MultiPoly d = p.partial(var);
    if (slot && !w[*slot].is_zero()) d += p * w[*slot];
    out.add_group(w, d);
  }
  return out;
}

ExpPoly ExpPoly::antiderivative(std::size_t var) const {
  ExpPoly out(ctx_);
  if (!ctx_) return out;
  auto slot = ctx_->translation_slot(var);
  for (const auto& [w, p] : groups_) {
    if (slot && !w[*slot].is_zero()) {
      throw InputError("antiderivative under an exponential factor is not supported");
    }
    MultiPoly q(p.nvars());
    for (const auto& [e, c] : p.terms()) {
      Exponents up = e;
      ++up[var];
      q.add_term(up, c / GaussRat(static_cast<long>(up[var])));
    }
    out.add_group(w, q);
  }
  return out;
}

std::vector<ExpPoly::Term> ExpPoly::coeff_extract() const {
  std::vector<Term> out;
  out.reserve(term_count());
  for (const auto& [w, p] : groups_) {
    for (const auto& [e, c] : p.terms()) out.push_back(Term{w, e, c});
  }
  return out;
}

unsigned ExpPoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [w, p] : groups_) d = std::max(d, p.degree_in(var));
  return d;
}

unsigned ExpPoly::degree_in(std::span<const std::size_t> vars) const {
  unsigned d = 0;
  for (const auto& [w, p] : groups_) {
    for (const auto& [e, c] : p.terms()) {
      unsigned s = 0;
      for (std::size_t v : vars) s += e[v];
      d = std::max(d, s);
    }
  }
  return d;
}

bool ExpPoly::depends_on(std::size_t var) const {
  if (!ctx_) return false;
  auto slot = ctx_->translation_slot(var);
  for (const auto& [w, p] : groups_) {
    if (slot && !w[*slot].is_zero()) return true;
    if (p.degree_in(var) > 0) return true;
  }
  return false;
}

ExpPoly ExpPoly::substitute(std::size_t var, const ExpPoly& value) const {
  ExpPoly out(ctx_);
  out.adopt(value);
  if (!ctx_) return out;
  auto slot = ctx_->translation_slot(var);
  std::vector<ExpPoly> powers;
  auto power = [&](unsigned k) -> const ExpPoly& {
    if (powers.empty()) powers.push_back(constant(ctx_, GaussRat(1)));
    while (powers.size() <= k) powers.push_back(powers.back() * value);
    return powers[k];
  };
  for (const auto& [w, p] : groups_) {
    if (slot && !w[*slot].is_zero()) {
      throw InputError("cannot substitute a variable that carries an exponential weight");
    }
    for (const auto& [e, c] : p.terms()) {
      if (e[var] == 0) {
        out.add_group(w, MultiPoly::monomial(e, c));
        continue;
      }
      Exponents rest = e;
      rest[var] = 0;
      out += monomial(ctx_, w, rest, c) * power(e[var]);
    }
  }
  return out;
}

ExpPoly ExpPoly::at_zero(std::span<const std::size_t> vars) const {
  ExpPoly out(ctx_);
  if (!ctx_) return out;
  for (const auto& [w, p] : groups_) {
    Weight nw = w;
    for (std::size_t v : vars) {
      if (auto slot = ctx_->translation_slot(v)) nw[*slot] = GaussRat{};
    }
    MultiPoly q(p.nvars());
    for (const auto& [e, c] : p.terms()) {
      bool vanishes = std::any_of(vars.begin(), vars.end(), [&](std::size_t v) { return e[v] > 0; });
      if (!vanishes) q.add_term(e, c);
    }
    out.add_group(nw, q);
  }
  return out;
}

ExpPoly ExpPoly::rebase(const ContextPtr& target) const {
  if (!ctx_ || same_context(ctx_, target)) {
    ExpPoly out = *this;
    out.ctx_ = target;
    return out;
  }
  std::vector<std::optional<std::size_t>> map(ctx_->size());
  for (std::size_t i = 0; i < ctx_->size(); ++i) map[i] = target->find(ctx_->var(i).name);

  ExpPoly out(target);
  for (const auto& [w, p] : groups_) {
    Weight nw(target->translation_count());
    for (std::size_t s = 0; s < w.size(); ++s) {
      if (w[s].is_zero()) continue;
      std::size_t var = ctx_->translations()[s];
      auto idx = map[var];
      auto slot = idx ? target->translation_slot(*idx) : std::nullopt;
      if (!slot) {
        throw VariableMismatch("'" + ctx_->var(var).name +
                               "' is not a translation variable of the target context");
      }
      nw[*slot] = w[s];
    }
    MultiPoly q(target->size());
    for (const auto& [e, c] : p.terms()) {
      Exponents ne(target->size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!map[i]) throw VariableMismatch("'" + ctx_->var(i).name + "' missing from target context");
        ne[*map[i]] = e[i];
      }
      q.add_term(ne, c);
    }
    out.add_group(nw, q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string render_monomial(const Exponents& e, const VarContext& ctx) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += ctx.var(i).name;
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

std::string render_scaled(const GaussRat& c, const std::string& factor) {
  if (factor.empty()) return c.to_string();
  if (c.is_one()) return factor;
  if (c == GaussRat(-1)) return "-" + factor;
  if (c.is_real() || sgn(c.re()) == 0) return c.to_string() + "*" + factor;
  return "(" + c.to_string() + ")*" + factor;
}

void append_signed(std::string& out, const std::string& piece) {
  if (out.empty()) {
    out = piece;
  } else if (piece.front() == '-') {
    out += " - " + piece.substr(1);
  } else {
    out += " + " + piece;
  }
}

}  // namespace

std::string render(const MultiPoly& p, const VarContext& ctx) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms()) {
    std::string piece = render_scaled(c, render_monomial(e, ctx));
    if (p.terms().size() > 1 && total_degree(e) == 0 && !c.is_real() && sgn(c.re()) != 0) {
      piece = "(" + piece + ")";
    }
    append_signed(out, piece);
  }
  return out;
}

std::string render_weight(const Weight& w, const VarContext& ctx) {
  std::string out;
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s].is_zero()) continue;
    append_signed(out, render_scaled(w[s], ctx.var(ctx.translations()[s]).name));
  }
  return out.empty() ? "0" : out;
}

std::string ExpPoly::to_string() const {
  if (groups_.empty()) return "0";
  std::string zero_part;
  std::string rest;
  for (const auto& [w, p] : groups_) {
    if (is_zero_weight(w)) {
      zero_part = render(p, *ctx_);
      continue;
    }
    std::string exp_factor = "exp(" + render_weight(w, *ctx_) + ")";
    std::string piece;
    if (p.terms().size() == 1) {
      const auto& [e, c] = *p.terms().begin();
      std::string mono = render_monomial(e, *ctx_);
      piece = render_scaled(c, mono.empty() ? exp_factor : exp_factor + "*" + mono);
    } else {
      piece = exp_factor + "*(" + render(p, *ctx_) + ")";
    }
    append_signed(rest, piece);
  }
  std::string out = zero_part;
  if (!rest.empty()) append_signed(out, rest);
  return out;
}

}  // namespace symkit
