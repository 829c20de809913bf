#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symkit/field.hpp"

namespace symkit {

enum class VarKind { Independent, Dependent, Jet };

/// One coordinate of a variable context.
///
/// Dependent and jet variables carry the dependent-variable index and the
/// derivative multiindex (all zeros for the dependent variable itself).
struct VarInfo {
  std::string name;
  VarKind kind = VarKind::Independent;
  int dependent = -1;
  std::vector<unsigned> multiindex;

  friend bool operator==(const VarInfo&, const VarInfo&) = default;
};

/// Ordered list of variables shared by every polynomial built over it.
///
/// The declaration order fixes the graded-lex monomial order (earlier
/// variables rank higher). A subset of the variables is designated as
/// translation variables; only those may carry exponential weights.
class VarContext {
 public:
  VarContext(std::vector<VarInfo> vars, const std::vector<std::string>& translations);

  static std::shared_ptr<const VarContext> make(std::vector<VarInfo> vars,
                                                const std::vector<std::string>& translations = {});
  /// Context of plain independent variables.
  static std::shared_ptr<const VarContext> independents(
      const std::vector<std::string>& names, const std::vector<std::string>& translations = {});

  std::size_t size() const { return vars_.size(); }
  const VarInfo& var(std::size_t index) const { return vars_.at(index); }
  const std::vector<VarInfo>& vars() const { return vars_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable.
  std::size_t index_of(std::string_view name) const;

  std::size_t translation_count() const { return translations_.size(); }
  const std::vector<std::size_t>& translations() const { return translations_; }
  std::optional<std::size_t> translation_slot(std::size_t var) const;

  friend bool operator==(const VarContext& a, const VarContext& b) {
    return a.vars_ == b.vars_ && a.translations_ == b.translations_;
  }

 private:
  std::vector<VarInfo> vars_;
  std::vector<std::size_t> translations_;
  std::vector<int> slot_of_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

using ContextPtr = std::shared_ptr<const VarContext>;

/// True when both pointers denote the same (structurally equal) context.
bool same_context(const ContextPtr& a, const ContextPtr& b);

/// Dense exponent vector, one entry per context variable.
using Exponents = std::vector<unsigned>;

unsigned total_degree(const Exponents& e);

/// Graded-lex "greater than": maps keyed with it iterate leading term first.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Exponential weight vector, one entry per translation variable.
using Weight = std::vector<GaussRat>;

struct WeightLess {
  bool operator()(const Weight& a, const Weight& b) const;
};

bool is_zero_weight(const Weight& w);

/// Sparse multivariate polynomial over GaussRat. Zero coefficients are never stored.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, GaussRat, GrlexGreater>;

  MultiPoly() = default;
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const GaussRat& c);
  static MultiPoly monomial(Exponents e, const GaussRat& c);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussRat constant_term() const;

  /// Adds c * x^e, dropping the term if it cancels.
  void add_term(const Exponents& e, const GaussRat& c);

  MultiPoly& operator+=(const MultiPoly& rhs);
  MultiPoly& operator-=(const MultiPoly& rhs);
  MultiPoly& operator*=(const GaussRat& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const GaussRat& c) { return a *= c; }
  MultiPoly operator-() const;

  MultiPoly partial(std::size_t var) const;
  unsigned degree_in(std::size_t var) const;
  unsigned total_degree() const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Finite sum of exp(weight . z) * polynomial, z the translation variables.
///
/// A default-constructed ExpPoly is the context-free zero; it combines with
/// values of any context. All other values belong to exactly one context.
class ExpPoly {
 public:
  using GroupMap = std::map<Weight, MultiPoly, WeightLess>;

  struct Term {
    Weight weight;
    Exponents exponents;
    GaussRat coeff;

    friend bool operator==(const Term&, const Term&) = default;
  };

  ExpPoly() = default;
  explicit ExpPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static ExpPoly constant(ContextPtr ctx, const GaussRat& c);
  static ExpPoly variable(ContextPtr ctx, std::size_t var);
  static ExpPoly variable(ContextPtr ctx, std::string_view name);
  static ExpPoly exponential(ContextPtr ctx, Weight weight);
  static ExpPoly monomial(ContextPtr ctx, Weight weight, Exponents exponents, const GaussRat& c);
  /// Inverse of coeff_extract.
  static ExpPoly from_terms(ContextPtr ctx, const std::vector<Term>& terms);

  const ContextPtr& context() const { return ctx_; }
  const GroupMap& groups() const { return groups_; }
  bool is_zero() const { return groups_.empty(); }
  std::size_t term_count() const;
  bool is_constant() const;
  /// Constant term of the weight-zero group.
  GaussRat constant_term() const;

  ExpPoly& operator+=(const ExpPoly& rhs);
  ExpPoly& operator-=(const ExpPoly& rhs);
  ExpPoly& operator*=(const GaussRat& c);
  ExpPoly& operator*=(const ExpPoly& rhs);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(ExpPoly a, const ExpPoly& b) { return a *= b; }
  friend ExpPoly operator*(ExpPoly a, const GaussRat& c) { return a *= c; }
  friend ExpPoly operator*(const GaussRat& c, ExpPoly a) { return a *= c; }
  ExpPoly operator-() const;
  ExpPoly pow(unsigned k) const;

  /// Partial derivative; an exponential factor contributes weight * p.
  ExpPoly partial(std::size_t var) const;
  /// x-antiderivative with zero integration constant. Requires no
  /// exponential dependence on var.
  ExpPoly antiderivative(std::size_t var) const;

  /// Complete, duplicate-free list of (weight, exponents, coefficient).
  std::vector<Term> coeff_extract() const;

  unsigned degree_in(std::size_t var) const;
  /// Total degree restricted to the listed variables.
  unsigned degree_in(std::span<const std::size_t> vars) const;
  bool depends_on(std::size_t var) const;

  /// Replaces var by value. var must not carry exponential weight.
  ExpPoly substitute(std::size_t var, const ExpPoly& value) const;
  /// Sets the listed variables to zero (exp factors on them become 1).
  ExpPoly at_zero(std::span<const std::size_t> vars) const;
  /// Re-expresses the value over another context by variable name.
  ExpPoly rebase(const ContextPtr& target) const;

  std::string to_string() const;

  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.groups_ == b.groups_; }

 private:
  void adopt(const ExpPoly& other);
  void add_group(const Weight& w, const MultiPoly& p);
  Weight zero_weight() const;

  ContextPtr ctx_;
  GroupMap groups_;
};

/// Renders a polynomial with the context's variable names.
std::string render(const MultiPoly& p, const VarContext& ctx);
/// Renders a weight as a linear form "2*t + i*x".
std::string render_weight(const Weight& w, const VarContext& ctx);

}  // namespace symkit
