#include "symkit/cli/driver.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include "symkit/casestudies.hpp"
#include "symkit/cli/model.hpp"
#include "symkit/cli/problem.hpp"
#include "symkit/structure.hpp"

namespace symkit::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto l = spdlog::get("symkit");
    if (!l) l = spdlog::stderr_color_mt("symkit");
    l->set_pattern("symkit [%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SYMKIT_LOG")) l->set_level(spdlog::level::from_str(env));
  });
  return spdlog::get("symkit");
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Flags {
  std::optional<unsigned> order;
  std::optional<unsigned> qmax;
  std::string caps;
  std::string lambda;
  std::string json;
  bool verify = false;
};

/// Collects the JSON document and routes the table text.
class Report {
 public:
  Report(std::string command, const Flags& flags, std::ostream& out)
      : path_(flags.json), out_(out), null_(nullptr) {
    doc["schema"] = 1;
    doc["command"] = std::move(command);
  }

  std::ostream& table() { return path_ == "-" ? null_ : out_; }

  void finish() {
    if (path_.empty()) return;
    std::string text = doc.dump(2) + "\n";
    if (path_ == "-") {
      out_ << text;
      return;
    }
    std::ofstream file(path_, std::ios::binary);
    if (!file || !(file << text)) throw InputError("cannot write '" + path_ + "'");
  }

  Json doc;

 private:
  std::string path_;
  std::ostream& out_;
  std::ostream null_;
};

ProblemFile load(const std::string& path) {
  if (path.size() < 4 || path.substr(path.size() - 4) != ".pde") {
    logger()->warn("'{}' does not have the .pde extension", path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const SyntaxError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const SemanticError& e) {
    throw SemanticError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Configuration: flags, then the task block, then defaults.

unsigned resolve_order(const Flags& f, const ProblemFile& p) {
  if (f.order) return *f.order;
  if (p.task && p.task->order) return *p.task->order;
  return 2;
}

std::vector<unsigned> raw_caps(const Flags& f, const ProblemFile& p) {
  if (!f.caps.empty()) return parse_caps(f.caps);
  if (p.task) return p.task->caps;
  return {};
}

std::vector<unsigned> operator_caps(const Flags& f, const ProblemFile& p, std::size_t nvars) {
  std::vector<unsigned> caps = raw_caps(f, p);
  if (caps.size() == 1) caps.assign(nvars, caps[0]);
  if (!caps.empty() && caps.size() != nvars) {
    throw SemanticError("caps needs 1 or " + std::to_string(nvars) + " values, got " +
                        std::to_string(caps.size()));
  }
  return caps;
}

EvolutionCaps evolution_caps(const Flags& f, const ProblemFile& p) {
  std::vector<unsigned> caps = raw_caps(f, p);
  EvolutionCaps out;
  if (caps.size() > 2) throw SemanticError("evolution caps are D (jet degree) and P (polynomial degree)");
  if (!caps.empty()) out.jet_degree = caps[0];
  if (caps.size() == 2) out.poly_degree = caps[1];
  return out;
}

std::vector<Weight> resolve_weights(const Flags& f, const ProblemFile& p, std::size_t count) {
  std::vector<LambdaItem> items;
  if (!f.lambda.empty()) {
    items = parse_lambda_list(f.lambda);
  } else if (p.task) {
    items = p.task->lambdas;
  }
  if (items.empty()) return {Weight(count)};
  return evaluate_lambdas(items, count);
}

// ---------------------------------------------------------------------------
// JSON encoding. Every number is an exact string.

Json weight_json(const Weight& w) {
  Json a = Json::array();
  for (const auto& c : w) a.push_back(c.to_string());
  return a;
}

Json poly_json(const ExpPoly& p) {
  Json terms = Json::array();
  if (p.is_zero()) return terms;
  const VarContext& ctx = *p.context();
  for (const auto& t : p.coeff_extract()) {
    Json powers = Json::object();
    for (std::size_t v = 0; v < t.exponents.size(); ++v) {
      if (t.exponents[v] != 0) powers[ctx.var(v).name] = t.exponents[v];
    }
    Json term;
    term["weight"] = weight_json(t.weight);
    term["powers"] = std::move(powers);
    term["coeff"] = t.coeff.to_string();
    terms.push_back(std::move(term));
  }
  return terms;
}

Json op_json(const LinDiffOp& r) {
  Json o;
  o["text"] = r.to_string();
  Json terms = Json::array();
  for (const auto& [j, a] : r.terms()) {
    Json d = Json::object();
    for (std::size_t v = 0; v < j.size(); ++v) {
      if (j[v] != 0) d[r.context()->var(v).name] = j[v];
    }
    Json t;
    t["derivative"] = std::move(d);
    t["coefficient"] = poly_json(a);
    terms.push_back(std::move(t));
  }
  o["terms"] = std::move(terms);
  return o;
}

std::string characteristic_text(const std::vector<ExpPoly>& eta) {
  if (eta.size() == 1) return eta[0].to_string();
  std::string out = "(";
  for (std::size_t a = 0; a < eta.size(); ++a) out += (a ? ", " : "") + eta[a].to_string();
  return out + ")";
}

Json characteristic_json(const std::vector<ExpPoly>& eta, const JetContext& ctx) {
  Json o;
  o["text"] = characteristic_text(eta);
  Json comps = Json::array();
  for (std::size_t a = 0; a < eta.size(); ++a) {
    Json c;
    c["unknown"] = ctx.dependent_names()[a];
    c["value"] = poly_json(eta[a]);
    comps.push_back(std::move(c));
  }
  o["components"] = std::move(comps);
  return o;
}

Json matrix_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json string_list(const std::vector<std::string>& items) {
  Json a = Json::array();
  for (const auto& s : items) a.push_back(s);
  return a;
}

std::vector<std::string> translation_names(const SymmetrySpace& space) {
  std::vector<std::string> out;
  for (std::size_t z : space.translation_vars()) out.push_back(space.context()->var(z).name);
  return out;
}

std::string join_text(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
  return out;
}

// ---------------------------------------------------------------------------
// Shared sections

/// Block data (lambda, k, r) of the structured basis plus its checks.
Json structure_section(const SymmetrySpace& space, std::ostream& table) {
  Json out;
  out["variables"] = string_list(translation_names(space));
  if (space.dimension() == 0) {
    out["blocks"] = Json::array();
    return out;
  }
  StructuredBasis sb;
  try {
    sb = structured_basis(space);
  } catch (const IrrationalEigenvalue& e) {
    logger()->warn("{}", e.what());
    out["blocks"] = nullptr;
    out["undecomposed"] = e.what();
    table << "blocks: not decomposable over Q(i): " << e.what() << "\n";
    return out;
  }
  Json blocks = Json::array();
  table << "blocks (rho = " << sb.rho() << ")\n";
  table << "  " << std::left << std::setw(4) << "#" << std::setw(6) << "r" << std::setw(24) << "lambda"
        << "k\n";
  for (std::size_t b = 0; b < sb.blocks.size(); ++b) {
    const StructuredBlock& blk = sb.blocks[b];
    std::vector<std::string> lambda;
    std::vector<std::string> k;
    Json jl = Json::array();
    Json jk = Json::array();
    for (const auto& e : blk.eigenvalues) {
      lambda.push_back(e.to_string());
      jl.push_back(e.to_string());
    }
    for (unsigned n : blk.nilpotency) {
      k.push_back(std::to_string(n));
      jk.push_back(n);
    }
    Json jb;
    jb["lambda"] = std::move(jl);
    jb["k"] = std::move(jk);
    jb["r"] = blk.dimension();
    blocks.push_back(std::move(jb));
    table << "  " << std::setw(4) << b << std::setw(6) << blk.dimension() << std::setw(24)
          << ("(" + join_text(lambda, ", ") + ")") << "(" << join_text(k, ", ") << ")\n";
  }
  table << std::right;
  out["blocks"] = std::move(blocks);
  StructureChecks c = check_structure(space, sb);
  Json checks;
  checks["matrices_commute"] = c.matrices_commute;
  checks["direct_sum"] = c.direct_sum;
  checks["degree_bound"] = c.degree_bound;
  checks["coefficients_translation_free"] = c.coefficients_translation_free;
  checks["expansion_reproduces"] = c.expansion_reproduces;
  checks["span_preserved"] = c.span_preserved;
  checks["derivative_consistent"] = c.derivative_consistent;
  checks["exp_ode"] = c.exp_ode;
  out["checks"] = std::move(checks);
  return out;
}

struct OperatorCheck {
  std::size_t checked = 0;
  std::size_t residual_failures = 0;
  bool solution_oracle = false;
  std::size_t solutions_checked = 0;
  std::size_t solution_failures = 0;

  bool passed() const { return residual_failures == 0 && solution_failures == 0; }
};

/// Residual [R, L] on solutions, and L(R psi) = 0 on polynomial solutions psi.
OperatorCheck verify_operators(const OperatorPde& pde, const std::vector<LinDiffOp>& basis, unsigned degree) {
  OperatorCheck c;
  for (const auto& r : basis) {
    ++c.checked;
    if (!pde.is_symmetry(r)) ++c.residual_failures;
  }
  auto sols = polynomial_solutions(pde, degree);
  if (!sols) return c;
  c.solution_oracle = true;
  for (const auto& r : basis) {
    for (const auto& psi : *sols) {
      ++c.solutions_checked;
      if (!pde.op().apply(r.apply(psi)).is_zero()) ++c.solution_failures;
    }
  }
  return c;
}

Json check_json(const OperatorCheck& c) {
  Json v;
  v["checked"] = c.checked;
  v["residual_failures"] = c.residual_failures;
  v["solution_oracle"] = c.solution_oracle;
  v["solutions_checked"] = c.solutions_checked;
  v["solution_failures"] = c.solution_failures;
  v["passed"] = c.passed();
  return v;
}

void print_check(std::ostream& table, const OperatorCheck& c) {
  table << "verify: " << c.checked << " residuals, " << c.residual_failures << " nonzero";
  if (c.solution_oracle) {
    table << "; " << c.solutions_checked << " solution images, " << c.solution_failures << " failed";
  } else {
    table << "; no polynomial solution oracle";
  }
  table << (c.passed() ? " [ok]" : " [FAILED]") << "\n";
}

std::vector<LinDiffOp> operators_of(const SymmetrySpace& space) {
  std::vector<LinDiffOp> out;
  for (const auto& e : space.basis()) out.push_back(e.to_operator(space.context()));
  return out;
}

void print_filtration(std::ostream& table, const SymmetrySpace& space) {
  table << std::setw(4) << "q" << std::setw(8) << "v" << "\n";
  for (std::size_t q = 0; q < space.filtration().size(); ++q) {
    table << std::setw(4) << q << std::setw(8) << space.filtration()[q] << "\n";
  }
}

Json filtration_json(const SymmetrySpace& space) {
  Json rows = Json::array();
  for (std::size_t q = 0; q < space.filtration().size(); ++q) {
    Json row;
    row["q"] = q;
    row["dimension"] = space.filtration()[q];
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_operators(std::ostream& table, const std::vector<LinDiffOp>& basis) {
  for (std::size_t k = 0; k < basis.size(); ++k) table << "  [" << k << "] " << basis[k].to_string() << "\n";
}

Json operators_json(const std::vector<LinDiffOp>& basis) {
  Json a = Json::array();
  for (const auto& r : basis) a.push_back(op_json(r));
  return a;
}

int verification_exit(bool passed, std::ostream& err) {
  if (passed) return kSuccess;
  err << "error: verification failed\n";
  return kInternalError;
}

// ---------------------------------------------------------------------------
// Commands

int solve_operator(const ProblemFile& p, const Flags& f, Report& rep, std::ostream& err) {
  OperatorPde pde = operator_pde(p);
  const ContextPtr& ctx = pde.context();
  unsigned q = resolve_order(f, p);
  std::vector<unsigned> caps = operator_caps(f, p, ctx->size());
  std::vector<Weight> weights = resolve_weights(f, p, ctx->translation_count());
  std::ostream& table = rep.table();
  auto start = Clock::now();

  SymmetrySpace space = SymmetrySpace::operator_filtration(pde, q, caps);
  std::vector<LinDiffOp> zero_basis = operators_of(space);
  logger()->info("filtration up to order {} in {:.3f}s", q, seconds_since(start));

  rep.doc["route"] = "operator";
  rep.doc["order"] = q;
  Json jcaps = Json::array();
  for (unsigned c : caps) jcaps.push_back(c);
  rep.doc["caps"] = std::move(jcaps);
  rep.doc["operator"] = pde.op().to_string();
  rep.doc["dimensions"] = filtration_json(space);

  table << "L = " << pde.op().to_string() << "\n";
  print_filtration(table, space);

  bool passed = true;
  Json runs = Json::array();
  Json verify = Json::array();
  for (const auto& w : weights) {
    std::vector<LinDiffOp> basis;
    if (is_zero_weight(w)) {
      basis = zero_basis;
    } else {
      OperatorAnsatz ansatz;
      ansatz.order = q;
      ansatz.weights = w;
      ansatz.degree_caps = caps;
      basis = operator_determining_solve(pde, ansatz).basis;
    }
    Json run;
    run["lambda"] = weight_json(w);
    run["dimension"] = basis.size();
    run["basis"] = operators_json(basis);
    table << "exp(" << render_weight(w, *ctx) << "): dimension " << basis.size() << "\n";
    print_operators(table, basis);
    if (f.verify) {
      OperatorCheck c = verify_operators(pde, basis, q + 2);
      passed = passed && c.passed();
      print_check(table, c);
      Json jc = check_json(c);
      jc["lambda"] = weight_json(w);
      verify.push_back(std::move(jc));
    }
    runs.push_back(std::move(run));
  }
  rep.doc["runs"] = std::move(runs);
  rep.doc["structure"] = structure_section(space, table);
  if (f.verify) rep.doc["verification"] = std::move(verify);
  rep.finish();
  return verification_exit(passed, err);
}

int solve_evolution(const ProblemFile& p, const Flags& f, Report& rep, std::ostream& err) {
  PdeSystem sys = evolution_system(p, std::max(1u, max_derivative_order(p)));
  unsigned q = resolve_order(f, p);
  EvolutionCaps caps = evolution_caps(f, p);
  std::vector<Weight> weights = resolve_weights(f, p, sys.context()->vars()->translation_count());
  std::ostream& table = rep.table();
  auto start = Clock::now();

  EvolutionReport er = evolution_case(sys, q, caps, weights);
  logger()->info("evolution search at order {} in {:.3f}s", q, seconds_since(start));
  const JetContext& ctx = *er.context;

  rep.doc["route"] = "evolution";
  rep.doc["order"] = q;
  Json jcaps;
  jcaps["jet_degree"] = caps.jet_degree;
  jcaps["poly_degree"] = caps.poly_degree;
  rep.doc["caps"] = std::move(jcaps);

  Json dims = Json::array();
  Json runs = Json::array();
  table << std::setw(24) << "weight" << std::setw(12) << "dimension" << std::setw(10) << "verified" << "\n";
  for (const auto& r : er.runs) {
    std::string w = "exp(" + render_weight(r.weight, *ctx.vars()) + ")";
    table << std::setw(24) << w << std::setw(12) << r.characteristics.size() << std::setw(10)
          << (r.verified ? "yes" : "NO") << "\n";
    Json d;
    d["lambda"] = weight_json(r.weight);
    d["dimension"] = r.characteristics.size();
    dims.push_back(std::move(d));

    Json run;
    run["lambda"] = weight_json(r.weight);
    Json chars = Json::array();
    for (const auto& eta : r.characteristics) chars.push_back(characteristic_json(eta, ctx));
    run["characteristics"] = std::move(chars);
    run["hints"] = string_list(r.hints);
    run["verified"] = r.verified;
    runs.push_back(std::move(run));
    for (const auto& h : r.hints) logger()->info("{}", h);
  }
  for (const auto& r : er.runs) {
    if (r.characteristics.empty()) continue;
    table << "exp(" << render_weight(r.weight, *ctx.vars()) << ")\n";
    for (std::size_t k = 0; k < r.characteristics.size(); ++k) {
      table << "  [" << k << "] " << characteristic_text(r.characteristics[k]) << "\n";
    }
  }
  rep.doc["dimensions"] = std::move(dims);
  rep.doc["runs"] = std::move(runs);

  auto zero = std::find_if(er.runs.begin(), er.runs.end(), [](const EvolutionRun& r) {
    return is_zero_weight(r.weight);
  });
  if (zero != er.runs.end()) {
    SymmetrySpace space = SymmetrySpace::from_characteristics(zero->characteristics, er.context);
    rep.doc["structure"] = structure_section(space, table);
  }

  Json summary;
  summary["all_verified"] = er.all_verified;
  summary["degrees_within_bound"] = er.degrees_within_bound;
  summary["nonzero_weights_consistent"] = er.nonzero_weights_consistent;
  rep.doc["verification"] = std::move(summary);
  if (f.verify) {
    table << "verify: " << (er.all_verified ? "every characteristic annihilates the system [ok]"
                                            : "some characteristic fails [FAILED]")
          << "\n";
  }
  rep.finish();
  return verification_exit(!f.verify || er.all_verified, err);
}

int cmd_solve(const std::string& file, const Flags& f, std::ostream& out, std::ostream& err) {
  ProblemFile p = load(file);
  Report rep("solve", f, out);
  rep.doc["problem"] = render_problem(p);
  if (is_linear_problem(p)) return solve_operator(p, f, rep, err);
  return solve_evolution(p, f, rep, err);
}

int cmd_evolution(const std::string& file, const Flags& f, std::ostream& out, std::ostream& err) {
  ProblemFile p = load(file);
  Report rep("evolution", f, out);
  rep.doc["problem"] = render_problem(p);
  return solve_evolution(p, f, rep, err);
}

int cmd_adjoint(const std::string& file, const Flags& f, std::ostream& out) {
  ProblemFile p = load(file);
  Report rep("adjoint", f, out);
  rep.doc["problem"] = render_problem(p);
  unsigned q = resolve_order(f, p);
  std::ostream& table = rep.table();

  std::optional<SymmetrySpace> space;
  if (is_linear_problem(p)) {
    OperatorPde pde = operator_pde(p);
    space = SymmetrySpace::operator_filtration(pde, q, operator_caps(f, p, pde.context()->size()));
    rep.doc["route"] = "operator";
    rep.doc["dimensions"] = filtration_json(*space);
    print_filtration(table, *space);
    print_operators(table, operators_of(*space));
  } else {
    PdeSystem sys = evolution_system(p, std::max(1u, max_derivative_order(p)));
    Weight zero(sys.context()->vars()->translation_count());
    EvolutionReport er = evolution_case(sys, q, evolution_caps(f, p), {zero});
    if (!er.all_verified) throw InvariantViolation("a computed characteristic failed verification");
    space = SymmetrySpace::from_characteristics(er.runs.at(0).characteristics, er.context);
    rep.doc["route"] = "evolution";
    table << "dimension " << space->dimension() << "\n";
    for (std::size_t k = 0; k < space->dimension(); ++k) {
      table << "  [" << k << "] " << space->render(k) << "\n";
    }
  }
  rep.doc["order"] = q;
  rep.doc["dimension"] = space->dimension();

  std::vector<ExactMatrix> mats = adjoint_matrices(*space);
  std::vector<std::string> names = translation_names(*space);
  Json jm = Json::array();
  for (std::size_t s = 0; s < mats.size(); ++s) {
    std::string cp = char_poly(mats[s]).to_string();
    Json m;
    m["variable"] = names[s];
    m["matrix"] = matrix_json(mats[s]);
    m["char_poly"] = cp;
    jm.push_back(std::move(m));
    table << "G(" << names[s] << "): char_poly " << cp << "\n" << mats[s].to_string() << "\n";
  }
  rep.doc["matrices"] = std::move(jm);
  rep.doc["structure"] = structure_section(*space, table);
  rep.finish();
  return kSuccess;
}

constexpr const char* kSchrodingerProblem =
    "vars t, x;\nunknowns psi;\ntranslations t, x;\neq i*D[psi,t] + D[psi,x,x] = 0;\n";

int cmd_schrodinger(const Flags& f, std::ostream& out, std::ostream& err) {
  unsigned qmax = f.qmax.value_or(4);
  Report rep("schrodinger", f, out);
  rep.doc["problem"] = kSchrodingerProblem;
  rep.doc["qmax"] = qmax;
  std::ostream& table = rep.table();
  OperatorPde pde = schrodinger_pde();

  bool formula_ok = true;
  Json dims = Json::array();
  table << std::setw(4) << "q" << std::setw(8) << "v" << std::setw(14) << "(q+1)(q+2)/2" << std::setw(12)
        << "recurrence" << std::setw(10) << "ansatz" << std::setw(10) << "stacked" << std::setw(12)
        << "bidegrees" << "\n";
  for (unsigned q = 0; q <= qmax; ++q) {
    auto start = Clock::now();
    CrossValidation cv = cross_validate(q);
    logger()->info("order {} cross-validated in {:.3f}s", q, seconds_since(start));
    std::size_t bound = operator_dimension_bound(q);
    bool row_ok = cv.ansatz_dimension == bound && cv.recurrence_dimension == bound && cv.bidegrees_ok;
    formula_ok = formula_ok && row_ok;
    table << std::setw(4) << q << std::setw(8) << cv.ansatz_dimension << std::setw(14) << bound << std::setw(12)
          << cv.recurrence_dimension << std::setw(10) << cv.ansatz_dimension << std::setw(10) << cv.stacked_rank
          << std::setw(12) << (cv.bidegrees_ok ? "ok" : "FAILED") << "\n";
    Json d;
    d["q"] = q;
    d["dimension"] = cv.ansatz_dimension;
    d["formula"] = bound;
    d["recurrence"] = cv.recurrence_dimension;
    d["stacked_rank"] = cv.stacked_rank;
    d["bidegrees_ok"] = cv.bidegrees_ok;
    dims.push_back(std::move(d));
  }
  rep.doc["dimensions"] = std::move(dims);

  SymmetrySpace space = SymmetrySpace::operator_filtration(pde, qmax);
  std::vector<LinDiffOp> basis = operators_of(space);
  const std::size_t x_axis = 1;
  Json jb = Json::array();
  for (const auto& r : basis) {
    Json e = op_json(r);
    Json h = Json::array();
    for (const auto& hj : to_h_form(r, x_axis)) h.push_back(poly_json(hj));
    e["h"] = std::move(h);
    jb.push_back(std::move(e));
  }
  rep.doc["basis"] = std::move(jb);
  table << "basis of V^(" << qmax << ")\n";
  print_operators(table, basis);
  rep.doc["structure"] = structure_section(space, table);

  bool passed = formula_ok;
  Json summary;
  summary["formula_holds"] = formula_ok;
  if (f.verify) {
    OperatorCheck c = verify_operators(pde, basis, qmax + 2);
    print_check(table, c);
    summary["operators"] = check_json(c);
    passed = passed && c.passed();
  }
  rep.doc["verification"] = std::move(summary);
  rep.finish();
  return verification_exit(passed, err);
}

unsigned expr_order(const Expr& e) {
  unsigned best = e.kind == Expr::Kind::Derivative ? static_cast<unsigned>(e.vars.size()) : 0;
  for (const auto& a : e.args) best = std::max(best, expr_order(a));
  return best;
}

unsigned field_order(const ProblemFile& p) {
  unsigned best = 0;
  for (const auto& fc : p.field) best = std::max(best, expr_order(fc.value));
  return best;
}

unsigned equation_order(const ProblemFile& p) {
  unsigned best = 0;
  for (const auto& eq : p.equations) best = std::max({best, expr_order(eq.lhs), expr_order(eq.rhs)});
  return best;
}

Json field_json(const GenVectorField& q) {
  Json o;
  o["text"] = q.to_string();
  Json xi = Json::array();
  for (const auto& c : q.xi) xi.push_back(poly_json(c));
  Json eta = Json::array();
  for (const auto& c : q.eta) eta.push_back(poly_json(c));
  o["xi"] = std::move(xi);
  o["eta"] = std::move(eta);
  return o;
}

int cmd_bracket(const std::string& fa, const std::string& fb, const Flags& f, std::ostream& out,
                std::ostream& err) {
  ProblemFile a = load(fa);
  ProblemFile b = load(fb);
  if (a.vars != b.vars || a.unknowns != b.unknowns || a.translations != b.translations ||
      a.equations != b.equations) {
    throw SemanticError("bracket operands must share declarations and equations");
  }
  Report rep("bracket", f, out);
  rep.doc["problems"] = Json::array({render_problem(a), render_problem(b)});
  std::ostream& table = rep.table();
  bool passed = true;

  if (a.op && b.op) {
    ContextPtr ctx = operator_context(a);
    LinDiffOp ra = evaluate_operator(*a.op, a, ctx);
    LinDiffOp rb = evaluate_operator(*b.op, b, ctx);
    LinDiffOp c = commutator(ra, rb);
    rep.doc["kind"] = "operator";
    rep.doc["a"] = op_json(ra);
    rep.doc["b"] = op_json(rb);
    rep.doc["bracket"] = op_json(c);
    table << "A = " << ra.to_string() << "\nB = " << rb.to_string() << "\n[A, B] = " << c.to_string() << "\n";
    if (f.verify) {
      OperatorPde pde = operator_pde(a);
      if (!pde.is_symmetry(ra) || !pde.is_symmetry(rb)) {
        throw InputError("an operand is not a symmetry of the equation");
      }
      OperatorCheck chk = verify_operators(pde, {c}, std::max(2u, ra.order() + rb.order()));
      print_check(table, chk);
      rep.doc["verification"] = check_json(chk);
      passed = chk.passed();
    }
  } else if (!a.field.empty() && !b.field.empty()) {
    unsigned budget = field_order(a) + field_order(b) + equation_order(a) + 2;
    std::optional<PdeSystem> sys;
    JetContextPtr ctx;
    if (f.verify) {
      sys = evolution_system(a, budget);
      ctx = sys->context();
    } else {
      ctx = jet_context(a, budget);
    }
    GenVectorField qa = field_of(a, ctx);
    GenVectorField qb = field_of(b, ctx);
    GenVectorField qc = lie_bracket(qa, qb);
    rep.doc["kind"] = "field";
    rep.doc["a"] = field_json(qa);
    rep.doc["b"] = field_json(qb);
    rep.doc["bracket"] = field_json(qc);
    table << "A = " << qa.to_string() << "\nB = " << qb.to_string() << "\n[A, B] = " << qc.to_string() << "\n";
    if (f.verify) {
      auto vanishes = [&](const GenVectorField& q) {
        auto res = apply_on_solutions(q, *sys);
        return std::all_of(res.begin(), res.end(), [](const ExpPoly& r) { return r.is_zero(); });
      };
      if (!vanishes(qa) || !vanishes(qb)) throw InputError("an operand is not a symmetry of the system");
      passed = vanishes(qc);
      Json v;
      v["bracket_residual_zero"] = passed;
      v["passed"] = passed;
      rep.doc["verification"] = std::move(v);
      table << "verify: bracket residual " << (passed ? "zero [ok]" : "nonzero [FAILED]") << "\n";
    }
  } else {
    throw SemanticError("both files need an 'operator' statement, or both a 'field' statement");
  }
  rep.finish();
  return verification_exit(passed, err);
}

void add_json_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--json", f.json, "Write the JSON result to a path, or '-' for stdout");
  sub->add_flag("--verify", f.verify, "Re-check every result with an independent oracle");
}

void add_search_flags(CLI::App* sub, Flags& f) {
  sub->add_option("-q,--order", f.order, "Symmetry order q (default 2)")->check(CLI::Range(0u, 32u));
  sub->add_option("--caps", f.caps, "Degree caps, e.g. 3,3");
  sub->add_option("--lambda", f.lambda, "Exponential weights, e.g. \"0, (1, i)\"");
  add_json_flags(sub, f);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact symmetry analysis of partial differential equations", "symkit"};
  app.require_subcommand(1);
  Flags f;
  std::string file_a;
  std::string file_b;

  auto* solve = app.add_subcommand("solve", "Symmetries of the equation in FILE");
  solve->add_option("file", file_a, "Problem file (.pde)")->required();
  add_search_flags(solve, f);

  auto* evolution = app.add_subcommand("evolution", "Evolutionary symmetries of u_t = G");
  evolution->add_option("file", file_a, "Problem file (.pde)")->required();
  add_search_flags(evolution, f);

  auto* adjoint = app.add_subcommand("adjoint", "Adjoint matrices of the translations and their blocks");
  adjoint->add_option("file", file_a, "Problem file (.pde)")->required();
  adjoint->add_option("-q,--order", f.order, "Symmetry order q (default 2)")->check(CLI::Range(0u, 32u));
  adjoint->add_option("--caps", f.caps, "Degree caps");
  add_json_flags(adjoint, f);

  auto* schrodinger = app.add_subcommand("schrodinger", "Built-in free Schrodinger case study");
  schrodinger->add_option("--qmax", f.qmax, "Highest order (default 4)")->check(CLI::Range(0u, 16u));
  add_json_flags(schrodinger, f);

  auto* bracket = app.add_subcommand("bracket", "Commutator or Lie bracket of two stored symmetries");
  bracket->add_option("a", file_a, "First symmetry (.pde)")->required();
  bracket->add_option("b", file_b, "Second symmetry (.pde)")->required();
  add_json_flags(bracket, f);

  std::vector<std::string> storage{"symkit"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(file_a, f, out, err);
    if (evolution->parsed()) return cmd_evolution(file_a, f, out, err);
    if (adjoint->parsed()) return cmd_adjoint(file_a, f, out);
    if (schrodinger->parsed()) return cmd_schrodinger(f, out, err);
    return cmd_bracket(file_a, file_b, f, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace symkit::cli
