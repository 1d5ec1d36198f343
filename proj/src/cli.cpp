#include "ncfock/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ncfock/dilation.hpp"
#include "ncfock/errors.hpp"
#include "ncfock/lattice.hpp"
#include "ncfock/report.hpp"

namespace ncfock {

namespace {

constexpr const char* kSchema = "ncfock/1";

struct Context {
  const JobSpec& spec;
  Report& inputs;
  Report& window;
  Report& tolerances;
  Report& results;

  double tol(double fallback) {
    double t = spec.tol.value_or(fallback);
    if (t < 0.0) {
      tolerances["tol"] = "scaled";
    } else {
      tolerances["tol"] = t;
    }
    return t;
  }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MatPoly load_symbol(const std::string& arg, int d) {
  if (ends_with(arg, ".json") && std::filesystem::exists(arg)) {
    MatPoly p = from_json(read_file(arg));
    if (p.d() != d) throw ShapeMismatch(arg + " has d = " + std::to_string(p.d()));
    return p;
  }
  return parse_ncpoly(arg, d);
}

void require_inputs(const JobSpec& spec, std::size_t count) {
  if (spec.inputs.size() != count) {
    throw PreconditionError(spec.command + " expects " + std::to_string(count) + " input(s), got " +
                            std::to_string(spec.inputs.size()));
  }
}

void require_window(const JobSpec& spec, Eigen::Index coefficient_dim) {
  if (spec.N < 1 || spec.N > 12) throw DomainError("N must lie in [1, 12]");
  long double dim = static_cast<long double>(word_count(spec.d, spec.N)) * static_cast<long double>(coefficient_dim);
  if (dim > kMaxWindowDim && !spec.force) {
    throw DomainError("window dimension " + std::to_string(static_cast<long long>(dim)) +
                      " exceeds " + std::to_string(kMaxWindowDim) + "; pass --force to run anyway");
  }
}

std::vector<MatPoly> load_symbols(Context& ctx, std::size_t count) {
  require_inputs(ctx.spec, count);
  std::vector<MatPoly> out;
  Report echoed = Report::array();
  Eigen::Index widest = 0;
  for (const std::string& arg : ctx.spec.inputs) {
    MatPoly p = load_symbol(arg, ctx.spec.d);
    Report e;
    e["argument"] = arg;
    e["parsed"] = symbol_report(p);
    echoed.push_back(e);
    widest += std::max(p.rows(), p.cols());
    out.push_back(std::move(p));
  }
  ctx.inputs["symbols"] = echoed;
  require_window(ctx.spec, widest);
  return out;
}

// Point from "a,b,..." (reals; d n^2 of them) or a CSV file with the n x (n d) block.
RowTuple load_point(const std::string& arg, int d, const char* name) {
  if (arg.empty()) throw PreconditionError(std::string("--") + name + " is required");
  if (std::filesystem::exists(arg)) return RowTuple::from_row_block(read_matrix_csv_file(arg), d);
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    std::size_t next = arg.find(',', pos);
    if (next == std::string::npos) next = arg.size();
    std::string item = arg.substr(pos, next - pos);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError(std::string("invalid number in --") + name, pos);
    }
    for (std::size_t i = used; i < item.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(item[i]))) {
        throw ParseError(std::string("invalid number in --") + name, pos + i);
      }
    }
    values.push_back(x);
    pos = next + 1;
  }
  const auto count = static_cast<Eigen::Index>(values.size());
  auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count) / d)));
  if (n < 1 || n * n * d != count) {
    throw ShapeMismatch(std::string("--") + name + " needs d n^2 values");
  }
  Mat block(n, n * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n * d; ++k) block(i, k) = values[static_cast<std::size_t>(i * n * d + k)];
  }
  return RowTuple::from_row_block(block, d);
}

Report tuple_report(const RowTuple& x) {
  Report out;
  out["n"] = x.n;
  out["row_block"] = matrix_report(x.row_block());
  return out;
}

Report verdict_report(const Verdict& v) {
  Report out;
  out["ok"] = v.ok;
  out["defect"] = v.defect;
  return out;
}

void set_window(Context& ctx) {
  ctx.window["d"] = ctx.spec.d;
  ctx.window["N"] = ctx.spec.N;
  ctx.window["basis_vectors_per_coefficient"] = word_count(ctx.spec.d, ctx.spec.N);
}

void cmd_eval(Context& ctx) {
  require_inputs(ctx.spec, 1);
  MatPoly f = load_symbol(ctx.spec.inputs[0], ctx.spec.d);
  RowTuple z = load_point(ctx.spec.Z, ctx.spec.d, "Z");
  ctx.inputs["symbol"] = symbol_report(f);
  ctx.inputs["Z"] = tuple_report(z);
  ctx.results["value"] = matrix_report(eval_at_point(f, z));
}

void cmd_szego(Context& ctx) {
  RowTuple z = load_point(ctx.spec.Z, ctx.spec.d, "Z");
  RowTuple w = load_point(ctx.spec.W, ctx.spec.d, "W");
  Mat p = ctx.spec.P.empty() ? Mat::Identity(z.n, w.n) : read_matrix_csv_file(ctx.spec.P);
  ctx.inputs["Z"] = tuple_report(z);
  ctx.inputs["W"] = tuple_report(w);
  ctx.inputs["P"] = matrix_report(p);
  if (ctx.spec.N < 0) throw DomainError("cutoff must be nonnegative");
  ctx.window["d"] = ctx.spec.d;
  ctx.window["cutoff"] = ctx.spec.N;
  SzegoValue k = szego_eval(z, w, p, ctx.spec.N);
  ctx.results["value"] = matrix_report(k.value);
  ctx.results["tail_bound"] = k.tail_bound;
  if (z.n == 1 && w.n == 1) {
    cplx s = 0.0;
    for (int j = 0; j < z.d; ++j) s += z.entries[j](0, 0) * std::conj(w.entries[j](0, 0));
    cplx closed = p(0, 0) / (1.0 - s);
    ctx.results["closed_form"] = Report::array({closed.real(), closed.imag()});
    ctx.results["closed_form_error"] = std::abs(k.value(0, 0) - closed);
  }
}

void cmd_mult(Context& ctx) {
  MatPoly f = load_symbols(ctx, 1)[0];
  set_window(ctx);
  const double tol = ctx.tol(1e-10);
  const int n = ctx.spec.N;
  if (f.window_degree() > n) throw WindowOverflow("degree exceeds N");
  MultMatrix full = multiplier_matrix(f, n - f.window_degree());
  ctx.results["degree"] = f.degree();
  ctx.results["rows"] = f.rows();
  ctx.results["cols"] = f.cols();
  ctx.results["operator_norm"] = spectral_norm(full.matrix);
  ctx.results["left_multiplier"] = verdict_report(is_left_multiplier(full, tol));
  ctx.results["inner"] = verdict_report(is_inner(full, tol));
  ctx.results["window_kernel_dim"] = kernel_on_window(multiplier_matrix(f, n), tol).dim();
  ConstantKernelSplit split = constant_kernel_split(f, std::min(n, 3), tol);
  Report ck;
  ck["coefficient_kernel_dim"] = split.coefficient_basis.cols();
  ck["window_kernel_dim"] = split.window_kernel_dim;
  ck["reducing"] = split.reducing;
  ctx.results["constant_kernel"] = ck;
  RangeSpace range = build_range_space(f, n);
  ctx.results["range_dim"] = range.dim();
  ctx.results["range_coinvariance_defect"] = coinvariance_defect(range.subspace());
  ctx.results["range_invariance_defect"] = invariance_defect(range.subspace());
}

void cmd_douglas(Context& ctx) {
  std::vector<MatPoly> s = load_symbols(ctx, 2);
  set_window(ctx);
  const double tol = ctx.tol(-1.0);
  Verdict contained = range_contains(s[0], s[1], ctx.spec.N, tol);
  ctx.results["range_contained"] = verdict_report(contained);
  DouglasResult r = douglas_factor(s[0], s[1], ctx.spec.N, tol);
  ctx.results["factor"] = symbol_report(r.factor);
  ctx.results["residual"] = r.residual;
  ctx.results["window_residual"] = r.window_residual;
  ctx.results["minimal_lambda"] = r.sigma;
  ctx.results["factor_norm"] = r.symbol_norm;
  ctx.results["floor_at_minimal_lambda"] = douglas_floor(s[0], s[1], ctx.spec.N, r.sigma);
}

void cmd_dilate(Context& ctx) {
  require_inputs(ctx.spec, 1);
  RowTuple x = RowTuple::from_row_block(read_matrix_csv_file(ctx.spec.inputs[0]), ctx.spec.d);
  ctx.inputs["tuple"] = tuple_report(x);
  require_window(ctx.spec, x.n);
  set_window(ctx);
  const double tol = ctx.tol(1e-10);
  Verdict contraction = is_row_contraction(x, tol);
  ctx.results["row_contraction"] = verdict_report(contraction);
  if (!contraction.ok) throw NotContractive("row norm exceeds 1");
  Report purity = Report::array();
  for (double s : purity_index(x, ctx.spec.N + 1)) purity.push_back(s);
  ctx.results["purity_index"] = purity;
  ctx.results["defect_operator"] = matrix_report(defect_operator(x, tol));
  PoissonKernel a = poisson_kernel(x, ctx.spec.N, tol, DefectFactor::Eigen);
  PoissonKernel b = poisson_kernel(x, ctx.spec.N, tol, DefectFactor::Qr);
  Report pk;
  pk["defect_rank"] = a.window.r;
  pk["defect_factor"] = matrix_report(a.defect_factor);
  pk["kernel"] = matrix_report(a.kernel);
  pk["purity_residual"] = a.purity_residual;
  pk["isometry_defect"] = a.isometry_defect;
  pk["intertwining_defect"] = a.intertwining_defect;
  ctx.results["poisson_kernel"] = pk;
  DilationEquivalence eq = compare_dilations(a, b);
  Report cmp;
  cmp["unitary"] = matrix_report(eq.unitary);
  cmp["unitary_defect"] = eq.unitary_defect;
  cmp["embedding_defect"] = eq.embedding_defect;
  cmp["intertwining_defect"] = eq.intertwining_defect;
  ctx.results["qr_dilation_comparison"] = cmp;
}

void cmd_dbb(Context& ctx) {
  require_inputs(ctx.spec, 2);
  if (ctx.spec.rows < 1) throw DomainError("--rows must be positive");
  require_window(ctx.spec, ctx.spec.rows);
  set_window(ctx);
  Truncation ambient{ctx.spec.d, ctx.spec.N, ctx.spec.rows};
  Mat basis = read_matrix_csv_file(ctx.spec.inputs[0]);
  Mat gram = read_matrix_csv_file(ctx.spec.inputs[1]);
  if (basis.rows() != ambient.dim()) throw ShapeMismatch("basis rows do not match the window dimension");
  if (gram.rows() != basis.cols() || gram.cols() != basis.cols()) throw ShapeMismatch("gram size does not match the basis");
  ctx.inputs["basis"] = matrix_report(basis);
  ctx.inputs["gram"] = matrix_report(gram);
  ctx.inputs["rows"] = ctx.spec.rows;
  const double tol = ctx.tol(1e-10);
  NormedSubspace m{SubspaceRep{ambient, basis}, gram};
  DbbResult r = dbb_multiplier(m, tol);
  ctx.results["symbol"] = symbol_report(r.symbol);
  ctx.results["compression"] = tuple_report(r.compression);
  ctx.results["contraction"] = r.contraction;
  ctx.results["embedding_norm"] = r.embedding_norm;
  ctx.results["symbol_norm"] = r.symbol_norm;
  ctx.results["range_residual"] = r.range_residual;
  ctx.results["gram_residual"] = r.gram_residual;
  ctx.results["isometry_defect"] = r.isometry_defect;
}

Report range_report(const RangeSpace& r) {
  Report out;
  out["dim"] = r.dim();
  out["basis"] = matrix_report(r.basis);
  out["gram"] = matrix_report(r.gram);
  return out;
}

void cmd_join(Context& ctx) {
  std::vector<MatPoly> s = load_symbols(ctx, 2);
  set_window(ctx);
  LatticeElement f = make_element(s[0], ctx.spec.N);
  LatticeElement g = make_element(s[1], ctx.spec.N);
  LatticeElement j = join(f, g);
  ctx.results["join"] = symbol_report(j.symbol);
  ctx.results["range"] = range_report(j.range);
  ctx.results["input_range_dims"] = Report::array({f.range.dim(), g.range.dim()});
}

void cmd_meet(Context& ctx) {
  std::vector<MatPoly> s = load_symbols(ctx, 2);
  set_window(ctx);
  const double tol = ctx.tol(1e-10);
  MeetResult r = meet(make_element(s[0], ctx.spec.N), make_element(s[1], ctx.spec.N), tol);
  const MeetCertificate& c = r.certificate;
  ctx.results["meet"] = symbol_report(r.meet.symbol);
  ctx.results["gamma"] = symbol_report(r.gamma);
  ctx.results["range"] = range_report(r.meet.range);
  Report cert;
  cert["range_residual"] = c.range_residual;
  cert["gram_residual"] = c.gram_residual;
  cert["stacked_residual"] = c.stacked_residual;
  cert["kernel_residual"] = c.kernel_residual;
  cert["gamma_isometry"] = c.gamma_isometry;
  cert["stacked_isometry"] = c.stacked_isometry;
  cert["inputs_inner"] = c.inputs_inner;
  cert["inputs_injective"] = c.inputs_injective;
  cert["meet_kernel_dim"] = c.meet_kernel_dim;
  cert["dim_bound"] = c.dim_bound;
  cert["nontrivial_window_kernels"] = c.nontrivial_window_kernels;
  ctx.results["certificate"] = cert;
}

void cmd_equiv(Context& ctx) {
  std::vector<MatPoly> s = load_symbols(ctx, 2);
  set_window(ctx);
  const double tol = ctx.tol(1e-8);
  Equivalence e = equivalence_test(make_element(s[0], ctx.spec.N), make_element(s[1], ctx.spec.N), tol);
  ctx.results["equivalent"] = e.equivalent;
  ctx.results["stage"] = e.stage;
  ctx.results["range_distance"] = e.range_distance;
  if (e.equivalent || e.stage == "inverse" || e.stage == "factor residual") {
    ctx.results["forward"] = symbol_report(e.forward);
    ctx.results["backward"] = symbol_report(e.backward);
  }
  ctx.results["forward_residual"] = e.forward_residual;
  ctx.results["backward_residual"] = e.backward_residual;
  ctx.results["inverse_residual"] = e.inverse_residual;
}

void cmd_axioms(Context& ctx) {
  std::vector<MatPoly> s = load_symbols(ctx, 3);
  set_window(ctx);
  const double tol = ctx.tol(1e-8);
  const int n = ctx.spec.N;
  AxiomReport r = verify_lattice_axioms(make_element(s[0], n), make_element(s[1], n), make_element(s[2], n), tol);
  Report checks = Report::array();
  for (const AxiomCheck& c : r.checks) {
    Report e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["residual"] = c.residual;
    e["stage"] = c.stage;
    checks.push_back(e);
  }
  ctx.results["checks"] = checks;
  ctx.results["all_pass"] = r.all_pass();
  ctx.results["max_residual"] = r.max_residual();
}

void cmd_ideal(Context& ctx) {
  std::vector<MatPoly> s = load_symbols(ctx, 2);
  set_window(ctx);
  const double tol = ctx.tol(1e-8);
  IdealComparison c = ideal_containment_test(s[0], s[1], ctx.spec.N, tol);
  ctx.results["ideal_contained"] = c.ideal_contained;
  ctx.results["ideal_residual"] = c.ideal_residual;
  ctx.results["range_contained"] = c.range_contained;
  ctx.results["range_residual"] = c.range_residual;
  ctx.results["implication_holds"] = c.implication_holds;
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"eval", cmd_eval},     {"szego", cmd_szego}, {"mult", cmd_mult},     {"douglas", cmd_douglas},
      {"dilate", cmd_dilate}, {"dbb", cmd_dbb},     {"join", cmd_join},     {"meet", cmd_meet},
      {"equiv", cmd_equiv},   {"axioms", cmd_axioms}, {"ideal", cmd_ideal}};
  return table;
}

Report error_report(const char* kind, const std::string& message) {
  Report e;
  e["type"] = kind;
  e["message"] = message;
  return e;
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [name, handler] : handlers()) out.push_back(name);
  return out;
}

JobResult run_job(const JobSpec& spec) {
  Report report;
  report["schema"] = kSchema;
  report["command"] = spec.command;
  Report inputs = Report::object();
  Report window = Report::object();
  Report tolerances = Report::object();
  Report results = Report::object();
  JobResult out;
  Report error;
  try {
    auto it = handlers().find(spec.command);
    if (it == handlers().end()) throw PreconditionError("unknown command '" + spec.command + "'");
    if (spec.d < 1 || spec.d > 9) throw DomainError("d must lie in [1, 9]");
    Context ctx{spec, inputs, window, tolerances, results};
    it->second(ctx);
  } catch (const ParseError& e) {
    out.exit_code = 2;
    error = error_report("parse", e.what());
    error["position"] = e.position();
  } catch (const PreconditionError& e) {
    out.exit_code = 2;
    error = error_report("precondition", e.what());
  } catch (const std::exception& e) {
    out.exit_code = 1;
    error = error_report("internal", e.what());
  }
  Report arguments = Report::array();
  for (const std::string& a : spec.inputs) arguments.push_back(a);
  report["arguments"] = arguments;
  report["inputs"] = inputs;
  report["window"] = window;
  report["tolerances"] = tolerances;
  if (out.exit_code == 0) {
    report["results"] = results;
  } else {
    report["error"] = error;
    out.error = error["message"].get<std::string>();
  }
  out.report = dump_report(report);
  if (!spec.out.empty()) {
    std::ofstream f(spec.out, std::ios::binary);
    if (!f) {
      out.exit_code = 1;
      out.error = "cannot write " + spec.out;
      return out;
    }
    f << out.report;
  }
  return out;
}

}  // namespace ncfock
