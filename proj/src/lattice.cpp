#include "ncfock/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ncfock/dilation.hpp"
#include "ncfock/errors.hpp"

namespace ncfock {

namespace {

constexpr double kElementRankTol = 1e-12;

void require_shared(const LatticeElement& f, const LatticeElement& g) {
  if (f.symbol.d() != g.symbol.d()) throw ShapeMismatch("elements use different letter counts");
  if (f.symbol.rows() != g.symbol.rows()) throw ShapeMismatch("elements have different output spaces");
  if (f.N != g.N) throw ShapeMismatch("elements use different windows");
}

int inner_window(int n, std::initializer_list<int> degrees) {
  int top = 0;
  for (int deg : degrees) top = std::max(top, deg);
  return std::max(0, n - top);
}

// Norm of E(L) compressed to the orthogonal complement of ker F(L) on both sides.
double coimage_defect(const MatPoly& e, const MatPoly& f, int n_dom, double tol) {
  MultMatrix em = multiplier_matrix(e, n_dom);
  Mat kd = null_space(multiplier_matrix(f, n_dom).matrix, tol);
  Mat kc = null_space(multiplier_matrix(f, em.cod.N).matrix, tol);
  Mat pd = Mat::Identity(em.matrix.cols(), em.matrix.cols()) - kd * kd.adjoint();
  Mat pc = Mat::Identity(em.matrix.rows(), em.matrix.rows()) - kc * kc.adjoint();
  return spectral_norm(pc * em.matrix * pd);
}

AxiomCheck check(const std::string& name, const LatticeElement& a, const LatticeElement& b, double tol) {
  AxiomCheck out;
  out.name = name;
  Equivalence eq = equivalence_test(a, b, tol);
  out.pass = eq.equivalent;
  out.stage = eq.stage;
  out.residual = std::max({eq.range_distance, eq.forward_residual, eq.backward_residual, eq.inverse_residual});
  return out;
}

}  // namespace

LatticeElement make_element(const MatPoly& f, int n) {
  WindowOperator w = window_operator(f, n);
  RangeSpace range = range_space_of(w.op, w.cod, kElementRankTol * w.op.norm());
  range.op = std::move(w);
  return LatticeElement{f, n, std::move(range)};
}

LatticeElement bottom_element(int d, Eigen::Index rows, int n) {
  return make_element(MatPoly(d, rows, 1), n);
}

LatticeElement top_element(int d, Eigen::Index rows, int n) {
  return make_element(MatPoly::identity(d, rows), n);
}

LatticeElement join(const LatticeElement& f, const LatticeElement& g) {
  require_shared(f, g);
  return make_element(hconcat(f.symbol, g.symbol), f.N);
}

MeetResult meet(const LatticeElement& f, const LatticeElement& g, double tol) {
  require_shared(f, g);
  const int n = f.N;
  const MatPoly& fs = f.symbol;
  const MatPoly& gs = g.symbol;
  MatPoly joined = hconcat(fs, gs);
  SubspaceRep kernel = kernel_on_window(multiplier_matrix(joined, n));
  BeurlingResult beurling = beurling_inner(kernel, tol);

  MeetResult out;
  out.gamma = beurling.theta;
  MeetCertificate& cert = out.certificate;
  cert.gamma_isometry = beurling.isometry_defect;
  MatPoly top = out.gamma.top_rows(fs.cols());
  MatPoly bottom = out.gamma.bottom_rows(gs.cols());
  double scale = std::max({1.0, fs.max_abs(), gs.max_abs()});
  MatPoly h = nc_mul(fs, top).cleaned(tol * scale);
  out.meet = make_element(h, n);

  cert.stacked_residual = symbol_distance(vconcat(h, h.scaled(-1.0)), nc_mul(block_diag(fs, gs), out.gamma));
  cert.kernel_residual = symbol_distance(nc_mul(joined, out.gamma), MatPoly(fs.d(), fs.rows(), out.gamma.cols()));
  cert.dim_bound = h.cols() <= fs.cols() + gs.cols();

  RangeSpace inter = meet_norm_gram(f.range, g.range);
  const RangeSpace& hr = out.meet.range;
  cert.range_residual = subspace_distance(hr.basis, inter.basis);
  if (hr.dim() == inter.dim() && hr.dim() > 0) {
    Mat t = inter.basis.adjoint() * hr.basis;
    cert.gram_residual = spectral_norm(hr.gram - t.adjoint() * inter.gram * t);
  } else if (hr.dim() != inter.dim()) {
    cert.gram_residual = std::numeric_limits<double>::infinity();
  }

  int n_in = inner_window(n, {fs.window_degree(), gs.window_degree()});
  MultMatrix fm = multiplier_matrix(fs, n_in);
  MultMatrix gm = multiplier_matrix(gs, n_in);
  cert.inputs_inner = is_inner(fm, tol).ok && is_inner(gm, tol).ok;
  Eigen::Index fk = kernel_on_window(fm).dim();
  Eigen::Index gk = kernel_on_window(gm).dim();
  cert.inputs_injective = fk == 0 && gk == 0;
  cert.nontrivial_window_kernels = !cert.inputs_injective;
  if (h.cols() > 0) {
    int h_in = inner_window(n, {h.window_degree()});
    cert.meet_kernel_dim = kernel_on_window(multiplier_matrix(h, h_in)).dim();
    if (cert.inputs_inner) {
      cert.stacked_isometry = is_inner(multiplier_matrix(vconcat(h, h.scaled(-1.0)), h_in)).defect;
    }
  }
  return out;
}

Equivalence equivalence_test(const LatticeElement& f, const LatticeElement& g, double tol) {
  require_shared(f, g);
  Equivalence out;
  out.range_distance = subspace_distance(f.range.basis, g.range.basis);
  if (out.range_distance > tol) {
    out.stage = "range";
    return out;
  }
  const int n = f.N;
  try {
    DouglasResult c = douglas_factor(f.symbol, g.symbol, n, tol);
    out.forward = c.factor;
    out.forward_residual = c.residual;
  } catch (const NoFactorization&) {
    out.stage = "forward factor";
    return out;
  }
  try {
    DouglasResult d = douglas_factor(g.symbol, f.symbol, n, tol);
    out.backward = d.factor;
    out.backward_residual = d.residual;
  } catch (const NoFactorization&) {
    out.stage = "backward factor";
    return out;
  }
  if (std::max(out.forward_residual, out.backward_residual) > tol) {
    out.stage = "factor residual";
    return out;
  }
  const int n_in = inner_window(n, {f.symbol.window_degree(), g.symbol.window_degree()});
  const int d = f.symbol.d();
  MatPoly dc = nc_sub(nc_mul(out.backward, out.forward), MatPoly::identity(d, f.symbol.cols()));
  MatPoly cd = nc_sub(nc_mul(out.forward, out.backward), MatPoly::identity(d, g.symbol.cols()));
  out.inverse_residual = std::max(coimage_defect(dc, f.symbol, n_in, tol), coimage_defect(cd, g.symbol, n_in, tol));
  if (out.inverse_residual > tol) {
    out.stage = "inverse";
    return out;
  }
  out.equivalent = true;
  return out;
}

bool AxiomReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

double AxiomReport::max_residual() const {
  double out = 0.0;
  for (const AxiomCheck& c : checks) out = std::max(out, c.residual);
  return out;
}

AxiomReport verify_lattice_axioms(const LatticeElement& f, const LatticeElement& g,
                                  const LatticeElement& h, double tol) {
  require_shared(f, g);
  require_shared(f, h);
  const int d = f.symbol.d();
  const Eigen::Index rows = f.symbol.rows();
  auto m = [](const LatticeElement& a, const LatticeElement& b) { return meet(a, b).meet; };
  AxiomReport out;
  out.checks.push_back(check("join commutative", join(f, g), join(g, f), tol));
  out.checks.push_back(check("meet commutative", m(f, g), m(g, f), tol));
  out.checks.push_back(check("join associative", join(join(f, g), h), join(f, join(g, h)), tol));
  out.checks.push_back(check("meet associative", m(m(f, g), h), m(f, m(g, h)), tol));
  out.checks.push_back(check("absorption meet over join", m(f, join(f, g)), f, tol));
  out.checks.push_back(check("absorption join over meet", join(f, m(f, g)), f, tol));
  out.checks.push_back(check("bottom", join(f, bottom_element(d, rows, f.N)), f, tol));
  out.checks.push_back(check("top", m(f, top_element(d, rows, f.N)), f, tol));
  return out;
}

SubspaceRep right_ideal_basis(const MatPoly& f, int n) {
  if (f.rows() != 1) throw ShapeMismatch("right ideals need a single-row symbol");
  Truncation t{f.d(), n, 1};
  std::vector<Vec> vecs;
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    MatPoly entry = f.column(j);
    if (entry.is_zero()) continue;
    int budget = n - entry.degree();
    if (budget < 0) throw WindowOverflow("entry degree exceeds the window");
    for (const Word& alpha : words_up_to(f.d(), budget)) {
      vecs.push_back(poly_to_vec(nc_mul(entry, MatPoly::monomial(f.d(), alpha, Mat::Ones(1, 1))), t));
    }
  }
  Mat spanning(t.dim(), static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t i = 0; i < vecs.size(); ++i) spanning.col(static_cast<Eigen::Index>(i)) = vecs[i];
  return make_subspace(t, spanning);
}

IdealComparison ideal_containment_test(const MatPoly& f, const MatPoly& g, int n, double tol) {
  IdealComparison out;
  SubspaceRep jf = right_ideal_basis(f, n);
  SubspaceRep jg = right_ideal_basis(g, n);
  out.ideal_residual = jf.dim() == 0 ? 0.0 : containment_residual(jf.basis, jg.basis);
  out.ideal_contained = out.ideal_residual <= tol;
  Verdict r = range_contains(f, g, n, tol);
  out.range_contained = r.ok;
  out.range_residual = r.defect;
  out.implication_holds = !out.range_contained || out.ideal_contained;
  return out;
}

}  // namespace ncfock
