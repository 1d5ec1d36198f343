#pragma once

#include <string>
#include <vector>

#include "ncfock/rkhs.hpp"

namespace ncfock {

struct LatticeElement {
  MatPoly symbol;
  int N = 0;
  RangeSpace range;
};

// Range rank is cut at 1e-12 relative to the window operator norm.
LatticeElement make_element(const MatPoly& f, int n);

// The J x 1 zero multiplier and the J x J identity.
LatticeElement bottom_element(int d, Eigen::Index rows, int n);
LatticeElement top_element(int d, Eigen::Index rows, int n);

LatticeElement join(const LatticeElement& f, const LatticeElement& g);

struct MeetCertificate {
  double range_residual = 0.0;     // ran H against ran F cap ran G
  double gram_residual = 0.0;      // range norm of H against the summed norms
  double stacked_residual = 0.0;   // (H; -H) - diag(F, G) Gamma
  double kernel_residual = 0.0;    // (F, G) Gamma
  double gamma_isometry = 0.0;
  double stacked_isometry = 0.0;   // only meaningful when both inputs are inner
  bool inputs_inner = false;
  bool inputs_injective = false;
  Eigen::Index meet_kernel_dim = 0;  // window kernel of H
  bool dim_bound = true;             // cols(H) <= cols(F) + cols(G)
  bool nontrivial_window_kernels = false;
};

struct MeetResult {
  LatticeElement meet;
  MatPoly gamma;
  MeetCertificate certificate;
};

MeetResult meet(const LatticeElement& f, const LatticeElement& g, double tol = 1e-10);

struct Equivalence {
  bool equivalent = false;
  std::string stage;        // first failing stage, empty on success
  MatPoly forward;          // C with G C = F
  MatPoly backward;         // D with F D = G
  double range_distance = 0.0;
  double forward_residual = 0.0;
  double backward_residual = 0.0;
  // (D C - I)(L) compressed to ker F(L)^perp and (C D - I)(L) to ker G(L)^perp;
  // literal invertibility when both are injective.
  double inverse_residual = 0.0;
};

Equivalence equivalence_test(const LatticeElement& f, const LatticeElement& g, double tol = 1e-8);

struct AxiomCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string stage;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_pass() const;
  double max_residual() const;
};

AxiomReport verify_lattice_axioms(const LatticeElement& f, const LatticeElement& g,
                                  const LatticeElement& h, double tol = 1e-8);

// span{F_j z^alpha : |alpha| <= N - deg F_j} for a single-row symbol.
SubspaceRep right_ideal_basis(const MatPoly& f, int n);

struct IdealComparison {
  bool ideal_contained = false;
  double ideal_residual = 0.0;
  bool range_contained = false;
  double range_residual = 0.0;
  bool implication_holds = false;  // range containment implies ideal containment
};

IdealComparison ideal_containment_test(const MatPoly& f, const MatPoly& g, int n, double tol = 1e-8);

}  // namespace ncfock
