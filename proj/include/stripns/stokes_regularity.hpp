#pragma once

#include <optional>
#include <vector>

#include "stripns/galerkin.hpp"
#include "stripns/grid.hpp"

namespace stripns {

// Steady problem -mu lap u + grad p = F, div u = 0, with the Navier conditions
// on the walls and the odd/even lateral reflection of the rest of the library.
struct StokesProblem {
	VectorField F;
	SlipPair slip;
	double mu = 1.0;
	double beta = 0.0;

	// beta defaults to beta0 + 1 with beta0 taken at epsilon = mu / 2.
	static StokesProblem make(VectorField F, const SlipPair &slip, double mu,
	                          std::optional<double> beta = std::nullopt);
	const GridSpec &grid() const { return F.grid(); }
};

// Load of the curl in weak form: (1/|cell|) int F . curl(phi_ij) for the
// bilinear hat phi_ij, i.e. differences of Simpson-averaged F. No derivative
// of F is formed pointwise.
ScalarField weak_curl(const VectorField &F);

struct AuxiliaryVorticity {
	ScalarField w;
	double h1_norm = 0.0;   // ||w||_H1
	double data_norm = 0.0; // ||F + beta u|| + ||u||_H1
	double h1_ratio = 0.0;
};

// (-mu lap + beta) w = curl F + beta curl u inside, w = (k0 / mu) u1 on the
// bottom, w = -(k1 / mu) u1 on the top, w = 0 on the lateral walls. The
// boundary data are lifted and the homogeneous problem is solved.
AuxiliaryVorticity solve_vorticity_auxiliary(const StokesProblem &problem, const VectorField &u,
                                             const ScalarField &curl_u);
AuxiliaryVorticity solve_vorticity_auxiliary(const StokesProblem &problem, const VectorField &u);

struct PoissonSolution {
	ScalarField psi;
	double h2_ratio = 0.0; // ||psi||_H2 / ||w||
	double h3_ratio = 0.0; // (||psi||_H2 + ||d_x psi||_H2) / ||w||_H1
};

// 5-point solve of lap psi = w with psi = 0 on the boundary.
PoissonSolution solve_dirichlet_poisson(const ScalarField &w);

// v = (-d_y psi, d_x psi).
VectorField reconstruct_velocity(const ScalarField &psi);

double scalar_h1_norm(const ScalarField &f);
double scalar_h2_norm(const ScalarField &f);

// Componentwise 5-point Laplacian of a velocity; the wall rows of u1 use the
// Robin ghost values.
VectorField vector_laplacian(const VectorField &u, const SlipPair &slip, double mu);

// grad p = F + mu lap u with lap u = -(d_y w, -d_x w), the form of the
// Laplacian for divergence-free u. Componentwise differencing of u would
// divide the O(h^2) wall error of u1 by h^2 on the first interior row.
VectorField pressure_gradient(const StokesProblem &problem, const ScalarField &w);

struct StokesH2Report {
	double u_h2 = 0.0;
	double p_grad_l2 = 0.0;
	double F_l2 = 0.0;
	double u_l2 = 0.0;
	double ratio = 0.0; // (||u||_H2 + ||grad p||) / (||F|| + ||u||)
};

struct StokesSolution {
	VectorField u;
	VectorField p_grad;
	ScalarField w;
	ScalarField psi;
	StokesH2Report h2_report;
	int iterations = 0;
	bool converged = false;
	double last_change = 0.0;
	std::vector<double> change_history;
	double contraction = 0.0;        // geometric mean of successive change ratios
	double w_h1_ratio = 0.0;
	double psi_h2_ratio = 0.0;
	double psi_h3_ratio = 0.0;
	double curl_defect = 0.0;        // max |curl u - w| off the wall rows
	double divergence_residual = 0.0;
	double navier_bc_residual = 0.0;
	double p_grad_curl = 0.0;        // max interior |curl grad p|
};

struct StokesSolveOptions {
	int max_iterations = 200;
	double tolerance = 1e-10; // on ||u_next - u|| relative to 1 + ||u||
	std::optional<VectorField> initial;
};

// Fixed-point iteration of vorticity, Poisson and reconstruction steps. The
// current iterate enters through its curl and its wall trace; the curl is
// taken as the 5-point Laplacian of the streamfunction, which makes the limit
// independent of beta. Non-convergence is reported, not thrown.
StokesSolution stokes_solve(const StokesProblem &problem, const StokesSolveOptions &options = {});

struct AuditSample {
	double t = 0.0;
	double u_h2 = 0.0;           // Galerkin field
	double stokes_u_h2 = 0.0;    // Stokes reconstruction from the momentum residual
	double p_grad_l2 = 0.0;
	double reconstruction_gap = 0.0; // ||u_stokes - u|| / (1 + ||u||)
	double convection_l2 = 0.0;  // ||u . grad u||
	double linf_grad = 0.0;      // ||u||_inf ||grad u||
	double interpolated = 0.0;   // ||u||^(1/2) ||u||_H2^(1/2) ||grad u||
	bool chain_holds = true;
	double p_grad_curl = 0.0;
	double p_grad_curl_rel = 0.0; // p_grad_curl / (1 + max |grad p|)
	int iterations = 0;
	bool converged = false;
};

struct StrongSolutionReport {
	std::vector<AuditSample> samples;
	double initial_h2 = 0.0;
	double forcing_h1t = 0.0;      // ||f||_{H1(0, T; L2)}
	double sup_h2_plus_p = 0.0;    // sup_t (||u||_H2 + ||grad p||)
	double sup_u_h2 = 0.0;
	double realized_constant = 0.0; // sup / (||u0||_H2 + ||f||_{H1 L2}), 0 if both vanish
	double max_p_grad_curl_rel = 0.0;
	bool chain_holds = true;
	bool all_converged = true;
};

// Audits a trajectory whose states were all recorded; `sample_every` picks
// every n-th state.
StrongSolutionReport strong_solution_audit(const GalerkinSystem &sys, const Trajectory &traj, int sample_every = 1);

} // namespace stripns
