#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "stripns/function_spaces.hpp"
#include "stripns/grid.hpp"

namespace stripns {

struct ShiftParams {
	double beta = 0.0;
	double epsilon = 0.0;
	double beta0 = 0.0;

	// epsilon defaults to mu / 2 and beta to beta0 + 1.
	static ShiftParams make(const SlipPair &slip, double mu, std::optional<double> epsilon = std::nullopt,
	                        std::optional<double> beta = std::nullopt);
};

double beta_threshold(const SlipPair &slip, double epsilon);

// One x-mode of the streamfunction reduction psi = sin(alpha (x + L)) phi(y).
// The unknown is phi at the interior y-nodes; the two Navier conditions are
// eliminated through `constraint_basis`, whose columns span the admissible
// profiles. stiffness and mass act on those reduced coordinates.
struct ModePencil {
	int a = 0;
	double alpha = 0.0;
	double sigma = 1.0; // sin(alpha hx) / (alpha hx), the centered-difference symbol
	Eigen::MatrixXd stiffness;
	Eigen::MatrixXd mass;
	Eigen::MatrixXd constraint_basis; // ny x (ny - 2)
};

ModePencil assemble_mode_problem(int a, const GridSpec &grid, const SlipPair &slip, double mu,
                                 const ShiftParams &shift);

struct EigenPair {
	double lambda_shifted = 0.0;
	double Lambda = 0.0;
	int x_mode = 0;
	std::vector<double> y_profile; // nodal streamfunction profile, y = 0 .. 1
	ScalarField stream;
	VectorField field;
};

struct GalerkinBasis {
	std::vector<EigenPair> pairs;
	GridSpec grid;
	SlipPair slip;
	double mu = 1.0;
	ShiftParams shift;
	int m = 0;
	int a_max = 0;

	int size() const { return int(pairs.size()); }
	const VectorField &field(int j) const { return pairs[std::size_t(j)].field; }
};

// a_max = 0 selects the smallest a_max whose next mode can no longer enter
// the m lowest eigenvalues.
GalerkinBasis solve_eigenpairs(int m, int a_max, const GridSpec &grid, const SlipPair &slip, double mu,
                               const ShiftParams &shift);

// S_jk = 2 mu int D(w_j):D(w_k) and K_jk = int_walls k (w_j . tau)(w_k . tau).
Eigen::MatrixXd viscous_matrix(const GalerkinBasis &basis);
Eigen::MatrixXd boundary_matrix(const GalerkinBasis &basis);
Eigen::MatrixXd gram_matrix(const GalerkinBasis &basis);

struct BasisReport {
	double gram_offdiag = 0.0;
	double gram_diag = 0.0;          // max |G_jj - 1|
	double navier_bc_residual = 0.0; // wall |curl w -/+ (k/mu) w . tau|
	double eigen_residual = 0.0;     // weak residual against the basis, relative
	double spectral_margin = 0.0;    // min_j Lambda_j + beta0
	bool ordered = true;
};

BasisReport verify_basis(const GalerkinBasis &basis);

} // namespace stripns
