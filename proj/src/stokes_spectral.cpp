#include "stripns/stokes_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace stripns {

double beta_threshold(const SlipPair &slip, double epsilon) {
	return std::max(slip.k0 * slip.k0, slip.k1 * slip.k1) / epsilon - (slip.k0 + slip.k1);
}

ShiftParams ShiftParams::make(const SlipPair &slip, double mu, std::optional<double> epsilon,
                              std::optional<double> beta) {
	if (!(mu > 0.0))
		throw Error("ShiftParams: mu must be positive");
	ShiftParams s;
	s.epsilon = epsilon.value_or(0.5 * mu);
	if (!(s.epsilon > 0.0 && s.epsilon < mu))
		throw Error("ShiftParams: epsilon must lie in (0, mu)");
	s.beta0 = beta_threshold(slip, s.epsilon);
	s.beta = beta.value_or(s.beta0 + 1.0);
	if (!(s.beta > s.beta0))
		throw Error("ShiftParams: beta = " + std::to_string(s.beta) + " does not exceed beta0 = " +
		            std::to_string(s.beta0));
	return s;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Second-order first-derivative matrix on N+1 nodes (diff_1d as a matrix).
MatrixXd derivative_matrix(int N, double h) {
	MatrixXd D = MatrixXd::Zero(N + 1, N + 1);
	for (int k = 1; k < N; ++k) {
		D(k, k + 1) = 0.5 / h;
		D(k, k - 1) = -0.5 / h;
	}
	D(0, 0) = -1.5 / h;
	D(0, 1) = 2.0 / h;
	D(0, 2) = -0.5 / h;
	D(N, N) = 1.5 / h;
	D(N, N - 1) = -2.0 / h;
	D(N, N - 2) = 0.5 / h;
	return D;
}

// Forward differences v_{k+1} - v_k on N+1 nodes.
MatrixXd forward_difference(int N) {
	MatrixXd F = MatrixXd::Zero(N, N + 1);
	for (int k = 0; k < N; ++k) {
		F(k, k) = -1.0;
		F(k, k + 1) = 1.0;
	}
	return F;
}

MatrixXd symmetrized(const MatrixXd &A) { return 0.5 * (A + A.transpose()); }

} // namespace

ModePencil assemble_mode_problem(int a, const GridSpec &grid, const SlipPair &slip, double mu,
                                 const ShiftParams &shift) {
	if (a < 1)
		throw Error("assemble_mode_problem: mode index must be >= 1");
	if (a > grid.nx())
		throw Error("assemble_mode_problem: mode " + std::to_string(a) + " is not resolved by nx = " +
		            std::to_string(grid.nx()));
	if (!(mu > 0.0))
		throw Error("assemble_mode_problem: mu must be positive");
	if (!(shift.beta > shift.beta0))
		throw Error("assemble_mode_problem: beta must exceed beta0 (coercivity)");

	const int N = grid.ny() + 1;
	const int n = grid.ny();
	const double h = grid.hy();

	ModePencil P;
	P.a = a;
	P.alpha = a * std::numbers::pi / (2.0 * grid.half_length());
	const double ah = P.alpha * grid.hx();
	P.sigma = std::sin(ah) / ah;
	const double s2a2 = P.sigma * P.sigma * P.alpha * P.alpha;

	// E embeds the interior unknowns into the nodal profile (phi_0 = phi_N = 0)
	MatrixXd E = MatrixXd::Zero(N + 1, n);
	for (int k = 0; k < n; ++k)
		E(k + 1, k) = 1.0;
	const MatrixXd D = derivative_matrix(N, h);
	const MatrixXd G = -D * E; // u1 profile
	VectorXd w = VectorXd::Constant(N + 1, h);
	w(0) = w(N) = 0.5 * h;
	const auto W = w.asDiagonal();
	const MatrixXd F = forward_difference(N);

	const MatrixXd GWG = G.transpose() * W * G;
	const MatrixXd EWE = E.transpose() * W * E;
	const MatrixXd FG = F * G, FE = F * E;

	MatrixXd M = GWG + s2a2 * EWE;
	MatrixXd A = mu * (FG.transpose() * FG / h + s2a2 * GWG + s2a2 * FE.transpose() * FE / h + s2a2 * s2a2 * EWE);
	A -= slip.k0 * G.row(0).transpose() * G.row(0);
	A -= slip.k1 * G.row(N).transpose() * G.row(N);
	A += shift.beta * M;

	// Navier conditions on the u1 profile, same stencil as the membership check
	MatrixXd C(2, n);
	C.row(0) = mu * (D.row(0) * G) + slip.k0 * G.row(0);
	C.row(1) = mu * (D.row(N) * G) - slip.k1 * G.row(N);
	Eigen::JacobiSVD<MatrixXd> svd(C, Eigen::ComputeFullV);
	if (svd.rank() != 2)
		throw Error("assemble_mode_problem: degenerate Navier constraints");
	P.constraint_basis = svd.matrixV().rightCols(n - 2);

	const MatrixXd &Z = P.constraint_basis;
	P.stiffness = symmetrized(Z.transpose() * A * Z);
	P.mass = symmetrized(Z.transpose() * M * Z);
	return P;
}

namespace {

struct ModeSolution {
	int a;
	Eigen::VectorXd lambda;   // ascending
	Eigen::MatrixXd profiles; // nodal profiles (N+1) x count, unit 1D mass
};

ModeSolution solve_mode(int a, const GridSpec &grid, const SlipPair &slip, double mu, const ShiftParams &shift) {
	const ModePencil P = assemble_mode_problem(a, grid, slip, mu, shift);
	Eigen::LLT<Eigen::MatrixXd> llt(P.mass);
	if (llt.info() != Eigen::Success)
		throw Error("solve_eigenpairs: Cholesky factorization of the mass matrix failed for mode " +
		            std::to_string(a));
	const Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(P.mass.rows(), P.mass.cols()));
	const Eigen::MatrixXd C = symmetrized(Linv * P.stiffness * Linv.transpose());
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
	if (es.info() != Eigen::Success)
		throw Error("solve_eigenpairs: symmetric eigensolver failed for mode " + std::to_string(a));
	const Eigen::MatrixXd X = Linv.transpose() * es.eigenvectors();
	const Eigen::MatrixXd interior = P.constraint_basis * X;

	const int N = grid.ny() + 1;
	ModeSolution s{a, es.eigenvalues(), Eigen::MatrixXd::Zero(N + 1, interior.cols())};
	s.profiles.middleRows(1, N - 1) = interior;
	for (int c = 0; c < s.profiles.cols(); ++c) {
		Eigen::Index imax = 0;
		s.profiles.col(c).cwiseAbs().maxCoeff(&imax);
		if (s.profiles(imax, c) < 0.0)
			s.profiles.col(c) *= -1.0;
	}
	return s;
}

ScalarField sine_stream(const GridSpec &grid, int a, const std::vector<double> &profile, double scale) {
	ScalarField psi(grid, BoundaryTag::dirichlet_zero);
	const double N = double(grid.nx() + 1);
	for (int i = 1; i <= grid.nx(); ++i) {
		const double s = scale * std::sin(a * std::numbers::pi * i / N);
		for (int j = 1; j <= grid.ny(); ++j)
			psi(i, j) = s * profile[std::size_t(j)];
	}
	return psi;
}

} // namespace

GalerkinBasis solve_eigenpairs(int m, int a_max, const GridSpec &grid, const SlipPair &slip, double mu,
                               const ShiftParams &shift) {
	if (m < 1)
		throw Error("solve_eigenpairs: m must be >= 1");
	if (a_max < 0 || a_max > grid.nx())
		throw Error("solve_eigenpairs: a_max must lie in [0, nx]");
	const int per_mode = grid.ny() - 2;

	std::vector<ModeSolution> modes;
	struct Entry {
		double lambda;
		int mode;
		int col;
	};
	std::vector<Entry> entries;
	auto mth_smallest = [&]() {
		std::vector<double> v;
		for (const Entry &e : entries)
			v.push_back(e.lambda);
		std::nth_element(v.begin(), v.begin() + (m - 1), v.end());
		return v[std::size_t(m - 1)];
	};

	const int a_stop = a_max > 0 ? a_max : grid.nx();
	for (int a = 1; a <= a_stop; ++a) {
		ModeSolution s = solve_mode(a, grid, slip, mu, shift);
		if (a_max == 0 && int(entries.size()) >= m && s.lambda(0) > mth_smallest())
			break;
		for (int c = 0; c < s.lambda.size(); ++c)
			entries.push_back({s.lambda(c), int(modes.size()), c});
		modes.push_back(std::move(s));
	}
	if (int(entries.size()) < m)
		throw Error("solve_eigenpairs: requested m = " + std::to_string(m) + " exceeds the " +
		            std::to_string(entries.size()) + " available discrete modes (" + std::to_string(modes.size()) +
		            " x-modes x " + std::to_string(per_mode) + ")");

	std::stable_sort(entries.begin(), entries.end(), [&](const Entry &l, const Entry &r) {
		if (l.lambda != r.lambda)
			return l.lambda < r.lambda;
		return modes[std::size_t(l.mode)].a < modes[std::size_t(r.mode)].a;
	});

	GalerkinBasis B{{}, grid, slip, mu, shift, m, int(modes.size())};
	const double scale = 1.0 / std::sqrt(grid.half_length());
	for (int j = 0; j < m; ++j) {
		const Entry &e = entries[std::size_t(j)];
		const ModeSolution &s = modes[std::size_t(e.mode)];
		std::vector<double> prof(std::size_t(s.profiles.rows()));
		for (Eigen::Index r = 0; r < s.profiles.rows(); ++r)
			prof[std::size_t(r)] = s.profiles(r, e.col);
		ScalarField psi = sine_stream(grid, s.a, prof, scale);
		VectorField u = velocity_from_stream(psi);
		B.pairs.push_back(EigenPair{e.lambda, e.lambda - shift.beta, s.a, std::move(prof), std::move(psi), std::move(u)});
	}
	return B;
}

Eigen::MatrixXd gram_matrix(const GalerkinBasis &basis) {
	const int m = basis.size();
	Eigen::MatrixXd G(m, m);
	for (int j = 0; j < m; ++j)
		for (int k = 0; k <= j; ++k)
			G(j, k) = G(k, j) = inner(basis.field(j), basis.field(k));
	return G;
}

Eigen::MatrixXd viscous_matrix(const GalerkinBasis &basis) {
	const int m = basis.size();
	struct Strain {
		ScalarField d11, d22, d12;
	};
	std::vector<Strain> D;
	D.reserve(std::size_t(m));
	for (int j = 0; j < m; ++j) {
		const VelocityGradient G = gradient(basis.field(j));
		D.push_back({G.d1x, G.d2y, 0.5 * (G.d1y + G.d2x)});
	}
	Eigen::MatrixXd S(m, m);
	for (int j = 0; j < m; ++j)
		for (int k = 0; k <= j; ++k) {
			const double dd = inner(D[j].d11, D[k].d11) + inner(D[j].d22, D[k].d22) + 2.0 * inner(D[j].d12, D[k].d12);
			S(j, k) = S(k, j) = 2.0 * basis.mu * dd;
		}
	return S;
}

Eigen::MatrixXd boundary_matrix(const GalerkinBasis &basis) {
	const int m = basis.size();
	const GridSpec &g = basis.grid;
	const int top = g.ny() + 1;
	Eigen::MatrixXd K(m, m);
	for (int j = 0; j < m; ++j)
		for (int k = 0; k <= j; ++k) {
			const ScalarField &a = basis.field(j).u1, &b = basis.field(k).u1;
			double s = 0.0;
			for (int i = 0; i < g.cols(); ++i)
				s += g.wx(i) * (basis.slip.k0 * a(i, 0) * b(i, 0) + basis.slip.k1 * a(i, top) * b(i, top));
			K(j, k) = K(k, j) = s;
		}
	return K;
}

BasisReport verify_basis(const GalerkinBasis &basis) {
	BasisReport r;
	const int m = basis.size();
	const Eigen::MatrixXd G = gram_matrix(basis);
	for (int j = 0; j < m; ++j)
		for (int k = 0; k < m; ++k) {
			if (j == k)
				r.gram_diag = std::max(r.gram_diag, std::abs(G(j, k) - 1.0));
			else
				r.gram_offdiag = std::max(r.gram_offdiag, std::abs(G(j, k)));
		}

	const GridSpec &g = basis.grid;
	const int top = g.ny() + 1;
	const double mu = basis.mu;
	for (const EigenPair &p : basis.pairs) {
		const ScalarField c = curl2d(p.field);
		for (int i = 0; i < g.cols(); ++i) {
			// flat-wall identity with tau = (1, 0): 2 D(w) n . tau = curl w at
			// y = 0 and -curl w at y = 1
			r.navier_bc_residual =
				std::max(r.navier_bc_residual, std::abs(c(i, 0) - (basis.slip.k0 / mu) * p.field.u1(i, 0)));
			r.navier_bc_residual =
				std::max(r.navier_bc_residual, std::abs(-c(i, top) - (basis.slip.k1 / mu) * p.field.u1(i, top)));
		}
	}

	const Eigen::MatrixXd A = viscous_matrix(basis) - boundary_matrix(basis);
	for (int j = 0; j < m; ++j)
		for (int k = 0; k < m; ++k) {
			const double lj = basis.pairs[std::size_t(j)].Lambda, lk = basis.pairs[std::size_t(k)].Lambda;
			const double res = A(j, k) - (j == k ? lj : 0.0);
			r.eigen_residual = std::max(r.eigen_residual, std::abs(res) / (1.0 + std::max(std::abs(lj), std::abs(lk))));
		}

	r.spectral_margin = std::numeric_limits<double>::infinity();
	for (int j = 0; j < m; ++j) {
		r.spectral_margin = std::min(r.spectral_margin, basis.pairs[std::size_t(j)].Lambda + basis.shift.beta0);
		if (j > 0 && basis.pairs[std::size_t(j)].Lambda < basis.pairs[std::size_t(j - 1)].Lambda)
			r.ordered = false;
	}
	return r;
}

} // namespace stripns
