#include "stripns/stokes_regularity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "stripns/function_spaces.hpp"
#include "stripns/stokes_spectral.hpp"

namespace stripns {

namespace {

bool all_finite(const ScalarField &f) {
	return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

// c (-lap_h) + beta on the interior nodes, Dirichlet values taken from the
// boundary nodes of the field passed to solve().
class DirichletOperator {
public:
	DirichletOperator(const GridSpec &grid, double c, double beta) : grid_(grid), c_(c), beta_(beta) {
		const int nx = grid.nx(), ny = grid.ny();
		const double ax = c / (grid.hx() * grid.hx()), ay = c / (grid.hy() * grid.hy());
		std::vector<Eigen::Triplet<double>> t;
		t.reserve(std::size_t(5) * std::size_t(nx) * std::size_t(ny));
		for (int j = 1; j <= ny; ++j)
			for (int i = 1; i <= nx; ++i) {
				const int r = unknown(i, j);
				t.emplace_back(r, r, 2.0 * ax + 2.0 * ay + beta);
				if (i > 1)
					t.emplace_back(r, unknown(i - 1, j), -ax);
				if (i < nx)
					t.emplace_back(r, unknown(i + 1, j), -ax);
				if (j > 1)
					t.emplace_back(r, unknown(i, j - 1), -ay);
				if (j < ny)
					t.emplace_back(r, unknown(i, j + 1), -ay);
			}
		Eigen::SparseMatrix<double> A(nx * ny, nx * ny);
		A.setFromTriplets(t.begin(), t.end());
		solver_.compute(A);
		if (solver_.info() != Eigen::Success || !(solver_.vectorD().minCoeff() > 0.0))
			throw Error("stokes_regularity: shifted Laplacian is not positive definite (assembly error)");
	}

	// Interior values of `rhs` are the load; boundary nodes of `boundary` are
	// the Dirichlet data, moved to the load before the homogeneous solve.
	ScalarField solve(const ScalarField &rhs, const ScalarField &boundary) const {
		const int nx = grid_.nx(), ny = grid_.ny();
		const double ax = c_ / (grid_.hx() * grid_.hx()), ay = c_ / (grid_.hy() * grid_.hy());
		Eigen::VectorXd b(nx * ny);
		for (int j = 1; j <= ny; ++j)
			for (int i = 1; i <= nx; ++i) {
				double v = rhs(i, j);
				if (i == 1)
					v += ax * boundary(0, j);
				if (i == nx)
					v += ax * boundary(nx + 1, j);
				if (j == 1)
					v += ay * boundary(i, 0);
				if (j == ny)
					v += ay * boundary(i, ny + 1);
				b(unknown(i, j)) = v;
			}
		const Eigen::VectorXd x = solver_.solve(b);
		ScalarField out = boundary;
		for (int j = 1; j <= ny; ++j)
			for (int i = 1; i <= nx; ++i)
				out(i, j) = x(unknown(i, j));
		return out;
	}

	double beta() const { return beta_; }

private:
	int unknown(int i, int j) const { return (j - 1) * grid_.nx() + (i - 1); }

	GridSpec grid_;
	double c_, beta_;
	Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

ScalarField odd_scalar(const GridSpec &grid) {
	ScalarField f(grid);
	f.set_x_parity(XParity::odd);
	return f;
}

// 5-point Laplacian at interior nodes, zero on the boundary nodes.
ScalarField laplacian_5pt(const ScalarField &f) {
	const GridSpec &g = f.grid();
	ScalarField out = odd_scalar(g);
	const double ix = 1.0 / (g.hx() * g.hx()), iy = 1.0 / (g.hy() * g.hy());
	for (int j = 1; j <= g.ny(); ++j)
		for (int i = 1; i <= g.nx(); ++i)
			out(i, j) = ix * (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) + iy * (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1));
	return out;
}

// Centered curl at the interior nodes away from the wall rows.
double interior_curl_max(const VectorField &v) {
	const GridSpec &g = v.grid();
	double m = 0.0;
	for (int j = 2; j <= g.ny() - 1; ++j)
		for (int i = 1; i <= g.nx(); ++i) {
			const double c = (v.u2(i + 1, j) - v.u2(i - 1, j)) / (2.0 * g.hx()) -
			                 (v.u1(i, j + 1) - v.u1(i, j - 1)) / (2.0 * g.hy());
			m = std::max(m, std::abs(c));
		}
	return m;
}

double interior_max(const ScalarField &f, int skip_rows = 0) {
	const GridSpec &g = f.grid();
	double m = 0.0;
	for (int j = 1 + skip_rows; j <= g.ny() - skip_rows; ++j)
		for (int i = 1; i <= g.nx(); ++i)
			m = std::max(m, std::abs(f(i, j)));
	return m;
}

ScalarField vorticity_boundary(const StokesProblem &p, const VectorField &u) {
	const GridSpec &g = p.grid();
	ScalarField b = odd_scalar(g);
	for (int i = 1; i <= g.nx(); ++i) {
		b(i, 0) = (p.slip.k0 / p.mu) * u.u1(i, 0);
		b(i, g.ny() + 1) = -(p.slip.k1 / p.mu) * u.u1(i, g.ny() + 1);
	}
	return b;
}

AuxiliaryVorticity vorticity_step(const StokesProblem &p, const DirichletOperator &op, const ScalarField &load_F,
                                  const VectorField &u, const ScalarField &curl_u) {
	ScalarField rhs = load_F;
	const GridSpec &g = p.grid();
	for (int j = 1; j <= g.ny(); ++j)
		for (int i = 1; i <= g.nx(); ++i)
			rhs(i, j) += p.beta * curl_u(i, j);
	AuxiliaryVorticity r{op.solve(rhs, vorticity_boundary(p, u))};
	r.h1_norm = scalar_h1_norm(r.w);
	r.data_norm = l2_norm(p.F + p.beta * u) + h1_norm(u);
	r.h1_ratio = r.data_norm > 0.0 ? r.h1_norm / r.data_norm : 0.0;
	return r;
}

PoissonSolution poisson_step(const DirichletOperator &op, const ScalarField &w) {
	ScalarField rhs = -1.0 * w;
	PoissonSolution s{op.solve(rhs, ScalarField(w.grid(), BoundaryTag::dirichlet_zero))};
	const double wl2 = l2_norm(w), wh1 = scalar_h1_norm(w);
	const double psi_h2 = scalar_h2_norm(s.psi);
	s.h2_ratio = wl2 > 0.0 ? psi_h2 / wl2 : 0.0;
	s.h3_ratio = wh1 > 0.0 ? (psi_h2 + scalar_h2_norm(diff_x(s.psi))) / wh1 : 0.0;
	return s;
}

} // namespace

StokesProblem StokesProblem::make(VectorField F, const SlipPair &slip, double mu, std::optional<double> beta) {
	if (!all_finite(F.u1) || !all_finite(F.u2))
		throw Error("StokesProblem: F has non-finite values");
	const ShiftParams shift = ShiftParams::make(slip, mu, std::nullopt, beta);
	return StokesProblem{std::move(F), slip, mu, shift.beta};
}

ScalarField weak_curl(const VectorField &F) {
	const GridSpec &g = F.grid();
	ScalarField c = odd_scalar(g);
	const auto avg_y = [&](int i, int j) { return (F.u2(i, j - 1) + 4.0 * F.u2(i, j) + F.u2(i, j + 1)) / 6.0; };
	const auto avg_x = [&](int i, int j) { return (F.u1(i - 1, j) + 4.0 * F.u1(i, j) + F.u1(i + 1, j)) / 6.0; };
	for (int j = 1; j <= g.ny(); ++j)
		for (int i = 1; i <= g.nx(); ++i)
			c(i, j) = (avg_y(i + 1, j) - avg_y(i - 1, j)) / (2.0 * g.hx()) -
			          (avg_x(i, j + 1) - avg_x(i, j - 1)) / (2.0 * g.hy());
	return c;
}

AuxiliaryVorticity solve_vorticity_auxiliary(const StokesProblem &problem, const VectorField &u,
                                             const ScalarField &curl_u) {
	ShiftParams::make(problem.slip, problem.mu, std::nullopt, problem.beta);
	if (u.grid() != problem.grid() || curl_u.grid() != problem.grid())
		throw Error("solve_vorticity_auxiliary: grid mismatch");
	const DirichletOperator op(problem.grid(), problem.mu, problem.beta);
	return vorticity_step(problem, op, weak_curl(problem.F), u, curl_u);
}

AuxiliaryVorticity solve_vorticity_auxiliary(const StokesProblem &problem, const VectorField &u) {
	return solve_vorticity_auxiliary(problem, u, curl2d(u));
}

PoissonSolution solve_dirichlet_poisson(const ScalarField &w) {
	if (!all_finite(w))
		throw Error("solve_dirichlet_poisson: w has non-finite values");
	const DirichletOperator op(w.grid(), 1.0, 0.0);
	return poisson_step(op, w);
}

VectorField reconstruct_velocity(const ScalarField &psi) {
	ScalarField p = psi;
	if (p.tag() != BoundaryTag::dirichlet_zero)
		p = ScalarField(psi.grid(), psi.values(), BoundaryTag::dirichlet_zero);
	return velocity_from_stream(p);
}

double scalar_h1_norm(const ScalarField &f) {
	const ScalarField fx = diff_x(f), fy = diff_y(f);
	return std::sqrt(inner(f, f) + inner(fx, fx) + inner(fy, fy));
}

double scalar_h2_norm(const ScalarField &f) {
	const ScalarField fxx = diff_xx(f), fyy = diff_yy(f), fxy = diff_y(diff_x(f));
	const double h1 = scalar_h1_norm(f);
	return std::sqrt(h1 * h1 + inner(fxx, fxx) + inner(fyy, fyy) + 2.0 * inner(fxy, fxy));
}

VectorField vector_laplacian(const VectorField &u, const SlipPair &slip, double mu) {
	const ScalarField u1 = u.u1.tag() == BoundaryTag::robin_slip ? apply_robin_ghost(u.u1, slip, mu) : u.u1;
	return VectorField(diff_xx(u1) + diff_yy(u1), diff_xx(u.u2) + diff_yy(u.u2));
}

VectorField pressure_gradient(const StokesProblem &problem, const ScalarField &w) {
	const ScalarField wx = diff_x(w), wy = diff_y(w);
	VectorField lap_u(-1.0 * wy, wx);
	return problem.F + problem.mu * lap_u;
}

StokesSolution stokes_solve(const StokesProblem &problem, const StokesSolveOptions &options) {
	ShiftParams::make(problem.slip, problem.mu, std::nullopt, problem.beta);
	if (options.max_iterations < 1)
		throw Error("stokes_solve: max_iterations must be positive");
	const GridSpec &g = problem.grid();
	const DirichletOperator helmholtz(g, problem.mu, problem.beta);
	const DirichletOperator poisson(g, 1.0, 0.0);
	const ScalarField load_F = weak_curl(problem.F);

	VectorField u(g);
	ScalarField curl_u = odd_scalar(g);
	if (options.initial) {
		if (options.initial->grid() != g)
			throw Error("stokes_solve: initial iterate lives on a different grid");
		u = *options.initial;
		curl_u = curl2d(u);
	}

	StokesSolution sol{u, VectorField(g), odd_scalar(g), ScalarField(g, BoundaryTag::dirichlet_zero), {}, 0, false,
	                   0.0, {}};
	AuxiliaryVorticity aux{odd_scalar(g)};
	PoissonSolution pois{ScalarField(g, BoundaryTag::dirichlet_zero)};
	for (int n = 1; n <= options.max_iterations; ++n) {
		aux = vorticity_step(problem, helmholtz, load_F, u, curl_u);
		pois = poisson_step(poisson, aux.w);
		VectorField next = reconstruct_velocity(pois.psi);
		const double change = l2_norm(next - u);
		u = std::move(next);
		curl_u = laplacian_5pt(pois.psi);
		sol.iterations = n;
		sol.last_change = change;
		sol.change_history.push_back(change);
		if (!std::isfinite(change))
			break;
		if (change <= options.tolerance * (1.0 + l2_norm(u))) {
			sol.converged = true;
			break;
		}
	}

	const auto &h = sol.change_history;
	int ratios = 0;
	double log_sum = 0.0;
	for (std::size_t n = 1; n < h.size(); ++n)
		if (h[n - 1] > 0.0 && h[n] > 0.0) {
			log_sum += std::log(h[n] / h[n - 1]);
			++ratios;
		}
	sol.contraction = ratios > 0 ? std::exp(log_sum / ratios) : 0.0;

	sol.u = u;
	sol.w = aux.w;
	sol.psi = pois.psi;
	sol.w_h1_ratio = aux.h1_ratio;
	sol.psi_h2_ratio = pois.h2_ratio;
	sol.psi_h3_ratio = pois.h3_ratio;

	sol.p_grad = pressure_gradient(problem, sol.w);
	sol.p_grad_curl = interior_curl_max(sol.p_grad);
	sol.curl_defect = interior_max(curl2d(u) - sol.w, 1);
	sol.divergence_residual = interior_max(divergence(u));
	sol.navier_bc_residual = navier_residual(u.u1, problem.slip, problem.mu);

	StokesH2Report &r = sol.h2_report;
	r.u_h2 = h2_norm(u, problem.slip, problem.mu);
	r.p_grad_l2 = l2_norm(sol.p_grad);
	r.F_l2 = l2_norm(problem.F);
	r.u_l2 = l2_norm(u);
	r.ratio = r.F_l2 + r.u_l2 > 0.0 ? (r.u_h2 + r.p_grad_l2) / (r.F_l2 + r.u_l2) : 0.0;
	return sol;
}

StrongSolutionReport strong_solution_audit(const GalerkinSystem &sys, const Trajectory &traj, int sample_every) {
	if (sample_every < 1)
		throw Error("strong_solution_audit: sample_every must be positive");
	StrongSolutionReport rep;
	if (traj.states.empty())
		return rep;
	const GalerkinBasis &basis = sys.basis();
	const GridSpec &g = basis.grid;

	rep.initial_h2 = h2_norm(sys.reconstruct(traj.states.front().g), basis.slip, basis.mu);
	double f_int = 0.0;
	for (std::size_t n = 1; n < traj.states.size(); ++n) {
		const double t0 = traj.states[n - 1].t, t1 = traj.states[n].t;
		const double a = sys.forcing_sq(t0) + sys.forcing_dt_sq(t0);
		const double b = sys.forcing_sq(t1) + sys.forcing_dt_sq(t1);
		f_int += 0.5 * (t1 - t0) * (a + b);
	}
	rep.forcing_h1t = std::sqrt(f_int);

	for (std::size_t n = 0; n < traj.states.size(); n += std::size_t(sample_every)) {
		const GalerkinState &s = traj.states[n];
		AuditSample a;
		a.t = s.t;
		const VectorField u = sys.reconstruct(s.g);
		const VectorField du = sys.reconstruct(rhs(sys, s));
		const VelocityGradient G = gradient(u, Closure::second_order);

		ScalarField c1 = pointwise_product(u.u1, G.d1x) + pointwise_product(u.u2, G.d1y);
		ScalarField c2 = pointwise_product(u.u1, G.d2x) + pointwise_product(u.u2, G.d2y);
		const VectorField conv(c1, c2);
		const double grad_l2 = std::sqrt(inner(G.d1x, G.d1x) + inner(G.d1y, G.d1y) + inner(G.d2x, G.d2x) +
		                                 inner(G.d2y, G.d2y));
		const double l2 = l2_norm(u);
		a.u_h2 = h2_norm(u, basis.slip, basis.mu);
		a.convection_l2 = l2_norm(conv);
		a.linf_grad = linf_norm(u) * grad_l2;
		a.interpolated = std::sqrt(l2 * a.u_h2) * grad_l2;
		const double slack = 1e-12 * (1.0 + a.interpolated);
		a.chain_holds = a.convection_l2 <= a.linf_grad + slack && a.linf_grad <= a.interpolated + slack;

		VectorField F = sys.forcing().at(g, s.t);
		F -= du;
		F -= conv;
		const StokesProblem problem = StokesProblem::make(F, basis.slip, basis.mu, basis.shift.beta);
		const StokesSolution sol = stokes_solve(problem);
		a.stokes_u_h2 = sol.h2_report.u_h2;
		a.p_grad_l2 = sol.h2_report.p_grad_l2;
		a.reconstruction_gap = l2_norm(sol.u - u) / (1.0 + l2);
		a.p_grad_curl = sol.p_grad_curl;
		a.p_grad_curl_rel = sol.p_grad_curl / (1.0 + interior_max(weak_curl(F)));
		a.iterations = sol.iterations;
		a.converged = sol.converged;

		rep.sup_u_h2 = std::max(rep.sup_u_h2, a.u_h2);
		rep.sup_h2_plus_p = std::max(rep.sup_h2_plus_p, a.stokes_u_h2 + a.p_grad_l2);
		rep.max_p_grad_curl_rel = std::max(rep.max_p_grad_curl_rel, a.p_grad_curl_rel);
		rep.chain_holds = rep.chain_holds && a.chain_holds;
		rep.all_converged = rep.all_converged && a.converged;
		rep.samples.push_back(a);
	}
	const double denom = rep.initial_h2 + rep.forcing_h1t;
	rep.realized_constant = denom > 0.0 ? rep.sup_h2_plus_p / denom : 0.0;
	return rep;
}

} // namespace stripns
