#include <cmath>
#include <numbers>

#include <doctest.h>

#include "stripns/stokes_regularity.hpp"

using namespace stripns;

namespace {

constexpr double pi = std::numbers::pi;

// psi = sin(alpha (x + L)) sin(pi y) with alpha = pi / (2 L) and its exact velocity.
struct Mode {
	double L, alpha;
	double psi(double x, double y) const { return std::sin(alpha * (x + L)) * std::sin(pi * y); }
	double u1(double x, double y) const { return -pi * std::sin(alpha * (x + L)) * std::cos(pi * y); }
	double u2(double x, double y) const { return alpha * std::cos(alpha * (x + L)) * std::sin(pi * y); }
	double eigenvalue() const { return alpha * alpha + pi * pi; }
};

Mode mode(double L) { return {L, pi / (2.0 * L)}; }

VectorField exact_velocity(const GridSpec &g, const Mode &m) {
	return VectorField(ScalarField::sample(g, [&](double x, double y) { return m.u1(x, y); }, BoundaryTag::robin_slip),
	                   ScalarField::sample(g, [&](double x, double y) { return m.u2(x, y); }, BoundaryTag::neumann_zero));
}

double relative_l2(const VectorField &a, const VectorField &b) { return l2_norm(a - b) / l2_norm(b); }

double relative_l2(const ScalarField &a, const ScalarField &b) { return l2_norm(a - b) / l2_norm(b); }

double stokes_mode_error(int ny) {
	GridSpec g = build_grid(StripGeometry(1.0), ny, ny);
	const Mode m = mode(1.0);
	VectorField exact = exact_velocity(g, m);
	StokesSolution s = stokes_solve(StokesProblem::make(m.eigenvalue() * exact, SlipPair(), 1.0));
	REQUIRE(s.converged);
	return relative_l2(s.u, exact);
}

VectorField parity_load(const GridSpec &g) {
	const double L = g.half_length();
	return VectorField(
		ScalarField::sample(g, [L](double x, double y) { return std::sin(pi * (x + L) / L) * y * (1.0 - y); },
		                    BoundaryTag::robin_slip),
		ScalarField::sample(g, [L](double x, double y) { return std::cos(pi * (x + L) / (2.0 * L)) * y; },
		                    BoundaryTag::neumann_zero));
}

} // namespace

TEST_SUITE("stokes") {

TEST_CASE("problem construction") {
	GridSpec g = build_grid(StripGeometry(1.0), 8, 8);
	StokesProblem p = StokesProblem::make(VectorField(g), SlipPair(2.0, 2.0), 1.0);
	CHECK(p.beta == doctest::Approx(5.0));
	CHECK(p.grid() == g);
	CHECK_THROWS_AS(StokesProblem::make(VectorField(g), SlipPair(2.0, 2.0), 1.0, 3.0), Error);
	CHECK_THROWS_AS(StokesProblem::make(VectorField(g), SlipPair(), 0.0), Error);
}

TEST_CASE("weak curl") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	CHECK(weak_curl(VectorField(g)).max_abs() == 0.0);
	VectorField rot(ScalarField::sample(g, [](double, double y) { return -y; }, BoundaryTag::robin_slip),
	                ScalarField(g, BoundaryTag::neumann_zero));
	ScalarField c = weak_curl(rot);
	for (int j = 1; j <= g.ny(); ++j)
		for (int i = 1; i <= g.nx(); ++i)
			CHECK(c(i, j) == doctest::Approx(1.0));

	auto err = [](int n) {
		GridSpec gg = build_grid(StripGeometry(1.0), n, n);
		const Mode m = mode(1.0);
		ScalarField c2 = weak_curl(exact_velocity(gg, m));
		double e = 0.0;
		for (int j = 1; j <= gg.ny(); ++j)
			for (int i = 1; i <= gg.nx(); ++i)
				e = std::max(e, std::abs(c2(i, j) + m.eigenvalue() * m.psi(gg.x(i), gg.y(j))));
		return e;
	};
	CHECK(std::log2(err(16) / err(32)) > 1.8);
}

TEST_CASE("auxiliary vorticity") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	StokesProblem zero = StokesProblem::make(VectorField(g), SlipPair(-1.0, 1.0), 1.0);
	AuxiliaryVorticity a = solve_vorticity_auxiliary(zero, VectorField(g));
	CHECK(a.w.max_abs() == 0.0);

	// (-mu lap + beta) w* = curl F for F = curl of chi, lap chi = c w*
	auto recover = [](int n) {
		GridSpec gg = build_grid(StripGeometry(1.0), n, n);
		const Mode m = mode(1.0);
		const double mu = 0.7, beta = 2.0;
		const double c = mu * m.eigenvalue() + beta;
		const double s = -c / m.eigenvalue();
		VectorField F = s * exact_velocity(gg, m);
		StokesProblem p = StokesProblem::make(F, SlipPair(), mu, beta);
		AuxiliaryVorticity w = solve_vorticity_auxiliary(p, VectorField(gg), ScalarField(gg));
		ScalarField exact = ScalarField::sample(gg, [&](double x, double y) { return m.psi(x, y); });
		CHECK(w.h1_ratio > 0.0);
		return relative_l2(w.w, exact);
	};
	const double e1 = recover(16), e2 = recover(32);
	CHECK(e2 < 1e-2);
	CHECK(std::log2(e1 / e2) > 1.8);

	GridSpec gw = build_grid(StripGeometry(1.0), 16, 16);
	const SlipPair slip(-1.0, 0.5);
	VectorField u = exact_velocity(gw, mode(1.0));
	AuxiliaryVorticity b = solve_vorticity_auxiliary(StokesProblem::make(VectorField(gw), slip, 2.0), u);
	for (int i = 0; i < gw.cols(); ++i) {
		CHECK(b.w(i, 0) == doctest::Approx(-0.5 * u.u1(i, 0)));
		CHECK(b.w(i, gw.ny() + 1) == doctest::Approx(-0.25 * u.u1(i, gw.ny() + 1)));
	}
	for (int j = 0; j < gw.rows(); ++j)
		CHECK(b.w(0, j) == 0.0);
}

TEST_CASE("Dirichlet Poisson solve") {
	auto err = [](int n, double L) {
		GridSpec g = build_grid(StripGeometry(L), int(n * L), n);
		const Mode m = mode(L);
		ScalarField w = ScalarField::sample(g, [&](double x, double y) { return -m.eigenvalue() * m.psi(x, y); });
		PoissonSolution p = solve_dirichlet_poisson(w);
		for (int i = 0; i < g.cols(); ++i)
			CHECK(p.psi(i, 0) == 0.0);
		CHECK(p.h2_ratio > 0.0);
		CHECK(p.h3_ratio > 0.0);
		return relative_l2(p.psi, ScalarField::sample(g, [&](double x, double y) { return m.psi(x, y); }));
	};
	for (double L : {1.0, 2.0}) {
		const double e1 = err(16, L), e2 = err(32, L);
		CHECK(e2 < 1e-2);
		CHECK(std::log2(e1 / e2) > 1.9);
	}
}

TEST_CASE("velocity reconstruction") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	CHECK(l2_norm(reconstruct_velocity(ScalarField(g, BoundaryTag::dirichlet_zero))) == 0.0);
	const Mode m = mode(1.0);
	ScalarField psi = ScalarField::sample(
		g, [&](double x, double y) { return m.psi(x, y) * (1.0 + 0.3 * y); }, BoundaryTag::dirichlet_zero);
	VectorField v = reconstruct_velocity(psi);
	for (int i = 0; i < g.cols(); ++i) {
		CHECK(std::abs(v.u2(i, 0)) <= 1e-10);
		CHECK(std::abs(v.u2(i, g.ny() + 1)) <= 1e-10);
	}
	for (int j = 0; j < g.rows(); ++j)
		CHECK(std::abs(v.u1(0, j)) <= 1e-10);
	ScalarField lap = diff_xx(psi) + diff_yy(psi);
	ScalarField c = curl2d(v);
	for (int j = 2; j < g.ny(); ++j)
		for (int i = 2; i < g.nx(); ++i)
			CHECK(c(i, j) == doctest::Approx(lap(i, j)).epsilon(5e-2));
}

TEST_CASE("scalar Sobolev norms") {
	GridSpec g = build_grid(StripGeometry(1.0), 64, 64);
	const Mode m = mode(1.0);
	ScalarField f = ScalarField::sample(g, [&](double x, double y) { return m.psi(x, y); });
	const double l2sq = 0.5, lam = m.eigenvalue();
	CHECK(scalar_h1_norm(f) == doctest::Approx(std::sqrt(l2sq * (1.0 + lam))).epsilon(5e-3));
	CHECK(scalar_h2_norm(f) > scalar_h1_norm(f));
	CHECK(scalar_h2_norm(2.0 * f) == doctest::Approx(2.0 * scalar_h2_norm(f)));
}

TEST_CASE("free-slip manufactured solution") {
	const double e32 = stokes_mode_error(32), e64 = stokes_mode_error(64);
	CHECK(e64 < 1e-2);
	CHECK(std::log2(e32 / e64) >= 1.8);

	GridSpec g = build_grid(StripGeometry(1.0), 32, 32);
	const Mode m = mode(1.0);
	StokesSolution s = stokes_solve(StokesProblem::make(m.eigenvalue() * exact_velocity(g, m), SlipPair(), 1.0));
	CHECK(s.divergence_residual <= 1e-10);
	CHECK(s.contraction < 1.0);
	CHECK(s.iterations == int(s.change_history.size()));
	CHECK(l2_norm(s.p_grad) < 0.05 * l2_norm(s.u) * m.eigenvalue());
	CHECK(s.h2_report.ratio > 0.0);
}

TEST_CASE("zero load gives the zero solution") {
	GridSpec g = build_grid(StripGeometry(2.0), 32, 16);
	StokesSolution s = stokes_solve(StokesProblem::make(VectorField(g), SlipPair(-1.0, 0.5), 1.0));
	CHECK(s.converged);
	CHECK(linf_norm(s.u) <= 1e-10);
	CHECK(linf_norm(s.p_grad) <= 1e-10);
}

TEST_CASE("fixed point is independent of the shift and the initial iterate") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	const SlipPair slip(-1.0, -0.5);
	VectorField F = parity_load(g);
	StokesSolution a = stokes_solve(StokesProblem::make(F, slip, 1.0));
	StokesSolution b = stokes_solve(StokesProblem::make(F, slip, 1.0, 9.0));
	StokesSolveOptions o;
	o.initial = exact_velocity(g, mode(1.0));
	StokesSolution c = stokes_solve(StokesProblem::make(F, slip, 1.0), o);
	REQUIRE(a.converged);
	REQUIRE(b.converged);
	REQUIRE(c.converged);
	CHECK(l2_norm(a.u - b.u) <= 1e-8 * l2_norm(a.u));
	CHECK(l2_norm(a.u - c.u) <= 1e-8 * l2_norm(a.u));
}

TEST_CASE("pipeline consistency under refinement") {
	struct Measured {
		double curl_defect, p_curl;
	};
	auto run = [](int n) {
		GridSpec g = build_grid(StripGeometry(1.0), n, n);
		StokesSolution s = stokes_solve(StokesProblem::make(parity_load(g), SlipPair(-1.0, 0.5), 1.0));
		REQUIRE(s.converged);
		CHECK(s.divergence_residual <= 1e-10);
		CHECK(s.navier_bc_residual < 0.1);
		return Measured{s.curl_defect, s.p_grad_curl};
	};
	const Measured b = run(32), c = run(64);
	CHECK(std::log2(b.curl_defect / c.curl_defect) > 1.8);
	CHECK(std::log2(b.p_curl / c.p_curl) > 1.7);
}

TEST_CASE("non-convergence is reported") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	StokesSolveOptions o;
	o.max_iterations = 2;
	StokesSolution s = stokes_solve(StokesProblem::make(parity_load(g), SlipPair(-1.0, 0.5), 1.0), o);
	CHECK_FALSE(s.converged);
	CHECK(s.iterations == 2);
	CHECK(s.last_change > 0.0);
}

TEST_CASE("strong-solution audit along a decaying run") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	const SlipPair slip(-1.0, -0.5);
	auto basis = std::make_shared<const GalerkinBasis>(solve_eigenpairs(6, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0)));
	GalerkinSystem sys(basis);
	Eigen::VectorXd c(6);
	c << 1.0, -0.5, 0.3, 0.2, -0.1, 0.05;
	Trajectory tr = integrate(sys, GalerkinState{c, 0.0, basis}, 1e-3, 0.05);
	StrongSolutionReport r = strong_solution_audit(sys, tr, 25);
	CHECK(r.samples.size() == 3);
	CHECK(r.chain_holds);
	CHECK(r.all_converged);
	CHECK(std::isfinite(r.sup_h2_plus_p));
	CHECK(r.sup_u_h2 <= r.initial_h2 * 1.05);
	CHECK(r.realized_constant > 0.0);
	for (const AuditSample &s : r.samples) {
		CHECK(s.convection_l2 <= s.linf_grad * (1.0 + 1e-12));
		CHECK(s.linf_grad <= s.interpolated);
		CHECK(s.reconstruction_gap < 0.1);
	}
}

}
