#include <cmath>
#include <numbers>

#include <doctest.h>

#include "stripns/function_spaces.hpp"

using namespace stripns;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField mode_stream(const GridSpec &g) {
	const double L = g.half_length();
	return ScalarField::sample(
		g, [L](double x, double y) { return std::sin(pi * (x + L) / (2.0 * L)) * std::sin(pi * y); },
		BoundaryTag::dirichlet_zero);
}

ScalarField wavy_stream(const GridSpec &g) {
	const double L = g.half_length();
	return ScalarField::sample(
		g,
		[L](double x, double y) {
			return std::sin(pi * (x + L) / L) * y * y * (1.0 - y) * (1.0 - y) * (1.0 + y) +
			       0.3 * std::sin(3.0 * pi * (x + L) / (2.0 * L)) * std::sin(pi * y);
		},
		BoundaryTag::dirichlet_zero);
}

double wall_identity_error(int n) {
	GridSpec g = build_grid(StripGeometry(1.0), n, n);
	VectorField u = velocity_from_stream(wavy_stream(g));
	ScalarField w = curl2d(u);
	std::vector<double> sb = wall_shear(u, Wall::bottom), st = wall_shear(u, Wall::top);
	double e = 0.0;
	for (int i = 1; i <= g.nx(); ++i) {
		e = std::max(e, std::abs(sb[i] - w(i, 0)));
		e = std::max(e, std::abs(st[i] + w(i, g.ny() + 1)));
	}
	return e;
}

} // namespace

TEST_SUITE("function_spaces") {

TEST_CASE("norms of the lowest free-slip mode") {
	for (double L : {1.0, 2.0}) {
		GridSpec g = build_grid(StripGeometry(L), int(64 * L), 64);
		VectorField u = velocity_from_stream(mode_stream(g));
		const double exact_sq = pi * pi * L / 2.0 + pi * pi / (8.0 * L);
		CHECK(l2_norm(u) * l2_norm(u) == doctest::Approx(exact_sq).epsilon(2e-3));
		const double exact_grad_sq = pi * pi * (pi * pi / (4.0 * L * L) + pi * pi) * (L / 2.0 + 1.0 / (8.0 * L));
		CHECK(grad_sq(u) == doctest::Approx(exact_grad_sq).epsilon(5e-3));
	}
}

TEST_CASE("norms are homogeneous of degree one") {
	GridSpec g = build_grid(StripGeometry(1.0), 24, 24);
	VectorField u = velocity_from_stream(wavy_stream(g));
	const SlipPair slip(-1.0, 0.5);
	NormReport a = norms(u, slip, 1.0);
	NormReport b = norms(-3.0 * u, slip, 1.0);
	CHECK(b.l2 == doctest::Approx(3.0 * a.l2));
	CHECK(b.h1 == doctest::Approx(3.0 * a.h1));
	CHECK(b.h2 == doctest::Approx(3.0 * a.h2));
	CHECK(b.l4 == doctest::Approx(3.0 * a.l4));
	CHECK(b.linf == doctest::Approx(3.0 * a.linf));
	CHECK(b.strain_l2 == doctest::Approx(3.0 * a.strain_l2));
	CHECK(b.grad_l2 == doctest::Approx(3.0 * a.grad_l2));
	CHECK(a.l4 > 0.0);
	CHECK(a.h2 > a.h1);
	CHECK(a.h1 > a.l2);
}

TEST_CASE("divergence and curl of elementary fields") {
	GridSpec g = build_grid(StripGeometry(1.0), 12, 12);
	auto field = [&](std::function<double(double, double)> a, std::function<double(double, double)> b) {
		return VectorField(ScalarField::sample(g, a), ScalarField::sample(g, b));
	};
	ScalarField d1 = divergence(field([](double x, double) { return x; }, [](double, double) { return 0.0; }));
	ScalarField d0 = divergence(field([](double, double y) { return y; }, [](double x, double) { return x; }));
	ScalarField c1 = curl2d(field([](double, double y) { return -y; }, [](double, double) { return 0.0; }));
	for (int j = 0; j < g.rows(); ++j)
		for (int i = 0; i < g.cols(); ++i) {
			CHECK(d1(i, j) == doctest::Approx(1.0));
			CHECK(std::abs(d0(i, j)) < 1e-12);
			CHECK(c1(i, j) == doctest::Approx(1.0));
		}

	VectorField u = velocity_from_stream(wavy_stream(g));
	CHECK(divergence(u).max_abs() < 1e-11);
}

TEST_CASE("curl of a gradient is second order small") {
	auto err = [](int n) {
		GridSpec g = build_grid(StripGeometry(1.0), n, n);
		VectorField grad(ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::cosh(y); }),
		                 ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::sinh(y); }));
		ScalarField c = curl2d(grad);
		double e = 0.0;
		for (int j = 1; j <= g.ny(); ++j)
			for (int i = 1; i <= g.nx(); ++i)
				e = std::max(e, std::abs(c(i, j)));
		return e;
	};
	const double e1 = err(16), e2 = err(32);
	CHECK(e1 < 1e-2);
	CHECK(e1 / e2 > 3.5);
}

TEST_CASE("flat-wall identity 2 D(u) n . tau = curl u") {
	CHECK(wall_identity_error(16) <= 1e-10);
	CHECK(wall_identity_error(32) <= 1e-10);
}

TEST_CASE("strain of elementary fields") {
	GridSpec g = build_grid(StripGeometry(1.0), 12, 12);
	VectorField translation(ScalarField::sample(g, [](double, double) { return 2.5; }),
	                        ScalarField::sample(g, [](double, double) { return -1.0; }));
	CHECK(strain_sq(translation) < 1e-24);
	VectorField shear(ScalarField::sample(g, [](double, double y) { return y; }), ScalarField(g));
	CHECK(strain_sq(shear) == doctest::Approx(g.geometry().area() / 2.0).epsilon(1e-12));
}

TEST_CASE("Korn identity on streamfunction fields") {
	auto defect = [](int n) {
		GridSpec g = build_grid(StripGeometry(1.0), n, n);
		VectorField u = velocity_from_stream(wavy_stream(g));
		return std::abs(strain_sq(u) - 0.5 * grad_sq(u)) / grad_sq(u);
	};
	const double d1 = defect(16), d2 = defect(32);
	CHECK(d2 < 1e-3);
	CHECK(d2 < d1);
}

TEST_CASE("velocity from stream") {
	GridSpec g = build_grid(StripGeometry(1.0), 32, 32);
	VectorField u = velocity_from_stream(mode_stream(g));
	double bottom = 0.0, lateral = 0.0;
	for (int i = 0; i < g.cols(); ++i)
		bottom = std::max(bottom, std::abs(u.u1(i, 0) + pi * std::sin(pi * (g.x(i) + 1.0) / 2.0)));
	for (int j = 0; j < g.rows(); ++j)
		lateral = std::max({lateral, std::abs(u.u1(0, j)), std::abs(u.u1(g.nx() + 1, j))});
	CHECK(bottom < 1e-2);
	CHECK(lateral == 0.0);
	for (int i = 0; i < g.cols(); ++i) {
		CHECK(u.u2(i, 0) == 0.0);
		CHECK(u.u2(i, g.ny() + 1) == 0.0);
	}
	CHECK(u.u2.x_parity() == XParity::even);
	CHECK(u.u1.x_parity() == XParity::odd);

	ScalarField bad = ScalarField::sample(g, [](double, double) { return 1.0; }, BoundaryTag::dirichlet_zero);
	CHECK_THROWS_AS(velocity_from_stream(bad), Error);
}

TEST_CASE("exponential reflection") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 32);
	SUBCASE("k = 0 is the even reflection") {
		ScalarField u1 = ScalarField::sample(g, [](double x, double y) { return std::cos(pi * y) * (1.0 + x); },
		                                     BoundaryTag::robin_slip);
		ReflectedField r = reflect_exponential(u1, 0.0, 1.0, Wall::bottom, 1e-2);
		const int N = g.ny() + 1;
		for (int i = 0; i < g.cols(); ++i)
			for (int s = 1; s <= N; ++s)
				CHECK(r(i, N - s) == r(i, N + s));
		CHECK(r.derivative_jump < 1e-2);
	}
	SUBCASE("the Robin exponential extends without a kink") {
		const double k = 1.5, mu = 0.5;
		auto jump = [&](int ny) {
			GridSpec gg = build_grid(StripGeometry(1.0), 16, ny);
			ScalarField u1 = ScalarField::sample(
				gg, [&](double x, double y) { return std::exp(-k * y / mu) * (2.0 + std::sin(x)); },
				BoundaryTag::robin_slip);
			ReflectedField r = reflect_exponential(u1, k, mu, Wall::bottom, 1e-1);
			double flat = 0.0;
			for (int row = 0; row < r.rows; ++row)
				for (int i = 0; i < gg.cols(); ++i)
					flat = std::max(flat, std::abs(r(i, row) - (2.0 + std::sin(gg.x(i)))));
			CHECK(flat < 1e-12);
			CHECK_THROWS_AS(reflect_exponential(u1, k, mu, Wall::bottom), Error);
			return r.derivative_jump;
		};
		const double j1 = jump(32), j2 = jump(64);
		CHECK(j1 < 0.1);
		CHECK(std::log2(j1 / j2) > 1.8);
	}
}

TEST_CASE("cutoff") {
	CHECK(cutoff(0.5) == 1.0);
	CHECK(cutoff(-1.0) == 1.0);
	CHECK(cutoff(3.0) == 0.0);
	CHECK(cutoff(-2.0) == 0.0);
	double dmax = 0.0;
	for (int n = 0; n <= 40000; ++n) {
		const double y = -2.5 + 5.0 * n / 40000.0;
		dmax = std::max(dmax, std::abs(cutoff_derivative(y)));
		const double h = 1e-6;
		if (std::abs(std::abs(y) - 1.0) > 1e-3 && std::abs(std::abs(y) - 2.0) > 1e-3)
			CHECK(cutoff_derivative(y) == doctest::Approx((cutoff(y + h) - cutoff(y - h)) / (2.0 * h)).epsilon(1e-5));
	}
	CHECK(dmax == doctest::Approx(15.0 / 8.0).epsilon(1e-6));
	CHECK(dmax <= 2.0);
}

TEST_CASE("space membership") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	const SlipPair slip(-1.0, 2.0);
	VectorField constant(ScalarField::sample(g, [](double, double) { return 1.0; }, BoundaryTag::robin_slip),
	                     ScalarField(g, BoundaryTag::neumann_zero));
	CHECK_FALSE(membership(constant, slip, 1.0).in_H);

	ScalarField psi = wavy_stream(g);
	SpaceMembership plain = membership(velocity_from_stream(psi), slip, 1.0);
	CHECK(plain.in_H);
	CHECK(plain.in_V);
	CHECK_FALSE(plain.in_W);

	VectorField projected = velocity_from_stream(robin_project_stream(psi, slip, 1.0));
	SpaceMembership m = membership(projected, slip, 1.0);
	CHECK(m.navier_bc_residual <= 1e-8);
	CHECK(m.in_W);
}

}
