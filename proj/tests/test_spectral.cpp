#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "stripns/stokes_spectral.hpp"

using namespace stripns;

namespace {

constexpr double pi = std::numbers::pi;

double lowest_free_slip(int ny) {
	GridSpec g = build_grid(StripGeometry(1.0), ny, ny);
	const SlipPair slip;
	return solve_eigenpairs(1, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0)).pairs[0].Lambda;
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("shift parameters") {
	const ShiftParams s = ShiftParams::make(SlipPair(2.0, 2.0), 1.0);
	CHECK(s.epsilon == 0.5);
	CHECK(s.beta0 == doctest::Approx(4.0));
	CHECK(s.beta == doctest::Approx(5.0));
	CHECK(beta_threshold(SlipPair(-2.0, 1.0), 0.25) == doctest::Approx(16.0 + 1.0));
	CHECK(beta_threshold(SlipPair(), 0.5) == 0.0);
	CHECK_THROWS_AS(ShiftParams::make(SlipPair(2.0, 2.0), 1.0, 0.5, 3.0), Error);
	CHECK_THROWS_AS(ShiftParams::make(SlipPair(), 1.0, 1.5), Error);
	CHECK_THROWS_AS(ShiftParams::make(SlipPair(), -1.0), Error);
}

TEST_CASE("mode pencils are symmetric and positive definite") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 24);
	for (double k0 : {-2.0, 0.0, 2.0})
		for (double k1 : {-2.0, 0.0, 2.0}) {
			const SlipPair slip(k0, k1);
			const ShiftParams shift = ShiftParams::make(slip, 1.0);
			for (int a : {1, 3}) {
				ModePencil p = assemble_mode_problem(a, g, slip, 1.0, shift);
				CAPTURE(k0);
				CAPTURE(k1);
				CHECK((p.stiffness - p.stiffness.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
				CHECK((p.mass - p.mass.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
				Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.stiffness);
				CHECK(es.eigenvalues().minCoeff() > 0.0);
				CHECK(p.constraint_basis.rows() == g.ny());
				CHECK(p.constraint_basis.cols() == g.ny() - 2);
				CHECK(p.alpha == doctest::Approx(a * pi / 2.0));
			}
		}
}

TEST_CASE("free-slip boundary form vanishes") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 24);
	const SlipPair slip;
	GalerkinBasis b = solve_eigenpairs(6, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0));
	CHECK(boundary_matrix(b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free-slip lowest eigenvalue converges at second order") {
	const double exact = 5.0 * pi * pi / 4.0;
	const double e32 = std::abs(lowest_free_slip(32) - exact);
	const double e64 = std::abs(lowest_free_slip(64) - exact);
	CHECK(e64 / exact < 1e-2);
	CHECK(std::log2(e32 / e64) > 1.8);
}

TEST_CASE("eigenvalues stay above the threshold") {
	GridSpec g = build_grid(StripGeometry(1.0), 20, 20);
	const SlipPair slip(2.0, 2.0);
	const ShiftParams shift = ShiftParams::make(slip, 1.0);
	REQUIRE(shift.beta0 == doctest::Approx(4.0));
	GalerkinBasis b = solve_eigenpairs(12, 0, g, slip, 1.0, shift);
	for (const EigenPair &p : b.pairs)
		CHECK(p.Lambda > -4.0);
	CHECK(verify_basis(b).spectral_margin > 0.0);
}

TEST_CASE("single pair and a larger mode range") {
	GridSpec g = build_grid(StripGeometry(2.0), 32, 16);
	const SlipPair slip(-1.0, 1.0);
	const ShiftParams shift = ShiftParams::make(slip, 1.0);
	GalerkinBasis one = solve_eigenpairs(1, 0, g, slip, 1.0, shift);
	REQUIRE(one.size() == 1);
	double prev = std::numeric_limits<double>::infinity();
	for (int a_max : {1, 2, 4, 8}) {
		const double l1 = solve_eigenpairs(1, a_max, g, slip, 1.0, shift).pairs[0].Lambda;
		CHECK(l1 <= prev + 1e-12);
		prev = l1;
	}
	CHECK(one.pairs[0].Lambda == doctest::Approx(prev).epsilon(1e-12));
}

TEST_CASE("basis certification") {
	GridSpec g = build_grid(StripGeometry(1.0), 20, 20);
	for (double k0 : {-2.0, 0.0, 2.0})
		for (double k1 : {-2.0, 0.0, 2.0}) {
			const SlipPair slip(k0, k1);
			GalerkinBasis b = solve_eigenpairs(10, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0));
			const Eigen::MatrixXd G = gram_matrix(b);
			double offdiag = 0.0, navier = 0.0;
			for (int j = 0; j < b.size(); ++j) {
				for (int k = 0; k < b.size(); ++k)
					if (j != k)
						offdiag = std::max(offdiag, std::abs(inner(b.field(j), b.field(k))));
				navier = std::max(navier, navier_residual(b.field(j).u1, slip, 1.0));
				CHECK(inner(b.field(j), b.field(j)) == doctest::Approx(1.0).epsilon(1e-10));
				CHECK(membership(b.field(j), slip, 1.0).in_W);
			}
			CAPTURE(k0);
			CAPTURE(k1);
			CHECK(offdiag <= 1e-10);
			CHECK(navier <= 1e-6);
			const BasisReport r = verify_basis(b);
			CHECK(r.ordered);
			CHECK(r.gram_offdiag <= 1e-10);
			CHECK(r.eigen_residual <= 5e-2);
			if (k0 == 0.0 && k1 == 0.0)
				CHECK(r.navier_bc_residual <= 1e-10);
		}
}

TEST_CASE("stress-form operator matches the spectrum at second order") {
	auto residual = [](int n) {
		GridSpec g = build_grid(StripGeometry(1.0), n, n);
		const SlipPair slip(-1.0, 0.5);
		return verify_basis(solve_eigenpairs(6, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0))).eigen_residual;
	};
	const double r16 = residual(16), r32 = residual(32);
	CHECK(r32 < 1e-2);
	CHECK(std::log2(r16 / r32) > 1.8);
}

TEST_CASE("eigenvalues do not depend on the shift") {
	GridSpec g = build_grid(StripGeometry(1.0), 16, 16);
	const SlipPair slip(-1.0, 0.5);
	GalerkinBasis a = solve_eigenpairs(8, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0));
	GalerkinBasis b = solve_eigenpairs(8, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0, std::nullopt, 25.0));
	for (int j = 0; j < 8; ++j) {
		CHECK(std::abs(a.pairs[std::size_t(j)].Lambda - b.pairs[std::size_t(j)].Lambda) <=
		      1e-10 * (1.0 + std::abs(a.pairs[std::size_t(j)].Lambda)));
		CHECK(b.pairs[std::size_t(j)].lambda_shifted ==
		      doctest::Approx(b.pairs[std::size_t(j)].Lambda + 25.0).epsilon(1e-12));
	}
}

TEST_CASE("free-slip eigenvalues match the separable spectrum") {
	GridSpec g = build_grid(StripGeometry(1.0), 48, 48);
	const SlipPair slip;
	GalerkinBasis b = solve_eigenpairs(4, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0));
	std::vector<double> exact;
	for (int a = 1; a <= 6; ++a)
		for (int n = 1; n <= 3; ++n)
			exact.push_back(a * a * pi * pi / 4.0 + n * n * pi * pi);
	std::sort(exact.begin(), exact.end());
	for (int j = 0; j < 4; ++j)
		CHECK(b.pairs[std::size_t(j)].Lambda == doctest::Approx(exact[std::size_t(j)]).epsilon(1e-2));
}

}
