#pragma once

#include <optional>
#include <vector>

#include "stripns/grid.hpp"

namespace stripns {

struct NormReport {
	double l2 = 0.0;
	double h1 = 0.0;
	double h2 = 0.0;
	double l4 = 0.0;
	double linf = 0.0;
	double strain_l2 = 0.0;
	double grad_l2 = 0.0; // seminorm ||grad u||
};

struct SpaceMembership {
	bool in_H = false;
	bool in_V = false;
	bool in_W = false;
	double divergence_residual = 0.0;
	double no_penetration_residual = 0.0;
	double navier_bc_residual = 0.0;
	double tolerance = 0.0;
};

// Componentwise velocity gradient. Energy quadratures use the
// summation-by-parts closure in y; pointwise evaluation uses second order.
struct VelocityGradient {
	ScalarField d1x, d1y, d2x, d2y;
};

VelocityGradient gradient(const VectorField &u, Closure closure = Closure::summation_by_parts);

NormReport norms(const VectorField &u, const SlipPair &slip, double mu);

double l2_norm(const VectorField &u);
double l2_norm(const ScalarField &f);
double linf_norm(const VectorField &u);
double grad_sq(const VectorField &u);  // int |grad u|^2
double strain_sq(const VectorField &u); // int |D(u)|^2
double h1_norm(const VectorField &u);
// H2 norm; Robin ghost rows enter the wall second differences of u1.
double h2_norm(const VectorField &u, const SlipPair &slip, double mu);

ScalarField divergence(const VectorField &u);
ScalarField curl2d(const VectorField &u);
ScalarField curl2d(const VectorField &u, const SlipPair &slip, double mu);

// Wall values of 2 D(u) n . tau with tau = (1, 0), n the outward normal.
std::vector<double> wall_shear(const VectorField &u, Wall wall);

// Largest trace of psi allowed by velocity_from_stream.
double stream_trace_tolerance(const ScalarField &psi);

VectorField velocity_from_stream(const ScalarField &psi);

// Largest wall value of the discrete Navier conditions
// bottom: mu d_y u1 + k0 u1, top: mu d_y u1 - k1 u1 (one-sided wall derivative).
double navier_residual(const ScalarField &u1, const SlipPair &slip, double mu);

// Adds c1(x) y^2 (1-y)^3 + c2(x) y^3 (1-y)^2 column by column so that the
// velocity of psi satisfies the discrete Navier condition on both walls.
ScalarField robin_project_stream(const ScalarField &psi, const SlipPair &slip, double mu);

struct ReflectedField {
	GridSpec grid;              // the base grid
	Wall wall;
	double y_origin;            // y of the first stored row
	int rows;                   // 2 ny + 3
	std::vector<double> values; // row-major, cols() per row
	double derivative_jump;     // max over x of |d_y ext(wall+) - d_y ext(wall-)|

	double operator()(int i, int r) const { return values[std::size_t(r) * std::size_t(grid.cols()) + std::size_t(i)]; }
	double y(int r) const { return y_origin + double(r) * grid.hy(); }
};

ReflectedField reflect_exponential(const ScalarField &u1, double k, double mu, Wall wall,
                                   std::optional<double> tol = std::nullopt);

// Quintic smoothstep cutoff: 1 on |y| <= 1, 0 on |y| >= 2.
double cutoff(double y);
double cutoff_derivative(double y);
inline double cutoff_scaled(double y) { return cutoff(2.0 * y); }
inline double cutoff_lateral(double x, double L) { return cutoff((x + L) / L); }

double default_membership_tolerance(const VectorField &u);

SpaceMembership membership(const VectorField &u, const SlipPair &slip, double mu,
                           std::optional<double> tol = std::nullopt);

} // namespace stripns
