#include "stripns/function_spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stripns {

VelocityGradient gradient(const VectorField &u, Closure closure) {
	return VelocityGradient{diff_x(u.u1, closure), diff_y(u.u1, closure), diff_x(u.u2, closure),
	                        diff_y(u.u2, closure)};
}

double l2_norm(const ScalarField &f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double l2_norm(const VectorField &u) { return std::sqrt(std::max(0.0, inner(u, u))); }

double linf_norm(const VectorField &u) {
	double m = 0.0;
	for (std::size_t n = 0; n < u.u1.values().size(); ++n) {
		const double a = u.u1.values()[n], b = u.u2.values()[n];
		m = std::max(m, std::sqrt(a * a + b * b));
	}
	return m;
}

double grad_sq(const VectorField &u) {
	const VelocityGradient G = gradient(u);
	return inner(G.d1x, G.d1x) + inner(G.d1y, G.d1y) + inner(G.d2x, G.d2x) + inner(G.d2y, G.d2y);
}

double strain_sq(const VectorField &u) {
	const VelocityGradient G = gradient(u);
	ScalarField shear = 0.5 * (G.d1y + G.d2x);
	return inner(G.d1x, G.d1x) + inner(G.d2y, G.d2y) + 2.0 * inner(shear, shear);
}

double h1_norm(const VectorField &u) { return std::sqrt(inner(u, u) + grad_sq(u)); }

static double second_sq(const ScalarField &f) {
	ScalarField fy = diff_y(f);
	ScalarField fxx = diff_xx(f), fyy = diff_yy(f), fxy = diff_x(fy);
	return inner(fxx, fxx) + 2.0 * inner(fxy, fxy) + inner(fyy, fyy);
}

double h2_norm(const VectorField &u, const SlipPair &slip, double mu) {
	const ScalarField u1 = u.u1.tag() == BoundaryTag::robin_slip ? apply_robin_ghost(u.u1, slip, mu) : u.u1;
	const double h1 = h1_norm(u);
	return std::sqrt(h1 * h1 + second_sq(u1) + second_sq(u.u2));
}

NormReport norms(const VectorField &u, const SlipPair &slip, double mu) {
	NormReport r;
	const double l2sq = inner(u, u);
	const double gsq = grad_sq(u);
	r.l2 = std::sqrt(l2sq);
	r.grad_l2 = std::sqrt(gsq);
	r.h1 = std::sqrt(l2sq + gsq);
	r.h2 = h2_norm(u, slip, mu);
	ScalarField q(u.grid());
	for (std::size_t n = 0; n < q.values().size(); ++n) {
		const double s = u.u1.values()[n] * u.u1.values()[n] + u.u2.values()[n] * u.u2.values()[n];
		q.values()[n] = s * s;
	}
	r.l4 = std::pow(std::max(0.0, integrate(q)), 0.25);
	r.linf = linf_norm(u);
	r.strain_l2 = std::sqrt(std::max(0.0, strain_sq(u)));
	return r;
}

ScalarField divergence(const VectorField &u) { return diff_x(u.u1) + diff_y(u.u2); }

ScalarField curl2d(const VectorField &u) { return diff_x(u.u2) - diff_y(u.u1); }

ScalarField curl2d(const VectorField &u, const SlipPair &slip, double mu) {
	return diff_x(u.u2) - diff_y(apply_robin_ghost(u.u1, slip, mu));
}

std::vector<double> wall_shear(const VectorField &u, Wall wall) {
	const GridSpec &g = u.grid();
	const int j = wall == Wall::bottom ? 0 : g.ny() + 1;
	const double ny_sign = wall == Wall::bottom ? -1.0 : 1.0;
	ScalarField d1y = diff_y(u.u1), d2x = diff_x(u.u2);
	std::vector<double> s(g.cols());
	// 2 D(u) n . tau = n_y (d_y u1 + d_x u2) on a flat wall
	for (int i = 0; i < g.cols(); ++i)
		s[i] = ny_sign * (d1y(i, j) + d2x(i, j));
	return s;
}

double stream_trace_tolerance(const ScalarField &psi) { return 1e-10 * (1.0 + psi.max_abs()); }

VectorField velocity_from_stream(const ScalarField &psi) {
	const GridSpec &g = psi.grid();
	const int ic = g.cols() - 1, jr = g.rows() - 1;
	double trace = 0.0;
	for (int i = 0; i < g.cols(); ++i)
		trace = std::max({trace, std::abs(psi(i, 0)), std::abs(psi(i, jr))});
	for (int j = 0; j < g.rows(); ++j)
		trace = std::max({trace, std::abs(psi(0, j)), std::abs(psi(ic, j))});
	if (trace > stream_trace_tolerance(psi))
		throw Error("velocity_from_stream: streamfunction trace " + std::to_string(trace) +
		            " does not vanish on the boundary");

	ScalarField p(g, psi.values(), BoundaryTag::dirichlet_zero);
	for (int i = 0; i < g.cols(); ++i)
		p(i, 0) = p(i, jr) = 0.0;
	for (int j = 0; j < g.rows(); ++j)
		p(0, j) = p(ic, j) = 0.0;

	ScalarField py = diff_y(p);
	ScalarField u1(g, std::move(py.values()), BoundaryTag::robin_slip);
	u1 *= -1.0;
	ScalarField px = diff_x(p);
	ScalarField u2(g, std::move(px.values()), BoundaryTag::neumann_zero);
	return VectorField(std::move(u1), std::move(u2));
}

double navier_residual(const ScalarField &u1, const SlipPair &slip, double mu) {
	const GridSpec &g = u1.grid();
	const int top = g.ny() + 1;
	const double h = g.hy();
	double r = 0.0;
	for (int i = 0; i < g.cols(); ++i) {
		const double db = (-3.0 * u1(i, 0) + 4.0 * u1(i, 1) - u1(i, 2)) / (2.0 * h);
		const double dt = (3.0 * u1(i, top) - 4.0 * u1(i, top - 1) + u1(i, top - 2)) / (2.0 * h);
		r = std::max(r, std::abs(mu * db + slip.k0 * u1(i, 0)));
		r = std::max(r, std::abs(mu * dt - slip.k1 * u1(i, top)));
	}
	return r;
}

namespace {

// Navier functionals of u1 = -D psi for a single column profile.
std::array<double, 2> column_navier(const std::vector<double> &p, double h, const SlipPair &slip, double mu) {
	std::vector<double> u = diff_1d(p, h, Closure::second_order);
	for (double &v : u)
		v = -v;
	const std::size_t n = u.size();
	return {mu * wall_derivative(u, h, Wall::bottom) + slip.k0 * u[0],
	        mu * wall_derivative(u, h, Wall::top) - slip.k1 * u[n - 1]};
}

} // namespace

ScalarField robin_project_stream(const ScalarField &psi, const SlipPair &slip, double mu) {
	if (!(mu > 0.0))
		throw Error("robin_project_stream: mu must be positive");
	const GridSpec &g = psi.grid();
	const int nr = g.rows();
	const double h = g.hy();
	std::vector<double> P1(nr), P2(nr);
	for (int j = 0; j < nr; ++j) {
		const double y = g.y(j);
		P1[j] = y * y * std::pow(1.0 - y, 3);
		P2[j] = std::pow(y, 3) * (1.0 - y) * (1.0 - y);
	}
	P1[0] = P1[nr - 1] = P2[0] = P2[nr - 1] = 0.0;
	const auto a = column_navier(P1, h, slip, mu);
	const auto b = column_navier(P2, h, slip, mu);
	const double det = a[0] * b[1] - b[0] * a[1];
	if (std::abs(det) < 1e-300)
		throw Error("robin_project_stream: singular corrector system");

	ScalarField out = psi;
	out.values() = psi.values();
	std::vector<double> col(nr);
	for (int i = 0; i < g.cols(); ++i) {
		for (int j = 0; j < nr; ++j)
			col[j] = psi(i, j);
		const auto r = column_navier(col, h, slip, mu);
		const double c1 = (-r[0] * b[1] + b[0] * r[1]) / det;
		const double c2 = (-a[0] * r[1] + r[0] * a[1]) / det;
		for (int j = 0; j < nr; ++j)
			out(i, j) = col[j] + c1 * P1[j] + c2 * P2[j];
	}
	return out;
}

ReflectedField reflect_exponential(const ScalarField &u1, double k, double mu, Wall wall, std::optional<double> tol) {
	if (!(mu > 0.0))
		throw Error("reflect_exponential: mu must be positive");
	const GridSpec &g = u1.grid();
	const int N = g.ny() + 1;
	const double h = g.hy();
	const double tolerance = tol.value_or(1e-8 * (1.0 + u1.max_abs()));

	double residual = 0.0, jump = 0.0;
	for (int i = 0; i < g.cols(); ++i) {
		std::vector<double> col(N + 1);
		for (int j = 0; j <= N; ++j)
			col[j] = u1(i, j);
		const double d = wall_derivative(col, h, wall);
		const double uw = wall == Wall::bottom ? col[0] : col[N];
		const double robin = wall == Wall::bottom ? mu * d + k * uw : mu * d - k * uw;
		residual = std::max(residual, std::abs(robin));
		// one-sided derivative of the weighted field at the wall (product rule,
		// exact weight derivative); the even reflection flips its sign
		const double dw = wall == Wall::bottom ? (k / mu) * uw + d : -(k / mu) * uw + d;
		jump = std::max(jump, 2.0 * std::abs(dw));
	}
	if (residual > tolerance)
		throw Error("reflect_exponential: Robin residual " + std::to_string(residual) + " exceeds tolerance " +
		            std::to_string(tolerance) + "; the extension would not be C1");

	ReflectedField r{g, wall, wall == Wall::bottom ? -1.0 : 0.0, 2 * N + 1, {}, jump};
	r.values.resize(std::size_t(r.rows) * std::size_t(g.cols()));
	for (int row = 0; row < r.rows; ++row) {
		int j;
		double weight;
		if (wall == Wall::bottom) {
			j = std::abs(row - N);
			weight = std::exp((k / mu) * g.y(j));
		} else {
			j = row <= N ? row : 2 * N - row;
			weight = std::exp((k / mu) * (1.0 - g.y(j)));
		}
		for (int i = 0; i < g.cols(); ++i)
			r.values[std::size_t(row) * std::size_t(g.cols()) + std::size_t(i)] = weight * u1(i, j);
	}
	return r;
}

double cutoff(double y) {
	const double a = std::abs(y);
	if (a <= 1.0)
		return 1.0;
	if (a >= 2.0)
		return 0.0;
	const double t = a - 1.0;
	return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_derivative(double y) {
	const double a = std::abs(y);
	if (a <= 1.0 || a >= 2.0)
		return 0.0;
	const double t = a - 1.0;
	const double d = -30.0 * t * t * (1.0 - t) * (1.0 - t);
	return y < 0.0 ? -d : d;
}

double default_membership_tolerance(const VectorField &u) { return 1e-8 * (1.0 + h1_norm(u)); }

SpaceMembership membership(const VectorField &u, const SlipPair &slip, double mu, std::optional<double> tol) {
	if (!(mu > 0.0))
		throw Error("membership: mu must be positive");
	const GridSpec &g = u.grid();
	SpaceMembership m;
	m.tolerance = tol.value_or(default_membership_tolerance(u));
	m.divergence_residual = divergence(u).max_abs();
	double np = 0.0;
	for (int i = 0; i < g.cols(); ++i)
		np = std::max({np, std::abs(u.u2(i, 0)), std::abs(u.u2(i, g.ny() + 1))});
	for (int j = 0; j < g.rows(); ++j)
		np = std::max({np, std::abs(u.u1(0, j)), std::abs(u.u1(g.nx() + 1, j))});
	m.no_penetration_residual = np;
	m.navier_bc_residual = navier_residual(u.u1, slip, mu);

	bool finite = true;
	for (std::size_t n = 0; n < u.u1.values().size(); ++n)
		finite = finite && std::isfinite(u.u1.values()[n]) && std::isfinite(u.u2.values()[n]);
	m.in_H = finite && m.divergence_residual <= m.tolerance && m.no_penetration_residual <= m.tolerance;
	m.in_V = m.in_H && std::isfinite(h1_norm(u));
	m.in_W = m.in_V && m.navier_bc_residual <= m.tolerance;
	return m;
}

} // namespace stripns
