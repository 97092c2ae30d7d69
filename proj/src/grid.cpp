#include "stripns/grid.hpp"

#include <algorithm>
#include <cmath>

namespace stripns {

StripGeometry::StripGeometry(double half_length) : L_(half_length) {
	if (!std::isfinite(half_length) || half_length < 1.0)
		throw Error("StripGeometry: half_length must be finite and >= 1, got " + std::to_string(half_length));
}

GridSpec::GridSpec(const StripGeometry &geometry, int nx, int ny) : geometry_(geometry), nx_(nx), ny_(ny) {
	if (nx < 8 || ny < 8)
		throw Error("GridSpec: nx and ny must be >= 8 (got nx=" + std::to_string(nx) + ", ny=" + std::to_string(ny) +
		            ")");
	hx_ = 2.0 * geometry.half_length() / double(nx + 1);
	hy_ = 1.0 / double(ny + 1);
}

double GridSpec::x(int i) const {
	if (i == nx_ + 1)
		return half_length();
	return -half_length() + double(i) * hx_;
}

double GridSpec::y(int j) const {
	if (j == ny_ + 1)
		return 1.0;
	return double(j) * hy_;
}

bool GridSpec::operator==(const GridSpec &o) const {
	return nx_ == o.nx_ && ny_ == o.ny_ && half_length() == o.half_length();
}

GridSpec build_grid(const StripGeometry &geometry, int nx, int ny) { return GridSpec(geometry, nx, ny); }

SlipPair::SlipPair(double bottom, double top) : k0(bottom), k1(top) {
	if (!std::isfinite(bottom) || !std::isfinite(top))
		throw Error("SlipPair: slip coefficients must be finite");
}

std::string to_string(BoundaryTag tag) {
	switch (tag) {
	case BoundaryTag::dirichlet_zero:
		return "dirichlet_zero";
	case BoundaryTag::robin_slip:
		return "robin_slip";
	case BoundaryTag::neumann_zero:
		return "neumann_zero";
	case BoundaryTag::none:
		break;
	}
	return "none";
}

XParity parity_for(BoundaryTag tag) {
	switch (tag) {
	case BoundaryTag::dirichlet_zero:
	case BoundaryTag::robin_slip:
		return XParity::odd;
	case BoundaryTag::neumann_zero:
		return XParity::even;
	case BoundaryTag::none:
		break;
	}
	return XParity::none;
}

/* ScalarField */

ScalarField::ScalarField(const GridSpec &grid, BoundaryTag tag)
	: grid_(grid), values_(grid.size(), 0.0), tag_(tag), parity_(parity_for(tag)) {}

ScalarField::ScalarField(const GridSpec &grid, std::vector<double> values, BoundaryTag tag)
	: grid_(grid), values_(std::move(values)), tag_(tag), parity_(parity_for(tag)) {
	if (values_.size() != grid_.size())
		throw Error("ScalarField: value count " + std::to_string(values_.size()) + " does not match grid size " +
		            std::to_string(grid_.size()));
}

ScalarField ScalarField::sample(const GridSpec &grid, const std::function<double(double, double)> &fn,
                                BoundaryTag tag) {
	ScalarField f(grid, tag);
	for (int j = 0; j < grid.rows(); ++j)
		for (int i = 0; i < grid.cols(); ++i)
			f(i, j) = fn(grid.x(i), grid.y(j));
	return f;
}

std::vector<double> ScalarField::row(int j) const {
	auto first = values_.begin() + std::ptrdiff_t(grid_.index(0, j));
	return std::vector<double>(first, first + grid_.cols());
}

void ScalarField::set_ghost_rows(std::vector<double> bottom, std::vector<double> top) {
	if (bottom.size() != std::size_t(grid_.cols()) || top.size() != std::size_t(grid_.cols()))
		throw Error("ScalarField: ghost row length mismatch");
	ghost_bottom_ = std::move(bottom);
	ghost_top_ = std::move(top);
}

double ScalarField::max_abs() const {
	double m = 0.0;
	for (double v : values_)
		m = std::max(m, std::abs(v));
	return m;
}

static void check_same(const GridSpec &a, const GridSpec &b, const char *what) {
	if (a != b)
		throw Error(std::string(what) + ": fields live on different grids");
}

ScalarField &ScalarField::operator+=(const ScalarField &o) {
	check_same(grid_, o.grid_, "ScalarField +=");
	for (std::size_t n = 0; n < values_.size(); ++n)
		values_[n] += o.values_[n];
	ghost_bottom_.clear();
	ghost_top_.clear();
	return *this;
}

ScalarField &ScalarField::operator-=(const ScalarField &o) {
	check_same(grid_, o.grid_, "ScalarField -=");
	for (std::size_t n = 0; n < values_.size(); ++n)
		values_[n] -= o.values_[n];
	ghost_bottom_.clear();
	ghost_top_.clear();
	return *this;
}

ScalarField &ScalarField::operator*=(double c) {
	for (double &v : values_)
		v *= c;
	for (double &v : ghost_bottom_)
		v *= c;
	for (double &v : ghost_top_)
		v *= c;
	return *this;
}

ScalarField operator+(ScalarField a, const ScalarField &b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField &b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField pointwise_product(const ScalarField &a, const ScalarField &b) {
	check_same(a.grid(), b.grid(), "pointwise_product");
	ScalarField r(a.grid());
	for (std::size_t n = 0; n < r.values().size(); ++n)
		r.values()[n] = a.values()[n] * b.values()[n];
	return r;
}

/* VectorField */

VectorField::VectorField(const GridSpec &grid)
	: u1(grid, BoundaryTag::robin_slip), u2(grid, BoundaryTag::neumann_zero) {}

VectorField::VectorField(ScalarField a, ScalarField b) : u1(std::move(a)), u2(std::move(b)) {
	check_same(u1.grid(), u2.grid(), "VectorField");
}

VectorField &VectorField::operator+=(const VectorField &o) {
	u1 += o.u1;
	u2 += o.u2;
	return *this;
}
VectorField &VectorField::operator-=(const VectorField &o) {
	u1 -= o.u1;
	u2 -= o.u2;
	return *this;
}
VectorField &VectorField::operator*=(double c) {
	u1 *= c;
	u2 *= c;
	return *this;
}
VectorField operator+(VectorField a, const VectorField &b) { return a += b; }
VectorField operator-(VectorField a, const VectorField &b) { return a -= b; }
VectorField operator*(double c, VectorField a) { return a *= c; }

/* differences */

std::vector<double> diff_1d(const std::vector<double> &v, double h, Closure closure) {
	const std::size_t n = v.size();
	if (n < 3)
		throw Error("diff_1d: need at least three samples");
	std::vector<double> d(n);
	for (std::size_t k = 1; k + 1 < n; ++k)
		d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
	if (closure == Closure::second_order) {
		d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
		d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
	} else {
		d[0] = (v[1] - v[0]) / h;
		d[n - 1] = (v[n - 1] - v[n - 2]) / h;
	}
	return d;
}

double wall_derivative(const std::vector<double> &v, double h, Wall wall) {
	const std::size_t n = v.size();
	if (wall == Wall::bottom)
		return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
	return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
}

static XParity flipped(XParity p) {
	if (p == XParity::odd)
		return XParity::even;
	if (p == XParity::even)
		return XParity::odd;
	return XParity::none;
}

ScalarField diff_x(const ScalarField &f, Closure closure) {
	const GridSpec &g = f.grid();
	const int nc = g.cols();
	const double h = g.hx();
	ScalarField d(g);
	std::vector<double> line(nc);
	for (int j = 0; j < g.rows(); ++j) {
		for (int i = 1; i + 1 < nc; ++i)
			d(i, j) = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
		switch (f.x_parity()) {
		case XParity::odd:
			// ghost f(-1) = 2 f(0) - f(1)
			d(0, j) = (f(1, j) - f(0, j)) / h;
			d(nc - 1, j) = (f(nc - 1, j) - f(nc - 2, j)) / h;
			break;
		case XParity::even:
			d(0, j) = 0.0;
			d(nc - 1, j) = 0.0;
			break;
		case XParity::none:
			for (int i = 0; i < nc; ++i)
				line[i] = f(i, j);
			if (closure == Closure::second_order) {
				d(0, j) = (-3.0 * line[0] + 4.0 * line[1] - line[2]) / (2.0 * h);
				d(nc - 1, j) = (3.0 * line[nc - 1] - 4.0 * line[nc - 2] + line[nc - 3]) / (2.0 * h);
			} else {
				d(0, j) = (line[1] - line[0]) / h;
				d(nc - 1, j) = (line[nc - 1] - line[nc - 2]) / h;
			}
			break;
		}
	}
	d.set_x_parity(flipped(f.x_parity()));
	return d;
}

ScalarField diff_y(const ScalarField &f, Closure closure) {
	const GridSpec &g = f.grid();
	const int nr = g.rows();
	const double h = g.hy();
	ScalarField d(g);
	for (int j = 1; j + 1 < nr; ++j)
		for (int i = 0; i < g.cols(); ++i)
			d(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
	for (int i = 0; i < g.cols(); ++i) {
		if (f.has_ghost_rows()) {
			d(i, 0) = (f(i, 1) - f.ghost_bottom()[i]) / (2.0 * h);
			d(i, nr - 1) = (f.ghost_top()[i] - f(i, nr - 2)) / (2.0 * h);
		} else if (closure == Closure::second_order) {
			d(i, 0) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * h);
			d(i, nr - 1) = (3.0 * f(i, nr - 1) - 4.0 * f(i, nr - 2) + f(i, nr - 3)) / (2.0 * h);
		} else {
			d(i, 0) = (f(i, 1) - f(i, 0)) / h;
			d(i, nr - 1) = (f(i, nr - 1) - f(i, nr - 2)) / h;
		}
	}
	d.set_x_parity(f.x_parity());
	return d;
}

ScalarField diff_xx(const ScalarField &f) {
	const GridSpec &g = f.grid();
	const int nc = g.cols();
	const double h2 = g.hx() * g.hx();
	ScalarField d(g);
	for (int j = 0; j < g.rows(); ++j) {
		for (int i = 1; i + 1 < nc; ++i)
			d(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / h2;
		switch (f.x_parity()) {
		case XParity::odd:
			d(0, j) = 0.0;
			d(nc - 1, j) = 0.0;
			break;
		case XParity::even:
			d(0, j) = 2.0 * (f(1, j) - f(0, j)) / h2;
			d(nc - 1, j) = 2.0 * (f(nc - 2, j) - f(nc - 1, j)) / h2;
			break;
		case XParity::none:
			d(0, j) = (2.0 * f(0, j) - 5.0 * f(1, j) + 4.0 * f(2, j) - f(3, j)) / h2;
			d(nc - 1, j) = (2.0 * f(nc - 1, j) - 5.0 * f(nc - 2, j) + 4.0 * f(nc - 3, j) - f(nc - 4, j)) / h2;
			break;
		}
	}
	d.set_x_parity(f.x_parity());
	return d;
}

ScalarField diff_yy(const ScalarField &f) {
	const GridSpec &g = f.grid();
	const int nr = g.rows();
	const double h2 = g.hy() * g.hy();
	ScalarField d(g);
	for (int j = 1; j + 1 < nr; ++j)
		for (int i = 0; i < g.cols(); ++i)
			d(i, j) = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / h2;
	for (int i = 0; i < g.cols(); ++i) {
		if (f.has_ghost_rows()) {
			d(i, 0) = (f(i, 1) - 2.0 * f(i, 0) + f.ghost_bottom()[i]) / h2;
			d(i, nr - 1) = (f.ghost_top()[i] - 2.0 * f(i, nr - 1) + f(i, nr - 2)) / h2;
		} else {
			d(i, 0) = (2.0 * f(i, 0) - 5.0 * f(i, 1) + 4.0 * f(i, 2) - f(i, 3)) / h2;
			d(i, nr - 1) = (2.0 * f(i, nr - 1) - 5.0 * f(i, nr - 2) + 4.0 * f(i, nr - 3) - f(i, nr - 4)) / h2;
		}
	}
	d.set_x_parity(f.x_parity());
	return d;
}

ScalarField apply_robin_ghost(const ScalarField &u1, const SlipPair &slip, double mu) {
	if (!(mu > 0.0))
		throw Error("apply_robin_ghost: mu must be positive");
	if (u1.tag() != BoundaryTag::robin_slip)
		throw Error("apply_robin_ghost: field must carry the robin_slip tag, got " + to_string(u1.tag()));
	const GridSpec &g = u1.grid();
	const int top = g.ny() + 1;
	const double h = g.hy();
	std::vector<double> gb(g.cols()), gt(g.cols());
	// mu (u(h) - u(-h)) / 2h = -k0 u(0)   and   mu (u(1+h) - u(1-h)) / 2h = k1 u(1)
	for (int i = 0; i < g.cols(); ++i) {
		gb[i] = u1(i, 1) + 2.0 * h * slip.k0 * u1(i, 0) / mu;
		gt[i] = u1(i, top - 1) + 2.0 * h * slip.k1 * u1(i, top) / mu;
	}
	ScalarField out = u1;
	out.set_ghost_rows(std::move(gb), std::move(gt));
	return out;
}

double integrate(const ScalarField &f) {
	const GridSpec &g = f.grid();
	double s = 0.0;
	for (int j = 0; j < g.rows(); ++j) {
		double r = 0.0;
		for (int i = 0; i < g.cols(); ++i)
			r += g.wx(i) * f(i, j);
		s += g.wy(j) * r;
	}
	return s;
}

double inner(const ScalarField &a, const ScalarField &b) {
	check_same(a.grid(), b.grid(), "inner");
	const GridSpec &g = a.grid();
	double s = 0.0;
	for (int j = 0; j < g.rows(); ++j) {
		double r = 0.0;
		for (int i = 0; i < g.cols(); ++i)
			r += g.wx(i) * a(i, j) * b(i, j);
		s += g.wy(j) * r;
	}
	return s;
}

double inner(const VectorField &a, const VectorField &b) { return inner(a.u1, b.u1) + inner(a.u2, b.u2); }

double boundary_integral(const GridSpec &grid, const std::vector<double> &f_bottom, const std::vector<double> &f_top,
                         const SlipPair &slip) {
	if (f_bottom.size() != std::size_t(grid.cols()) || f_top.size() != std::size_t(grid.cols()))
		throw Error("boundary_integral: trace length does not match the grid (" + std::to_string(grid.cols()) +
		            " nodes expected)");
	double s = 0.0;
	for (int i = 0; i < grid.cols(); ++i)
		s += grid.wx(i) * (slip.k1 * f_top[i] + slip.k0 * f_bottom[i]);
	return s;
}

BoundaryIntegral slip_duality(const ScalarField &u1, const SlipPair &slip) {
	const GridSpec &g = u1.grid();
	ScalarField sq = pointwise_product(u1, u1);
	BoundaryIntegral r;
	r.boundary = boundary_integral(g, sq.row(0), sq.row(g.ny() + 1), slip);
	ScalarField weighted(g);
	for (int j = 0; j < g.rows(); ++j)
		for (int i = 0; i < g.cols(); ++i)
			weighted(i, j) = ((slip.k1 + slip.k0) * g.y(j) - slip.k0) * sq(i, j);
	r.volume = integrate(diff_y(weighted));
	return r;
}

} // namespace stripns
