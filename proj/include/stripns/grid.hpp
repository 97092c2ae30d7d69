#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stripns {

class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Truncated strip (-L, L) x (0, 1).
class StripGeometry {
public:
	explicit StripGeometry(double half_length = 1.0);

	double half_length() const { return L_; }
	double area() const { return 2.0 * L_; }

private:
	double L_;
};

class GridSpec {
public:
	GridSpec(const StripGeometry &geometry, int nx, int ny);

	const StripGeometry &geometry() const { return geometry_; }
	double half_length() const { return geometry_.half_length(); }
	int nx() const { return nx_; }
	int ny() const { return ny_; }
	double hx() const { return hx_; }
	double hy() const { return hy_; }

	// node counts including the boundary
	int cols() const { return nx_ + 2; }
	int rows() const { return ny_ + 2; }
	std::size_t size() const { return std::size_t(cols()) * std::size_t(rows()); }
	std::size_t index(int i, int j) const { return std::size_t(j) * std::size_t(cols()) + std::size_t(i); }

	double x(int i) const;
	double y(int j) const;

	// composite trapezoid weights
	double wx(int i) const { return (i == 0 || i == nx_ + 1) ? 0.5 * hx_ : hx_; }
	double wy(int j) const { return (j == 0 || j == ny_ + 1) ? 0.5 * hy_ : hy_; }

	bool operator==(const GridSpec &o) const;
	bool operator!=(const GridSpec &o) const { return !(*this == o); }

private:
	StripGeometry geometry_;
	int nx_, ny_;
	double hx_, hy_;
};

GridSpec build_grid(const StripGeometry &geometry, int nx, int ny);

struct SlipPair {
	double k0 = 0.0; // bottom wall
	double k1 = 0.0; // top wall

	SlipPair() = default;
	SlipPair(double bottom, double top);
};

enum class BoundaryTag { dirichlet_zero, robin_slip, neumann_zero, none };

// Reflection used for the ghost column at x = -L and x = L.
enum class XParity { odd, even, none };

enum class Closure { second_order, summation_by_parts };

enum class Wall { bottom, top };

std::string to_string(BoundaryTag tag);

XParity parity_for(BoundaryTag tag);

class ScalarField {
public:
	explicit ScalarField(const GridSpec &grid, BoundaryTag tag = BoundaryTag::none);
	ScalarField(const GridSpec &grid, std::vector<double> values, BoundaryTag tag = BoundaryTag::none);

	static ScalarField sample(const GridSpec &grid, const std::function<double(double, double)> &fn,
	                          BoundaryTag tag = BoundaryTag::none);

	const GridSpec &grid() const { return grid_; }
	BoundaryTag tag() const { return tag_; }
	XParity x_parity() const { return parity_; }
	void set_x_parity(XParity p) { parity_ = p; }

	double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
	double &operator()(int i, int j) { return values_[grid_.index(i, j)]; }

	const std::vector<double> &values() const { return values_; }
	std::vector<double> &values() { return values_; }

	std::vector<double> row(int j) const;

	bool has_ghost_rows() const { return !ghost_bottom_.empty(); }
	const std::vector<double> &ghost_bottom() const { return ghost_bottom_; }
	const std::vector<double> &ghost_top() const { return ghost_top_; }
	void set_ghost_rows(std::vector<double> bottom, std::vector<double> top);

	double max_abs() const;

	ScalarField &operator+=(const ScalarField &o);
	ScalarField &operator-=(const ScalarField &o);
	ScalarField &operator*=(double c);

private:
	GridSpec grid_;
	std::vector<double> values_;
	BoundaryTag tag_;
	XParity parity_;
	std::vector<double> ghost_bottom_, ghost_top_;
};

ScalarField operator+(ScalarField a, const ScalarField &b);
ScalarField operator-(ScalarField a, const ScalarField &b);
ScalarField operator*(double c, ScalarField a);
ScalarField pointwise_product(const ScalarField &a, const ScalarField &b);

struct VectorField {
	ScalarField u1;
	ScalarField u2;

	explicit VectorField(const GridSpec &grid);
	VectorField(ScalarField a, ScalarField b);

	const GridSpec &grid() const { return u1.grid(); }

	VectorField &operator+=(const VectorField &o);
	VectorField &operator-=(const VectorField &o);
	VectorField &operator*=(double c);
};

VectorField operator+(VectorField a, const VectorField &b);
VectorField operator-(VectorField a, const VectorField &b);
VectorField operator*(double c, VectorField a);

// First differences. x: centered, with parity ghost columns when the field has
// a lateral parity and one-sided stencils otherwise. y: centered, with ghost
// rows if present, otherwise the one-sided closure selected by `closure`.
ScalarField diff_x(const ScalarField &f, Closure closure = Closure::second_order);
ScalarField diff_y(const ScalarField &f, Closure closure = Closure::second_order);

// Second differences (ghost rows used for the wall rows in y when present).
ScalarField diff_xx(const ScalarField &f);
ScalarField diff_yy(const ScalarField &f);

// The 1D operators behind diff_y, acting on a profile with spacing h.
std::vector<double> diff_1d(const std::vector<double> &v, double h, Closure closure);
// Wall derivative of a profile by the one-sided second-order stencil.
double wall_derivative(const std::vector<double> &v, double h, Wall wall);

ScalarField apply_robin_ghost(const ScalarField &u1, const SlipPair &slip, double mu);

double integrate(const ScalarField &f);
double inner(const ScalarField &a, const ScalarField &b);
double inner(const VectorField &a, const VectorField &b);

struct BoundaryIntegral {
	double boundary = 0.0; // sum over walls of k * trace
	double volume = 0.0;   // the same quantity as a volume integral of a y-derivative
};

double boundary_integral(const GridSpec &grid, const std::vector<double> &f_bottom,
                         const std::vector<double> &f_top, const SlipPair &slip);

// Both forms for f = |u1|^2.
BoundaryIntegral slip_duality(const ScalarField &u1, const SlipPair &slip);

} // namespace stripns
