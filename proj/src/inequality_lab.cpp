#include "stripns/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace stripns {

std::string to_string(Lemma lemma) {
	switch (lemma) {
	case Lemma::poincare:
		return "poincare";
	case Lemma::l4:
		return "l4";
	case Lemma::grad_interp:
		return "grad_interp";
	case Lemma::korn:
		return "korn";
	case Lemma::linf:
		return "linf";
	}
	return "unknown";
}

Lemma lemma_from_string(const std::string &name) {
	for (Lemma l : all_lemmas())
		if (to_string(l) == name)
			return l;
	throw Error("unknown lemma '" + name + "'");
}

const std::vector<Lemma> &all_lemmas() {
	static const std::vector<Lemma> v{Lemma::poincare, Lemma::l4, Lemma::grad_interp, Lemma::korn, Lemma::linf};
	return v;
}

namespace {

constexpr double pi = std::numbers::pi;

// Truncated discrete sine series of the samples p over the interior nodes.
std::vector<double> sine_truncate(const std::vector<double> &p, int a_cut) {
	const int n = int(p.size()) - 2; // interior count
	const double N = double(n + 1);
	std::vector<double> out(p.size(), 0.0);
	for (int a = 1; a <= a_cut; ++a) {
		double c = 0.0;
		for (int i = 1; i <= n; ++i)
			c += p[i] * std::sin(a * pi * i / N);
		c *= 2.0 / N;
		for (int i = 1; i <= n; ++i)
			out[i] += c * std::sin(a * pi * i / N);
	}
	return out;
}

std::vector<double> random_x_factor(const GridSpec &g, std::mt19937_64 &rng) {
	std::uniform_real_distribution<double> U(0.0, 1.0);
	std::normal_distribution<double> N(0.0, 1.0);
	const double L = g.half_length();
	const int nc = g.cols();
	std::vector<double> X(nc, 0.0);
	if (U(rng) < 0.5) {
		for (int a = 1; a <= 4; ++a) {
			const double c = N(rng) / a;
			for (int i = 1; i < nc - 1; ++i)
				X[i] += c * std::sin(a * pi * i / double(nc - 1));
		}
		return X;
	}
	const double ell = 0.2 + 0.6 * U(rng);
	const double kappa = 2.0 * pi * U(rng);
	const double theta = 2.0 * pi * U(rng);
	// half of the packets sit within a fixed physical distance of a lateral
	// wall, so corner-influenced shapes occur equally often at every L
	double x0;
	if (U(rng) < 0.5) {
		const double d = 1.5 * U(rng);
		x0 = U(rng) < 0.5 ? -L + d : L - d;
	} else {
		x0 = -L + 2.0 * L * U(rng);
	}
	std::vector<double> p(nc, 0.0);
	for (int i = 1; i < nc - 1; ++i) {
		const double s = (g.x(i) - x0) / ell;
		p[i] = std::exp(-s * s) * std::cos(kappa * (g.x(i) - x0) + theta);
	}
	// fixed physical wavenumber cutoff, independent of L
	const double alpha_cut = 12.0;
	const int a_cut = std::min(g.nx(), int(std::ceil(alpha_cut * 2.0 * L / pi)));
	return sine_truncate(p, a_cut);
}

std::vector<double> random_y_profile(const GridSpec &g, std::mt19937_64 &rng) {
	std::normal_distribution<double> N(0.0, 1.0);
	std::vector<double> phi(g.rows(), 0.0);
	for (int b = 1; b <= 4; ++b) {
		const double d = N(rng) / b;
		for (int j = 1; j < g.rows() - 1; ++j)
			phi[j] += d * std::sin(b * pi * g.y(j));
	}
	return phi;
}

struct Measures {
	double l2 = 0, dy = 0, grad = 0, strain = 0, l4 = 0, linf = 0, h2 = 0;
	double korn_defect = 0; // |int |D|^2 - 1/2 int |grad|^2| / int |grad|^2
};

Measures measure(const VectorField &u, const SlipPair &slip, double mu, bool need_h2) {
	Measures m;
	const VelocityGradient G = gradient(u);
	const double l2sq = inner(u, u);
	const double dysq = inner(G.d1y, G.d1y) + inner(G.d2y, G.d2y);
	const double dxsq = inner(G.d1x, G.d1x) + inner(G.d2x, G.d2x);
	ScalarField shear = 0.5 * (G.d1y + G.d2x);
	const double ssq = inner(G.d1x, G.d1x) + inner(G.d2y, G.d2y) + 2.0 * inner(shear, shear);
	m.l2 = std::sqrt(l2sq);
	m.dy = std::sqrt(dysq);
	m.grad = std::sqrt(dxsq + dysq);
	m.strain = std::sqrt(ssq);
	double q = 0.0;
	{
		ScalarField s(u.grid());
		for (std::size_t n = 0; n < s.values().size(); ++n) {
			const double a = u.u1.values()[n] * u.u1.values()[n] + u.u2.values()[n] * u.u2.values()[n];
			s.values()[n] = a * a;
		}
		q = integrate(s);
	}
	m.l4 = std::pow(std::max(0.0, q), 0.25);
	m.linf = linf_norm(u);
	if (need_h2)
		m.h2 = h2_norm(u, slip, mu);
	const double gsq = dxsq + dysq;
	m.korn_defect = gsq > 0.0 ? std::abs(ssq - 0.5 * gsq) / gsq : 0.0;
	return m;
}

double safe_ratio(double lhs, double rhs) {
	if (rhs > 0.0)
		return lhs / rhs;
	if (lhs > 0.0)
		return std::numeric_limits<double>::infinity();
	return std::numeric_limits<double>::quiet_NaN();
}

double ratio_from(Lemma lemma, const Measures &m) {
	switch (lemma) {
	case Lemma::poincare:
		return safe_ratio(m.l2, m.dy);
	case Lemma::l4:
		return safe_ratio(m.l4 * m.l4, m.l2 * m.grad);
	case Lemma::grad_interp: {
		const double grad_h1 = std::sqrt(std::max(0.0, m.h2 * m.h2 - m.l2 * m.l2));
		return safe_ratio(m.grad * m.grad, m.l2 * grad_h1);
	}
	case Lemma::korn:
		return safe_ratio(std::sqrt(m.l2 * m.l2 + m.grad * m.grad), m.strain);
	case Lemma::linf:
		return safe_ratio(m.linf * m.linf, m.l2 * m.h2);
	}
	return std::numeric_limits<double>::quiet_NaN();
}

bool needs_h2(Lemma lemma) { return lemma == Lemma::grad_interp || lemma == Lemma::linf; }

class Accumulator {
public:
	explicit Accumulator(Lemma lemma) { r_.name = lemma; r_.min_ratio = std::numeric_limits<double>::infinity(); }

	void add(double ratio, const Measures &m) {
		++r_.ensemble_size;
		if (std::isnan(ratio)) {
			++r_.skipped;
			return;
		}
		if (std::isinf(ratio))
			r_.violated = true;
		r_.max_ratio = std::max(r_.max_ratio, ratio);
		if (r_.name == Lemma::korn) {
			r_.min_ratio = std::min(r_.min_ratio, 1.0 / ratio);
			r_.identity_residual = std::max(r_.identity_residual, m.korn_defect);
		}
	}

	InequalityReport finish() {
		if (r_.name != Lemma::korn || !std::isfinite(r_.min_ratio))
			r_.min_ratio = 0.0;
		return r_;
	}

private:
	InequalityReport r_;
};

InequalityReport run_check(Lemma lemma, std::span<const VectorField> ensemble, const SlipPair &slip, double mu) {
	Accumulator acc(lemma);
	for (const VectorField &u : ensemble) {
		const Measures m = measure(u, slip, mu, needs_h2(lemma));
		acc.add(ratio_from(lemma, m), m);
	}
	return acc.finish();
}

} // namespace

VectorField random_admissible_field(const GridSpec &grid, const SlipPair &slip, double mu, std::uint64_t seed,
                                    bool robin_projected) {
	std::mt19937_64 rng(seed);
	std::uniform_int_distribution<int> terms(1, 3);
	const int R = terms(rng);
	ScalarField psi(grid, BoundaryTag::dirichlet_zero);
	for (int r = 0; r < R; ++r) {
		const std::vector<double> X = random_x_factor(grid, rng);
		const std::vector<double> phi = random_y_profile(grid, rng);
		for (int j = 0; j < grid.rows(); ++j)
			for (int i = 0; i < grid.cols(); ++i)
				psi(i, j) += X[i] * phi[j];
	}
	if (robin_projected)
		psi = robin_project_stream(psi, slip, mu);
	return velocity_from_stream(psi);
}

std::vector<VectorField> make_ensemble(const GridSpec &grid, const SlipPair &slip, double mu, std::uint64_t seed,
                                       int size, bool robin_projected) {
	if (size < 0)
		throw Error("make_ensemble: negative ensemble size");
	std::vector<VectorField> out;
	out.reserve(std::size_t(size));
	std::seed_seq seq{seed};
	std::vector<std::uint32_t> seeds(std::size_t(size) * 2);
	seq.generate(seeds.begin(), seeds.end());
	for (int n = 0; n < size; ++n) {
		const std::uint64_t s = (std::uint64_t(seeds[2 * n]) << 32) | seeds[2 * n + 1];
		out.push_back(random_admissible_field(grid, slip, mu, s, robin_projected));
	}
	return out;
}

double lemma_ratio(Lemma lemma, const VectorField &u, const SlipPair &slip, double mu) {
	return ratio_from(lemma, measure(u, slip, mu, needs_h2(lemma)));
}

InequalityReport check_poincare(std::span<const VectorField> e) { return run_check(Lemma::poincare, e, {}, 1.0); }
InequalityReport check_l4(std::span<const VectorField> e) { return run_check(Lemma::l4, e, {}, 1.0); }
InequalityReport check_grad_interp(std::span<const VectorField> e, const SlipPair &slip, double mu) {
	return run_check(Lemma::grad_interp, e, slip, mu);
}
InequalityReport check_korn(std::span<const VectorField> e) { return run_check(Lemma::korn, e, {}, 1.0); }
InequalityReport check_linf(std::span<const VectorField> e, const SlipPair &slip, double mu) {
	return run_check(Lemma::linf, e, slip, mu);
}

InequalityReport check_lemma(Lemma lemma, std::span<const VectorField> ensemble, const SlipPair &slip, double mu) {
	return run_check(lemma, ensemble, slip, mu);
}

/* building block */

double building_block_ratio(const ScalarField &f) {
	const ScalarField fx = diff_x(f, Closure::summation_by_parts);
	const ScalarField fy = diff_y(f, Closure::summation_by_parts);
	const double l2 = std::sqrt(inner(f, f));
	const double grad = std::sqrt(inner(fx, fx) + inner(fy, fy));
	ScalarField q = pointwise_product(f, f);
	const double l4sq = std::sqrt(inner(q, q));
	return safe_ratio(l4sq, l2 * grad);
}

ScalarField random_corner_field(const GridSpec &g, std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> U(0.0, 1.0);
	std::normal_distribution<double> N(0.0, 1.0);
	const double L = g.half_length();
	std::vector<double> X(g.cols(), 0.0), Y(g.rows(), 0.0);
	if (U(rng) < 0.5) {
		for (int a = 1; a <= 4; ++a) {
			const double c = N(rng) / a;
			for (int i = 0; i < g.cols(); ++i)
				X[i] += c * std::sin((a - 0.5) * pi * (g.x(i) + L) / (2.0 * L));
		}
	} else {
		const double ell = 0.2 + 0.6 * U(rng);
		const double kappa = 2.0 * pi * U(rng), theta = 2.0 * pi * U(rng);
		const double x0 = -L + 2.0 * L * U(rng);
		for (int i = 0; i < g.cols(); ++i) {
			const double s = (g.x(i) - x0) / ell;
			X[i] = std::tanh((g.x(i) + L) / ell) * std::exp(-s * s) * std::cos(kappa * (g.x(i) - x0) + theta);
		}
	}
	for (int b = 1; b <= 4; ++b) {
		const double d = N(rng) / b;
		for (int j = 0; j < g.rows(); ++j)
			Y[j] += d * std::sin((b - 0.5) * pi * g.y(j));
	}
	ScalarField f(g);
	for (int j = 0; j < g.rows(); ++j)
		for (int i = 0; i < g.cols(); ++i)
			f(i, j) = X[i] * Y[j];
	return f;
}

InequalityReport check_building_block(std::span<const ScalarField> ensemble) {
	InequalityReport r;
	r.name = Lemma::l4;
	for (const ScalarField &f : ensemble) {
		++r.ensemble_size;
		const double q = building_block_ratio(f);
		if (std::isnan(q)) {
			++r.skipped;
			continue;
		}
		r.max_ratio = std::max(r.max_ratio, q);
	}
	r.violated = !(r.max_ratio < 2.0);
	return r;
}

/* sweeps */

GridSpec matched_grid(double L, int ny, double aspect) {
	if (!(aspect > 0.0))
		throw Error("matched_grid: aspect must be positive");
	const int nx = std::max(8, int(std::lround(2.0 * L * (ny + 1) / aspect)) - 1);
	return GridSpec(StripGeometry(L), nx, ny);
}

std::vector<InequalityReport> sweep_all(const std::vector<double> &L_values, int ensemble_size, std::uint64_t seed,
                                        const SweepSettings &settings) {
	if (L_values.empty())
		throw Error("sweep_L: empty list of lengths");
	if (!std::is_sorted(L_values.begin(), L_values.end()))
		throw Error("sweep_L: lengths must be sorted");
	std::vector<InequalityReport> out;
	for (Lemma l : all_lemmas()) {
		InequalityReport r;
		r.name = l;
		r.min_ratio = l == Lemma::korn ? std::numeric_limits<double>::infinity() : 0.0;
		out.push_back(r);
	}
	for (double L : L_values) {
		const GridSpec g = matched_grid(L, settings.ny, settings.aspect);
		std::vector<Accumulator> accs;
		for (Lemma l : all_lemmas())
			accs.emplace_back(l);
		std::seed_seq seq{seed};
		std::vector<std::uint32_t> seeds(std::size_t(ensemble_size) * 2);
		seq.generate(seeds.begin(), seeds.end());
		for (int n = 0; n < ensemble_size; ++n) {
			const std::uint64_t s = (std::uint64_t(seeds[2 * n]) << 32) | seeds[2 * n + 1];
			const VectorField u = random_admissible_field(g, settings.slip, settings.mu, s, settings.robin_projected);
			const Measures m = measure(u, settings.slip, settings.mu, true);
			for (std::size_t k = 0; k < accs.size(); ++k)
				accs[k].add(ratio_from(all_lemmas()[k], m), m);
		}
		for (std::size_t k = 0; k < accs.size(); ++k) {
			const InequalityReport part = accs[k].finish();
			InequalityReport &r = out[k];
			r.ensemble_size = part.ensemble_size;
			r.skipped += part.skipped;
			r.ratios_by_L[L] = part.max_ratio;
			r.max_ratio = std::max(r.max_ratio, part.max_ratio);
			r.violated = r.violated || part.violated;
			if (r.name == Lemma::korn) {
				r.min_ratio = std::min(r.min_ratio, part.min_ratio);
				r.identity_residual = std::max(r.identity_residual, part.identity_residual);
			}
		}
	}
	return out;
}

InequalityReport sweep_L(Lemma lemma, const std::vector<double> &L_values, int ensemble_size, std::uint64_t seed,
                         const SweepSettings &settings) {
	const auto all = sweep_all(L_values, ensemble_size, seed, settings);
	for (const auto &r : all)
		if (r.name == lemma)
			return r;
	throw Error("sweep_L: lemma not found");
}

double sweep_spread(const InequalityReport &report) {
	if (report.ratios_by_L.empty())
		return 1.0;
	double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
	for (const auto &[L, v] : report.ratios_by_L) {
		lo = std::min(lo, v);
		hi = std::max(hi, v);
	}
	return hi / lo;
}

} // namespace stripns
