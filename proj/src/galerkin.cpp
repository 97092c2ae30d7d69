#include "stripns/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "stripns/function_spaces.hpp"

namespace stripns {

/* ForcingSpec */

ForcingSpec ForcingSpec::none() { return ForcingSpec(); }

ForcingSpec ForcingSpec::separable(Shape f1, Shape f2, double c0, double c1, double omega) {
	ForcingSpec f;
	f.kind_ = Kind::separable;
	f.s1_ = std::move(f1);
	f.s2_ = std::move(f2);
	f.c0_ = c0;
	f.c1_ = c1;
	f.omega_ = omega;
	return f;
}

ForcingSpec ForcingSpec::general(Component f1, Component f2, Component dt_f1, Component dt_f2) {
	if (!f1 || !f2)
		throw Error("ForcingSpec: both force components are required");
	ForcingSpec f;
	f.kind_ = Kind::general;
	f.f1_ = std::move(f1);
	f.f2_ = std::move(f2);
	f.d1_ = std::move(dt_f1);
	f.d2_ = std::move(dt_f2);
	return f;
}

double ForcingSpec::amplitude(double t) const { return c0_ + c1_ * std::sin(omega_ * t); }
double ForcingSpec::amplitude_rate(double t) const { return c1_ * omega_ * std::cos(omega_ * t); }

VectorField ForcingSpec::shape(const GridSpec &grid) const {
	if (kind_ != Kind::separable)
		throw Error("ForcingSpec: shape() requires a separable forcing");
	return VectorField(ScalarField::sample(grid, s1_), ScalarField::sample(grid, s2_));
}

VectorField ForcingSpec::at(const GridSpec &grid, double t) const {
	switch (kind_) {
	case Kind::none:
		return VectorField(ScalarField(grid), ScalarField(grid));
	case Kind::separable:
		return amplitude(t) * shape(grid);
	case Kind::general:
		break;
	}
	return VectorField(ScalarField::sample(grid, [&](double x, double y) { return f1_(x, y, t); }),
	                   ScalarField::sample(grid, [&](double x, double y) { return f2_(x, y, t); }));
}

VectorField ForcingSpec::dt_at(const GridSpec &grid, double t) const {
	switch (kind_) {
	case Kind::none:
		return VectorField(ScalarField(grid), ScalarField(grid));
	case Kind::separable:
		return amplitude_rate(t) * shape(grid);
	case Kind::general:
		break;
	}
	if (d1_ && d2_)
		return VectorField(ScalarField::sample(grid, [&](double x, double y) { return d1_(x, y, t); }),
		                   ScalarField::sample(grid, [&](double x, double y) { return d2_(x, y, t); }));
	const double eta = 1e-6 * std::max(1.0, std::abs(t));
	VectorField d = at(grid, t + eta) - at(grid, t - eta);
	d *= 1.0 / (2.0 * eta);
	return d;
}

/* TrilinearTensor */

Eigen::VectorXd TrilinearTensor::convection(const Eigen::VectorXd &g) const {
	Eigen::VectorXd N = Eigen::VectorXd::Zero(m_);
	for (int j = 0; j < m_; ++j) {
		if (g(j) == 0.0)
			continue;
		for (int l = 0; l < m_; ++l) {
			const double c = g(j) * g(l);
			if (c == 0.0)
				continue;
			const double *row = &data_[idx(j, l, 0)];
			for (int k = 0; k < m_; ++k)
				N(k) += c * row[k];
		}
	}
	return N;
}

Eigen::MatrixXd TrilinearTensor::contract_middle(const Eigen::VectorXd &c) const {
	Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m_, m_);
	for (int j = 0; j < m_; ++j)
		for (int l = 0; l < m_; ++l)
			for (int k = 0; k < m_; ++k)
				Q(j, k) += c(l) * data_[idx(j, l, k)];
	return Q;
}

TrilinearTensor trilinear_tensor(const GalerkinBasis &basis) {
	const int m = basis.size();
	TrilinearTensor B(m);
	std::vector<VelocityGradient> grads;
	grads.reserve(std::size_t(m));
	for (int k = 0; k < m; ++k)
		grads.push_back(gradient(basis.field(k)));

	for (int j = 0; j < m; ++j) {
		const VectorField &wj = basis.field(j);
		for (int k = 0; k < m; ++k) {
			// (w_j . grad) w_k
			const VelocityGradient &G = grads[std::size_t(k)];
			ScalarField a1 = pointwise_product(wj.u1, G.d1x) + pointwise_product(wj.u2, G.d1y);
			ScalarField a2 = pointwise_product(wj.u1, G.d2x) + pointwise_product(wj.u2, G.d2y);
			for (int l = 0; l < m; ++l)
				B(j, k, l) = inner(a1, basis.field(l).u1) + inner(a2, basis.field(l).u2);
		}
	}

	double scale = 0.0, defect = 0.0;
	for (int j = 0; j < m; ++j)
		for (int k = 0; k < m; ++k)
			for (int l = 0; l < m; ++l) {
				scale = std::max(scale, std::abs(B(j, k, l)));
				defect = std::max(defect, std::abs(B(j, k, l) + B(j, l, k)));
			}
	for (int j = 0; j < m; ++j)
		for (int k = 0; k < m; ++k) {
			B(j, k, k) = 0.0;
			for (int l = k + 1; l < m; ++l) {
				const double s = 0.5 * (B(j, k, l) - B(j, l, k));
				B(j, k, l) = s;
				B(j, l, k) = -s;
			}
		}
	B.presym_defect = scale > 0.0 ? defect / scale : 0.0;
	return B;
}

/* GalerkinSystem */

GalerkinSystem::GalerkinSystem(std::shared_ptr<const GalerkinBasis> basis, ForcingSpec forcing)
	: basis_(std::move(basis)), forcing_(std::move(forcing)) {
	if (!basis_ || basis_->size() == 0)
		throw Error("GalerkinSystem: empty basis");
	const GalerkinBasis &b = *basis_;
	const int m = b.size();
	S_ = viscous_matrix(b);
	K_ = boundary_matrix(b);
	G_ = gram_matrix(b);
	H_ = G_;
	std::vector<VelocityGradient> grads;
	for (int j = 0; j < m; ++j)
		grads.push_back(gradient(b.field(j)));
	for (int j = 0; j < m; ++j) {
		const VelocityGradient &Gj = grads[std::size_t(j)];
		for (int k = 0; k <= j; ++k) {
			const VelocityGradient &Gk = grads[std::size_t(k)];
			const double gg = inner(Gj.d1x, Gk.d1x) + inner(Gj.d1y, Gk.d1y) + inner(Gj.d2x, Gk.d2x) +
			                  inner(Gj.d2y, Gk.d2y);
			H_(j, k) += gg;
			if (k != j)
				H_(k, j) += gg;
		}
	}
	B_ = trilinear_tensor(b);

	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * ((K_ - S_) + (K_ - S_).transpose()));
	const double rad = es.eigenvalues().cwiseAbs().maxCoeff();
	dt_max_ = rad > 0.0 ? 2.0 / rad : std::numeric_limits<double>::infinity();

	if (forcing_.is_separable()) {
		const VectorField F = forcing_.shape(b.grid);
		shape_load_.resize(m);
		for (int k = 0; k < m; ++k)
			shape_load_(k) = inner(F, b.field(k));
		shape_sq_ = inner(F, F);
	}
}

Eigen::VectorXd GalerkinSystem::load(double t) const {
	const int m = size();
	if (forcing_.is_zero())
		return Eigen::VectorXd::Zero(m);
	if (forcing_.is_separable())
		return forcing_.amplitude(t) * shape_load_;
	const VectorField f = forcing_.at(basis_->grid, t);
	Eigen::VectorXd F(m);
	for (int k = 0; k < m; ++k)
		F(k) = inner(f, basis_->field(k));
	return F;
}

double GalerkinSystem::forcing_sq(double t) const {
	if (forcing_.is_zero())
		return 0.0;
	if (forcing_.is_separable()) {
		const double a = forcing_.amplitude(t);
		return a * a * shape_sq_;
	}
	const VectorField f = forcing_.at(basis_->grid, t);
	return inner(f, f);
}

double GalerkinSystem::forcing_dt_sq(double t) const {
	if (forcing_.is_zero())
		return 0.0;
	if (forcing_.is_separable()) {
		const double a = forcing_.amplitude_rate(t);
		return a * a * shape_sq_;
	}
	const VectorField f = forcing_.dt_at(basis_->grid, t);
	return inner(f, f);
}

VectorField GalerkinSystem::reconstruct(const Eigen::VectorXd &g) const {
	if (g.size() != size())
		throw Error("GalerkinSystem::reconstruct: coefficient vector has the wrong length");
	VectorField u(basis_->grid);
	for (int k = 0; k < size(); ++k)
		if (g(k) != 0.0)
			u += g(k) * basis_->field(k);
	return u;
}

/* evolution */

ProjectionResult project_initial(const VectorField &u0, std::shared_ptr<const GalerkinBasis> basis,
                                 std::optional<double> membership_tol) {
	if (!basis)
		throw Error("project_initial: missing basis");
	if (u0.grid() != basis->grid)
		throw Error("project_initial: initial field and basis live on different grids");
	const SpaceMembership mem = membership(u0, basis->slip, basis->mu, membership_tol);
	if (!mem.in_W)
		throw Error("project_initial: initial data is not admissible (divergence " +
		            std::to_string(mem.divergence_residual) + ", no-penetration " +
		            std::to_string(mem.no_penetration_residual) + ", Navier " +
		            std::to_string(mem.navier_bc_residual) + ", tolerance " + std::to_string(mem.tolerance) + ")");
	const int m = basis->size();
	ProjectionResult r;
	r.state.g.resize(m);
	r.state.t = 0.0;
	r.state.basis = basis;
	VectorField um(basis->grid);
	for (int k = 0; k < m; ++k) {
		r.state.g(k) = inner(u0, basis->field(k));
		um += r.state.g(k) * basis->field(k);
	}
	r.residual = l2_norm(u0 - um);
	return r;
}

Eigen::VectorXd rhs(const GalerkinSystem &sys, const GalerkinState &state) {
	if (state.g.size() != sys.size())
		throw Error("rhs: coefficient vector length " + std::to_string(state.g.size()) + " does not match basis size " +
		            std::to_string(sys.size()));
	return -sys.viscous() * state.g + sys.boundary() * state.g - sys.tensor().convection(state.g) + sys.load(state.t);
}

static bool finite(const Eigen::VectorXd &v) {
	for (Eigen::Index k = 0; k < v.size(); ++k)
		if (!std::isfinite(v(k)))
			return false;
	return true;
}

GalerkinState step(const GalerkinSystem &sys, const GalerkinState &s, double dt) {
	if (!(dt > 0.0))
		throw Error("step: dt must be positive");
	if (dt > sys.stability_bound() * (1.0 + 1e-12))
		throw Error("step: dt = " + std::to_string(dt) + " exceeds the explicit stability bound " +
		            std::to_string(sys.stability_bound()));
	auto at = [&](const Eigen::VectorXd &g, double t) { return GalerkinState{g, t, s.basis}; };
	const Eigen::VectorXd k1 = rhs(sys, s);
	const Eigen::VectorXd k2 = rhs(sys, at(s.g + 0.5 * dt * k1, s.t + 0.5 * dt));
	const Eigen::VectorXd k3 = rhs(sys, at(s.g + 0.5 * dt * k2, s.t + 0.5 * dt));
	const Eigen::VectorXd k4 = rhs(sys, at(s.g + dt * k3, s.t + dt));
	GalerkinState out = at(s.g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), s.t + dt);
	if (!finite(out.g))
		throw BlowUpError("step: non-finite coefficients at t = " + std::to_string(out.t), out.t);
	return out;
}

EnergyRecord energy_record(const GalerkinSystem &sys, const GalerkinState &state) {
	const Eigen::VectorXd &g = state.g;
	const Eigen::MatrixXd &Gram = sys.gram();
	EnergyRecord r;
	r.t = state.t;
	r.kinetic = 0.5 * g.dot(Gram * g);
	r.dissipation = g.dot(sys.viscous() * g);
	r.boundary_production = g.dot(sys.boundary() * g);
	r.forcing_power = g.dot(sys.load(state.t));
	r.dt_norm = rhs(sys, state).norm();
	r.h1_norm = std::sqrt(std::max(0.0, g.dot(sys.h1_gram() * g)));
	return r;
}

Trajectory integrate(const GalerkinSystem &sys, const GalerkinState &initial, double dt, double T, int record_every) {
	if (!(dt > 0.0) || !(T >= 0.0))
		throw Error("integrate: need dt > 0 and T >= 0");
	if (record_every < 1)
		throw Error("integrate: record_every must be >= 1");
	const double steps_real = T / dt;
	const long steps = std::lround(steps_real);
	if (std::abs(steps_real - double(steps)) > 1e-9 * std::max(1.0, steps_real))
		throw Error("integrate: T must be an integer multiple of dt");
	if (steps > 0 && dt > sys.stability_bound() * (1.0 + 1e-12))
		throw Error("integrate: dt = " + std::to_string(dt) + " exceeds the explicit stability bound " +
		            std::to_string(sys.stability_bound()));

	Trajectory tr;
	GalerkinState s = initial;
	s.t = initial.t;
	tr.states.push_back(s);
	tr.records.push_back(energy_record(sys, s));
	for (long n = 1; n <= steps; ++n) {
		s = step(sys, s, dt);
		s.t = initial.t + double(n) * dt;
		if (n % record_every == 0 || n == steps) {
			tr.states.push_back(s);
			tr.records.push_back(energy_record(sys, s));
		}
	}
	return tr;
}

EnergyIdentityReport energy_identity_audit(const GalerkinSystem &sys, const Trajectory &traj) {
	EnergyIdentityReport r;
	const auto &S = traj.states;
	for (const EnergyRecord &e : traj.records)
		r.max_magnitude = std::max({r.max_magnitude, std::abs(e.kinetic), std::abs(e.dissipation),
		                            std::abs(e.boundary_production), std::abs(e.forcing_power)});
	const Eigen::MatrixXd &Gram = sys.gram();
	auto production = [&](const Eigen::VectorXd &g, double t) {
		return g.dot(sys.viscous() * g) - g.dot(sys.boundary() * g) - g.dot(sys.load(t));
	};
	double dt_ref = 0.0;
	for (std::size_t n = 0; n + 1 < S.size(); ++n) {
		const double dt = S[n + 1].t - S[n].t;
		dt_ref = std::max(dt_ref, dt);
		const Eigen::VectorXd d0 = rhs(sys, S[n]), d1 = rhs(sys, S[n + 1]);
		const Eigen::VectorXd mid = 0.5 * (S[n].g + S[n + 1].g) + (dt / 8.0) * (d0 - d1);
		const double tm = S[n].t + 0.5 * dt;
		const double integral =
			dt / 6.0 * (production(S[n].g, S[n].t) + 4.0 * production(mid, tm) + production(S[n + 1].g, S[n + 1].t));
		const double dK = 0.5 * S[n + 1].g.dot(Gram * S[n + 1].g) - 0.5 * S[n].g.dot(Gram * S[n].g);
		r.max_residual = std::max(r.max_residual, std::abs(dK + integral));
	}
	const double denom = dt_ref * dt_ref * dt_ref * r.max_magnitude;
	r.max_scaled = denom > 0.0 ? r.max_residual / denom : 0.0;
	return r;
}

/* audits */

namespace {

void check_uniform(const std::vector<EnergyRecord> &records) {
	if (records.size() < 2)
		return;
	const double dt = records[1].t - records[0].t;
	for (std::size_t n = 1; n < records.size(); ++n) {
		const double d = records[n].t - records[n - 1].t;
		if (std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(dt)) && n + 1 != records.size())
			throw Error("gronwall_audit: records are not uniformly spaced");
	}
}

} // namespace

GronwallReport gronwall_audit(const std::vector<EnergyRecord> &records, const GalerkinSystem &sys) {
	GronwallReport r;
	if (records.empty())
		throw Error("gronwall_audit: no records");
	check_uniform(records);
	const GalerkinBasis &b = sys.basis();
	r.dissipative_regime = b.slip.k0 <= 0.0 && b.slip.k1 <= 0.0;
	const std::size_t n = records.size();

	for (const EnergyRecord &e : records) {
		const double E = 2.0 * e.kinetic;
		if (E > 0.0)
			r.boundary_constant =
				std::max(r.boundary_constant, (e.boundary_production - 0.5 * e.dissipation) / E);
		r.sup_kinetic = std::max(r.sup_kinetic, e.kinetic);
		r.sup_h1_dt = std::max(r.sup_h1_dt, e.h1_norm * e.h1_norm + e.dt_norm * e.dt_norm);
	}
	r.growth_constant = 2.0 * r.boundary_constant + 1.0;
	r.initial_kinetic = records.front().kinetic;

	const double E0 = 2.0 * records.front().kinetic;
	double f_int = 0.0, d_int = 0.0, h1_int = 0.0;
	double ledger_int = 0.0, ledger_abs = 0.0, max_defect = 0.0, maxE = E0;
	double fprev = sys.forcing_sq(records.front().t);
	r.min_margin = std::numeric_limits<double>::infinity();
	for (std::size_t k = 0; k < n; ++k) {
		const EnergyRecord &e = records[k];
		const double E = 2.0 * e.kinetic;
		if (k > 0) {
			const EnergyRecord &p = records[k - 1];
			const double dt = e.t - p.t;
			const double fcur = sys.forcing_sq(e.t);
			f_int += 0.5 * dt * (fprev + fcur);
			fprev = fcur;
			d_int += 0.5 * dt * (p.dissipation + e.dissipation);
			h1_int += 0.5 * dt * (p.h1_norm * p.h1_norm + e.h1_norm * e.h1_norm);
			const double qp = p.dissipation - p.boundary_production - p.forcing_power;
			const double qc = e.dissipation - e.boundary_production - e.forcing_power;
			ledger_int += dt * (qp + qc); // 2 * trapezoid
			ledger_abs += dt * (std::abs(p.dissipation) + std::abs(p.boundary_production) + std::abs(p.forcing_power) +
			                    std::abs(e.dissipation) + std::abs(e.boundary_production) + std::abs(e.forcing_power));
		}
		maxE = std::max(maxE, E);
		const double env = std::exp(r.growth_constant * (e.t - records.front().t)) * (E0 + f_int);
		const double Y = E + d_int;
		if (env > 0.0)
			r.min_margin = std::min(r.min_margin, (env - Y) / env);
		else
			r.min_margin = std::min(r.min_margin, Y > 0.0 ? -1.0 : 0.0);
		if (Y > env * (1.0 + 1e-9) + 1e-300)
			r.envelope_violated = true;
		max_defect = std::max(max_defect, std::abs(E - E0 + ledger_int));
		r.envelope_final = env;
	}
	const double T = records.back().t - records.front().t;
	r.h1_time_integral = h1_int;
	r.h1_time_bound = r.envelope_final * (T + 1.0 / b.mu);
	if (h1_int > r.h1_time_bound * (1.0 + 1e-9))
		r.envelope_violated = true;
	const double scale = E0 + maxE + ledger_abs;
	r.identity_defect = scale > 0.0 ? max_defect / scale : 0.0;
	r.identity_violated = r.identity_defect > 5e-2;
	if (!std::isfinite(r.min_margin))
		r.min_margin = 0.0;

	r.violated = r.envelope_violated || r.identity_violated;
	if (!r.violated)
		r.diagnosis = "ok";
	else if (r.dissipative_regime)
		r.diagnosis = "solver bug: ledger leaves the energy envelope although k0, k1 <= 0";
	else
		r.diagnosis = "instability: boundary energy production drives the ledger past the envelope";
	return r;
}

Eigen::VectorXd unit_perturbation(int m, std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> N(0.0, 1.0);
	Eigen::VectorXd p(m);
	for (int k = 0; k < m; ++k)
		p(k) = N(rng) / double(k + 1);
	return p / p.norm();
}

StabilityReport uniqueness_experiment(const GalerkinSystem &sys, const GalerkinState &initial, double delta, double T,
                                      double dt, std::uint64_t seed) {
	if (!(delta >= 0.0))
		throw Error("uniqueness_experiment: delta must be nonnegative");
	StabilityReport r;
	r.delta = delta;
	r.T = T;
	GalerkinState perturbed = initial;
	perturbed.g = initial.g + delta * unit_perturbation(sys.size(), seed);
	const Trajectory base = integrate(sys, initial, dt, T);
	const Trajectory pert = integrate(sys, perturbed, dt, T);

	r.identical = true;
	double rho_int = 0.0, h_int = 0.0, rho_prev = 0.0, h_prev = 0.0;
	for (std::size_t n = 0; n < base.states.size(); ++n) {
		const Eigen::VectorXd &g2 = base.states[n].g;
		const Eigen::VectorXd diff = pert.states[n].g - g2;
		r.identical = r.identical && (pert.states[n].g.array() == g2.array()).all();
		const Eigen::MatrixXd A = sys.boundary() - sys.viscous() - sys.tensor().contract_middle(g2);
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
		const double rho = es.eigenvalues().maxCoeff();
		const double h1sq = base.records[n].h1_norm * base.records[n].h1_norm;
		if (n > 0) {
			const double dt_n = base.states[n].t - base.states[n - 1].t;
			rho_int += 0.5 * dt_n * (rho_prev + rho);
			h_int += 0.5 * dt_n * ((1.0 + h_prev) + (1.0 + h1sq));
		}
		rho_prev = rho;
		h_prev = h1sq;
		r.realized_constant = std::max(r.realized_constant, std::max(0.0, rho) / (1.0 + h1sq));
		r.times.push_back(base.states[n].t);
		r.ratio.push_back(delta > 0.0 ? diff.norm() / delta : 0.0);
		r.envelope.push_back(std::exp(rho_int));
		r.paper_envelope.push_back(h_int); // exponent; finalized below
	}
	for (double &v : r.paper_envelope)
		v = std::exp(r.realized_constant * v);
	for (std::size_t n = 0; n < r.ratio.size(); ++n) {
		const double excess = r.ratio[n] / r.envelope[n];
		r.max_envelope_excess = std::max(r.max_envelope_excess, excess);
		if (r.ratio[n] > r.envelope[n] * (1.0 + 1e-6))
			r.under_envelope = false;
	}
	r.final_ratio = r.ratio.empty() ? 0.0 : r.ratio.back();
	return r;
}

double weak_residual(const GalerkinSystem &sys, const Trajectory &traj, const std::vector<VectorField> &test_fields) {
	const GalerkinBasis &b = sys.basis();
	const int m = b.size();
	const GridSpec &g = b.grid;
	const int top = g.ny() + 1;
	std::vector<VelocityGradient> grads;
	for (int k = 0; k < m; ++k)
		grads.push_back(gradient(b.field(k)));

	double worst = 0.0;
	for (const VectorField &v : test_fields) {
		if (v.grid() != g)
			throw Error("weak_residual: test field on a different grid");
		const VelocityGradient Gv = gradient(v);
		const ScalarField v12 = 0.5 * (Gv.d1y + Gv.d2x);
		Eigen::VectorXd mass(m), visc(m), bdry(m);
		Eigen::MatrixXd conv(m, m);
		for (int k = 0; k < m; ++k) {
			const VectorField &w = b.field(k);
			const VelocityGradient &Gk = grads[std::size_t(k)];
			mass(k) = inner(w, v);
			const ScalarField w12 = 0.5 * (Gk.d1y + Gk.d2x);
			visc(k) = 2.0 * b.mu * (inner(Gk.d1x, Gv.d1x) + inner(Gk.d2y, Gv.d2y) + 2.0 * inner(w12, v12));
			double s = 0.0;
			for (int i = 0; i < g.cols(); ++i)
				s += g.wx(i) * (b.slip.k0 * w.u1(i, 0) * v.u1(i, 0) + b.slip.k1 * w.u1(i, top) * v.u1(i, top));
			bdry(k) = s;
		}
		for (int j = 0; j < m; ++j) {
			const VectorField &wj = b.field(j);
			for (int k = 0; k < m; ++k) {
				const VelocityGradient &Gk = grads[std::size_t(k)];
				ScalarField a1 = pointwise_product(wj.u1, Gk.d1x) + pointwise_product(wj.u2, Gk.d1y);
				ScalarField a2 = pointwise_product(wj.u1, Gk.d2x) + pointwise_product(wj.u2, Gk.d2y);
				conv(j, k) = inner(a1, v.u1) + inner(a2, v.u2);
			}
		}
		const std::size_t N = traj.states.size();
		for (std::size_t n = 1; n + 1 < N; ++n) {
			const GalerkinState &s = traj.states[n];
			const double dt2 = traj.states[n + 1].t - traj.states[n - 1].t;
			const double ddt = (traj.states[n + 1].g.dot(mass) - traj.states[n - 1].g.dot(mass)) / dt2;
			const double force = inner(sys.forcing().at(g, s.t), v);
			const double res = ddt + s.g.dot(visc) + s.g.dot(conv * s.g) - s.g.dot(bdry) - force;
			worst = std::max(worst, std::abs(res));
		}
	}
	return worst;
}

} // namespace stripns
