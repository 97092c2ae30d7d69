#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stripns/grid.hpp"
#include "stripns/stokes_spectral.hpp"

namespace stripns {

class BlowUpError : public Error {
public:
	BlowUpError(const std::string &what, double t) : Error(what), time(t) {}
	double time;
};

// f(x, y, t). Either separable, f = (c0 + c1 sin(omega t)) F(x, y), or a
// general pair of closed-form components with optional exact time derivatives.
class ForcingSpec {
public:
	using Shape = std::function<double(double, double)>;
	using Component = std::function<double(double, double, double)>;

	ForcingSpec() = default;

	static ForcingSpec none();
	static ForcingSpec separable(Shape f1, Shape f2, double c0, double c1, double omega);
	static ForcingSpec general(Component f1, Component f2, Component dt_f1 = {}, Component dt_f2 = {});

	bool is_zero() const { return kind_ == Kind::none; }
	bool is_separable() const { return kind_ == Kind::separable; }

	double amplitude(double t) const;      // separable only
	double amplitude_rate(double t) const; // separable only

	VectorField at(const GridSpec &grid, double t) const;
	VectorField dt_at(const GridSpec &grid, double t) const;
	VectorField shape(const GridSpec &grid) const; // separable only

private:
	enum class Kind { none, separable, general };
	Kind kind_ = Kind::none;
	Shape s1_, s2_;
	double c0_ = 0.0, c1_ = 0.0, omega_ = 0.0;
	Component f1_, f2_, d1_, d2_;
};

class TrilinearTensor {
public:
	TrilinearTensor() = default;
	explicit TrilinearTensor(int m) : m_(m), data_(std::size_t(m) * std::size_t(m) * std::size_t(m), 0.0) {}

	int size() const { return m_; }
	double operator()(int j, int k, int l) const { return data_[idx(j, k, l)]; }
	double &operator()(int j, int k, int l) { return data_[idx(j, k, l)]; }

	// max |B_jkl + B_jlk| / max |B| before antisymmetrization
	double presym_defect = 0.0;

	// N_k(g) = sum_{j,l} g_j g_l B[j][l][k], the modal image of u . grad u
	Eigen::VectorXd convection(const Eigen::VectorXd &g) const;
	// Q_jk = sum_l c_l B[j][l][k]
	Eigen::MatrixXd contract_middle(const Eigen::VectorXd &c) const;

private:
	std::size_t idx(int j, int k, int l) const {
		return (std::size_t(j) * std::size_t(m_) + std::size_t(k)) * std::size_t(m_) + std::size_t(l);
	}
	int m_ = 0;
	std::vector<double> data_;
};

// B[j][k][l] = int w_j . grad w_k . w_l, antisymmetrized in (k, l).
TrilinearTensor trilinear_tensor(const GalerkinBasis &basis);

class GalerkinSystem {
public:
	GalerkinSystem(std::shared_ptr<const GalerkinBasis> basis, ForcingSpec forcing = ForcingSpec::none());

	const GalerkinBasis &basis() const { return *basis_; }
	std::shared_ptr<const GalerkinBasis> basis_handle() const { return basis_; }
	const ForcingSpec &forcing() const { return forcing_; }
	int size() const { return basis_->size(); }

	const Eigen::MatrixXd &viscous() const { return S_; }
	const Eigen::MatrixXd &boundary() const { return K_; }
	const Eigen::MatrixXd &gram() const { return G_; }
	const Eigen::MatrixXd &h1_gram() const { return H_; }
	const TrilinearTensor &tensor() const { return B_; }

	// 2 / max |eig(-S + K)|
	double stability_bound() const { return dt_max_; }

	Eigen::VectorXd load(double t) const;
	double forcing_sq(double t) const;    // ||f(t)||^2
	double forcing_dt_sq(double t) const; // ||d_t f(t)||^2

	VectorField reconstruct(const Eigen::VectorXd &g) const;

private:
	std::shared_ptr<const GalerkinBasis> basis_;
	ForcingSpec forcing_;
	Eigen::MatrixXd S_, K_, G_, H_;
	TrilinearTensor B_;
	double dt_max_ = 0.0;
	Eigen::VectorXd shape_load_;
	double shape_sq_ = 0.0;
};

struct GalerkinState {
	Eigen::VectorXd g;
	double t = 0.0;
	std::shared_ptr<const GalerkinBasis> basis;
};

struct ProjectionResult {
	GalerkinState state;
	double residual = 0.0; // ||u0 - u_m(0)||
};

ProjectionResult project_initial(const VectorField &u0, std::shared_ptr<const GalerkinBasis> basis,
                                 std::optional<double> membership_tol = std::nullopt);

Eigen::VectorXd rhs(const GalerkinSystem &sys, const GalerkinState &state);

GalerkinState step(const GalerkinSystem &sys, const GalerkinState &state, double dt);

struct EnergyRecord {
	double t = 0.0;
	double kinetic = 0.0;
	double dissipation = 0.0;
	double boundary_production = 0.0;
	double forcing_power = 0.0;
	double dt_norm = 0.0;
	double h1_norm = 0.0;
};

EnergyRecord energy_record(const GalerkinSystem &sys, const GalerkinState &state);

struct Trajectory {
	std::vector<GalerkinState> states;
	std::vector<EnergyRecord> records;
};

// Integrate to T with a fixed dt, recording every `record_every` steps.
Trajectory integrate(const GalerkinSystem &sys, const GalerkinState &initial, double dt, double T,
                     int record_every = 1);

struct EnergyIdentityReport {
	double max_residual = 0.0;   // max per step |dK + int (D - B - P)|
	double max_magnitude = 0.0;  // largest ledger entry along the run
	double max_scaled = 0.0;     // max_residual / (dt^3 max_magnitude)
};

// Per-step residual of the kinetic-energy identity; the time integral over a
// step uses Simpson's rule with the midpoint from cubic Hermite interpolation.
EnergyIdentityReport energy_identity_audit(const GalerkinSystem &sys, const Trajectory &traj);

struct GronwallReport {
	bool dissipative_regime = false; // k0, k1 <= 0
	double growth_constant = 0.0;    // C in E(t) <= exp(C t)(E0 + int ||f||^2)
	double boundary_constant = 0.0;  // realized max(0, (bdry - diss / 2) / ||u||^2)
	double initial_kinetic = 0.0;
	double sup_kinetic = 0.0;
	double envelope_final = 0.0;
	double min_margin = 0.0;        // min_t (env - E - int diss) / env
	double h1_time_integral = 0.0;  // int ||u||_H1^2
	double h1_time_bound = 0.0;     // env(T) (T + 1 / mu)
	double sup_h1_dt = 0.0;         // sup (||u||_H1^2 + ||d_t u||^2)
	double identity_defect = 0.0;   // relative defect of the integrated ledger
	bool envelope_violated = false;
	bool identity_violated = false;
	bool violated = false;
	std::string diagnosis;
};

GronwallReport gronwall_audit(const std::vector<EnergyRecord> &records, const GalerkinSystem &sys);

struct StabilityReport {
	double delta = 0.0;
	double T = 0.0;
	std::vector<double> times;
	std::vector<double> ratio;            // |g1 - g2| / delta
	std::vector<double> envelope;         // exp(int rho)
	std::vector<double> paper_envelope;   // exp(C int (1 + ||u2||_H1^2)) with C realized
	double realized_constant = 0.0;
	double final_ratio = 0.0;
	double max_envelope_excess = 0.0;     // max ratio / envelope
	bool under_envelope = true;
	bool identical = false;               // trajectories bitwise identical
};

// Unit perturbation in span(basis) from `seed`.
Eigen::VectorXd unit_perturbation(int m, std::uint64_t seed);

StabilityReport uniqueness_experiment(const GalerkinSystem &sys, const GalerkinState &initial, double delta, double T,
                                      double dt, std::uint64_t seed = 1);

// max over interior records and test fields of the weak-form residual with
// centered time differences.
double weak_residual(const GalerkinSystem &sys, const Trajectory &traj, const std::vector<VectorField> &test_fields);

} // namespace stripns
