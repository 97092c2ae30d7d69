#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stripns/config.hpp"
#include "stripns/galerkin.hpp"
#include "stripns/inequality_lab.hpp"
#include "stripns/io.hpp"
#include "stripns/runner.hpp"
#include "stripns/stokes_regularity.hpp"
#include "stripns/stokes_spectral.hpp"

using namespace stripns;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
	bool pass = false;
	std::string detail;
};

class Detail {
public:
	template <class T> Detail &operator()(const std::string &name, T value) {
		if (!s_.str().empty())
			s_ << ", ";
		s_ << name << "=" << value;
		return *this;
	}
	std::string str() const { return s_.str(); }

private:
	std::ostringstream s_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::shared_ptr<const GalerkinBasis> basis_for(const GridSpec &g, const SlipPair &slip, double mu, int m) {
	return std::make_shared<const GalerkinBasis>(solve_eigenpairs(m, 0, g, slip, mu, ShiftParams::make(slip, mu)));
}

ForcingSpec channel_forcing() {
	return ForcingSpec::separable([](double x, double y) { return std::sin(pi * (x + 1.0)) * y * (1.0 - y); },
	                              [](double x, double y) { return std::cos(pi * (x + 1.0) / 2.0) * y; }, 1.0, 0.5,
	                              2.0 * pi);
}

double worst_conservativity(const GalerkinSystem &sys, const Trajectory &tr) {
	double worst = 0.0;
	for (const GalerkinState &s : tr.states) {
		const double n = s.g.norm();
		if (n == 0.0)
			continue;
		worst = std::max(worst, std::abs(s.g.dot(sys.tensor().convection(s.g))) / (n * n * n));
	}
	return worst;
}

// Trajectories shared by criteria 6 to 8.
struct Runs {
	std::vector<std::pair<std::shared_ptr<GalerkinSystem>, Trajectory>> list;
};

Runs &runs() {
	static Runs r;
	return r;
}

Verdict free_slip_eigenvalue() {
	const auto t0 = std::chrono::steady_clock::now();
	const double exact = 5.0 * pi * pi / 4.0;
	std::vector<double> err;
	for (int ny : {32, 64, 128}) {
		GridSpec g = build_grid(StripGeometry(1.0), ny, ny);
		const SlipPair slip;
		err.push_back(std::abs(solve_eigenpairs(1, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0)).pairs[0].Lambda - exact));
	}
	const double elapsed = seconds_since(t0);
	const double rel64 = err[1] / exact, p1 = std::log2(err[0] / err[1]), p2 = std::log2(err[1] / err[2]);
	Detail d;
	d("rel_err_ny64", rel64)("order_32_64", p1)("order_64_128", p2)("seconds", elapsed);
	return {rel64 <= 1e-2 && p1 >= 1.8 && p2 >= 1.8 && elapsed <= 10.0, d.str()};
}

Verdict basis_certification() {
	GridSpec g = matched_grid(1.0, 32);
	double gram = 0.0, navier = 0.0;
	for (double k0 : {-2.0, 0.0, 2.0})
		for (double k1 : {-2.0, 0.0, 2.0}) {
			const SlipPair slip(k0, k1);
			GalerkinBasis b = solve_eigenpairs(32, 0, g, slip, 1.0, ShiftParams::make(slip, 1.0));
			for (int j = 0; j < b.size(); ++j) {
				for (int k = j + 1; k < b.size(); ++k)
					gram = std::max(gram, std::abs(inner(b.field(j), b.field(k))));
				navier = std::max(navier, navier_residual(b.field(j).u1, slip, 1.0));
			}
		}
	Detail d;
	d("gram_offdiag", gram)("navier_bc", navier);
	return {gram <= 1e-10 && navier <= 1e-6, d.str()};
}

Verdict inequality_suite() {
	const std::vector<SlipPair> slips = {SlipPair(0.0, 0.0), SlipPair(-1.0, -1.0), SlipPair(1.0, -0.5),
	                                     SlipPair(2.0, 2.0)};
	int violations = 0, configurations = 0;
	for (double L : {1.0, 4.0})
		for (const SlipPair &slip : slips) {
			GridSpec g = matched_grid(L, 32);
			std::vector<VectorField> e = make_ensemble(g, slip, 1.0, 17, 200);
			for (Lemma l : all_lemmas()) {
				InequalityReport r = check_lemma(l, e, slip, 1.0);
				if (r.violated || !std::isfinite(r.max_ratio) || r.ensemble_size - r.skipped < 200)
					++violations;
			}
			++configurations;
		}
	double block = 0.0;
	for (double L : {1.0, 4.0, 16.0}) {
		GridSpec g = matched_grid(L, 32);
		std::vector<ScalarField> corner;
		for (std::uint64_t s = 1; s <= 200; ++s)
			corner.push_back(random_corner_field(g, s));
		InequalityReport r = check_building_block(corner);
		block = std::max(block, r.violated ? std::numeric_limits<double>::infinity() : r.max_ratio);
	}
	Detail d;
	d("configurations", configurations)("violations", violations)("building_block_max", block);
	return {violations == 0 && block < 2.0, d.str()};
}

Verdict l_uniformity() {
	const auto t0 = std::chrono::steady_clock::now();
	SweepSettings s;
	s.ny = 32;
	std::vector<InequalityReport> all = sweep_all({1.0, 2.0, 4.0, 8.0, 16.0}, 200, 23, s);
	const double elapsed = seconds_since(t0);
	bool ok = elapsed <= 300.0;
	Detail d;
	for (const InequalityReport &r : all) {
		const double spread = sweep_spread(r);
		d(to_string(r.name) + "_spread", spread);
		ok = ok && spread <= 1.25 && !r.violated;
	}
	d("seconds", elapsed);
	return {ok, d.str()};
}

Verdict korn_identity() {
	GridSpec g = build_grid(StripGeometry(1.0), 64, 64);
	const SlipPair slip(-1.0, 0.5);
	double worst = 0.0;
	for (const VectorField &u : make_ensemble(g, slip, 1.0, 31, 100)) {
		const double gsq = grad_sq(u);
		worst = std::max(worst, std::abs(strain_sq(u) - 0.5 * gsq) / gsq);
	}
	Detail d;
	d("max_relative_defect", worst);
	return {worst <= 1e-4, d.str()};
}

Verdict energy_identity() {
	GridSpec g = matched_grid(1.0, 32);
	const SlipPair slip(-0.5, 0.5);
	auto sys = std::make_shared<GalerkinSystem>(basis_for(g, slip, 1.0, 16), channel_forcing());
	Eigen::VectorXd g0(16);
	for (int j = 0; j < 16; ++j)
		g0[j] = 1.0 / (1.0 + j);
	Trajectory tr = integrate(*sys, GalerkinState{g0, 0.0, sys->basis_handle()}, 1e-3, 1.0);
	EnergyIdentityReport r = energy_identity_audit(*sys, tr);
	runs().list.emplace_back(sys, std::move(tr));
	Detail d;
	d("max_residual", r.max_residual)("max_magnitude", r.max_magnitude)("residual_over_dt3_magnitude", r.max_scaled);
	return {r.max_scaled <= 10.0, d.str()};
}

Verdict dissipative_regime() {
	GridSpec g = matched_grid(1.0, 32);
	const std::vector<SlipPair> slips = {SlipPair(0.0, 0.0), SlipPair(-1.0, -0.5), SlipPair(-2.0, 0.0)};
	int increases = 0, runs_done = 0;
	std::mt19937_64 rng(2024);
	std::normal_distribution<double> N(0.0, 1.0);
	for (int r = 0; r < 10; ++r) {
		const SlipPair slip = slips[std::size_t(r) % slips.size()];
		auto sys = std::make_shared<GalerkinSystem>(basis_for(g, slip, 1.0, 16));
		Eigen::VectorXd g0(16);
		for (int j = 0; j < 16; ++j)
			g0[j] = 4.0 * N(rng);
		Trajectory tr = integrate(*sys, GalerkinState{g0, 0.0, sys->basis_handle()}, 1e-3, 1.0);
		for (std::size_t n = 1; n < tr.records.size(); ++n)
			if (tr.records[n].kinetic > tr.records[n - 1].kinetic)
				++increases;
		++runs_done;
		runs().list.emplace_back(sys, std::move(tr));
	}
	Detail d;
	d("runs", runs_done)("increases", increases);
	return {increases == 0 && runs_done == 10, d.str()};
}

Verdict conservativity() {
	double worst = 0.0;
	std::size_t states = 0;
	for (const auto &[sys, tr] : runs().list) {
		worst = std::max(worst, worst_conservativity(*sys, tr));
		states += tr.states.size();
	}
	Detail d;
	d("trajectories", runs().list.size())("states", states)("max_|g.N(g)|/|g|^3", worst);
	return {!runs().list.empty() && worst <= 1e-12, d.str()};
}

Verdict uniqueness() {
	GridSpec g = matched_grid(1.0, 32);
	bool ok = true;
	Detail d;
	for (const SlipPair slip : {SlipPair(-1.0, -1.0), SlipPair(0.0, 0.0)}) {
		GalerkinSystem sys(basis_for(g, slip, 1.0, 16));
		Eigen::VectorXd g0(16);
		for (int j = 0; j < 16; ++j)
			g0[j] = 3.0 / (1.0 + j);
		GalerkinState s{g0, 0.0, sys.basis_handle()};
		StabilityReport a = uniqueness_experiment(sys, s, 1e-6, 1.0, 1e-3, 5);
		StabilityReport b = uniqueness_experiment(sys, s, 5e-7, 1.0, 1e-3, 5);
		const double change = std::abs(a.final_ratio - b.final_ratio) / a.final_ratio;
		d("k0", slip.k0)("final_ratio", a.final_ratio)("envelope_T", a.envelope.back())("halving_change", change);
		ok = ok && a.under_envelope && b.under_envelope && change < 0.05;
	}
	return {ok, d.str()};
}

Verdict stokes_oracle() {
	std::vector<double> err;
	for (int ny : {32, 64}) {
		GridSpec g = build_grid(StripGeometry(1.0), ny, ny);
		const double a = pi / 2.0, Lambda = a * a + pi * pi;
		VectorField exact(
			ScalarField::sample(g, [&](double x, double y) { return -pi * std::sin(a * (x + 1.0)) * std::cos(pi * y); },
		                        BoundaryTag::robin_slip),
			ScalarField::sample(g, [&](double x, double y) { return a * std::cos(a * (x + 1.0)) * std::sin(pi * y); },
		                        BoundaryTag::neumann_zero));
		StokesSolution s = stokes_solve(StokesProblem::make(Lambda * exact, SlipPair(), 1.0));
		err.push_back(s.converged ? l2_norm(s.u - exact) / l2_norm(exact) : std::numeric_limits<double>::infinity());
	}
	GridSpec g = build_grid(StripGeometry(2.0), 64, 32);
	StokesSolution z = stokes_solve(StokesProblem::make(VectorField(g), SlipPair(-1.0, 0.5), 1.0));
	const double zero = std::max(linf_norm(z.u), linf_norm(z.p_grad));
	const double order = std::log2(err[0] / err[1]);
	Detail d;
	d("rel_err_32", err[0])("rel_err_64", err[1])("order", order)("zero_load_residual", zero);
	return {order >= 1.8 && z.converged && zero <= 1e-10, d.str()};
}

Verdict strong_solution() {
	const SlipPair slip(-1.0, -0.5);
	std::vector<StrongSolutionReport> reports;
	for (int ny : {24, 48}) {
		GridSpec g = matched_grid(1.0, ny);
		GalerkinSystem sys(basis_for(g, slip, 1.0, 12));
		Eigen::VectorXd g0(12);
		for (int j = 0; j < 12; ++j)
			g0[j] = 2.0 / (1.0 + j);
		Trajectory tr = integrate(sys, GalerkinState{g0, 0.0, sys.basis_handle()}, 1e-3, 0.5);
		reports.push_back(strong_solution_audit(sys, tr, 50));
	}
	const StrongSolutionReport &c = reports[0], &f = reports[1];
	const double order = std::log2(c.max_p_grad_curl_rel / f.max_p_grad_curl_rel);
	const double envelope = f.initial_h2 + f.forcing_h1t;
	Detail d;
	d("samples", f.samples.size())("chain_holds", c.chain_holds && f.chain_holds)("curl_gradp_24", c.max_p_grad_curl_rel)(
		"curl_gradp_48", f.max_p_grad_curl_rel)("curl_order", order)("sup_H2_plus_gradp", f.sup_h2_plus_p)(
		"initial_H2_plus_forcing", envelope)("realized_constant", f.realized_constant);
	const bool ok = c.chain_holds && f.chain_holds && c.all_converged && f.all_converged && order >= 1.8 &&
	                std::isfinite(f.sup_h2_plus_p) && std::isfinite(f.realized_constant);
	return {ok, d.str()};
}

Verdict determinism() {
	namespace fs = std::filesystem;
	const fs::path root = fs::temp_directory_path() / "stripns_acceptance_determinism";
	fs::remove_all(root);
	RunConfig c = parse_config_text("k0 = -1\nk1 = -0.5\nm = 8\nny = 16\nT = 0.1\nrecord_every = 10\n"
	                                "audit_every = 50\nuniqueness_delta = 1e-6\nineq_L = 1, 2\n"
	                                "ineq_ensemble = 10\nineq_ny = 16\nseed = 7\n"
	                                "forcing_f1 = sin(pi*(x+L)/L)*y*(1-y)*cos(t)\nforcing_f2 = 0\n");
	int compared = 0, differing = 0;
	for (const std::string &sub : subcommands()) {
		std::ostringstream log;
		c.out = (root / "a" / sub).string();
		RunArtifacts a = run(sub, c, log);
		c.out = (root / "b" / sub).string();
		RunArtifacts b = run(sub, c, log);
		if (a.files != b.files || a.outputs_hash != b.outputs_hash)
			++differing;
		for (const std::string &f : a.files) {
			if (f.ends_with(".svg"))
				continue;
			++compared;
			if (read_file((root / "a" / sub / f).string()) != read_file((root / "b" / sub / f).string()))
				++differing;
		}
	}
	fs::remove_all(root);
	Detail d;
	d("files_compared", compared)("differing", differing);
	return {compared > 0 && differing == 0, d.str()};
}

} // namespace

int main() {
	const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
		{"free-slip eigenvalue", free_slip_eigenvalue},
		{"basis certification", basis_certification},
		{"inequality suite", inequality_suite},
		{"L-uniformity", l_uniformity},
		{"Korn identity", korn_identity},
		{"energy identity", energy_identity},
		{"dissipative regime", dissipative_regime},
		{"convection conservativity", conservativity},
		{"uniqueness and stability", uniqueness},
		{"Stokes pipeline oracle", stokes_oracle},
		{"strong-solution audit", strong_solution},
		{"determinism", determinism}};
	int failed = 0;
	for (std::size_t n = 0; n < criteria.size(); ++n) {
		const auto t0 = std::chrono::steady_clock::now();
		Verdict v;
		try {
			v = criteria[n].second();
		} catch (const std::exception &e) {
			v = {false, std::string("error: ") + e.what()};
		}
		failed += v.pass ? 0 : 1;
		std::printf("criterion %2zu %-27s %s  [%.1fs] %s\n", n + 1, criteria[n].first.c_str(), v.pass ? "PASS" : "FAIL",
		            seconds_since(t0), v.detail.c_str());
		std::fflush(stdout);
	}
	std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
	return failed == 0 ? 0 : 1;
}
