#include "stripns/runner.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "stripns/expression.hpp"
#include "stripns/function_spaces.hpp"
#include "stripns/inequality_lab.hpp"
#include "stripns/io.hpp"
#include "stripns/plot.hpp"
#include "stripns/stokes_regularity.hpp"

#ifndef STRIPNS_VERSION
#define STRIPNS_VERSION "unknown"
#endif

namespace stripns {

using nlohmann::json;

namespace {

const std::string schema_prefix = "strip-ns/";

std::string real(double v) {
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	char buf[64];
	const auto r = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, r.ptr);
}

// JSON numbers must be finite; non-finite values are written as strings.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(real(v)); }

template <class F> auto stage(const std::string &module, F &&fn) -> decltype(fn()) {
	try {
		return fn();
	} catch (const ConfigError &) {
		throw;
	} catch (const BlowUpError &e) {
		throw BlowUpError(module + ": " + e.what(), e.time);
	} catch (const std::exception &e) {
		throw Error(module + ": " + e.what());
	}
}

class OutputDir {
public:
	explicit OutputDir(const std::string &dir) : dir_(dir) {
		std::error_code ec;
		std::filesystem::create_directories(dir_, ec);
		if (ec)
			throw Error("cannot create output directory '" + dir_ + "': " + ec.message());
	}

	void write(const std::string &name, const std::string &content) {
		write_file_atomic((std::filesystem::path(dir_) / name).string(), content);
		files_.push_back({name, content.size(), fnv1a64(content)});
	}

	void write_json(const std::string &name, const json &j) { write(name, j.dump(2) + "\n"); }

	void plot(const std::string &csv_name, PlotKind kind, const std::string &svg_name) {
		write(svg_name, render_plot(content_of(csv_name), kind));
	}

	RunArtifacts finish(const std::string &subcommand, const RunConfig &config, const std::string &failure) {
		json m;
		m["schema"] = schema_prefix + "manifest/v1";
		m["subcommand"] = subcommand;
		m["status"] = failure.empty() ? "ok" : "failed";
		if (!failure.empty())
			m["failure"] = failure;
		m["versions"] = {{"strip_ns", STRIPNS_VERSION},
		                 {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
		                               "." + std::to_string(EIGEN_MINOR_VERSION)},
		                 {"compiler", __VERSION__}};
		m["seed"] = config.seed;
		const std::string canon = config.canonical();
		m["config_hash"] = hex64(fnv1a64(canon));
		json cfg = json::array();
		std::istringstream in(canon);
		for (std::string line; std::getline(in, line);)
			cfg.push_back(line);
		m["config"] = cfg;
		json files = json::array();
		std::string joined;
		for (const auto &f : files_) {
			files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"fnv1a64", hex64(f.hash)}});
			joined += f.name + ":" + hex64(f.hash) + "\n";
		}
		m["files"] = files;
		m["outputs_hash"] = hex64(fnv1a64(joined));
		RunArtifacts a;
		a.directory = dir_;
		a.failure = failure;
		for (const auto &f : files_)
			a.files.push_back(f.name);
		a.outputs_hash = hex64(fnv1a64(joined));
		write_file_atomic((std::filesystem::path(dir_) / "manifest.json").string(), m.dump(2) + "\n");
		a.files.push_back("manifest.json");
		return a;
	}

private:
	std::string content_of(const std::string &name) const {
		return read_file((std::filesystem::path(dir_) / name).string());
	}

	struct FileEntry {
		std::string name;
		std::size_t bytes;
		std::uint64_t hash;
	};
	std::string dir_;
	std::vector<FileEntry> files_;
};

json grid_json(const GridSpec &g) {
	return {{"L", g.half_length()}, {"nx", g.nx()}, {"ny", g.ny()}, {"hx", g.hx()}, {"hy", g.hy()}};
}

json basis_header(const GalerkinBasis &b) {
	return {{"grid", grid_json(b.grid)},
	        {"slip", {{"k0", b.slip.k0}, {"k1", b.slip.k1}}},
	        {"mu", b.mu},
	        {"epsilon", b.shift.epsilon},
	        {"beta", b.shift.beta},
	        {"beta0", b.shift.beta0},
	        {"m", b.m},
	        {"a_max", b.a_max}};
}

json basis_json(const GalerkinBasis &b) {
	json j;
	j["schema"] = schema_prefix + "basis/v1";
	j["header"] = basis_header(b);
	j["profiles_file"] = "basis_profiles.csv";
	json modes = json::array();
	for (int k = 0; k < b.size(); ++k) {
		const EigenPair &p = b.pairs[std::size_t(k)];
		modes.push_back({{"j", k + 1}, {"x_mode", p.x_mode}, {"Lambda", p.Lambda}, {"lambda_shifted", p.lambda_shifted}});
	}
	j["modes"] = modes;
	return j;
}

std::string profiles_csv(const GalerkinBasis &b) {
	std::ostringstream s;
	s << "y";
	for (int k = 0; k < b.size(); ++k)
		s << ",psi_" << (k + 1);
	s << "\n";
	for (int r = 0; r < b.grid.rows(); ++r) {
		s << real(b.grid.y(r));
		for (int k = 0; k < b.size(); ++k)
			s << "," << real(b.pairs[std::size_t(k)].y_profile[std::size_t(r)]);
		s << "\n";
	}
	return s.str();
}

std::string spectrum_csv(const GalerkinBasis &b) {
	std::ostringstream s;
	s << "j,x_mode,Lambda,lambda_shifted\n";
	for (int k = 0; k < b.size(); ++k) {
		const EigenPair &p = b.pairs[std::size_t(k)];
		s << (k + 1) << "," << p.x_mode << "," << real(p.Lambda) << "," << real(p.lambda_shifted) << "\n";
	}
	return s.str();
}

std::string ledger_csv(const std::vector<EnergyRecord> &records) {
	std::ostringstream s;
	s << "t,kinetic,dissipation,boundary_production,forcing_power,dt_norm,h1_norm\n";
	for (const EnergyRecord &r : records)
		s << real(r.t) << "," << real(r.kinetic) << "," << real(r.dissipation) << "," << real(r.boundary_production)
		  << "," << real(r.forcing_power) << "," << real(r.dt_norm) << "," << real(r.h1_norm) << "\n";
	return s.str();
}

std::function<double(double, double, double)> component(const std::string &text, double L) {
	const Expression e = Expression::parse(text, {"x", "y", "t", "L"});
	return [e, L](double x, double y, double t) { return e({x, y, t, L}); };
}

ScalarField sample_xy(const GridSpec &g, const std::string &text, BoundaryTag tag) {
	const Expression e = Expression::parse(text, {"x", "y", "L"});
	const double L = g.half_length();
	return ScalarField::sample(g, [&](double x, double y) { return e({x, y, L}); }, tag);
}

json gronwall_json(const GronwallReport &g) {
	return {{"dissipative_regime", g.dissipative_regime},
	        {"growth_constant", jnum(g.growth_constant)},
	        {"boundary_constant", jnum(g.boundary_constant)},
	        {"initial_kinetic", jnum(g.initial_kinetic)},
	        {"sup_kinetic", jnum(g.sup_kinetic)},
	        {"envelope_final", jnum(g.envelope_final)},
	        {"min_margin", jnum(g.min_margin)},
	        {"h1_time_integral", jnum(g.h1_time_integral)},
	        {"h1_time_bound", jnum(g.h1_time_bound)},
	        {"sup_h1_plus_dt", jnum(g.sup_h1_dt)},
	        {"identity_defect", jnum(g.identity_defect)},
	        {"envelope_violated", g.envelope_violated},
	        {"identity_violated", g.identity_violated},
	        {"violated", g.violated},
	        {"diagnosis", g.diagnosis}};
}

struct EvolveResult {
	std::shared_ptr<const GalerkinBasis> basis;
	std::unique_ptr<GalerkinSystem> sys;
	GalerkinState init;
	Trajectory traj;
	json summary;
};

EvolveResult evolve(const RunConfig &c, int record_every, std::ostream &log) {
	EvolveResult r;
	r.basis = stage("stokes_spectral", [&] { return build_basis(c); });
	r.sys = stage("galerkin_ns", [&] { return std::make_unique<GalerkinSystem>(r.basis, forcing_from_config(c)); });
	check_time_step(c, r.sys->stability_bound());
	r.init = stage("galerkin_ns", [&] { return initial_state(c, r.basis); });
	log << "evolve: m = " << r.basis->size() << ", steps = " << c.steps() << ", dt bound = " << real(r.sys->stability_bound())
	    << "\n";
	r.traj = stage("galerkin_ns", [&] { return integrate(*r.sys, r.init, c.dt, c.T, record_every); });

	const EnergyIdentityReport id = stage("galerkin_ns", [&] { return energy_identity_audit(*r.sys, r.traj); });
	const GronwallReport gr = stage("galerkin_ns", [&] { return gronwall_audit(r.traj.records, *r.sys); });
	double conserv = 0.0;
	for (const GalerkinState &s : r.traj.states) {
		const double n = s.g.norm();
		if (n > 0.0)
			conserv = std::max(conserv, std::abs(s.g.dot(r.sys->tensor().convection(s.g))) / (n * n * n));
	}
	bool monotone = true;
	for (std::size_t i = 1; i < r.traj.records.size(); ++i)
		monotone = monotone && r.traj.records[i].kinetic <= r.traj.records[i - 1].kinetic;

	json s;
	s["schema"] = schema_prefix + "evolve-summary/v1";
	s["basis"] = basis_header(*r.basis);
	s["basis_hash"] = basis_hash(*r.basis);
	s["steps"] = c.steps();
	s["dt"] = c.dt;
	s["T"] = c.T;
	s["stability_bound"] = jnum(r.sys->stability_bound());
	s["trilinear_presym_defect"] = jnum(r.sys->tensor().presym_defect);
	s["energy_identity"] = {{"max_residual", jnum(id.max_residual)},
	                        {"max_magnitude", jnum(id.max_magnitude)},
	                        {"max_scaled", jnum(id.max_scaled)}};
	s["gronwall"] = gronwall_json(gr);
	s["convection_conservativity"] = jnum(conserv);
	s["kinetic_nonincreasing"] = monotone;
	const EnergyRecord &last = r.traj.records.back();
	s["final"] = {{"t", jnum(last.t)}, {"kinetic", jnum(last.kinetic)}, {"h1_norm", jnum(last.h1_norm)}};

	if (c.uniqueness_delta > 0.0) {
		const StabilityReport u = stage("galerkin_ns", [&] {
			return uniqueness_experiment(*r.sys, r.init, c.uniqueness_delta, c.T, c.dt, c.seed);
		});
		const StabilityReport h = stage("galerkin_ns", [&] {
			return uniqueness_experiment(*r.sys, r.init, 0.5 * c.uniqueness_delta, c.T, c.dt, c.seed);
		});
		s["uniqueness"] = {{"delta", u.delta},
		                   {"final_ratio", jnum(u.final_ratio)},
		                   {"final_ratio_half_delta", jnum(h.final_ratio)},
		                   {"half_delta_relative_change",
		                    jnum(std::abs(u.final_ratio - h.final_ratio) / std::max(1e-300, u.final_ratio))},
		                   {"envelope_final", jnum(u.envelope.empty() ? 0.0 : u.envelope.back())},
		                   {"realized_constant", jnum(u.realized_constant)},
		                   {"max_envelope_excess", jnum(u.max_envelope_excess)},
		                   {"under_envelope", u.under_envelope}};
	}
	r.summary = s;
	return r;
}

json checkpoint_json(const GalerkinBasis &basis, const GalerkinState &s) {
	json g = json::array();
	for (int k = 0; k < s.g.size(); ++k)
		g.push_back(s.g(k));
	return {{"schema", schema_prefix + "checkpoint/v1"},
	        {"basis", basis_header(basis)},
	        {"basis_hash", basis_hash(basis)},
	        {"t", s.t},
	        {"g", g}};
}

std::string run_eig(const RunConfig &c, OutputDir &out, std::ostream &log) {
	const auto basis = stage("stokes_spectral", [&] { return build_basis(c); });
	const BasisReport rep = stage("stokes_spectral", [&] { return verify_basis(*basis); });
	log << "eig: Lambda_1 = " << real(basis->pairs.front().Lambda) << ", Gram off-diagonal = " << real(rep.gram_offdiag)
	    << "\n";
	out.write_json("basis.json", basis_json(*basis));
	out.write("basis_profiles.csv", profiles_csv(*basis));
	out.write("spectrum.csv", spectrum_csv(*basis));
	out.write_json("basis_report.json", {{"schema", schema_prefix + "basis-report/v1"},
	                                     {"basis_hash", basis_hash(*basis)},
	                                     {"gram_offdiag", jnum(rep.gram_offdiag)},
	                                     {"gram_diag", jnum(rep.gram_diag)},
	                                     {"navier_bc_residual", jnum(rep.navier_bc_residual)},
	                                     {"eigen_residual", jnum(rep.eigen_residual)},
	                                     {"spectral_margin", jnum(rep.spectral_margin)},
	                                     {"ordered", rep.ordered}});
	out.plot("spectrum.csv", PlotKind::spectrum, "spectrum.svg");
	return "";
}

std::string run_ineq(const RunConfig &c, OutputDir &out, std::ostream &log) {
	SweepSettings st;
	st.ny = c.ineq_ny;
	st.slip = c.slip();
	st.mu = c.mu;
	const auto reports = stage("inequality_lab", [&] { return sweep_all(c.ineq_L, c.ineq_ensemble, c.seed, st); });

	std::ostringstream csv;
	csv << "lemma,L,ensemble_size,max_ratio,violated\n";
	json lemmas = json::array();
	for (const InequalityReport &r : reports) {
		json by_L = json::array();
		for (const auto &[L, ratio] : r.ratios_by_L) {
			csv << to_string(r.name) << "," << real(L) << "," << c.ineq_ensemble << "," << real(ratio) << ","
			    << (r.violated ? 1 : 0) << "\n";
			by_L.push_back({{"L", L}, {"max_ratio", jnum(ratio)}});
		}
		json lj = {{"lemma", to_string(r.name)},
		           {"ensemble_size", r.ensemble_size},
		           {"skipped", r.skipped},
		           {"max_ratio", jnum(r.max_ratio)},
		           {"spread", jnum(sweep_spread(r))},
		           {"violated", r.violated},
		           {"by_L", by_L}};
		if (r.name == Lemma::korn) {
			lj["min_ratio"] = jnum(r.min_ratio);
			lj["identity_residual"] = jnum(r.identity_residual);
		}
		lemmas.push_back(lj);
		log << "ineq: " << to_string(r.name) << " max ratio " << real(r.max_ratio) << (r.violated ? " VIOLATED" : "")
		    << "\n";
	}

	json blocks = json::array();
	double block_max = 0.0;
	bool block_violated = false;
	std::uint64_t s = c.seed * 7919u + 17u;
	for (const double L : c.ineq_L) {
		const GridSpec g = matched_grid(L, c.ineq_ny);
		std::vector<ScalarField> fields;
		for (int n = 0; n < c.ineq_ensemble; ++n)
			fields.push_back(random_corner_field(g, s++));
		const InequalityReport b = stage("inequality_lab", [&] { return check_building_block(fields); });
		block_max = std::max(block_max, b.max_ratio);
		block_violated = block_violated || b.violated;
		blocks.push_back({{"L", L}, {"max_ratio", jnum(b.max_ratio)}});
	}

	out.write("sweep.csv", csv.str());
	out.write_json("ineq_report.json", {{"schema", schema_prefix + "ineq-report/v1"},
	                                    {"slip", {{"k0", c.k0}, {"k1", c.k1}}},
	                                    {"mu", c.mu},
	                                    {"ny", c.ineq_ny},
	                                    {"ensemble_size", c.ineq_ensemble},
	                                    {"seed", c.seed},
	                                    {"lemmas", lemmas},
	                                    {"building_block",
	                                     {{"bound", 2.0},
	                                      {"max_ratio", jnum(block_max)},
	                                      {"violated", block_violated},
	                                      {"by_L", blocks}}}});
	out.plot("sweep.csv", PlotKind::sweep, "sweep.svg");
	return "";
}

std::string run_evolve(const RunConfig &c, OutputDir &out, std::ostream &log) {
	EvolveResult r = evolve(c, c.record_every, log);
	out.write("ledger.csv", ledger_csv(r.traj.records));
	out.write_json("summary.json", r.summary);
	out.write_json("checkpoint.json", checkpoint_json(*r.basis, r.traj.states.back()));
	out.plot("ledger.csv", PlotKind::energy, "energy.svg");
	return "";
}

json stokes_json(const StokesSolution &s, const StokesProblem &p) {
	return {{"schema", schema_prefix + "stokes/v1"},
	        {"grid", grid_json(p.grid())},
	        {"slip", {{"k0", p.slip.k0}, {"k1", p.slip.k1}}},
	        {"mu", p.mu},
	        {"beta", p.beta},
	        {"iterations", s.iterations},
	        {"converged", s.converged},
	        {"last_change", jnum(s.last_change)},
	        {"contraction", jnum(s.contraction)},
	        {"h2_report",
	         {{"u_h2", jnum(s.h2_report.u_h2)},
	          {"p_grad_l2", jnum(s.h2_report.p_grad_l2)},
	          {"F_l2", jnum(s.h2_report.F_l2)},
	          {"u_l2", jnum(s.h2_report.u_l2)},
	          {"ratio", jnum(s.h2_report.ratio)}}},
	        {"w_h1_ratio", jnum(s.w_h1_ratio)},
	        {"psi_h2_ratio", jnum(s.psi_h2_ratio)},
	        {"psi_h3_ratio", jnum(s.psi_h3_ratio)},
	        {"curl_defect", jnum(s.curl_defect)},
	        {"divergence_residual", jnum(s.divergence_residual)},
	        {"navier_bc_residual", jnum(s.navier_bc_residual)},
	        {"p_grad_curl", jnum(s.p_grad_curl)}};
}

std::string run_stokes(const RunConfig &c, OutputDir &out, std::ostream &log) {
	const StokesProblem p =
		stage("stokes_regularity", [&] { return StokesProblem::make(stokes_load(c), c.slip(), c.mu, c.shift().beta); });
	StokesSolveOptions opt;
	opt.max_iterations = c.stokes_max_iterations;
	const StokesSolution s = stage("stokes_regularity", [&] { return stokes_solve(p, opt); });
	log << "stokes: " << (s.converged ? "converged" : "NOT converged") << " after " << s.iterations
	    << " iterations, H2 ratio " << real(s.h2_report.ratio) << "\n";
	std::ostringstream f;
	f << "x,y,u1,u2,px,py,w,psi\n";
	const GridSpec &g = p.grid();
	for (int j = 0; j < g.rows(); ++j)
		for (int i = 0; i < g.cols(); ++i)
			f << real(g.x(i)) << "," << real(g.y(j)) << "," << real(s.u.u1(i, j)) << "," << real(s.u.u2(i, j)) << ","
			  << real(s.p_grad.u1(i, j)) << "," << real(s.p_grad.u2(i, j)) << "," << real(s.w(i, j)) << ","
			  << real(s.psi(i, j)) << "\n";
	out.write_json("stokes.json", stokes_json(s, p));
	out.write("stokes_fields.csv", f.str());
	if (!s.converged)
		return "stokes_regularity: fixed-point iteration did not converge in " + std::to_string(s.iterations) +
		       " iterations (last change " + real(s.last_change) + ")";
	return "";
}

std::string run_audit(const RunConfig &c, OutputDir &out, std::ostream &log) {
	EvolveResult r = evolve(c, 1, log);
	const StrongSolutionReport a =
		stage("stokes_regularity", [&] { return strong_solution_audit(*r.sys, r.traj, c.audit_every); });
	json samples = json::array();
	for (const AuditSample &s : a.samples)
		samples.push_back({{"t", jnum(s.t)},
		                   {"u_h2", jnum(s.u_h2)},
		                   {"stokes_u_h2", jnum(s.stokes_u_h2)},
		                   {"p_grad_l2", jnum(s.p_grad_l2)},
		                   {"reconstruction_gap", jnum(s.reconstruction_gap)},
		                   {"convection_l2", jnum(s.convection_l2)},
		                   {"linf_times_grad", jnum(s.linf_grad)},
		                   {"interpolated_bound", jnum(s.interpolated)},
		                   {"chain_holds", s.chain_holds},
		                   {"p_grad_curl", jnum(s.p_grad_curl)},
		                   {"p_grad_curl_relative", jnum(s.p_grad_curl_rel)},
		                   {"iterations", s.iterations},
		                   {"converged", s.converged}});
	log << "audit: " << a.samples.size() << " samples, sup(|u|_H2 + |grad p|) = " << real(a.sup_h2_plus_p)
	    << ", chain " << (a.chain_holds ? "holds" : "FAILS") << "\n";
	std::vector<EnergyRecord> sampled;
	for (std::size_t i = 0; i < r.traj.records.size(); i += std::size_t(c.record_every))
		sampled.push_back(r.traj.records[i]);
	out.write("ledger.csv", ledger_csv(sampled));
	out.write_json("audit.json", {{"schema", schema_prefix + "audit/v1"},
	                              {"basis_hash", basis_hash(*r.basis)},
	                              {"initial_h2", jnum(a.initial_h2)},
	                              {"forcing_h1_time", jnum(a.forcing_h1t)},
	                              {"sup_u_h2", jnum(a.sup_u_h2)},
	                              {"sup_h2_plus_p_grad", jnum(a.sup_h2_plus_p)},
	                              {"realized_constant", jnum(a.realized_constant)},
	                              {"max_p_grad_curl_relative", jnum(a.max_p_grad_curl_rel)},
	                              {"chain_holds", a.chain_holds},
	                              {"all_converged", a.all_converged},
	                              {"samples", samples}});
	out.plot("ledger.csv", PlotKind::energy, "energy.svg");
	return "";
}

} // namespace

const std::vector<std::string> &subcommands() {
	static const std::vector<std::string> s = {"eig", "ineq", "evolve", "stokes", "audit"};
	return s;
}

std::shared_ptr<const GalerkinBasis> build_basis(const RunConfig &c) {
	return std::make_shared<const GalerkinBasis>(solve_eigenpairs(c.m, c.a_max, c.grid(), c.slip(), c.mu, c.shift()));
}

ForcingSpec forcing_from_config(const RunConfig &c) {
	if (c.forcing_f1.empty())
		return ForcingSpec::none();
	if (c.forcing_dt_f1.empty())
		return ForcingSpec::general(component(c.forcing_f1, c.L), component(c.forcing_f2, c.L));
	return ForcingSpec::general(component(c.forcing_f1, c.L), component(c.forcing_f2, c.L),
	                            component(c.forcing_dt_f1, c.L), component(c.forcing_dt_f2, c.L));
}

GalerkinState initial_state(const RunConfig &c, std::shared_ptr<const GalerkinBasis> basis) {
	const int m = basis->size();
	if (c.initial == "spectrum" || c.initial == "lowest") {
		GalerkinState s{Eigen::VectorXd::Zero(m), 0.0, basis};
		for (int j = 0; j < (c.initial == "lowest" ? 1 : m); ++j)
			s.g(j) = c.amplitude / double(j + 1);
		return s;
	}
	if (c.initial == "random") {
		const VectorField u = random_admissible_field(basis->grid, basis->slip, basis->mu, c.seed);
		GalerkinState s = project_initial(u, basis).state;
		const double n = s.g.norm();
		if (n > 0.0)
			s.g *= c.amplitude / n;
		return s;
	}
	if (c.initial.rfind("psi:", 0) == 0) {
		const ScalarField psi = sample_xy(basis->grid, c.initial.substr(4), BoundaryTag::dirichlet_zero);
		velocity_from_stream(psi);
		const ScalarField projected = robin_project_stream(psi, basis->slip, basis->mu);
		GalerkinState s = project_initial(velocity_from_stream(projected), basis).state;
		s.g *= c.amplitude;
		return s;
	}
	throw ConfigError("initial", "unknown initial-data spec '" + c.initial + "'");
}

VectorField stokes_load(const RunConfig &c) {
	const GridSpec g = c.grid();
	return VectorField(sample_xy(g, c.stokes_f1, BoundaryTag::none), sample_xy(g, c.stokes_f2, BoundaryTag::none));
}

std::string basis_hash(const GalerkinBasis &basis) {
	return hex64(fnv1a64(basis_json(basis).dump() + profiles_csv(basis)));
}

RunArtifacts run(const std::string &subcommand, const RunConfig &config, std::ostream &log) {
	validate(config);
	using Runner = std::string (*)(const RunConfig &, OutputDir &, std::ostream &);
	Runner fn = nullptr;
	if (subcommand == "eig")
		fn = run_eig;
	else if (subcommand == "ineq")
		fn = run_ineq;
	else if (subcommand == "evolve")
		fn = run_evolve;
	else if (subcommand == "stokes")
		fn = run_stokes;
	else if (subcommand == "audit")
		fn = run_audit;
	else
		throw Error("unknown subcommand '" + subcommand + "'");
	OutputDir out(config.out);
	const std::string failure = fn(config, out, log);
	return out.finish(subcommand, config, failure);
}

} // namespace stripns
