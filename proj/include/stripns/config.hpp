#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stripns/grid.hpp"
#include "stripns/stokes_spectral.hpp"

namespace stripns {

class ConfigError : public Error {
public:
	ConfigError(const std::string &key, const std::string &what)
		: Error(key.empty() ? what : "config key '" + key + "': " + what), key(key) {}
	std::string key;
};

// Plain-text `key = value` run description; `#` starts a comment. The key
// set and defaults are listed in the README.
struct RunConfig {
	double L = 1.0;
	int nx = 0; // 0: chosen so that hx is close to hy
	int ny = 32;
	double k0 = 0.0;
	double k1 = 0.0;
	double mu = 1.0;
	std::optional<double> epsilon; // default mu / 2
	std::optional<double> beta;    // default beta0 + 1
	int m = 16;
	int a_max = 0; // 0: automatic
	double dt = 1e-3;
	double T = 1.0;
	int record_every = 1;

	// spectrum | lowest | random | psi:<expression in x, y, L>
	std::string initial = "spectrum";
	double amplitude = 1.0;

	// expressions in x, y, t, L; both empty means f = 0
	std::string forcing_f1;
	std::string forcing_f2;
	std::string forcing_dt_f1;
	std::string forcing_dt_f2;

	double uniqueness_delta = 0.0; // 0 skips the perturbation experiment

	// expressions in x, y, L
	std::string stokes_f1 = "sin(pi*(x+L)/L)*y*(1-y)";
	std::string stokes_f2 = "cos(pi*(x+L)/(2*L))*y";
	int stokes_max_iterations = 200;

	std::vector<double> ineq_L = {1.0, 2.0, 4.0, 8.0, 16.0};
	int ineq_ensemble = 200;
	int ineq_ny = 32;

	int audit_every = 100;

	std::uint64_t seed = 1;
	std::string out = "out";

	GridSpec grid() const;
	SlipPair slip() const { return SlipPair(k0, k1); }
	ShiftParams shift() const { return ShiftParams::make(slip(), mu, epsilon, beta); }
	int steps() const;

	// Every key except `out` with its effective value, one per line in a fixed
	// order. Two runs with the same canonical text produce the same artifacts.
	std::string canonical() const;
};

const std::vector<std::string> &config_keys();

RunConfig parse_config_text(const std::string &text, const std::string &origin = "<string>");
RunConfig parse_config(const std::string &path);

// Checks every precondition that does not need an assembled operator.
void validate(const RunConfig &config);

// Rejects dt above the stability bound of the assembled Galerkin operator.
void check_time_step(const RunConfig &config, double bound);

} // namespace stripns
