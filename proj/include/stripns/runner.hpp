#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "stripns/config.hpp"
#include "stripns/galerkin.hpp"
#include "stripns/stokes_spectral.hpp"

namespace stripns {

const std::vector<std::string> &subcommands();

struct RunArtifacts {
	std::string directory;
	std::vector<std::string> files; // relative names, manifest last
	std::string outputs_hash;      // FNV-1a over the artifact hashes, manifest excluded
	std::string failure;           // non-empty when the run completed but did not succeed
};

// Runs eig | ineq | evolve | stokes | audit and writes every artifact
// atomically under config.out, followed by manifest.json. Errors before the
// artifacts exist are thrown; a completed run that failed its own acceptance
// (a non-converged Stokes iteration) reports through `failure`.
RunArtifacts run(const std::string &subcommand, const RunConfig &config, std::ostream &log);

// Building blocks shared with the tests.
std::shared_ptr<const GalerkinBasis> build_basis(const RunConfig &config);
ForcingSpec forcing_from_config(const RunConfig &config);
GalerkinState initial_state(const RunConfig &config, std::shared_ptr<const GalerkinBasis> basis);
VectorField stokes_load(const RunConfig &config);
std::string basis_hash(const GalerkinBasis &basis);

} // namespace stripns
