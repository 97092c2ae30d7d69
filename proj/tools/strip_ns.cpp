#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stripns/config.hpp"
#include "stripns/galerkin.hpp"
#include "stripns/plot.hpp"
#include "stripns/runner.hpp"

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_config = 2;
constexpr int exit_failed = 3;

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Navier-Stokes on a strip with Navier-slip walls: eigenbasis, inequalities, Galerkin evolution, "
	             "Stokes regularity"};
	app.require_subcommand(1);
	app.set_version_flag("--version", std::string(STRIPNS_VERSION_STRING));

	struct RunOptions {
		std::string config;
		std::string out;
		std::uint64_t seed = 0;
	};
	struct RunCommand {
		std::string name;
		CLI::App *app;
		CLI::Option *out, *seed;
	};
	RunOptions opts;
	std::vector<RunCommand> runs;
	const std::vector<std::pair<std::string, std::string>> described = {
		{"eig", "build the Stokes eigenbasis, export it and certify it"},
		{"ineq", "check the functional inequalities over random ensembles and an L sweep"},
		{"evolve", "integrate the Galerkin system and audit the energy ledgers"},
		{"stokes", "solve the steady Stokes problem through the vorticity pipeline"},
		{"audit", "evolve, then audit the strong-solution estimate along the run"}};
	for (const auto &[name, help] : described) {
		CLI::App *sub = app.add_subcommand(name, help);
		sub->add_option("--config", opts.config, "key = value run description")->required()->check(CLI::ExistingFile);
		CLI::Option *o = sub->add_option("--out", opts.out, "output directory (overrides the config key 'out')");
		CLI::Option *s = sub->add_option("--seed", opts.seed, "random seed (overrides the config key 'seed')");
		runs.push_back({name, sub, o, s});
	}

	std::string plot_kind, csv_path, svg_path;
	CLI::App *plot = app.add_subcommand("plot", "render a CSV artifact as an SVG plot");
	plot->add_option("kind", plot_kind, "energy | spectrum | sweep")
		->required()
		->check(CLI::IsMember({"energy", "spectrum", "sweep"}));
	plot->add_option("--csv", csv_path, "input CSV")->required()->check(CLI::ExistingFile);
	plot->add_option("--out", svg_path, "output SVG")->required();

	CLI11_PARSE(app, argc, argv);

	try {
		if (plot->parsed()) {
			stripns::emit_plot(csv_path, stripns::plot_kind_from_string(plot_kind), svg_path);
			std::cout << "wrote " << svg_path << "\n";
			return 0;
		}
		for (const RunCommand &cmd : runs) {
			if (!cmd.app->parsed())
				continue;
			const std::string &name = cmd.name;
			stripns::RunConfig config = stripns::parse_config(opts.config);
			if (cmd.out->count() > 0)
				config.out = opts.out;
			if (cmd.seed->count() > 0)
				config.seed = opts.seed;
			std::cout << "# effective configuration\n" << config.canonical() << "out = " << config.out << "\n";
			const stripns::RunArtifacts a = stripns::run(name, config, std::cout);
			for (const auto &f : a.files)
				std::cout << "wrote " << a.directory << "/" << f << "\n";
			if (!a.failure.empty()) {
				std::cerr << "strip-ns " << name << ": " << a.failure << "\n";
				return exit_failed;
			}
			return 0;
		}
	} catch (const stripns::ConfigError &e) {
		std::cerr << "strip-ns: configuration error: " << e.what() << "\n";
		return exit_config;
	} catch (const stripns::BlowUpError &e) {
		std::cerr << "strip-ns: blow-up at t = " << e.time << ": " << e.what() << "\n";
		return exit_runtime;
	} catch (const std::exception &e) {
		std::cerr << "strip-ns: " << e.what() << "\n";
		return exit_runtime;
	}
	return exit_runtime;
}
