#include "stripns/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "stripns/expression.hpp"
#include "stripns/inequality_lab.hpp"

namespace stripns {

namespace {

std::string trim(const std::string &s) {
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string::npos)
		return "";
	const auto e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

std::string format_real(double v) {
	char buf[64];
	const auto r = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, r.ptr);
}

double parse_real(const std::string &key, const std::string &v) {
	double x = 0.0;
	const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
	if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
		throw ConfigError(key, "expected a finite real number, got '" + v + "'");
	return x;
}

int parse_int(const std::string &key, const std::string &v) {
	int x = 0;
	const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
	if (r.ec != std::errc() || r.ptr != v.data() + v.size())
		throw ConfigError(key, "expected an integer, got '" + v + "'");
	return x;
}

std::uint64_t parse_u64(const std::string &key, const std::string &v) {
	std::uint64_t x = 0;
	const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
	if (r.ec != std::errc() || r.ptr != v.data() + v.size())
		throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
	return x;
}

std::vector<double> parse_list(const std::string &key, const std::string &v) {
	std::vector<double> out;
	std::stringstream ss(v);
	std::string item;
	while (std::getline(ss, item, ','))
		out.push_back(parse_real(key, trim(item)));
	return out;
}

void check_expression(const std::string &key, const std::string &text, std::vector<std::string> vars) {
	if (text.empty())
		return;
	try {
		Expression::parse(text, std::move(vars));
	} catch (const ExpressionError &e) {
		throw ConfigError(key, e.what());
	}
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;

const std::vector<std::pair<std::string, Setter>> &setters() {
	static const std::vector<std::pair<std::string, Setter>> table = {
		{"L", [](RunConfig &c, const std::string &k, const std::string &v) { c.L = parse_real(k, v); }},
		{"nx", [](RunConfig &c, const std::string &k, const std::string &v) { c.nx = parse_int(k, v); }},
		{"ny", [](RunConfig &c, const std::string &k, const std::string &v) { c.ny = parse_int(k, v); }},
		{"k0", [](RunConfig &c, const std::string &k, const std::string &v) { c.k0 = parse_real(k, v); }},
		{"k1", [](RunConfig &c, const std::string &k, const std::string &v) { c.k1 = parse_real(k, v); }},
		{"mu", [](RunConfig &c, const std::string &k, const std::string &v) { c.mu = parse_real(k, v); }},
		{"epsilon", [](RunConfig &c, const std::string &k, const std::string &v) { c.epsilon = parse_real(k, v); }},
		{"beta", [](RunConfig &c, const std::string &k, const std::string &v) { c.beta = parse_real(k, v); }},
		{"m", [](RunConfig &c, const std::string &k, const std::string &v) { c.m = parse_int(k, v); }},
		{"a_max", [](RunConfig &c, const std::string &k, const std::string &v) { c.a_max = parse_int(k, v); }},
		{"dt", [](RunConfig &c, const std::string &k, const std::string &v) { c.dt = parse_real(k, v); }},
		{"T", [](RunConfig &c, const std::string &k, const std::string &v) { c.T = parse_real(k, v); }},
		{"record_every",
		 [](RunConfig &c, const std::string &k, const std::string &v) { c.record_every = parse_int(k, v); }},
		{"initial", [](RunConfig &c, const std::string &, const std::string &v) { c.initial = v; }},
		{"amplitude", [](RunConfig &c, const std::string &k, const std::string &v) { c.amplitude = parse_real(k, v); }},
		{"forcing_f1", [](RunConfig &c, const std::string &, const std::string &v) { c.forcing_f1 = v; }},
		{"forcing_f2", [](RunConfig &c, const std::string &, const std::string &v) { c.forcing_f2 = v; }},
		{"forcing_dt_f1", [](RunConfig &c, const std::string &, const std::string &v) { c.forcing_dt_f1 = v; }},
		{"forcing_dt_f2", [](RunConfig &c, const std::string &, const std::string &v) { c.forcing_dt_f2 = v; }},
		{"uniqueness_delta",
		 [](RunConfig &c, const std::string &k, const std::string &v) { c.uniqueness_delta = parse_real(k, v); }},
		{"stokes_f1", [](RunConfig &c, const std::string &, const std::string &v) { c.stokes_f1 = v; }},
		{"stokes_f2", [](RunConfig &c, const std::string &, const std::string &v) { c.stokes_f2 = v; }},
		{"stokes_max_iterations",
		 [](RunConfig &c, const std::string &k, const std::string &v) { c.stokes_max_iterations = parse_int(k, v); }},
		{"ineq_L", [](RunConfig &c, const std::string &k, const std::string &v) { c.ineq_L = parse_list(k, v); }},
		{"ineq_ensemble",
		 [](RunConfig &c, const std::string &k, const std::string &v) { c.ineq_ensemble = parse_int(k, v); }},
		{"ineq_ny", [](RunConfig &c, const std::string &k, const std::string &v) { c.ineq_ny = parse_int(k, v); }},
		{"audit_every",
		 [](RunConfig &c, const std::string &k, const std::string &v) { c.audit_every = parse_int(k, v); }},
		{"seed", [](RunConfig &c, const std::string &k, const std::string &v) { c.seed = parse_u64(k, v); }},
		{"out", [](RunConfig &c, const std::string &, const std::string &v) { c.out = v; }},
	};
	return table;
}

} // namespace

const std::vector<std::string> &config_keys() {
	static const std::vector<std::string> keys = [] {
		std::vector<std::string> k;
		for (const auto &[name, fn] : setters())
			k.push_back(name);
		return k;
	}();
	return keys;
}

GridSpec RunConfig::grid() const {
	if (nx > 0)
		return GridSpec(StripGeometry(L), nx, ny);
	return matched_grid(L, ny);
}

int RunConfig::steps() const { return int(std::llround(T / dt)); }

std::string RunConfig::canonical() const {
	std::ostringstream s;
	const auto line = [&](const std::string &k, const std::string &v) { s << k << " = " << v << "\n"; };
	const ShiftParams sh = shift();
	line("L", format_real(L));
	line("nx", std::to_string(grid().nx()));
	line("ny", std::to_string(ny));
	line("k0", format_real(k0));
	line("k1", format_real(k1));
	line("mu", format_real(mu));
	line("epsilon", format_real(sh.epsilon));
	line("beta", format_real(sh.beta));
	line("m", std::to_string(m));
	line("a_max", std::to_string(a_max));
	line("dt", format_real(dt));
	line("T", format_real(T));
	line("record_every", std::to_string(record_every));
	line("initial", initial);
	line("amplitude", format_real(amplitude));
	line("forcing_f1", forcing_f1);
	line("forcing_f2", forcing_f2);
	line("forcing_dt_f1", forcing_dt_f1);
	line("forcing_dt_f2", forcing_dt_f2);
	line("uniqueness_delta", format_real(uniqueness_delta));
	line("stokes_f1", stokes_f1);
	line("stokes_f2", stokes_f2);
	line("stokes_max_iterations", std::to_string(stokes_max_iterations));
	std::string Ls;
	for (std::size_t i = 0; i < ineq_L.size(); ++i)
		Ls += (i ? "," : "") + format_real(ineq_L[i]);
	line("ineq_L", Ls);
	line("ineq_ensemble", std::to_string(ineq_ensemble));
	line("ineq_ny", std::to_string(ineq_ny));
	line("audit_every", std::to_string(audit_every));
	line("seed", std::to_string(seed));
	return s.str();
}

void validate(const RunConfig &c) {
	if (!(c.L >= 1.0))
		throw ConfigError("L", "must be at least 1, got " + format_real(c.L));
	if (c.ny < 8)
		throw ConfigError("ny", "must be at least 8, got " + std::to_string(c.ny));
	if (c.nx != 0 && c.nx < 8)
		throw ConfigError("nx", "must be at least 8 (or 0 for automatic), got " + std::to_string(c.nx));
	if (!(c.mu > 0.0))
		throw ConfigError("mu", "must be positive, got " + format_real(c.mu));
	if (c.epsilon && !(*c.epsilon > 0.0 && *c.epsilon < c.mu))
		throw ConfigError("epsilon", "must lie in (0, mu), got " + format_real(*c.epsilon));
	if (c.beta) {
		const double b0 = beta_threshold(c.slip(), c.epsilon.value_or(0.5 * c.mu));
		if (!(*c.beta > b0))
			throw ConfigError("beta", "must exceed beta0 = " + format_real(b0) + ", got " + format_real(*c.beta));
	}
	if (c.m < 1)
		throw ConfigError("m", "must be positive, got " + std::to_string(c.m));
	if (c.a_max < 0)
		throw ConfigError("a_max", "must be non-negative, got " + std::to_string(c.a_max));
	const GridSpec g = c.grid();
	if (c.a_max > g.nx())
		throw ConfigError("a_max", "exceeds nx = " + std::to_string(g.nx()));
	if (!(c.dt > 0.0))
		throw ConfigError("dt", "must be positive, got " + format_real(c.dt));
	if (!(c.T > 0.0))
		throw ConfigError("T", "must be positive, got " + format_real(c.T));
	if (std::abs(c.T / c.dt - std::round(c.T / c.dt)) > 1e-9 * (c.T / c.dt))
		throw ConfigError("T", "must be an integer multiple of dt = " + format_real(c.dt));
	if (c.record_every < 1)
		throw ConfigError("record_every", "must be positive, got " + std::to_string(c.record_every));
	if (c.steps() % c.record_every != 0)
		throw ConfigError("record_every", "must divide the step count " + std::to_string(c.steps()));
	if (!(c.uniqueness_delta >= 0.0))
		throw ConfigError("uniqueness_delta", "must be non-negative");

	if (c.initial.rfind("psi:", 0) == 0)
		check_expression("initial", c.initial.substr(4), {"x", "y", "L"});
	else if (c.initial != "spectrum" && c.initial != "lowest" && c.initial != "random")
		throw ConfigError("initial", "expected spectrum, lowest, random or psi:<expression>, got '" + c.initial + "'");

	const std::vector<std::string> xyt = {"x", "y", "t", "L"};
	check_expression("forcing_f1", c.forcing_f1, xyt);
	check_expression("forcing_f2", c.forcing_f2, xyt);
	check_expression("forcing_dt_f1", c.forcing_dt_f1, xyt);
	check_expression("forcing_dt_f2", c.forcing_dt_f2, xyt);
	if (c.forcing_f1.empty() != c.forcing_f2.empty())
		throw ConfigError(c.forcing_f1.empty() ? "forcing_f1" : "forcing_f2",
		                  "both forcing components must be given together");
	if (c.forcing_dt_f1.empty() != c.forcing_dt_f2.empty())
		throw ConfigError(c.forcing_dt_f1.empty() ? "forcing_dt_f1" : "forcing_dt_f2",
		                  "both forcing time derivatives must be given together");
	if (!c.forcing_dt_f1.empty() && c.forcing_f1.empty())
		throw ConfigError("forcing_dt_f1", "given without forcing_f1 and forcing_f2");

	check_expression("stokes_f1", c.stokes_f1, {"x", "y", "L"});
	check_expression("stokes_f2", c.stokes_f2, {"x", "y", "L"});
	if (c.stokes_f1.empty() || c.stokes_f2.empty())
		throw ConfigError(c.stokes_f1.empty() ? "stokes_f1" : "stokes_f2", "must not be empty");
	if (c.stokes_max_iterations < 1)
		throw ConfigError("stokes_max_iterations", "must be positive");

	if (c.ineq_L.empty())
		throw ConfigError("ineq_L", "needs at least one value");
	if (!std::is_sorted(c.ineq_L.begin(), c.ineq_L.end()) ||
	    std::adjacent_find(c.ineq_L.begin(), c.ineq_L.end()) != c.ineq_L.end())
		throw ConfigError("ineq_L", "must be strictly increasing");
	if (c.ineq_L.front() < 1.0)
		throw ConfigError("ineq_L", "values must be at least 1");
	if (c.ineq_ensemble < 1)
		throw ConfigError("ineq_ensemble", "must be positive");
	if (c.ineq_ny < 8)
		throw ConfigError("ineq_ny", "must be at least 8");
	if (c.audit_every < 1)
		throw ConfigError("audit_every", "must be positive");
	if (c.out.empty())
		throw ConfigError("out", "must not be empty");
}

RunConfig parse_config_text(const std::string &text, const std::string &origin) {
	RunConfig c;
	std::set<std::string> seen;
	std::istringstream in(text);
	std::string raw;
	int lineno = 0;
	while (std::getline(in, raw)) {
		++lineno;
		const std::string line = trim(raw.substr(0, raw.find('#')));
		if (line.empty())
			continue;
		const auto eq = line.find('=');
		const std::string where = origin + ":" + std::to_string(lineno);
		if (eq == std::string::npos)
			throw ConfigError("", where + ": expected 'key = value', got '" + line + "'");
		const std::string key = trim(line.substr(0, eq));
		const std::string value = trim(line.substr(eq + 1));
		const auto &table = setters();
		const auto it = std::find_if(table.begin(), table.end(), [&](const auto &e) { return e.first == key; });
		if (it == table.end())
			throw ConfigError(key, "unknown key (" + where + ")");
		if (!seen.insert(key).second)
			throw ConfigError(key, "given twice (" + where + ")");
		if (value.empty() && key != "forcing_f1" && key != "forcing_f2" && key != "forcing_dt_f1" &&
		    key != "forcing_dt_f2")
			throw ConfigError(key, "missing value (" + where + ")");
		it->second(c, key, value);
	}
	validate(c);
	return c;
}

RunConfig parse_config(const std::string &path) {
	std::ifstream f(path);
	if (!f)
		throw ConfigError("", "cannot open config file '" + path + "'");
	std::ostringstream s;
	s << f.rdbuf();
	return parse_config_text(s.str(), path);
}

void check_time_step(const RunConfig &config, double bound) {
	if (config.dt > bound)
		throw ConfigError("dt", format_real(config.dt) + " exceeds the stability bound " + format_real(bound) +
		                            " of the assembled Galerkin operator");
}

} // namespace stripns
