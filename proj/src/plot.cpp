#include "stripns/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "stripns/io.hpp"

namespace stripns {

namespace {

struct Series {
	std::string name;
	std::vector<double> x, y;
};

struct Frame {
	std::string title, xlabel, ylabel;
	bool xlog = false;
	bool step = false;
	std::vector<Series> series;
};

constexpr double width = 760, height = 460;
constexpr double left = 80, right = 190, top = 50, bottom = 60;
constexpr const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.4g", v);
	return buf;
}

std::string coord(double v) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.2f", v);
	return buf;
}

std::string escape(const std::string &s) {
	std::string out;
	for (const char c : s) {
		switch (c) {
		case '&': out += "&amp;"; break;
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '"': out += "&quot;"; break;
		default: out += c;
		}
	}
	return out;
}

// Tick positions at 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi) {
	const double span = hi - lo;
	const double raw = span / 5.0;
	const double mag = std::pow(10.0, std::floor(std::log10(raw)));
	double step = mag;
	for (const double f : {1.0, 2.0, 5.0, 10.0})
		if (f * mag >= raw) {
			step = f * mag;
			break;
		}
	std::vector<double> t;
	for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
		t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
	return t;
}

std::string render(const Frame &f) {
	double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
	for (const Series &s : f.series)
		for (std::size_t i = 0; i < s.x.size(); ++i) {
			const double x = f.xlog ? std::log2(s.x[i]) : s.x[i];
			if (!std::isfinite(x) || !std::isfinite(s.y[i]))
				continue;
			xlo = std::min(xlo, x);
			xhi = std::max(xhi, x);
			ylo = std::min(ylo, s.y[i]);
			yhi = std::max(yhi, s.y[i]);
		}
	if (!std::isfinite(xlo) || !std::isfinite(ylo))
		throw Error("plot: no finite data points");
	if (xhi == xlo) {
		xlo -= 0.5;
		xhi += 0.5;
	}
	if (yhi == ylo) {
		const double pad = std::max(1e-12, 0.1 * std::abs(yhi));
		ylo -= pad;
		yhi += pad;
	}
	const double ypad = 0.05 * (yhi - ylo);
	ylo -= ypad;
	yhi += ypad;

	const double pw = width - left - right, ph = height - top - bottom;
	const auto X = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
	const auto Y = [&](double y) { return top + (yhi - y) / (yhi - ylo) * ph; };

	std::ostringstream o;
	o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
	  << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
	o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
	o << "<text x=\"" << coord(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
	  << escape(f.title) << "</text>\n";
	o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
	  << "\" fill=\"none\" stroke=\"black\"/>\n";

	std::vector<double> xt;
	if (f.xlog)
		for (double v = std::ceil(xlo); v <= xhi + 1e-9; v += 1.0)
			xt.push_back(v);
	else
		xt = nice_ticks(xlo, xhi);
	for (const double v : xt) {
		const double px = X(v);
		o << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(top + ph) << "\" x2=\"" << coord(px) << "\" y2=\""
		  << coord(top + ph + 5) << "\" stroke=\"black\"/>\n";
		o << "<text x=\"" << coord(px) << "\" y=\"" << coord(top + ph + 19) << "\" text-anchor=\"middle\">"
		  << num(f.xlog ? std::exp2(v) : v) << "</text>\n";
	}
	for (const double v : nice_ticks(ylo, yhi)) {
		const double py = Y(v);
		o << "<line x1=\"" << coord(left - 5) << "\" y1=\"" << coord(py) << "\" x2=\"" << coord(left) << "\" y2=\""
		  << coord(py) << "\" stroke=\"black\"/>\n";
		o << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(py) << "\" x2=\"" << coord(left + pw) << "\" y2=\""
		  << coord(py) << "\" stroke=\"#dddddd\"/>\n";
		o << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(py + 4) << "\" text-anchor=\"end\">" << num(v)
		  << "</text>\n";
	}
	o << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(height - 15) << "\" text-anchor=\"middle\">"
	  << escape(f.xlabel) << "</text>\n";
	o << "<text transform=\"translate(20," << coord(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
	  << escape(f.ylabel) << "</text>\n";

	for (std::size_t k = 0; k < f.series.size(); ++k) {
		const Series &s = f.series[k];
		const char *color = palette[k % std::size(palette)];
		std::string pts;
		double prev_y = 0.0;
		bool first = true;
		for (std::size_t i = 0; i < s.x.size(); ++i) {
			const double x = f.xlog ? std::log2(s.x[i]) : s.x[i];
			if (!std::isfinite(x) || !std::isfinite(s.y[i]))
				continue;
			if (f.step && !first)
				pts += coord(X(x)) + "," + coord(Y(prev_y)) + " ";
			pts += coord(X(x)) + "," + coord(Y(s.y[i])) + " ";
			prev_y = s.y[i];
			first = false;
		}
		o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"" << pts << "\"/>\n";
		const double ly = top + 10 + 20.0 * double(k);
		o << "<line x1=\"" << coord(left + pw + 15) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(left + pw + 40)
		  << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
		o << "<text x=\"" << coord(left + pw + 46) << "\" y=\"" << coord(ly + 4) << "\">" << escape(s.name)
		  << "</text>\n";
	}
	o << "</svg>\n";
	return o.str();
}

double cell_real(const std::string &v, std::size_t row, const std::string &column) {
	double x = 0.0;
	const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
	if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
		if (v == "inf")
			return std::numeric_limits<double>::infinity();
		if (v == "nan")
			return std::numeric_limits<double>::quiet_NaN();
		throw Error("plot: row " + std::to_string(row + 1) + ", column '" + column + "': not a number: '" + v + "'");
	}
	return x;
}

} // namespace

std::string to_string(PlotKind kind) {
	switch (kind) {
	case PlotKind::energy: return "energy";
	case PlotKind::spectrum: return "spectrum";
	case PlotKind::sweep: return "sweep";
	}
	return "";
}

PlotKind plot_kind_from_string(const std::string &name) {
	for (const PlotKind k : {PlotKind::energy, PlotKind::spectrum, PlotKind::sweep})
		if (to_string(k) == name)
			return k;
	throw Error("unknown plot kind '" + name + "' (expected energy, spectrum or sweep)");
}

const std::vector<std::string> &plot_schema(PlotKind kind) {
	static const std::vector<std::string> energy = {"t",             "kinetic", "dissipation", "boundary_production",
	                                                "forcing_power", "dt_norm", "h1_norm"};
	static const std::vector<std::string> spectrum = {"j", "x_mode", "Lambda", "lambda_shifted"};
	static const std::vector<std::string> sweep = {"lemma", "L", "ensemble_size", "max_ratio", "violated"};
	switch (kind) {
	case PlotKind::energy: return energy;
	case PlotKind::spectrum: return spectrum;
	case PlotKind::sweep: break;
	}
	return sweep;
}

CsvTable parse_csv(const std::string &text) {
	CsvTable t;
	std::istringstream in(text);
	std::string line;
	const auto split = [](const std::string &l) {
		std::vector<std::string> cells;
		std::stringstream ss(l);
		std::string c;
		while (std::getline(ss, c, ','))
			cells.push_back(c);
		if (!l.empty() && l.back() == ',')
			cells.emplace_back();
		return cells;
	};
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		if (line.empty())
			continue;
		if (t.header.empty())
			t.header = split(line);
		else
			t.rows.push_back(split(line));
	}
	return t;
}

std::string render_plot(const std::string &csv_text, PlotKind kind) {
	const CsvTable t = parse_csv(csv_text);
	if (t.header.empty())
		throw Error("plot: empty CSV");
	const auto &schema = plot_schema(kind);
	if (t.header != schema) {
		std::string want;
		for (const auto &c : schema)
			want += (want.empty() ? "" : ",") + c;
		throw Error("plot: CSV header does not match the " + to_string(kind) + " schema (" + want + ")");
	}
	if (t.rows.empty())
		throw Error("plot: CSV has a header but no data rows");
	for (std::size_t r = 0; r < t.rows.size(); ++r)
		if (t.rows[r].size() != schema.size())
			throw Error("plot: row " + std::to_string(r + 1) + " has " + std::to_string(t.rows[r].size()) +
			            " cells, expected " + std::to_string(schema.size()));

	Frame f;
	switch (kind) {
	case PlotKind::energy: {
		f.title = "Energy ledger";
		f.xlabel = "t";
		f.ylabel = "value";
		for (std::size_t c = 1; c < schema.size(); ++c) {
			Series s{schema[c], {}, {}};
			for (std::size_t r = 0; r < t.rows.size(); ++r) {
				s.x.push_back(cell_real(t.rows[r][0], r, schema[0]));
				s.y.push_back(cell_real(t.rows[r][c], r, schema[c]));
			}
			f.series.push_back(std::move(s));
		}
		break;
	}
	case PlotKind::spectrum: {
		f.title = "Stokes spectrum";
		f.xlabel = "j";
		f.ylabel = "Lambda_j";
		f.step = true;
		Series s{"Lambda", {}, {}};
		for (std::size_t r = 0; r < t.rows.size(); ++r) {
			s.x.push_back(cell_real(t.rows[r][0], r, schema[0]));
			s.y.push_back(cell_real(t.rows[r][2], r, schema[2]));
		}
		f.series.push_back(std::move(s));
		break;
	}
	case PlotKind::sweep: {
		f.title = "Inequality ratios across L";
		f.xlabel = "L";
		f.ylabel = "max ratio";
		f.xlog = true;
		std::vector<std::string> order;
		std::map<std::string, Series> by_lemma;
		for (std::size_t r = 0; r < t.rows.size(); ++r) {
			const std::string &name = t.rows[r][0];
			if (!by_lemma.count(name)) {
				order.push_back(name);
				by_lemma[name] = Series{name, {}, {}};
			}
			const double L = cell_real(t.rows[r][1], r, schema[1]);
			if (!(L > 0.0))
				throw Error("plot: row " + std::to_string(r + 1) + ": L must be positive");
			by_lemma[name].x.push_back(L);
			by_lemma[name].y.push_back(cell_real(t.rows[r][3], r, schema[3]));
		}
		for (const auto &name : order)
			f.series.push_back(by_lemma[name]);
		break;
	}
	}
	return render(f);
}

void emit_plot(const std::string &csv_path, PlotKind kind, const std::string &svg_path) {
	write_file_atomic(svg_path, render_plot(read_file(csv_path), kind));
}

} // namespace stripns
