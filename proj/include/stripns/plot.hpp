#pragma once

#include <string>
#include <vector>

#include "stripns/grid.hpp"

namespace stripns {

enum class PlotKind { energy, spectrum, sweep };

std::string to_string(PlotKind kind);
PlotKind plot_kind_from_string(const std::string &name);

// Header the CSV must carry for each kind, in order.
const std::vector<std::string> &plot_schema(PlotKind kind);

struct CsvTable {
	std::vector<std::string> header;
	std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string &text);

// Self-contained SVG. Errors on an empty table or a header that does not
// match the schema of `kind`.
std::string render_plot(const std::string &csv_text, PlotKind kind);

void emit_plot(const std::string &csv_path, PlotKind kind, const std::string &svg_path);

} // namespace stripns
