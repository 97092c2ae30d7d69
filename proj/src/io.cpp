#include "stripns/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stripns/grid.hpp"

namespace stripns {

std::uint64_t fnv1a64(const std::string &data) {
	std::uint64_t h = 0xcbf29ce484222325ull;
	for (const unsigned char c : data) {
		h ^= c;
		h *= 0x100000001b3ull;
	}
	return h;
}

std::string hex64(std::uint64_t v) {
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
	return buf;
}

void write_file_atomic(const std::string &path, const std::string &content) {
	const std::string partial = path + ".partial";
	{
		std::ofstream f(partial, std::ios::binary | std::ios::trunc);
		if (!f)
			throw Error("cannot open '" + partial + "' for writing");
		f.write(content.data(), std::streamsize(content.size()));
		f.flush();
		if (!f)
			throw Error("write to '" + partial + "' failed");
	}
	std::error_code ec;
	std::filesystem::rename(partial, path, ec);
	if (ec)
		throw Error("cannot rename '" + partial + "' to '" + path + "': " + ec.message());
}

std::string read_file(const std::string &path) {
	std::ifstream f(path, std::ios::binary);
	if (!f)
		throw Error("cannot open '" + path + "'");
	std::ostringstream s;
	s << f.rdbuf();
	return s.str();
}

} // namespace stripns
