#pragma once

#include <cstdint>
#include <string>

namespace stripns {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string &data);
std::string hex64(std::uint64_t v);

// Writes `path + ".partial"`, flushes, then renames onto `path`, so a crash
// never leaves a truncated file under the final name.
void write_file_atomic(const std::string &path, const std::string &content);

std::string read_file(const std::string &path);

} // namespace stripns
