#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pdet::utf8 {

// Malformed sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

inline std::size_t length(std::string_view bytes) { return decode(bytes).size(); }

}  // namespace pdet::utf8
