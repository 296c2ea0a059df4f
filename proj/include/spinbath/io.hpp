#pragma once

#include <map>
#include <string>
#include <vector>

namespace spinbath {

// Flat "key = value" text files; '#' starts a comment, blank lines ignored.
// Used for run configs and donor presets.
std::map<std::string, std::string> read_key_value_file(const std::string& path);
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// SHA-1 of a byte string, lowercase hex.  Used to fingerprint bath
// realizations in output files.
std::string sha1_hex(const std::string& bytes);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace spinbath
