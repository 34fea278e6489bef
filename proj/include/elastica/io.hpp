#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace elastica::io {

// key=value lines, '#' starts a comment, blank lines ignored. Duplicate keys
// and lines without '=' are errors (std::invalid_argument).
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::string_view text);

double get_double(const KeyValues& kv, const std::string& key);
double get_double(const KeyValues& kv, const std::string& key, double fallback);
long get_int(const KeyValues& kv, const std::string& key, long fallback);
// Vector written as comma- or whitespace-separated components.
Eigen::VectorXd get_vector(const KeyValues& kv, const std::string& key);

Eigen::VectorXd parse_vector(std::string_view text);
double parse_double(std::string_view text);

// %.<digits>g formatting; 17 digits round-trips exactly.
std::string format_double(double v, int digits = 17);
std::string format_vector(const Eigen::VectorXd& v);

std::string read_file(const std::string& path);

} // namespace elastica::io
