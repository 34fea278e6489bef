#include "elastica/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace elastica::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(key, value).second) {
            throw std::invalid_argument("duplicate key '" + key + "'");
        }
    }
    return out;
}

double parse_double(std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

Eigen::VectorXd parse_vector(std::string_view text) {
    std::vector<double> comps;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            comps.push_back(parse_double(token));
            token.clear();
        }
    };
    for (char ch : text) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '(' || ch == ')') flush();
        else token.push_back(ch);
    }
    flush();
    if (comps.empty()) throw std::invalid_argument("empty vector");
    return Eigen::Map<Eigen::VectorXd>(comps.data(), static_cast<Eigen::Index>(comps.size()));
}

double get_double(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing key '" + key + "'");
    return parse_double(it->second);
}

double get_double(const KeyValues& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_double(it->second);
}

long get_int(const KeyValues& kv, const std::string& key, long fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string_view text = trim(it->second);
    long v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("not an integer for '" + key + "': '" + it->second + "'");
    }
    return v;
}

Eigen::VectorXd get_vector(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing key '" + key + "'");
    return parse_vector(it->second);
}

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string format_vector(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace elastica::io
