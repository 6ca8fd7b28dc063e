#include "recip/common.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace recip {

std::string to_string_int128(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

// one signed real literal starting at pos; advances pos
double parse_real(const std::string& t, size_t& pos) {
    size_t start = pos;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) ++pos;
    bool digits = false;
    while (pos < t.size() && (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '.')) {
        digits = true;
        ++pos;
    }
    if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E')) {
        size_t save = pos;
        ++pos;
        if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) ++pos;
        if (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
            while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        } else {
            pos = save;
        }
    }
    if (!digits) {
        // bare "i" / "+i" / "-i"
        return (start < t.size() && t[start] == '-') ? -1.0 : 1.0;
    }
    return std::stod(t.substr(start, pos - start));
}

}  // namespace

cplx parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t.empty()) throw ConfigError("empty complex literal");
    size_t pos = 0;
    double re = 0.0, im = 0.0;
    double first = parse_real(t, pos);
    if (pos < t.size() && (t[pos] == 'i' || t[pos] == 'j')) {
        im = first;
        ++pos;
        if (pos != t.size()) throw ConfigError("bad complex literal: " + text);
        return {0.0, im};
    }
    re = first;
    if (pos == t.size()) return {re, 0.0};
    double second = parse_real(t, pos);
    if (pos >= t.size() || (t[pos] != 'i' && t[pos] != 'j') || pos + 1 != t.size())
        throw ConfigError("bad complex literal: " + text);
    im = second;
    return {re, im};
}

std::string format_complex(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real();
    if (z.imag() != 0.0) {
        os << (z.imag() >= 0 ? "+" : "-");
        os << std::abs(z.imag()) << "i";
    }
    return os.str();
}

}  // namespace recip
