#include "spec_parse.hpp"

#include "lwreg/errors.hpp"

#include <cctype>
#include <charconv>

namespace lwreg::detail {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.empty() || ec != std::errc() || ptr != last)
        throw ParseError("not a number: '" + t + "'");
    return value;
}

CallSpec parse_call(const std::string& text) {
    const std::string t = trim(text);
    CallSpec call;
    const auto open = t.find('(');
    if (open == std::string::npos) {
        call.name = t;
    } else {
        if (t.back() != ')') throw ParseError("missing ')' in '" + t + "'");
        call.name = trim(t.substr(0, open));
        const std::string inner = t.substr(open + 1, t.size() - open - 2);
        if (!trim(inner).empty()) {
            std::size_t start = 0;
            while (true) {
                const auto comma = inner.find(',', start);
                call.args.push_back(parse_number(inner.substr(start, comma - start)));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
    }
    if (call.name.empty()) throw ParseError("empty specification");
    for (char c : call.name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw ParseError("bad name in '" + t + "'");
    return call;
}

} // namespace lwreg::detail
