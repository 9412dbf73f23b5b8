#pragma once

// Text form of a GaussianSet:
//   set      := interval ("|" interval)*
//   interval := "(" bound "," bound ")"
//   bound    := decimal | "-inf" | "inf"
// Whitespace is ignored between tokens.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fgi/errors.hpp"
#include "fgi/set_model.hpp"

namespace fgi::cli {

struct SetExpression {
    std::string source;
    GaussianSet set;
};

namespace detail {

class SetLexer {
public:
    explicit SetLexer(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    std::size_t position() {
        skip_space();
        return pos_;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but text ended", pos_);
        if (text_[pos_] != c) {
            throw ParseError(std::string("expected '") + c + "', found '" + text_[pos_] + "'", pos_);
        }
        ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double bound() {
        skip_space();
        const std::size_t start = pos_;
        if (text_.substr(pos_, 4) == "-inf") {
            pos_ += 4;
            return -kInf;
        }
        if (text_.substr(pos_, 3) == "inf") {
            pos_ += 3;
            return kInf;
        }
        std::size_t end = pos_;
        while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                                      text_[end] == '-' || text_[end] == '+' || text_[end] == 'e' ||
                                      text_[end] == 'E')) {
            ++end;
        }
        if (end == start) throw ParseError("expected a number, -inf or inf", start);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, v);
        if (ec != std::errc() || ptr != text_.data() + end) throw ParseError("malformed number", start);
        pos_ = end;
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a set description. Inverted or empty intervals are reported at the
/// offset of their lower bound.
inline SetExpression parse_set(std::string_view text) {
    detail::SetLexer lex(text);
    std::vector<Interval> ivs;
    do {
        lex.expect('(');
        const std::size_t lo_at = lex.position();
        const double lo = lex.bound();
        lex.expect(',');
        const double hi = lex.bound();
        lex.expect(')');
        if (!(lo < hi)) throw ParseError("interval lower bound must be below its upper bound", lo_at);
        ivs.push_back({lo, hi});
    } while (lex.accept('|'));
    if (!lex.at_end()) throw ParseError("unexpected trailing text", lex.position());
    return {std::string(text), GaussianSet(std::move(ivs))};
}

inline std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_set(const GaussianSet& e) {
    std::string out;
    for (const auto& iv : e.intervals()) {
        if (!out.empty()) out += '|';
        out += '(' + format_number(iv.lo) + ',' + format_number(iv.hi) + ')';
    }
    return out;
}

}  // namespace fgi::cli
