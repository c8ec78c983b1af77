#include "fourblock/rational.hpp"

#include <ostream>

namespace fourblock {

std::ostream& operator<<(std::ostream& os, const BigInt& x) { return os << x.raw().get_str(); }

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

std::string Rational::str() const {
    std::string s = v_.get_num().get_str();
    if (v_.get_den() != 1) {
        s += "/";
        s += v_.get_den().get_str();
    }
    return s;
}

Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        fail(ErrorCode::ParseError, "bad rational literal '" + text + "'");
    }
}

Rational rat_mod(const Rational& x, const Rational& t) {
    if (t.sign() <= 0) fail(ErrorCode::DomainViolation, "rat_mod with nonpositive modulus");
    Rational q = x / t;
    return x - t * Rational(q.floor());
}

}  // namespace fourblock
