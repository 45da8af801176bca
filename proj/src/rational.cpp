#include "syzlab/rational.hpp"

#include "syzlab/error.hpp"

#include <cctype>
#include <cmath>

namespace syzlab {

Q parse_rational(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    if (text.empty()) throw Error(Errc::Parse, "empty rational literal");

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Q num = parse_rational(text.substr(0, slash));
        Q den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw Error(Errc::DivisionByZero, "zero denominator in '" + raw + "'");
        Q r = num / den;
        r.canonicalize();
        return r;
    }

    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    Z mant = 0;
    long scale = 0;
    bool any_digit = false;
    bool in_frac = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mant = mant * 10 + (c - '0');
            if (in_frac) --scale;
            any_digit = true;
        } else if (c == '.' && !in_frac) {
            in_frac = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw Error(Errc::Parse, "malformed number '" + raw + "'");
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') throw Error(Errc::Parse, "malformed number '" + raw + "'");
        ++pos;
        std::string ex = text.substr(pos);
        if (ex.empty()) throw Error(Errc::Parse, "malformed exponent in '" + raw + "'");
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(ex, &used);
        } catch (const std::exception&) {
            throw Error(Errc::Parse, "malformed exponent in '" + raw + "'");
        }
        if (used != ex.size()) throw Error(Errc::Parse, "malformed exponent in '" + raw + "'");
        scale += e;
    }
    Q r(mant);
    Z p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
    if (scale >= 0)
        r *= p10;
    else
        r /= p10;
    if (neg) r = -r;
    r.canonicalize();
    return r;
}

Q rational_from_double(double v) {
    if (!std::isfinite(v)) throw Error(Errc::Parse, "non-finite constant");
    Q r;
    mpq_set_d(r.get_mpq_t(), v);
    return r;
}

std::string to_string(const Q& q) { return q.get_str(); }

std::size_t hash_value(const Q& q) {
    std::size_t h = mpz_fdiv_ui(q.get_num_mpz_t(), 1000000007UL);
    h = h * 1315423911u + mpz_fdiv_ui(q.get_den_mpz_t(), 998244353UL);
    return h ^ (sgn(q) < 0 ? 0x5bd1e995u : 0u);
}

bool exact_sqrt(const Q& q, Q& out) {
    if (sgn(q) < 0) return false;
    Z n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    Z rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    out = Q(rn, rd);
    out.canonicalize();
    return true;
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::Parse: return "parse";
        case Errc::Schema: return "schema";
        case Errc::ChartMismatch: return "chart-mismatch";
        case Errc::DegreeOutOfRange: return "degree-out-of-range";
        case Errc::WrongBidegree: return "wrong-bidegree";
        case Errc::UnsupportedOrder: return "unsupported-order";
        case Errc::NonPeriodic: return "non-periodic";
        case Errc::Incompatible: return "incompatible";
        case Errc::Positivity: return "positivity";
        case Errc::DependsOnFibre: return "depends-on-fibre";
        case Errc::NotClosed: return "not-closed";
        case Errc::DegenerateJacobian: return "degenerate-jacobian";
        case Errc::NotExpressible: return "not-expressible";
        case Errc::DegreeMismatch: return "degree-mismatch";
        case Errc::NonAffineFamily: return "non-affine-family";
        case Errc::NonCellular: return "non-cellular";
        case Errc::BoundarySquare: return "boundary-square";
        case Errc::MissingModel: return "missing-model";
        case Errc::RelationViolated: return "relation-violated";
        case Errc::NonInvertible: return "non-invertible";
        case Errc::PatternViolation: return "pattern-violation";
        case Errc::InvariantViolation: return "invariant-violation";
        case Errc::NullFibreClass: return "null-fibre-class";
        case Errc::NotAligned: return "not-aligned";
        case Errc::NotPrimitive: return "not-primitive";
        case Errc::NotIsotropic: return "not-isotropic";
        case Errc::IrrationalPhase: return "irrational-phase";
        case Errc::DivisionByZero: return "division-by-zero";
        case Errc::Internal: return "internal";
    }
    return "unknown";
}

}  // namespace syzlab
