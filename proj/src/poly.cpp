#include "pwfold/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwfold {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedJson: return "malformed-json";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::DegreeCap: return "degree-cap";
    case ErrorCode::EmptyBox: return "empty-box";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::DenominatorZero: return "denominator-zero";
    case ErrorCode::NotFoldFold: return "not-fold-fold";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::NoReturn: return "no-return";
    case ErrorCode::LeftBox: return "left-box";
    case ErrorCode::TimeOut: return "time-out";
    case ErrorCode::Integration: return "integration";
    }
    return "unknown";
}

namespace {

int total(const Exponent& e) { return e[0] + e[1] + e[2]; }

bool exp_less(const Poly3::Term& a, const Poly3::Term& b) { return a.exp < b.exp; }

// Sorts, merges like terms and drops exact zeros.
std::vector<Poly3::Term> normalize(std::vector<Poly3::Term> terms) {
    std::sort(terms.begin(), terms.end(), exp_less);
    std::vector<Poly3::Term> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
        if (!out.empty() && out.back().exp == t.exp) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(t);
        }
    }
    std::erase_if(out, [](const Poly3::Term& t) { return t.coeff == 0.0; });
    return out;
}

} // namespace

Poly3::Poly3(double c, int max_degree) : max_degree_(max_degree) {
    if (c != 0.0) {
        terms_.push_back({{0, 0, 0}, c});
    }
}

Poly3 Poly3::variable(Var v, int max_degree) {
    Exponent e{0, 0, 0};
    e[static_cast<int>(v)] = 1;
    return monomial(e, 1.0, max_degree);
}

Poly3 Poly3::monomial(Exponent e, double c, int max_degree) {
    const Term t{e, c};
    return from_terms(std::span<const Term>(&t, 1), max_degree);
}

Poly3 Poly3::from_terms(std::span<const Term> terms, int max_degree) {
    if (max_degree < 0 || max_degree > kHardMaxDegree) {
        throw Error(ErrorCode::DegreeCap, "degree cap must lie in [0, " +
                                              std::to_string(kHardMaxDegree) + "]");
    }
    for (const auto& t : terms) {
        if (t.exp[0] < 0 || t.exp[1] < 0 || t.exp[2] < 0) {
            throw Error(ErrorCode::Schema, "negative exponent");
        }
    }
    Poly3 p;
    p.max_degree_ = max_degree;
    p.terms_ = normalize(std::vector<Term>(terms.begin(), terms.end()));
    p.check_cap();
    return p;
}

void Poly3::check_cap() const {
    const int d = degree();
    if (d > max_degree_) {
        throw Error(ErrorCode::DegreeCap, "polynomial degree " + std::to_string(d) +
                                              " exceeds cap " + std::to_string(max_degree_));
    }
}

int Poly3::degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, total(t.exp));
    return d;
}

int Poly3::order() const {
    if (terms_.empty()) return -1;
    int d = total(terms_.front().exp);
    for (const auto& t : terms_) d = std::min(d, total(t.exp));
    return d;
}

double Poly3::coeff(Exponent e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{e, 0.0}, exp_less);
    return (it != terms_.end() && it->exp == e) ? it->coeff : 0.0;
}

double Poly3::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::fabs(t.coeff));
    return m;
}

double Poly3::eval(double x, double y, double z) const {
    if (terms_.empty()) return 0.0;
    std::array<double, kHardMaxDegree + 1> px{}, py{}, pz{};
    const int d = degree();
    px[0] = py[0] = pz[0] = 1.0;
    for (int i = 1; i <= d; ++i) {
        px[i] = px[i - 1] * x;
        py[i] = py[i - 1] * y;
        pz[i] = pz[i - 1] * z;
    }
    double s = 0.0;
    for (const auto& t : terms_) s += t.coeff * px[t.exp[0]] * py[t.exp[1]] * pz[t.exp[2]];
    return s;
}

Poly3 Poly3::partial(Var v) const {
    const int k = static_cast<int>(v);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (t.exp[k] == 0) continue;
        Term d = t;
        d.coeff *= t.exp[k];
        d.exp[k] -= 1;
        out.push_back(d);
    }
    Poly3 p;
    p.max_degree_ = max_degree_;
    p.terms_ = normalize(std::move(out));
    return p;
}

Poly3 Poly3::on_sigma() const {
    Poly3 p;
    p.max_degree_ = max_degree_;
    for (const auto& t : terms_) {
        if (t.exp[2] == 0) p.terms_.push_back(t);
    }
    return p;
}

Poly3 Poly3::with_max_degree(int max_degree) const {
    return from_terms(terms_, max_degree);
}

Poly3& Poly3::operator+=(const Poly3& o) {
    std::vector<Term> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    terms_ = normalize(std::move(all));
    max_degree_ = std::max(max_degree_, o.max_degree_);
    return *this;
}

Poly3& Poly3::operator-=(const Poly3& o) { return *this += -o; }

Poly3 operator-(const Poly3& a) {
    Poly3 p = a;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

Poly3 operator*(const Poly3& a, const Poly3& b) {
    Poly3 p;
    p.max_degree_ = std::max(a.max_degree_, b.max_degree_);
    if (a.is_zero() || b.is_zero()) return p;
    if (a.degree() + b.degree() > p.max_degree_) {
        throw Error(ErrorCode::DegreeCap,
                    "product degree " + std::to_string(a.degree() + b.degree()) +
                        " exceeds cap " + std::to_string(p.max_degree_));
    }
    std::vector<Poly3::Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            out.push_back({{s.exp[0] + t.exp[0], s.exp[1] + t.exp[1], s.exp[2] + t.exp[2]},
                           s.coeff * t.coeff});
        }
    }
    p.terms_ = normalize(std::move(out));
    return p;
}

Poly3 operator*(double s, const Poly3& a) {
    Poly3 p;
    p.max_degree_ = a.max_degree_;
    if (s == 0.0) return p;
    p.terms_ = a.terms_;
    for (auto& t : p.terms_) t.coeff *= s;
    std::erase_if(p.terms_, [](const Poly3::Term& t) { return t.coeff == 0.0; });
    return p;
}

std::string Poly3::to_string() const {
    if (terms_.empty()) return "0";
    static constexpr const char* names[3] = {"x", "y", "z"};
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& t : terms_) {
        if (first) {
            if (t.coeff < 0) os << '-';
        } else {
            os << (t.coeff < 0 ? " - " : " + ");
        }
        first = false;
        os << std::fabs(t.coeff);
        for (int k = 0; k < 3; ++k) {
            if (t.exp[k] == 0) continue;
            os << '*' << names[k];
            if (t.exp[k] > 1) os << '^' << t.exp[k];
        }
    }
    return os.str();
}

Vec3 VectorField3::eval(Vec3 p) const { return {cx.eval(p), cy.eval(p), cz.eval(p)}; }

int VectorField3::degree() const {
    return std::max({cx.degree(), cy.degree(), cz.degree()});
}

double VectorField3::max_abs_coeff() const {
    return std::max({cx.max_abs_coeff(), cy.max_abs_coeff(), cz.max_abs_coeff()});
}

Poly3 lie_derivative(const VectorField3& field, const Poly3& g) {
    return field.cx * g.partial(Var::X) + field.cy * g.partial(Var::Y) +
           field.cz * g.partial(Var::Z);
}

std::pair<Poly3, Poly3> gradient_on_sigma(const Poly3& g) {
    return {g.partial(Var::X).on_sigma(), g.partial(Var::Y).on_sigma()};
}

} // namespace pwfold
