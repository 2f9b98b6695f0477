#include "pwfold/system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pwfold {

using nlohmann::json;

double Box::max_half_width() const {
    return 0.5 * std::max({xmax - xmin, ymax - ymin, zmax - zmin});
}

double Box::sigma_area() const {
    if (zmin > 0.0 || zmax < 0.0) return 0.0;
    return std::max(0.0, xmax - xmin) * std::max(0.0, ymax - ymin);
}

double PiecewiseSystem::coefficient_scale() const {
    return std::max(X.max_abs_coeff(), Y.max_abs_coeff());
}

Poly3 switching_function() { return Poly3::variable(Var::Z); }

LieDerivatives lie_derivatives(const PiecewiseSystem& z) {
    const Poly3 f = switching_function();
    LieDerivatives d;
    d.xf = lie_derivative(z.X, f);
    d.yf = lie_derivative(z.Y, f);
    d.x2f = lie_derivative(z.X, d.xf);
    d.y2f = lie_derivative(z.Y, d.yf);
    d.xyf = lie_derivative(z.X, d.yf);
    d.yxf = lie_derivative(z.Y, d.xf);
    return d;
}

namespace {

double parse_coefficient(const json& c) {
    double v = 0.0;
    if (c.is_number()) {
        v = c.get<double>();
    } else if (c.is_string()) {
        // Non-finite values cannot be written as JSON numbers; accept the
        // textual spellings so that they are rejected with the right code.
        const auto s = c.get<std::string>();
        char* end = nullptr;
        v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') {
            throw Error(ErrorCode::Schema, "coefficient is not a number: \"" + s + "\"");
        }
    } else {
        throw Error(ErrorCode::Schema, "coefficient must be a number");
    }
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite, "non-finite coefficient");
    }
    return v;
}

Poly3 parse_component(const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::Schema, std::string(what) + " must be an array");
    std::vector<Poly3::Term> terms;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array() ||
            entry[0].size() != 3) {
            throw Error(ErrorCode::Schema,
                        std::string(what) + ": each term must be [[i,j,k], coefficient]");
        }
        Exponent e{};
        for (int k = 0; k < 3; ++k) {
            const auto& ek = entry[0][k];
            if (!ek.is_number_integer() || ek.get<long long>() < 0) {
                throw Error(ErrorCode::Schema,
                            std::string(what) + ": exponents must be non-negative integers");
            }
            if (ek.get<long long>() > kHardMaxDegree) {
                throw Error(ErrorCode::DegreeCap, std::string(what) + ": exponent too large");
            }
            e[k] = static_cast<int>(ek.get<long long>());
        }
        terms.push_back({e, parse_coefficient(entry[1])});
    }
    return Poly3::from_terms(terms);
}

VectorField3 parse_field(const json& j, const char* what) {
    if (!j.is_object()) throw Error(ErrorCode::Schema, std::string(what) + " must be an object");
    VectorField3 f;
    const std::string w(what);
    if (j.contains("cx")) f.cx = parse_component(j["cx"], (w + ".cx").c_str());
    if (j.contains("cy")) f.cy = parse_component(j["cy"], (w + ".cy").c_str());
    if (j.contains("cz")) f.cz = parse_component(j["cz"], (w + ".cz").c_str());
    return f;
}

json component_json(const Poly3& p) {
    json arr = json::array();
    for (const auto& t : p.terms()) {
        arr.push_back(json::array({json::array({t.exp[0], t.exp[1], t.exp[2]}), t.coeff}));
    }
    return arr;
}

json field_json(const VectorField3& f) {
    return json{{"cx", component_json(f.cx)}, {"cy", component_json(f.cy)},
                {"cz", component_json(f.cz)}};
}

} // namespace

PiecewiseSystem load_system(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedJson, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::Schema, "system document must be an object");
    PiecewiseSystem z;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw Error(ErrorCode::Schema, "name must be a string");
        z.name = doc["name"].get<std::string>();
    }
    if (doc.contains("box")) {
        const auto& b = doc["box"];
        if (!b.is_array() || b.size() != 6) {
            throw Error(ErrorCode::Schema, "box must be [xmin,xmax,ymin,ymax,zmin,zmax]");
        }
        double v[6];
        for (int i = 0; i < 6; ++i) v[i] = parse_coefficient(b[i]);
        z.box = {v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    if (!doc.contains("X") || !doc.contains("Y")) {
        throw Error(ErrorCode::Schema, "both X and Y fields are required");
    }
    z.X = parse_field(doc["X"], "X");
    z.Y = parse_field(doc["Y"], "Y");
    const Box& b = z.box;
    if (b.xmin > b.xmax || b.ymin > b.ymax || b.zmin > b.zmax || b.sigma_area() <= 0.0) {
        throw Error(ErrorCode::EmptyBox, "box has no sigma slice of positive area");
    }
    return z;
}

PiecewiseSystem load_system_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedJson, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_system(ss.str());
}

std::string serialize(const PiecewiseSystem& z) {
    const Box& b = z.box;
    json doc{{"name", z.name},
             {"box", json::array({b.xmin, b.xmax, b.ymin, b.ymax, b.zmin, b.zmax})},
             {"X", field_json(z.X)},
             {"Y", field_json(z.Y)}};
    return doc.dump(2);
}

PiecewiseSystem build_normal_form(double alpha, double beta, double gamma, int delta,
                                  const HigherOrderTerms& hot) {
    if (delta != 1 && delta != -1) throw Error(ErrorCode::Precondition, "delta must be +1 or -1");
    if (gamma == 0.0) throw Error(ErrorCode::Precondition, "gamma must be nonzero");
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
        throw Error(ErrorCode::NonFinite, "non-finite normal parameter");
    }
    if ((!hot.fx.is_zero() && hot.fx.order() < 1) || (!hot.fy.is_zero() && hot.fy.order() < 1)) {
        throw Error(ErrorCode::Precondition,
                    "higher-order terms of Y's first two components must vanish at the origin");
    }
    if (!hot.fz.is_zero() && hot.fz.order() < 2) {
        throw Error(ErrorCode::Precondition,
                    "higher-order terms of Yf must vanish to second order");
    }
    const Poly3 x = Poly3::variable(Var::X);
    const Poly3 y = Poly3::variable(Var::Y);
    PiecewiseSystem z;
    z.name = "normal-form";
    z.X = {Poly3(alpha), Poly3(1.0), static_cast<double>(delta) * y};
    z.Y = {Poly3(gamma) + hot.fx, Poly3(beta) + hot.fy, x + hot.fz};
    return z;
}

namespace {

// Gauss-Newton on |F(x, y, 0)|^2 for a field F; returns the polished point
// and residual norm.
std::pair<Vec2, double> polish_zero(const VectorField3& f, Vec2 q) {
    const Poly3 dx[3] = {f.cx.partial(Var::X), f.cy.partial(Var::X), f.cz.partial(Var::X)};
    const Poly3 dy[3] = {f.cx.partial(Var::Y), f.cy.partial(Var::Y), f.cz.partial(Var::Y)};
    auto residual = [&](Vec2 p) {
        const Vec3 v = f.eval(on_sigma(p));
        return norm(v);
    };
    for (int it = 0; it < 50; ++it) {
        const Vec3 p3 = on_sigma(q);
        const Vec3 v = f.eval(p3);
        const double r[3] = {v.x, v.y, v.z};
        double a = 0, b = 0, d = 0, gx = 0, gy = 0;
        for (int k = 0; k < 3; ++k) {
            const double jx = dx[k].eval(p3), jy = dy[k].eval(p3);
            a += jx * jx;
            b += jx * jy;
            d += jy * jy;
            gx += jx * r[k];
            gy += jy * r[k];
        }
        const double det = a * d - b * b;
        if (std::fabs(det) < 1e-300) break;
        const Vec2 step{(d * gx - b * gy) / det, (a * gy - b * gx) / det};
        q = q - step;
        if (norm(step) < 1e-15 * (1.0 + norm(q))) break;
    }
    return {q, residual(q)};
}

std::optional<Vec2> find_zero_on_sigma(const VectorField3& f, const Box& box) {
    constexpr int n = 41;
    constexpr double tol = 1e-10;
    std::vector<double> mag(n * n);
    auto node = [&](int i, int j) {
        return Vec2{box.xmin + (box.xmax - box.xmin) * i / (n - 1),
                    box.ymin + (box.ymax - box.ymin) * j / (n - 1)};
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mag[i * n + j] = norm(f.eval(on_sigma(node(i, j))));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double m = mag[i * n + j];
            bool local_min = true;
            for (int di = -1; di <= 1 && local_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di, b = j + dj;
                    if ((di || dj) && a >= 0 && a < n && b >= 0 && b < n && mag[a * n + b] < m) {
                        local_min = false;
                        break;
                    }
                }
            }
            if (!local_min) continue;
            const auto [q, res] = polish_zero(f, node(i, j));
            if (res <= tol && box.contains_planar(q)) return q;
        }
    }
    return std::nullopt;
}

} // namespace

ValidationReport validate(const PiecewiseSystem& z) {
    ValidationReport r;
    const int d = std::max(z.X.degree(), z.Y.degree());
    if (d > 0 && 3 * d - 2 > kDefaultMaxDegree) {
        r.warnings.push_back("third-order Lie derivatives exceed the degree cap (input degree " +
                             std::to_string(d) + ")");
    }
    const Box& b = z.box;
    if (b.sigma_area() <= 0.0) r.warnings.push_back("box has no sigma slice of positive area");
    if (b.volume() <= 0.0) r.warnings.push_back("box has zero volume");
    if (b.sigma_area() > 0.0) {
        r.x_zero = find_zero_on_sigma(z.X, b);
        r.y_zero = find_zero_on_sigma(z.Y, b);
        if (r.x_zero) r.warnings.push_back("X vanishes on Sigma");
        if (r.y_zero) r.warnings.push_back("Y vanishes on Sigma");
    }
    return r;
}

} // namespace pwfold
