#include "pwfold/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace pwfold {

using nlohmann::json;

namespace {

json mat(const Mat2& m) { return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})}); }
json vec(Vec2 v) { return json::array({v.x, v.y}); }

json eigen(const EigenDirection& e) {
    return {{"value", e.value}, {"vector", vec(e.vector)}, {"location", to_string(e.location)}};
}

} // namespace

json to_json(const NormalParameters& p) {
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
            {"delta", p.delta}, {"subtype", to_string(p.subtype)}};
}

json to_json(const ReturnMapAnalysis& a) {
    json j = {{"matrix", mat(a.matrix)},
              {"trace", a.trace},
              {"det", a.det},
              {"eigenvalues", json::array({json::array({a.eigenvalues.first.real(), a.eigenvalues.first.imag()}),
                                           json::array({a.eigenvalues.second.real(), a.eigenvalues.second.imag()})})},
              {"fixed_point_class", to_string(a.fixed_point_class)}};
    if (a.fixed_point_class == FixedPointClass::NonHyperbolicComplex) j["tau"] = a.tau;
    if (a.contracting) j["contracting"] = eigen(*a.contracting);
    if (a.expanding) j["expanding"] = eigen(*a.expanding);
    if (a.fixed_point_class == FixedPointClass::Saddle) j["demelo_palis"] = demelo_palis(a);
    return j;
}

json to_json(const StabilityVerdict& v) {
    json j = {{"kind", to_string(v.kind)}, {"label", v.label()}};
    if (v.reason) j["reason"] = to_string(*v.reason);
    if (v.which) j["which"] = to_string(*v.which);
    if (!v.class_descriptor.empty()) j["class_descriptor"] = v.class_descriptor;
    if (!v.witness.empty()) j["witness"] = v.witness;
    if (v.moduli) {
        json conv = json::array();
        for (const auto& [p, q] : v.moduli->convergents) conv.push_back(json::array({p, q}));
        j["moduli"] = {{"tau", v.moduli->tau},
                       {"tau_over_pi", v.moduli->tau_over_pi},
                       {"convergents", conv},
                       {"leaf_id", v.moduli->leaf_id}};
    }
    return j;
}

json classify_report(const PiecewiseSystem& z, Vec3 p, double tol) {
    const SigmaClassification c = classify_point(z, p, tol);
    json j;
    j["system"] = z.name;
    j["point"] = json::array({p.x, p.y, p.z});
    j["tolerance"] = tol;
    json s = {{"kind", to_string(c.kind)}, {"xf", c.xf}, {"yf", c.yf}};
    if (c.tangency) {
        s["tangency"] = to_string(c.tangency->kind);
        if (c.tangency->subtype) s["subtype"] = to_string(*c.tangency->subtype);
    } else {
        s["tangency"] = "RegularRegular";
    }
    j["sigma"] = s;
    if (c.tangency && c.tangency->kind == TangencyKind::FoldFold) {
        const NormalParameters np = normal_parameters(z, p, tol);
        j["normal_parameters"] = to_json(np);
        const SlidingRegion r = sliding_region_class(np);
        j["region"] = {{"tag", to_string(r.tag)}, {"claim", r.claim}, {"on_boundary", r.on_boundary}};
        const Mat2 lin = foldfold_sliding_linearization(np);
        j["sliding_linearization"] = {{"matrix", mat(lin)},
                                      {"trace", lin.trace()},
                                      {"det", lin.det()},
                                      {"discriminant", lin.discriminant()}};
        if (np.subtype == FoldFoldSubtype::Invisible) j["return_map"] = to_json(return_map_analysis(np));
        if (np.parabolic()) {
            const TransversalityCoefficients tc = parabolic_transversality(np);
            j["transversality"] = {{"d_coeff", tc.d_coeff}, {"t_coeff", tc.t_coeff}};
            const ConnectionRegion cr = connection_region(np);
            j["connection_region"] = {{"exists", cr.exists},
                                      {"degenerate", cr.degenerate},
                                      {"direction", vec(cr.direction)},
                                      {"description", cr.description}};
        }
    }
    j["verdict"] = to_json(stability_verdict(z, p, tol));
    return j;
}

void SweepSpec::check() const {
    for (const SweepRange* r : {&alpha, &beta}) {
        if (r->n < 2) throw Error(ErrorCode::Precondition, "sweep resolution must be at least 2");
        if (!std::isfinite(r->lo) || !std::isfinite(r->hi)) {
            throw Error(ErrorCode::Precondition, "sweep bounds must be finite");
        }
    }
    if (!std::isfinite(gamma) || gamma == 0.0) throw Error(ErrorCode::Precondition, "gamma must be nonzero");
    if (delta != 1 && delta != -1) throw Error(ErrorCode::Precondition, "delta must be +1 or -1");
}

SweepRow sweep_cell(double alpha, double beta, double gamma, int delta) {
    const NormalParameters p = NormalParameters::make(alpha, beta, gamma, delta);
    SweepRow r;
    r.alpha = alpha;
    r.beta = beta;
    r.gamma = gamma;
    r.delta = delta;
    r.subtype = to_string(p.subtype);
    r.tau = std::numeric_limits<double>::quiet_NaN();
    const StabilityVerdict v = stability_verdict(p);
    r.region = to_string(v.region->tag);
    r.claim = v.region->claim;
    r.verdict = to_string(v.kind);
    if (v.reason) {
        r.reason = to_string(*v.reason);
        if (v.which) r.reason += std::string("(") + to_string(*v.which) + ")";
    } else if (!v.witness.empty()) {
        r.reason = v.witness;
    }
    if (p.subtype == FoldFoldSubtype::Invisible) {
        const ReturnMapAnalysis a = return_map_analysis(p);
        r.fixed_point_class = to_string(a.fixed_point_class);
        switch (a.fixed_point_class) {
        case FixedPointClass::Saddle:
            // Cell names follow the return-map diagram: I and II are the
            // mixed-sign quadrants, III and IV lie beyond the hyperbola.
            r.cell = alpha > 0 ? (beta > 0 ? "III" : "I") : (beta > 0 ? "II" : "IV");
            break;
        case FixedPointClass::NonHyperbolicComplex:
            r.cell = "NH";
            r.tau = a.tau;
            break;
        default: r.cell = "boundary"; break;
        }
    }
    return r;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads) {
    spec.check();
    const int na = spec.alpha.n, nb = spec.beta.n;
    std::vector<SweepRow> rows(static_cast<std::size_t>(na) * nb);
    const auto at = [](const SweepRange& r, int i) { return r.lo + (r.hi - r.lo) * i / (r.n - 1); };
    const auto work = [&](unsigned w, unsigned nw) {
        for (int i = static_cast<int>(w); i < na; i += static_cast<int>(nw)) {
            for (int k = 0; k < nb; ++k) {
                rows[static_cast<std::size_t>(i) * nb + k] =
                    sweep_cell(at(spec.alpha, i), at(spec.beta, k), spec.gamma, spec.delta);
            }
        }
    };
    threads = std::max(1u, std::min(threads, static_cast<unsigned>(na)));
    if (threads == 1) {
        work(0, 1);
        return rows;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& t : pool) t.join();
    return rows;
}

std::string sweep_csv_header() {
    return "alpha,beta,gamma,delta,subtype,region,claim,cell,fixed_point_class,verdict,reason,tau";
}

std::string to_csv(const SweepRow& r) {
    std::ostringstream o;
    o.precision(17);
    o << r.alpha << ',' << r.beta << ',' << r.gamma << ',' << r.delta << ',' << r.subtype << ','
      << r.region << ',' << r.claim << ',' << r.cell << ',' << r.fixed_point_class << ','
      << r.verdict << ',' << r.reason << ',';
    if (std::isfinite(r.tau)) o << r.tau;
    return o.str();
}

} // namespace pwfold
