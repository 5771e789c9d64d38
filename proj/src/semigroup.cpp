#include "mixlab/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace mixlab {

namespace {

WeightedLine build(int size, double h, const std::string& name,
                   double (*f)(double)) {
    if (size < 2) throw std::invalid_argument("WeightedLine: size must be >= 2");
    if (!(h > 0.0)) throw std::invalid_argument("WeightedLine: h must be > 0");
    WeightedLine wl;
    wl.size = size;
    wl.h = h;
    wl.weight_name = name;
    wl.rho.resize(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) wl.rho[static_cast<std::size_t>(j)] = f(j * h);
    return wl;
}

// linear interpolation of rho at off-grid x; nullopt past the boundary
std::optional<double> rho_at(const WeightedLine& wl, double x) {
    if (x < 0.0) return std::nullopt;
    double s = x / wl.h;
    int j = static_cast<int>(std::floor(s));
    if (j >= wl.size - 1) {
        if (s <= wl.size - 1 + 1e-9)
            return wl.rho[static_cast<std::size_t>(wl.size - 1)];
        return std::nullopt;
    }
    double frac = s - j;
    return (1.0 - frac) * wl.rho[static_cast<std::size_t>(j)] +
           frac * wl.rho[static_cast<std::size_t>(j + 1)];
}

}  // namespace

WeightedLine WeightedLine::exp_decay(int size, double h) {
    return build(size, h, "exp(-x)", [](double x) { return std::exp(-x); });
}

WeightedLine WeightedLine::inverse_linear(int size, double h) {
    return build(size, h, "1/(1+x)", [](double x) { return 1.0 / (1.0 + x); });
}

WeightedLine WeightedLine::constant(int size, double h) {
    return build(size, h, "1", [](double) { return 1.0; });
}

double WeightedLine::norm(const Vec& f) const {
    if (f.size() != size)
        throw std::invalid_argument("WeightedLine::norm: size mismatch");
    if (space == Space::c0) {
        double m = 0.0;
        for (int j = 0; j < size; ++j)
            m = std::max(m, std::abs(f[j]) * rho[static_cast<std::size_t>(j)]);
        return m;
    }
    double s = 0.0;
    for (int j = 0; j < size; ++j)
        s += std::pow(std::abs(f[j]) * rho[static_cast<std::size_t>(j)], p);
    return std::pow(h * s, 1.0 / p);
}

void WeightedLine::validate() const {
    if (size < 2 || static_cast<int>(rho.size()) != size)
        throw std::invalid_argument("WeightedLine: bad size");
    if (!(h > 0.0)) throw std::invalid_argument("WeightedLine: h must be > 0");
    for (double r : rho)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("WeightedLine: rho samples must be positive finite");
}

AdmissibilityTable admissibility(const WeightedLine& wl,
                                 const std::vector<double>& ts) {
    wl.validate();
    AdmissibilityTable table;
    table.admissible = true;
    for (double t : ts) {
        if (t < 0.0) throw std::invalid_argument("admissibility: t must be >= 0");
        double c = 0.0;
        bool any = false;
        for (int j = 0; j < wl.size; ++j) {
            auto r = rho_at(wl, wl.x(j) + t);
            if (!r) break;
            c = std::max(c, wl.rho[static_cast<std::size_t>(j)] / *r);
            any = true;
        }
        if (!any || !std::isfinite(c)) table.admissible = false;
        table.entries.emplace_back(t, c);
    }
    return table;
}

Vec translate(const WeightedLine& wl, const Vec& f, double t) {
    wl.validate();
    if (f.size() != wl.size)
        throw std::invalid_argument("translate: size mismatch");
    if (t < 0.0) throw std::invalid_argument("translate: t must be >= 0");
    double s = t / wl.h;
    long steps = std::lround(s);
    Vec out = Vec::Zero(wl.size);
    if (std::abs(s - static_cast<double>(steps)) < 1e-9) {
        for (int j = 0; j + steps < wl.size; ++j) out[j] = f[j + steps];
        return out;
    }
    long lo = static_cast<long>(std::floor(s));
    double frac = s - static_cast<double>(lo);
    for (int j = 0; j + lo + 1 < wl.size; ++j)
        out[j] = (1.0 - frac) * f[j + lo] + frac * f[j + lo + 1];
    return out;
}

double generator_residual(const WeightedLine& wl, double theta) {
    wl.validate();
    if (std::abs(theta) > pi / wl.h)
        throw std::invalid_argument("generator_residual: |theta| beyond grid resolution pi/h");
    Vec e(wl.size);
    for (int j = 0; j < wl.size; ++j) e[j] = std::polar(1.0, theta * wl.x(j));
    Vec r = Vec::Zero(wl.size);
    // last sample excluded: the zero pad is a boundary artifact, not a
    // generator error
    for (int j = 0; j + 1 < wl.size; ++j)
        r[j] = (e[j + 1] - e[j]) / wl.h - complex{0.0, theta} * e[j];
    return wl.norm(r);
}

EigenField make_semigroup_field(const WeightedLine& wl, double theta_lo,
                                double theta_hi, double t0, int node_count) {
    wl.validate();
    if (!(theta_hi > theta_lo))
        throw std::invalid_argument("make_semigroup_field: empty theta interval");
    if (node_count < 1)
        throw std::invalid_argument("make_semigroup_field: need >= 1 node");
    EigenField field;
    field.operator_ref = "translation-t0";
    double width = theta_hi - theta_lo;
    for (int k = 0; k < node_count; ++k) {
        EigenField::Node n;
        n.m = 1.0 / node_count;
        double theta = theta_lo + (k + 0.5) * width / node_count;
        n.phi = wrap_angle(theta * t0);
        n.E = Vec(wl.size);
        for (int j = 0; j < wl.size; ++j)
            n.E[j] = std::polar(1.0, theta * wl.x(j));
        field.nodes.push_back(std::move(n));
    }
    return field;
}

TruncatedOperator time_map(const WeightedLine& wl, double t0) {
    wl.validate();
    if (t0 < 0.0) throw std::invalid_argument("time_map: t0 must be >= 0");
    double s = t0 / wl.h;
    long steps = std::lround(s);
    if (std::abs(s - static_cast<double>(steps)) > 1e-9)
        throw std::invalid_argument("time_map: t0 must be grid-aligned");
    int m = wl.size;
    auto apply = [m, steps](const Vec& f) {
        Vec out = Vec::Zero(m);
        for (int j = 0; j + steps < m; ++j) out[j] = f[j + steps];
        return out;
    };
    auto adjoint = [m, steps](const Vec& g) {
        Vec out = Vec::Zero(m);
        for (int j = 0; j + steps < m; ++j) out[j + steps] = g[j];
        return out;
    };
    return TruncatedOperator(
        m, apply, adjoint, "translation t0=" + std::to_string(t0),
        "exact on samples supported " + std::to_string(steps) +
            " cells left of the boundary");
}

SemigroupMixingReport semigroup_mixing_report(const WeightedLine& wl,
                                              double theta_lo, double theta_hi,
                                              double t0, int horizon, double tol,
                                              int node_count) {
    wl.validate();
    SemigroupMixingReport rep;
    rep.admissibility = admissibility(wl, {t0});
    if (!rep.admissibility.admissible)
        throw std::invalid_argument("semigroup_mixing_report: weight not admissible at t0");

    double peak = *std::max_element(wl.rho.begin(), wl.rho.end());
    rep.weight_decay_ratio = wl.rho.back() / peak;
    rep.analytic_mixing = rep.weight_decay_ratio < 1e-3;
    if (wl.space == WeightedLine::Space::lp) {
        double s = 0.0;
        for (double r : wl.rho) s += r;
        rep.weight_integral = wl.h * s;
    }

    EigenField field = make_semigroup_field(wl, theta_lo, theta_hi, t0, node_count);
    TruncatedOperator t = time_map(wl, t0);
    GammaOperator k = GammaOperator::from_eigenfield(field);
    std::vector<Vec> probes = default_probes(wl.size);
    rep.probe_report = mixing_report(t, k, probes, MixingFamily::strong(), horizon,
                                     tol, TraceMethod::quadrature);

    // a flat weight profile rules mixing out; a slowly decaying one that has
    // not reached the 1e-3 band by the grid edge stays inconclusive
    bool analytic_flat = rep.weight_decay_ratio > 0.5;
    if (analytic_flat || rep.probe_report.verdict == Verdict::not_s_continuous)
        rep.verdict = Verdict::not_s_continuous;
    else if (rep.analytic_mixing)
        rep.verdict = Verdict::s_continuous_at_horizon;
    else
        rep.verdict = Verdict::inconclusive;
    return rep;
}

}  // namespace mixlab
