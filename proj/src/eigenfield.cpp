#include "mixlab/eigenfield.hpp"

#include <cmath>

#include "mixlab/rng.hpp"

namespace mixlab {

namespace {
constexpr double norm_floor = 1e-300;  // avoids 0/0 on zero vectors
}

double EigenField::total_mass() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.m;
    return s;
}

double EigenField::eigen_residual(const TruncatedOperator& T) const {
    double worst = 0.0;
    for (const auto& n : nodes) {
        double scale = std::max(n.E.norm(), norm_floor);
        double r = (T.apply(n.E) - std::polar(1.0, n.phi) * n.E).norm() / scale;
        worst = std::max(worst, r);
    }
    return worst;
}

void EigenField::validate(const TruncatedOperator& T) const {
    for (const auto& n : nodes) {
        if (!(n.m > 0.0))
            throw std::invalid_argument("EigenField: node weight must be > 0");
        if (!n.E.allFinite())
            throw std::invalid_argument("EigenField: non-finite node vector");
    }
    double r = eigen_residual(T);
    if (r > residual_tol)
        throw GuardError("EigenField: eigen-residual " + std::to_string(r) +
                         " exceeds tolerance " + std::to_string(residual_tol));
}

EigenField make_shift_field(const ShiftSpec& spec, int node_count, double lo,
                            double hi) {
    if (node_count < 1)
        throw std::invalid_argument("make_shift_field: need >= 1 node");
    EigenField f;
    f.operator_ref = "weighted-shift";
    f.nodes.reserve(static_cast<std::size_t>(node_count));
    double width = hi - lo;
    for (int j = 0; j < node_count; ++j) {
        EigenField::Node n;
        n.m = 1.0 / node_count;
        n.phi = wrap_angle(lo + (j + 0.5) * width / node_count);
        n.E = shift_eigenvector(spec, std::polar(1.0, n.phi)).v;
        f.nodes.push_back(std::move(n));
    }
    return f;
}

Vec k_apply(const EigenField& field, const Vec& f) {
    if (f.size() != field.size())
        throw std::invalid_argument("k_apply: node function size mismatch");
    Vec out = Vec::Zero(field.state_dim());
    for (int j = 0; j < field.size(); ++j) {
        const auto& n = field.nodes[static_cast<std::size_t>(j)];
        out += n.m * f[j] * n.E;
    }
    return out;
}

Vec k_adjoint(const EigenField& field, const Vec& xstar) {
    Vec out(field.size());
    for (int j = 0; j < field.size(); ++j)
        out[j] = std::conj(dual_pair(xstar, field.nodes[static_cast<std::size_t>(j)].E));
    return out;
}

double intertwining_residual(const TruncatedOperator& T, const EigenField& field) {
    int m = field.size();
    if (m == 0) return 0.0;

    // probe set: first few node indicators plus a few seeded random functions
    std::vector<Vec> probes;
    for (int j = 0; j < std::min(m, 8); ++j) {
        Vec f = Vec::Zero(m);
        f[j] = 1.0;
        probes.push_back(std::move(f));
    }
    for (int r = 0; r < 4; ++r) {
        Vec f(m);
        for (int j = 0; j < m; ++j)
            f[j] = rng::gaussian(0x9e1f, static_cast<std::uint64_t>(r),
                                 static_cast<std::uint64_t>(j), 0);
        probes.push_back(std::move(f));
    }

    double worst = 0.0;
    for (const Vec& f : probes) {
        double fn = 0.0;
        for (int j = 0; j < m; ++j)
            fn += field.nodes[static_cast<std::size_t>(j)].m * std::norm(f[j]);
        fn = std::sqrt(fn);
        Vec phif(m);
        for (int j = 0; j < m; ++j)
            phif[j] = std::polar(1.0, field.nodes[static_cast<std::size_t>(j)].phi) * f[j];
        double r = (T.apply(k_apply(field, f)) - k_apply(field, phif)).norm() /
                   std::max(fn, norm_floor);
        worst = std::max(worst, r);
    }
    return worst;
}

SpanningResult m_spanning_defect(const EigenField& field) {
    if (field.size() == 0)
        throw std::invalid_argument("m_spanning_defect: empty field");
    std::vector<Vec> vecs;
    for (const auto& n : field.nodes) {
        if (n.m <= 0.0) continue;
        double nn = n.E.norm();
        if (nn > norm_floor) vecs.push_back(n.E / nn);
    }
    SpanningResult r;
    if (vecs.empty()) {
        r.degenerate = true;
        r.defect = 1.0;
        return r;
    }
    r.defect = spanning_defect(vecs, field.state_dim());
    return r;
}

EigenField merge_fields(const EigenField& a, double alpha, const EigenField& b,
                        double beta) {
    EigenField f;
    f.operator_ref = a.operator_ref;
    f.residual_tol = std::max(a.residual_tol, b.residual_tol);
    for (const auto& n : a.nodes) f.nodes.push_back({n.m, n.phi, alpha * n.E});
    for (const auto& n : b.nodes) f.nodes.push_back({n.m, n.phi, beta * n.E});
    return f;
}

void to_json(nlohmann::json& j, const EigenField& f) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : f.nodes) {
        auto entry = nlohmann::json::array();
        entry.push_back(n.m);
        entry.push_back(n.phi);
        for (int i = 0; i < n.E.size(); ++i) {
            entry.push_back(n.E[i].real());
            entry.push_back(n.E[i].imag());
        }
        nodes.push_back(std::move(entry));
    }
    j = nlohmann::json{{"nodes", nodes}, {"operator_ref", f.operator_ref}};
}

void from_json(const nlohmann::json& j, EigenField& f) {
    f = EigenField{};
    f.operator_ref = j.value("operator_ref", "");
    for (const auto& entry : j.at("nodes")) {
        EigenField::Node n;
        n.m = entry.at(0).get<double>();
        n.phi = entry.at(1).get<double>();
        std::size_t coords = (entry.size() - 2) / 2;
        n.E = Vec(static_cast<int>(coords));
        for (std::size_t i = 0; i < coords; ++i)
            n.E[static_cast<int>(i)] = complex{entry.at(2 + 2 * i).get<double>(),
                                               entry.at(3 + 2 * i).get<double>()};
        f.nodes.push_back(std::move(n));
    }
}

}  // namespace mixlab
