#include "mixlab/cantor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mixlab/kernels.hpp"

namespace mixlab {

void DyadicField::validate() const {
    if (depth < 0 || depth > 20)
        throw std::invalid_argument("DyadicField: depth out of range");
    if (values.size() != (std::size_t{1} << depth))
        throw std::invalid_argument("DyadicField: values size != 2^depth");
    for (const Vec& v : values)
        if (!v.allFinite() || v.size() != values.front().size())
            throw std::invalid_argument("DyadicField: bad value vector");
}

double DyadicField::measured_holder(double alpha) const {
    validate();
    if (depth == 0) return 0.0;
    return kernels::holder_constant(values, depth, alpha);
}

std::vector<Vec> walsh_coeffs_naive(const DyadicField& field) {
    field.validate();
    std::size_t n = field.values.size();
    double scale = 1.0 / static_cast<double>(n);
    std::vector<Vec> out(n);
    for (std::size_t mask = 0; mask < n; ++mask) {
        Vec acc = Vec::Zero(field.values.front().size());
        for (std::size_t w = 0; w < n; ++w) {
            int sign = std::popcount(mask & w) % 2 == 0 ? 1 : -1;
            acc += static_cast<double>(sign) * field.values[w];
        }
        out[mask] = scale * acc;
    }
    return out;
}

std::vector<Vec> walsh_coeffs(const DyadicField& field) {
    field.validate();
    if (field.depth > 16)
        throw GuardError("walsh_coeffs: depth > 16 rejected");
    if (field.depth <= 8) return walsh_coeffs_naive(field);
    std::vector<Vec> values = field.values;
    kernels::walsh_transform(values, field.depth);
    return values;
}

DecayCertificate certify_decay(const std::vector<Vec>& coeffs, double holder_C,
                               double alpha) {
    if (coeffs.empty() || (coeffs.size() & (coeffs.size() - 1)) != 0)
        throw std::invalid_argument("certify_decay: coefficient count not 2^d");
    if (!(holder_C > 0.0))
        throw std::invalid_argument("certify_decay: C must be > 0");
    DecayCertificate cert;
    for (std::size_t mask = 1; mask < coeffs.size(); ++mask) {
        double nn = coeffs[mask].norm();
        for (int n = 0; (std::size_t{1} << n) <= mask; ++n) {
            if (!((mask >> n) & 1u)) continue;
            double bound = 0.5 * holder_C * std::pow(2.0, -alpha * n);
            double ratio = nn / bound;
            if (ratio > cert.worst_ratio) {
                cert.worst_ratio = ratio;
                cert.witness_mask = static_cast<std::uint32_t>(mask);
                cert.witness_bit = n;
            }
        }
    }
    cert.pass = cert.worst_ratio <= 1.0 + 1e-9;
    return cert;
}

std::vector<double> level_sums(const std::vector<Vec>& coeffs) {
    if (coeffs.empty() || (coeffs.size() & (coeffs.size() - 1)) != 0)
        throw std::invalid_argument("level_sums: coefficient count not 2^d");
    int depth = std::countr_zero(coeffs.size());
    std::vector<double> s(static_cast<std::size_t>(std::max(depth, 1)), 0.0);
    for (std::size_t mask = 1; mask < coeffs.size(); ++mask) {
        int top = std::bit_width(mask) - 1;
        s[static_cast<std::size_t>(top)] += coeffs[mask].norm();
    }
    return s;
}

CantorField cantor_eigenfield(const ArcField& arc, int depth, double alpha,
                              double min_width) {
    if (!(arc.hi > arc.lo))
        throw std::invalid_argument("cantor_eigenfield: empty arc");
    if (!(arc.lipschitz > 0.0))
        throw std::invalid_argument("cantor_eigenfield: Lipschitz constant must be > 0");
    if (depth < 1 || depth > 20)
        throw std::invalid_argument("cantor_eigenfield: depth out of range [1, 20]");
    if (!(alpha > 1.0))
        throw std::invalid_argument("cantor_eigenfield: alpha must be > 1");

    // all nodes at one level share the same width, so the schedule is a
    // scalar recursion; probe it first to name the feasible depth on failure
    std::vector<double> widths;  // widths[k] = node width at depth k
    widths.push_back(arc.hi - arc.lo);
    for (int k = 0; k < depth; ++k) {
        double w = std::min(widths.back() / 4.0,
                            std::pow(2.0, -alpha * (k + 1)) / arc.lipschitz);
        if (w < min_width)
            throw GuardError("cantor_eigenfield: arc too short for depth " +
                             std::to_string(depth) + "; maximal feasible depth is " +
                             std::to_string(k));
        widths.push_back(w);
    }

    std::vector<double> centers{0.5 * (arc.lo + arc.hi)};
    for (int k = 0; k < depth; ++k) {
        double len = widths[static_cast<std::size_t>(k)];
        std::vector<double> next(centers.size() * 2);
        for (std::size_t mask = 0; mask < centers.size(); ++mask) {
            // children centered at the 1/3 and 2/3 points of the parent
            next[mask] = centers[mask] - len / 6.0;
            next[mask | (std::size_t{1} << k)] = centers[mask] + len / 6.0;
        }
        centers = std::move(next);
    }

    CantorField out;
    out.angles = centers;
    out.field.depth = depth;
    out.field.holder_alpha = alpha;
    out.field.values.resize(centers.size());
    for (std::size_t mask = 0; mask < centers.size(); ++mask)
        out.field.values[mask] = arc.E(centers[mask]);
    out.field.holder_C = out.field.measured_holder(alpha);

    std::vector<double> sorted = centers;
    std::sort(sorted.begin(), sorted.end());
    double gap = widths.front();
    for (std::size_t i = 1; i < sorted.size(); ++i)
        gap = std::min(gap, sorted[i] - sorted[i - 1]);
    out.min_separation = gap;
    return out;
}

int ProductSpace::level_weight(int level) const {
    int w = 0;
    for (int q : qbar[static_cast<std::size_t>(level)]) w += q;
    return w;
}

complex ProductSpace::char_value(const Character& g, const Node& node) const {
    complex v{1.0, 0.0};
    for (std::size_t n = 0; n < g.idx.size(); ++n) {
        auto [s, k] = g.idx[n];
        auto [ns, r] = node.coord[n];
        if (ns != s) return {0.0, 0.0};
        int q = qbar[n][static_cast<std::size_t>(s)];
        double l = static_cast<double>(qbar[n].size());
        v *= std::sqrt(l) * std::polar(1.0, two_pi * k * r / q);
    }
    return v;
}

ProductSpace product_space(const std::vector<std::vector<int>>& qbar) {
    if (qbar.empty()) throw std::invalid_argument("product_space: empty q-list");
    double total = 1.0;
    for (const auto& level : qbar) {
        if (level.empty())
            throw std::invalid_argument("product_space: empty level sequence");
        int w = 0;
        for (int q : level) {
            if (q < 2) throw std::invalid_argument("product_space: q must be >= 2");
            w += q;
        }
        total *= w;
        if (total > 1e5)
            throw GuardError("product_space: node count exceeds 1e5");
    }

    ProductSpace ps;
    ps.qbar = qbar;

    // nodes: cartesian product of the per-level disjoint unions
    ps.nodes.push_back({{}, 1.0});
    for (const auto& level : qbar) {
        double l = static_cast<double>(level.size());
        std::vector<ProductSpace::Node> next;
        for (const auto& node : ps.nodes)
            for (int s = 0; s < static_cast<int>(level.size()); ++s)
                for (int r = 0; r < level[static_cast<std::size_t>(s)]; ++r) {
                    ProductSpace::Node n = node;
                    n.coord.emplace_back(s, r);
                    n.weight /= l * level[static_cast<std::size_t>(s)];
                    next.push_back(std::move(n));
                }
        ps.nodes = std::move(next);
    }

    // characters: empty sequence plus all (s, k) sequences whose last entry
    // has k != 0
    ps.characters.push_back({});
    std::vector<ProductSpace::Character> prefixes{{}};
    for (const auto& level : qbar) {
        std::vector<ProductSpace::Character> next;
        for (const auto& pre : prefixes)
            for (int s = 0; s < static_cast<int>(level.size()); ++s)
                for (int k = 0; k < level[static_cast<std::size_t>(s)]; ++k) {
                    ProductSpace::Character g = pre;
                    g.idx.emplace_back(s, k);
                    if (k != 0) ps.characters.push_back(g);
                    next.push_back(std::move(g));
                }
        prefixes = std::move(next);
    }
    return ps;
}

double basis_check(const ProductSpace& ps) {
    std::size_t nc = ps.characters.size();
    if (nc > 4096)
        throw GuardError("basis_check: character count exceeds 4096");
    // character values tabulated once; Gram via compensated sums
    std::vector<std::vector<complex>> table(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        table[i].reserve(ps.nodes.size());
        for (const auto& node : ps.nodes)
            table[i].push_back(ps.char_value(ps.characters[i], node));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = i; j < nc; ++j) {
            CompensatedSum s;
            for (std::size_t a = 0; a < ps.nodes.size(); ++a)
                s.add(ps.nodes[a].weight * table[i][a] * std::conj(table[j][a]));
            complex g = s.value();
            if (i == j) g -= 1.0;
            worst = std::max(worst, std::abs(g));
        }
    return worst;
}

std::optional<double> dq_metric(const ProductSpace& ps, const ProductSpace::Node& a,
                                const ProductSpace::Node& b) {
    if (a.coord.size() != b.coord.size() ||
        a.coord.size() != static_cast<std::size_t>(ps.depth()))
        throw std::invalid_argument("dq_metric: node depth mismatch");
    std::size_t n = 0;
    while (n < a.coord.size() && a.coord[n] == b.coord[n]) ++n;
    if (n == a.coord.size())
        throw std::invalid_argument("dq_metric: nodes are equal");
    auto [sa, ra] = a.coord[n];
    auto [sb, rb] = b.coord[n];
    if (sa != sb) return std::nullopt;
    double d = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        d /= static_cast<double>(ps.level_weight(static_cast<int>(k)));
    double l = static_cast<double>(ps.qbar[n].size());
    int q = ps.qbar[n][static_cast<std::size_t>(sa)];
    d /= std::pow(l, 0.25) * q;
    return d;
}

}  // namespace mixlab
