#include "mixlab/gaussian.hpp"

#include <cmath>

#include "mixlab/kernels.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

GammaOperator GammaOperator::from_eigenfield(const EigenField& field) {
    GammaOperator g;
    g.source = "eigenfield:" + field.operator_ref;
    g.K = Mat(field.state_dim(), field.size());
    std::vector<double> angles;
    angles.reserve(field.nodes.size());
    for (int j = 0; j < field.size(); ++j) {
        const auto& n = field.nodes[static_cast<std::size_t>(j)];
        g.K.col(j) = std::sqrt(n.m) * n.E;
        angles.push_back(n.phi);
    }
    g.multiplier_angles = std::move(angles);
    return g;
}

GammaOperator GammaOperator::from_matrix(Mat k, std::string source) {
    GammaOperator g;
    g.K = std::move(k);
    g.source = std::move(source);
    return g;
}

double GammaOperator::column_norm_sum() const {
    double s = 0.0;
    for (int m = 0; m < K.cols(); ++m) s += K.col(m).norm();
    return s;
}

Vec GammaOperator::kstar(const Vec& xstar) const {
    if (xstar.size() != K.rows())
        throw std::invalid_argument("GammaOperator::kstar: dimension mismatch");
    // conj(<x*, K e_m>) with the bilinear pairing = conj(K^T x*)
    return (K.transpose() * xstar).conjugate();
}

double measure_fourier(const GammaOperator& k, const Vec& xstar) {
    return std::exp(-0.25 * k.kstar(xstar).squaredNorm());
}

GaussianSampler::GaussianSampler(GammaOperator k, std::uint64_t seed,
                                 std::uint64_t stream)
    : k_(std::move(k)), seed_(seed), stream_(stream) {}

Vec GaussianSampler::coefficients(std::uint64_t draw) const {
    Vec g(k_.rank_dim());
    for (int m = 0; m < k_.rank_dim(); ++m)
        g[m] = rng::gaussian(seed_, stream_, draw, static_cast<std::uint64_t>(m));
    return g;
}

Vec GaussianSampler::sample(std::uint64_t draw) const {
    return k_.K * coefficients(draw);
}

std::vector<Vec> GaussianSampler::sample_batch(std::uint64_t first_draw,
                                               int count) const {
    if (count < 1)
        throw std::invalid_argument("GaussianSampler: count must be >= 1");
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(sample(first_draw + static_cast<std::uint64_t>(i)));
    return out;
}

GaussianSampler GaussianSampler::substream(std::uint64_t stream) const {
    return GaussianSampler(k_, seed_, stream);
}

double invariance_defect(const TruncatedOperator& T, const GammaOperator& k,
                         const std::vector<Vec>& probes) {
    double worst = 0.0;
    for (const Vec& xstar : probes) {
        double a = k.kstar(xstar).norm();
        double b = k.kstar(T.dual_apply(xstar)).norm();
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

double hermite(int k, double x) {
    if (k == 0) return 1.0;
    double hm = 1.0, h = x;
    for (int j = 1; j < k; ++j) {
        double next = x * h - j * hm;
        hm = h;
        h = next;
    }
    return h;
}

ChaosCheck hermite_chaos_check(const GaussianSampler& s, int k, const Vec& ustar,
                               const Vec& vstar, std::int64_t mc_samples) {
    if (k < 1) throw std::invalid_argument("hermite_chaos_check: k must be >= 1");
    if (k > 6)
        throw GuardError("hermite_chaos_check: k > 6 rejected (variance blow-up)");
    if (mc_samples < 100)
        throw std::invalid_argument("hermite_chaos_check: need >= 100 samples");

    const GammaOperator& gop = s.gamma();
    // u(xi) = Re sum_m g_m c_m with c = conj(K* u*); Var = ||K* u*||^2 / 2
    Vec cu = gop.kstar(ustar).conjugate();
    Vec cv = gop.kstar(vstar).conjugate();
    double sig_u = std::sqrt(0.5 * cu.squaredNorm());
    double sig_v = std::sqrt(0.5 * cv.squaredNorm());
    if (sig_u == 0.0 || sig_v == 0.0)
        throw std::invalid_argument("hermite_chaos_check: degenerate functional");
    cu /= sig_u;
    cv /= sig_v;

    double scale = 1.0;
    for (int j = 2; j <= k; ++j) scale *= j;
    const double inv_sqrt_fact = 1.0 / std::sqrt(scale);

    const int m = gop.rank_dim();
    auto term = [&](std::int64_t i) -> complex {
        std::uint64_t draw = static_cast<std::uint64_t>(i);
        complex zu{0.0, 0.0}, zv{0.0, 0.0};
        for (int j = 0; j < m; ++j) {
            complex g = rng::gaussian(s.seed(), s.stream(), draw,
                                      static_cast<std::uint64_t>(j));
            zu += g * cu[j];
            zv += g * cv[j];
        }
        double hu = hermite(k, zu.real()) * inv_sqrt_fact;
        double hv = hermite(k, zv.real()) * inv_sqrt_fact;
        return {hu * hv, zu.real() * zv.real()};
    };
    complex acc = kernels::chunked_sum(mc_samples, term);

    ChaosCheck r;
    r.norm_u = sig_u;
    r.norm_v = sig_v;
    r.lhs = acc.real() / static_cast<double>(mc_samples);
    r.inner = acc.imag() / static_cast<double>(mc_samples);
    r.rhs = std::pow(r.inner, k);
    r.abs_err = std::abs(r.lhs - r.rhs);
    return r;
}

}  // namespace mixlab
