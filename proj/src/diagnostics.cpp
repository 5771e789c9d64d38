#include "mixlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mixlab/kernels.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

namespace {

constexpr double iterate_norm_guard = 1e12;

// tail window used both here and in classify_sequence: last ceil(len/4)
double tail_max(const std::vector<double>& trace) {
    if (trace.empty()) return 0.0;
    std::size_t len = trace.size();
    std::size_t tail = (len + 3) / 4;
    double m = 0.0;
    for (std::size_t i = len - tail; i < len; ++i) m = std::max(m, trace[i]);
    return m;
}

int severity(Verdict v) {
    switch (v) {
        case Verdict::not_s_continuous: return 2;
        case Verdict::inconclusive: return 1;
        case Verdict::s_continuous_at_horizon: return 0;
    }
    return 1;
}

}  // namespace

SpectralTrace spectral_coeffs(const TruncatedOperator& T, const GammaOperator& k,
                              const Vec& xstar, const Vec& ystar, int horizon,
                              TraceMethod method, std::int64_t mc_samples,
                              std::uint64_t seed) {
    if (horizon < 1)
        throw std::invalid_argument("spectral_coeffs: horizon must be >= 1");
    if (xstar.size() != T.dim() || ystar.size() != T.dim() ||
        k.state_dim() != T.dim())
        throw std::invalid_argument("spectral_coeffs: dimension mismatch");

    SpectralTrace out;
    out.method = method;
    Vec u = k.kstar(xstar);
    Vec v = k.kstar(ystar);
    out.cauchy_schwarz_bound = u.norm() * v.norm();

    if (method == TraceMethod::iterate) {
        out.provenance = "iterate T* on " + T.label();
        out.coeffs.reserve(static_cast<std::size_t>(horizon));
        Vec cur = xstar;
        for (int n = 0; n < horizon; ++n) {
            Vec kx = k.kstar(cur);
            out.coeffs.push_back(v.dot(kx));  // sum_m kx_m conj(v_m)
            if (n + 1 < horizon) {
                cur = T.dual_apply(cur);
                if (cur.norm() > iterate_norm_guard) {
                    out.truncated = true;
                    out.provenance += " [truncated: functional norm > 1e12 at n=" +
                                      std::to_string(n + 1) + "]";
                    break;
                }
            }
        }
        return out;
    }

    if (!k.multiplier_angles)
        throw std::invalid_argument(
            "spectral_coeffs: quadrature/monte-carlo need an eigenfield-built K "
            "(multiplier angles missing)");
    const std::vector<double>& phi = *k.multiplier_angles;

    if (method == TraceMethod::quadrature) {
        out.provenance = "multiplier quadrature on " + T.label();
        out.coeffs.resize(static_cast<std::size_t>(horizon));
        int m = k.rank_dim();
        for (int n = 0; n < horizon; ++n) {
            CompensatedSum s;
            for (int j = 0; j < m; ++j)
                s.add(std::polar(1.0, -n * phi[static_cast<std::size_t>(j)]) *
                      u[j] * std::conj(v[j]));
            out.coeffs[static_cast<std::size_t>(n)] = s.value();
        }
        return out;
    }

    // monte_carlo: sigma_hat(n) = E[conj(f(T^n xi)) g(xi)] for the linear
    // functionals f = <x*,.>, g = <y*,.>, with T^n applied as the multiplier.
    if (mc_samples < 100)
        throw std::invalid_argument("spectral_coeffs: monte-carlo needs >= 100 samples");
    out.provenance = "monte-carlo, " + std::to_string(mc_samples) + " draws, seed " +
                     std::to_string(seed);
    int m = k.rank_dim();
    // E[conj(g_j) u_j * sum_l g_l conj(v_l)] collapses to per-column means
    std::vector<CompensatedSum> col(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < mc_samples; ++i) {
        Vec g(m);
        for (int j = 0; j < m; ++j)
            g[j] = rng::gaussian(seed, 0, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j));
        complex b{0.0, 0.0};
        for (int j = 0; j < m; ++j) b += g[j] * std::conj(v[j]);
        for (int j = 0; j < m; ++j)
            col[static_cast<std::size_t>(j)].add(std::conj(g[j]) * u[j] * b);
    }
    out.coeffs.resize(static_cast<std::size_t>(horizon));
    for (int n = 0; n < horizon; ++n) {
        CompensatedSum s;
        for (int j = 0; j < m; ++j)
            s.add(std::polar(1.0, -n * phi[static_cast<std::size_t>(j)]) *
                  col[static_cast<std::size_t>(j)].value() /
                  static_cast<double>(mc_samples));
        out.coeffs[static_cast<std::size_t>(n)] = s.value();
    }
    return out;
}

ClassifyResult classify_trace(const SpectralTrace& trace, const MixingFamily& s,
                              double tol) {
    return classify_sequence(trace.sequence(), s, tol);
}

std::vector<Vec> default_probes(int dim, int extra, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("default_probes: dim must be >= 2");
    std::vector<Vec> probes;
    int canonical = std::min(8, dim - 2);
    for (int i = 0; i <= canonical; ++i) {
        Vec e = Vec::Zero(dim);
        e[i] = 1.0;
        probes.push_back(std::move(e));
    }
    for (int r = 0; r < extra; ++r) {
        Vec x(dim);
        for (int i = 0; i < dim; ++i)
            x[i] = rng::gaussian(seed, static_cast<std::uint64_t>(r),
                                 static_cast<std::uint64_t>(i), 0);
        double nn = x.norm();
        if (nn > 0) x /= nn;
        probes.push_back(std::move(x));
    }
    return probes;
}

MixingReport mixing_report(const std::vector<SpectralTrace>& traces,
                           const MixingFamily& s, double tol) {
    if (traces.empty()) throw std::invalid_argument("mixing_report: no traces");
    MixingReport rep;
    rep.pairs.reserve(traces.size());
    int worst_sev = -1;
    double worst_tail = -1.0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        PairReport pr;
        pr.trace = traces[i];
        pr.classification = classify_trace(traces[i], s, tol);
        if (s.kind == MixingFamily::Kind::ergodic &&
            pr.classification.atom_at_one &&
            std::abs(*pr.classification.atom_at_one) > tol)
            pr.classification.verdict = Verdict::not_s_continuous;
        int sev = severity(pr.classification.verdict);
        double t = tail_max(pr.classification.trace);
        if (sev > worst_sev || (sev == worst_sev && t > worst_tail)) {
            worst_sev = sev;
            worst_tail = t;
            rep.worst_pair = i;
        }
        rep.pairs.push_back(std::move(pr));
    }
    rep.verdict = rep.pairs[rep.worst_pair].classification.verdict;
    return rep;
}

MixingReport mixing_report(const TruncatedOperator& T, const GammaOperator& k,
                           const std::vector<Vec>& probes, const MixingFamily& s,
                           int horizon, double tol, TraceMethod method) {
    if (probes.empty()) throw std::invalid_argument("mixing_report: no probes");
    std::vector<SpectralTrace> traces;
    traces.reserve(probes.size() * probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i)
        for (std::size_t j = 0; j < probes.size(); ++j) {
            SpectralTrace t =
                spectral_coeffs(T, k, probes[i], probes[j], horizon, method);
            t.probe_i = static_cast<int>(i);
            t.probe_j = static_cast<int>(j);
            traces.push_back(std::move(t));
        }
    return mixing_report(traces, s, tol);
}

bool BallSpec::contains(const Vec& x) const {
    if (x.size() != center.size())
        throw std::invalid_argument("BallSpec: dimension mismatch");
    Vec d = x - center;
    double r = 0.0;
    switch (norm) {
        case Norm::l1: r = d.lpNorm<1>(); break;
        case Norm::l2: r = d.norm(); break;
        case Norm::sup: r = d.lpNorm<Eigen::Infinity>(); break;
    }
    return r < radius;
}

CorrelationEstimate set_correlation(const TruncatedOperator& T,
                                    const GaussianSampler& sampler,
                                    const BallSpec& a, const BallSpec& b, int n,
                                    std::int64_t mc_samples) {
    if (n < 0) throw std::invalid_argument("set_correlation: n must be >= 0");
    if (mc_samples < 100)
        throw std::invalid_argument("set_correlation: need >= 100 samples");
    const GammaOperator& gop = sampler.gamma();
    if (gop.state_dim() != T.dim())
        throw std::invalid_argument("set_correlation: dimension mismatch");

    auto evolve = [&](const Vec& g) -> Vec {
        if (gop.multiplier_angles) {
            const auto& phi = *gop.multiplier_angles;
            Vec rg(g.size());
            for (int j = 0; j < g.size(); ++j)
                rg[j] = std::polar(1.0, n * phi[static_cast<std::size_t>(j)]) * g[j];
            return gop.K * rg;
        }
        Vec x = gop.K * g;
        for (int i = 0; i < n; ++i) x = T.apply(x);
        return x;
    };

    auto indicator_sum = [&](const GaussianSampler& s, auto&& value) -> double {
        return kernels::chunked_sum(mc_samples, [&](std::int64_t i) -> complex {
                   return {value(s.coefficients(static_cast<std::uint64_t>(i))),
                           0.0};
               })
            .real();
    };

    double joint = indicator_sum(sampler, [&](const Vec& g) {
        return (a.contains(gop.K * g) && b.contains(evolve(g))) ? 1.0 : 0.0;
    });
    GaussianSampler sa = sampler.substream(sampler.stream() + 1);
    GaussianSampler sb = sampler.substream(sampler.stream() + 2);
    double hits_a = indicator_sum(sa, [&](const Vec& g) {
        return a.contains(gop.K * g) ? 1.0 : 0.0;
    });
    double hits_b = indicator_sum(sb, [&](const Vec& g) {
        return b.contains(gop.K * g) ? 1.0 : 0.0;
    });

    double mc = static_cast<double>(mc_samples);
    CorrelationEstimate r;
    r.mc_samples = mc_samples;
    r.seed = sampler.seed();
    r.joint = joint / mc;
    r.mu_a = hits_a / mc;
    r.mu_b = hits_b / mc;
    r.estimate = r.joint - r.mu_a * r.mu_b;
    double vj = r.joint * (1.0 - r.joint) / mc;
    double va = r.mu_a * (1.0 - r.mu_a) / mc;
    double vb = r.mu_b * (1.0 - r.mu_b) / mc;
    r.std_error = std::sqrt(vj + r.mu_b * r.mu_b * va + r.mu_a * r.mu_a * vb);
    return r;
}

BirkhoffResult birkhoff_density(const TruncatedOperator& T, const Vec& x0,
                                const BallSpec& ball, int horizon) {
    if (horizon < 1)
        throw std::invalid_argument("birkhoff_density: horizon must be >= 1");
    BirkhoffResult r;
    Vec x = x0;
    std::int64_t hits = 0;
    int n = 0;
    double proxy = 1.0;
    int next_checkpoint = 1;
    for (; n < horizon; ++n) {
        if (!x.allFinite() || x.norm() > 1e150) {
            r.truncated = true;
            break;
        }
        if (ball.contains(x)) ++hits;
        if (n + 1 == next_checkpoint || n + 1 == horizon) {
            proxy = std::min(proxy,
                             static_cast<double>(hits) / static_cast<double>(n + 1));
            next_checkpoint *= 2;
        }
        if (n + 1 < horizon) x = T.apply(x);
    }
    r.reached = n;
    r.density = n > 0 ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
    r.lower_proxy = r.truncated ? 0.0 : proxy;
    return r;
}

HaarNullResult haar_null_check(const TruncatedOperator& T, const Vec& u,
                               int n_terms, double tail_tol) {
    if (n_terms < 2)
        throw std::invalid_argument("haar_null_check: need >= 2 terms");
    HaarNullResult r;
    Vec x = u;
    double s = 0.0;
    r.partial_sums.reserve(static_cast<std::size_t>(n_terms));
    for (int n = 0; n < n_terms; ++n) {
        double nn = x.norm();
        if (!(nn > 1e-200) || !std::isfinite(nn)) {
            r.verdict = HaarNullResult::Verdict::inapplicable;
            r.zero_index = n;
            return r;
        }
        s += 1.0 / nn;
        r.partial_sums.push_back(s);
        if (n + 1 < n_terms) x = T.apply(x);
    }
    double half = r.partial_sums[static_cast<std::size_t>(n_terms / 2) - 1];
    r.tail = r.partial_sums.back() - half;
    r.verdict = r.tail < tail_tol ? HaarNullResult::Verdict::summable_at_horizon
                                  : HaarNullResult::Verdict::not_summable;
    return r;
}

std::string to_string(HaarNullResult::Verdict v) {
    switch (v) {
        case HaarNullResult::Verdict::summable_at_horizon:
            return "summable-at-horizon";
        case HaarNullResult::Verdict::not_summable:
            return "not-summable";
        case HaarNullResult::Verdict::inapplicable:
            return "inapplicable";
    }
    return "inapplicable";
}

}  // namespace mixlab
