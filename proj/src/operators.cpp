#include "mixlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mixlab/rng.hpp"

namespace mixlab {

TruncatedOperator::TruncatedOperator(Mat matrix, std::string label,
                                     std::string truncation_note)
    : dim_(static_cast<int>(matrix.rows())),
      label_(std::move(label)),
      truncation_note_(std::move(truncation_note)) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("TruncatedOperator: matrix must be square");
    auto m = std::make_shared<Mat>(std::move(matrix));
    dense_ = *m;
    apply_ = [m](const Vec& x) -> Vec { return (*m) * x; };
    adjoint_ = [m](const Vec& y) -> Vec { return m->adjoint() * y; };
}

TruncatedOperator::TruncatedOperator(int dim, std::function<Vec(const Vec&)> apply,
                                     std::function<Vec(const Vec&)> adjoint,
                                     std::string label, std::string truncation_note)
    : dim_(dim),
      label_(std::move(label)),
      truncation_note_(std::move(truncation_note)),
      apply_(std::move(apply)),
      adjoint_(std::move(adjoint)) {}

Vec TruncatedOperator::apply(const Vec& x) const {
    if (x.size() != dim_)
        throw std::invalid_argument("TruncatedOperator::apply: dimension mismatch");
    return apply_(x);
}

Vec TruncatedOperator::adjoint(const Vec& y) const {
    if (y.size() != dim_)
        throw std::invalid_argument("TruncatedOperator::adjoint: dimension mismatch");
    return adjoint_(y);
}

Vec TruncatedOperator::dual_apply(const Vec& xstar) const {
    // transpose = conj o adjoint o conj
    return adjoint(xstar.conjugate()).conjugate();
}

const Mat& TruncatedOperator::dense() const {
    if (!dense_) {
        if (dim_ > 8192)
            throw GuardError("TruncatedOperator: refusing to materialize dense " +
                             std::to_string(dim_) + "x" + std::to_string(dim_) +
                             " matrix");
        Mat m(dim_, dim_);
        Vec e = Vec::Zero(dim_);
        for (int j = 0; j < dim_; ++j) {
            e[j] = 1.0;
            m.col(j) = apply_(e);
            e[j] = 0.0;
        }
        dense_ = std::move(m);
    }
    return *dense_;
}

TruncatedOperator TruncatedOperator::identity(int n) {
    return TruncatedOperator(Mat::Identity(n, n), "identity", "exact on all of C^N");
}

TruncatedOperator TruncatedOperator::diagonal(const Vec& entries, std::string label) {
    Mat m = entries.asDiagonal();
    return TruncatedOperator(std::move(m), std::move(label), "exact on all of C^N");
}

ShiftSpec ShiftSpec::constant(complex w, int dim, double p) {
    ShiftSpec s;
    s.dim = dim;
    s.p = p;
    s.weights.assign(static_cast<std::size_t>(std::max(0, dim - 1)), w);
    return s;
}

complex ShiftSpec::weight(int k) const {
    if (k < 1 || k >= dim)
        throw std::invalid_argument("ShiftSpec::weight: k out of range");
    return weights[static_cast<std::size_t>(k - 1)];
}

complex ShiftSpec::weight_product(int n) const {
    complex prod{1.0, 0.0};  // w_0 = 1
    for (int k = 1; k <= n; ++k) prod *= weight(k);
    return prod;
}

bool ShiftSpec::eigenvalue_existence_flag() const {
    // X_p membership of (1/(w_0...w_n)) judged on the truncated profile.
    double sum = 0.0, sup = 0.0;
    complex prod{1.0, 0.0};
    for (int n = 0; n < dim; ++n) {
        if (n > 0) prod *= weight(n);
        double c = 1.0 / std::abs(prod);
        sup = std::max(sup, c);
        sum += std::isinf(p) ? 0.0 : std::pow(c, p);
    }
    return std::isinf(p) ? std::isfinite(sup) : std::isfinite(sum);
}

void ShiftSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("ShiftSpec: dim must be >= 1");
    if (static_cast<int>(weights.size()) != dim - 1)
        throw std::invalid_argument("ShiftSpec: need exactly dim-1 weights");
    for (const complex& w : weights)
        if (std::abs(w) == 0.0)
            throw std::invalid_argument("ShiftSpec: zero weight");
}

TruncatedOperator weighted_shift(const ShiftSpec& spec) {
    spec.validate();
    Mat m = Mat::Zero(spec.dim, spec.dim);
    for (int k = 1; k < spec.dim; ++k) m(k - 1, k) = spec.weight(k);
    return TruncatedOperator(
        std::move(m), "weighted-shift",
        "exact on vectors supported in coordinates < N; e_{N-1} is mapped "
        "exactly, tail coordinates are absent");
}

ShiftEigenvector shift_eigenvector(const ShiftSpec& spec, complex lambda) {
    spec.validate();
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw std::invalid_argument("shift_eigenvector: lambda must be unimodular");
    ShiftEigenvector r;
    r.v = Vec(spec.dim);
    complex pow{1.0, 0.0}, prod{1.0, 0.0};
    for (int n = 0; n < spec.dim; ++n) {
        if (n > 0) {
            pow *= lambda;
            prod *= spec.weight(n);
        }
        r.v[n] = pow / prod;
    }
    // ratio extrapolation from the last two coefficient magnitudes
    double last = std::abs(r.v[spec.dim - 1]);
    double prev = spec.dim >= 2 ? std::abs(r.v[spec.dim - 2]) : last;
    double ratio = prev > 0 ? last / prev : 0.0;
    if (ratio < 1.0) {
        r.tail_bound = last * ratio / (1.0 - ratio);
        r.tail_reliable = ratio <= 0.9;
    } else {
        r.tail_bound = std::numeric_limits<double>::infinity();
        r.tail_reliable = false;
    }
    TruncatedOperator b = weighted_shift(spec);
    r.residual = (b.apply(r.v) - lambda * r.v).norm();
    return r;
}

void KalischSpec::validate() const {
    if (grid < 16) throw std::invalid_argument("KalischSpec: grid must be >= 16");
}

TruncatedOperator kalisch(const KalischSpec& spec) {
    spec.validate();
    const int m = spec.grid;
    const double h = spec.h();
    std::vector<complex> phase(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        phase[static_cast<std::size_t>(j)] = std::polar(1.0, spec.node(j));
    const complex ih{0.0, h};

    auto apply = [m, phase, ih](const Vec& f) -> Vec {
        // left-rectangle rule for int_0^t phi'(s) f(s) ds, phi' = i e^{is}
        Vec out(m);
        complex acc{0.0, 0.0};
        for (int j = 0; j < m; ++j) {
            out[j] = phase[static_cast<std::size_t>(j)] * f[j] - acc;
            acc += ih * phase[static_cast<std::size_t>(j)] * f[j];
        }
        return out;
    };
    auto adjoint = [m, phase, ih](const Vec& g) -> Vec {
        // Euclidean adjoint of the prefix-sum form: a suffix sum
        Vec out(m);
        complex acc{0.0, 0.0};
        for (int j = m - 1; j >= 0; --j) {
            out[j] = std::conj(phase[static_cast<std::size_t>(j)]) * g[j] -
                     std::conj(ih * phase[static_cast<std::size_t>(j)]) * acc;
            acc += g[j];
        }
        return out;
    };
    return TruncatedOperator(m, apply, adjoint, "kalisch",
                             "left-rectangle section on " + std::to_string(m) +
                                 " midpoint nodes of (0, 2pi); O(h) accurate");
}

KalischEigenvector kalisch_eigenvector(const KalischSpec& spec, double t) {
    spec.validate();
    if (!(t > 0.0) || !(t < two_pi))
        throw std::invalid_argument("kalisch_eigenvector: t must lie in (0, 2pi)");
    KalischEigenvector r;
    r.lambda = std::polar(1.0, t);
    // T 1_{(t,2pi)} = e^{it} 1_{(t,2pi)}: for t' <= t both terms vanish, for
    // t' > t the integral telescopes to e^{it'} - e^{it}
    r.v = Vec::Zero(spec.grid);
    for (int j = 0; j < spec.grid; ++j)
        if (spec.node(j) > t) r.v[j] = 1.0;
    r.degenerate = r.v.norm() == 0.0;
    return r;
}

double spanning_defect(const std::vector<Vec>& vectors, int dim) {
    if (vectors.empty())
        throw std::invalid_argument("spanning_defect: need at least one vector");
    constexpr double rank_tol = 1e-10;
    std::vector<Vec> basis;
    for (const Vec& v : vectors) {
        if (v.size() != dim)
            throw std::invalid_argument("spanning_defect: vector dimension mismatch");
        Vec u = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : basis) u -= q.dot(u) * q;
        double n = u.norm();
        if (n > rank_tol) basis.push_back(u / n);
        if (static_cast<int>(basis.size()) == dim) break;
    }
    double defect = 0.0;
    for (int j = 0; j < dim; ++j) {
        double proj = 0.0;
        for (const Vec& q : basis) proj += std::norm(q[j]);
        defect = std::max(defect, std::sqrt(std::max(0.0, 1.0 - proj)));
    }
    return defect;
}

std::vector<double> sample_angles_excluding(
    const std::vector<std::pair<double, double>>& excluded_arcs, int count,
    std::uint64_t seed) {
    // complement arcs on [0, 2pi), assuming the excluded arcs are disjoint
    std::vector<std::pair<double, double>> excl;
    for (auto [lo, hi] : excluded_arcs) excl.emplace_back(wrap_angle(lo), wrap_angle(hi));
    for (auto& [lo, hi] : excl)
        if (hi < lo) hi += two_pi;  // wrapping arc
    std::sort(excl.begin(), excl.end());

    std::vector<std::pair<double, double>> allowed;
    double cursor = 0.0;
    for (auto [lo, hi] : excl) {
        if (lo > cursor) allowed.emplace_back(cursor, lo);
        cursor = std::max(cursor, hi);
    }
    if (cursor < two_pi) allowed.emplace_back(cursor, two_pi);
    if (allowed.empty())
        throw std::invalid_argument("sample_angles_excluding: nothing left to sample");

    double total = 0.0;
    for (auto [lo, hi] : allowed) total += hi - lo;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double u = rng::uniform(seed, 0, static_cast<std::uint64_t>(i), 0) * total;
        for (auto [lo, hi] : allowed) {
            if (u <= hi - lo) {
                out.push_back(wrap_angle(lo + u));
                break;
            }
            u -= hi - lo;
        }
    }
    return out;
}

}  // namespace mixlab
