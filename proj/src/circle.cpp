#include "mixlab/circle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mixlab/kernels.hpp"

namespace mixlab {

CircleMeasure CircleMeasure::dirac(double theta, complex weight) {
    CircleMeasure m;
    m.atoms.push_back({wrap_angle(theta), weight});
    return m;
}

CircleMeasure CircleMeasure::lebesgue(int grid) {
    CircleMeasure m;
    m.grid_size = grid;
    m.density.assign(static_cast<std::size_t>(grid), complex{1.0, 0.0});
    return m;
}

double CircleMeasure::total_variation() const {
    double tv = 0.0;
    for (const auto& a : atoms) tv += std::abs(a.weight);
    for (const auto& d : density) tv += std::abs(d) / grid_size;
    return tv;
}

bool CircleMeasure::is_probability(double tol) const {
    double mass = 0.0;
    for (const auto& a : atoms) {
        if (a.weight.imag() != 0.0 || a.weight.real() < 0.0) return false;
        mass += a.weight.real();
    }
    for (const auto& d : density) {
        if (d.imag() != 0.0 || d.real() < 0.0) return false;
        mass += d.real() / grid_size;
    }
    return std::abs(mass - 1.0) <= tol;
}

CircleMeasure operator+(const CircleMeasure& a, const CircleMeasure& b) {
    if (!a.density.empty() && !b.density.empty() && a.grid_size != b.grid_size)
        throw std::invalid_argument("circle: grid sizes differ in measure sum");
    CircleMeasure r;
    r.grid_size = a.density.empty() ? b.grid_size : a.grid_size;
    r.atoms = a.atoms;
    r.atoms.insert(r.atoms.end(), b.atoms.begin(), b.atoms.end());
    r.density = a.density;
    if (!b.density.empty()) {
        if (r.density.empty())
            r.density = b.density;
        else
            for (std::size_t j = 0; j < r.density.size(); ++j)
                r.density[j] += b.density[j];
    }
    return r;
}

CircleMeasure operator*(complex s, const CircleMeasure& m) {
    CircleMeasure r = m;
    for (auto& a : r.atoms) a.weight *= s;
    for (auto& d : r.density) d *= s;
    return r;
}

double FourierSequence::sup_norm() const {
    double s = 0.0;
    for (complex v : values) s = std::max(s, std::abs(v));
    return s;
}

complex fourier_coeff(const CircleMeasure& sigma, int n) {
    if (!sigma.density.empty() && 2 * std::abs(n) > sigma.grid_size)
        throw GuardError("circle: |n|=" + std::to_string(std::abs(n)) +
                         " beyond Nyquist limit G/2 with G=" +
                         std::to_string(sigma.grid_size) + " (aliasing)");
    CompensatedSum s;
    for (const auto& a : sigma.atoms)
        s.add(a.weight * std::polar(1.0, -n * a.theta));
    const double scale = sigma.density.empty() ? 1.0 : 1.0 / sigma.grid_size;
    for (std::size_t j = 0; j < sigma.density.size(); ++j)
        s.add(scale * sigma.density[j] *
              std::polar(1.0, -n * sigma.grid_theta(static_cast<int>(j))));
    return s.value();
}

FourierSequence fourier_sequence(const CircleMeasure& sigma, int horizon) {
    if (horizon < 1) throw std::invalid_argument("circle: horizon must be >= 1");
    if (!sigma.density.empty() && 2 * (horizon - 1) > sigma.grid_size)
        throw GuardError("circle: horizon " + std::to_string(horizon) +
                         " beyond Nyquist limit G/2 with G=" +
                         std::to_string(sigma.grid_size) + " (aliasing)");
    FourierSequence a;
    a.values.assign(static_cast<std::size_t>(horizon), complex{0.0, 0.0});
    // each slot is computed independently, so the result does not depend on
    // the thread count
#pragma omp parallel for schedule(static) if (kernels::openmp_enabled() && horizon >= 256)
    for (int n = 0; n < horizon; ++n)
        a.values[static_cast<std::size_t>(n)] = fourier_coeff(sigma, n);
    return a;
}

MixingFamily MixingFamily::strong() {
    MixingFamily f;
    f.kind = Kind::strong;
    f.name = "strong";
    return f;
}

MixingFamily MixingFamily::weak() {
    MixingFamily f;
    f.kind = Kind::weak;
    f.name = "weak";
    return f;
}

MixingFamily MixingFamily::ergodic() {
    MixingFamily f;
    f.kind = Kind::ergodic;
    f.name = "ergodic";
    return f;
}

MixingFamily MixingFamily::custom(std::string name,
                                  std::function<double(const FourierSequence&, int)> phi,
                                  double bound) {
    MixingFamily f;
    f.kind = Kind::custom;
    f.name = std::move(name);
    f.custom_phi = std::move(phi);
    f.bound = bound;
    return f;
}

double MixingFamily::phi(const FourierSequence& a, int n) const {
    if (n < 0 || n >= a.horizon())
        throw std::invalid_argument("mixing family: index out of horizon");
    switch (kind) {
        case Kind::strong:
            return std::abs(a.values[static_cast<std::size_t>(n)]);
        case Kind::weak:
            return cesaro_abs(a, n < 1 ? 1 : n);
        case Kind::ergodic: {
            if (n < 1) n = 1;
            CompensatedSum s;
            for (int k = 0; k < n; ++k) s.add(a.values[static_cast<std::size_t>(k)]);
            return std::abs(s.value()) / n;
        }
        case Kind::custom:
            return custom_phi(a, n);
    }
    return 0.0;
}

double cesaro_abs(const FourierSequence& a, int N) {
    if (N < 1 || N > a.horizon())
        throw std::invalid_argument("cesaro_abs: N out of range [1, horizon]");
    double s = 0.0;
    for (int n = 0; n < N; ++n) s += std::abs(a.values[static_cast<std::size_t>(n)]);
    return s / N;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::s_continuous_at_horizon: return "S-continuous-at-horizon";
        case Verdict::not_s_continuous: return "not-S-continuous";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ClassifyResult classify_sequence(const FourierSequence& a, const MixingFamily& s,
                                 double tol) {
    ClassifyResult r;
    r.first_index = s.first_index();
    int h = a.horizon();
    if (a.sup_norm() == 0.0) {
        r.degenerate = true;
        r.verdict = Verdict::s_continuous_at_horizon;
        r.trace.assign(static_cast<std::size_t>(std::max(0, h - r.first_index)), 0.0);
        return r;
    }
    {
        CompensatedSum cm;
        for (complex v : a.values) cm.add(v);
        r.atom_at_one = cm.value() / static_cast<double>(h);
    }

    if (s.kind == MixingFamily::Kind::ergodic) {
        // The atom at 1 shifts every coefficient by a constant; classify
        // the recentred sequence and report the atom estimate separately.
        FourierSequence b = a;
        for (complex& v : b.values) v -= *r.atom_at_one;
        if (b.sup_norm() <= 1e-12 * std::max(1.0, a.sup_norm())) {
            r.degenerate = true;
            r.verdict = Verdict::s_continuous_at_horizon;
            r.trace.assign(static_cast<std::size_t>(std::max(0, h - r.first_index)), 0.0);
            return r;
        }
        for (int n = r.first_index; n < h; ++n) r.trace.push_back(s.phi(b, n));
    } else {
        for (int n = r.first_index; n < h; ++n) r.trace.push_back(s.phi(a, n));
    }

    if (r.trace.empty()) return r;
    std::size_t len = r.trace.size();
    std::size_t tail = (len + 3) / 4;
    double tail_max = 0.0;
    for (std::size_t i = len - tail; i < len; ++i)
        tail_max = std::max(tail_max, r.trace[i]);

    std::size_t half = len / 2;
    double half_min = r.trace[half], half_max = r.trace[half];
    for (std::size_t i = half; i < len; ++i) {
        half_min = std::min(half_min, r.trace[i]);
        half_max = std::max(half_max, r.trace[i]);
    }
    // "non-decreasing over the last half" read with a 10% slack, so a
    // slowly drifting plateau still counts as non-decay.
    bool flat_or_growing = half_min >= 0.9 * half_max;

    if (tail_max < tol)
        r.verdict = Verdict::s_continuous_at_horizon;
    else if (tail_max > 10.0 * tol && flat_or_growing)
        r.verdict = Verdict::not_s_continuous;
    else
        r.verdict = Verdict::inconclusive;
    return r;
}

ClassifyResult classify(const CircleMeasure& sigma, const MixingFamily& s,
                        int horizon, double tol) {
    return classify_sequence(fourier_sequence(sigma, horizon), s, tol);
}

CircleMeasure pushforward(const std::vector<complex>& weights,
                          const std::vector<double>& angles, int grid) {
    if (weights.size() != angles.size())
        throw std::invalid_argument("pushforward: weights/angles size mismatch");
    std::map<double, complex> merged;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (std::isnan(weights[i].real()) || std::isnan(weights[i].imag()))
            throw std::invalid_argument("pushforward: NaN weight");
        merged[wrap_angle(angles[i])] += weights[i];
    }
    CircleMeasure m;
    m.grid_size = grid;
    m.atoms.reserve(merged.size());
    for (const auto& [theta, w] : merged) m.atoms.push_back({theta, w});
    return m;
}

void to_json(nlohmann::json& j, const CircleMeasure& m) {
    auto atoms = nlohmann::json::array();
    for (const auto& a : m.atoms)
        atoms.push_back({a.theta, a.weight.real(), a.weight.imag()});
    auto density = nlohmann::json::array();
    for (const auto& d : m.density) density.push_back({d.real(), d.imag()});
    j = nlohmann::json{{"atoms", atoms}, {"density", density}, {"grid", m.grid_size}};
}

void from_json(const nlohmann::json& j, CircleMeasure& m) {
    m = CircleMeasure{};
    m.grid_size = j.at("grid").get<int>();
    for (const auto& a : j.at("atoms"))
        m.atoms.push_back({a.at(0).get<double>(),
                           complex{a.at(1).get<double>(), a.at(2).get<double>()}});
    for (const auto& d : j.at("density"))
        m.density.push_back(complex{d.at(0).get<double>(), d.at(1).get<double>()});
}

}  // namespace mixlab
