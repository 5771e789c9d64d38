#include "mixlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "mixlab/cantor.hpp"
#include "mixlab/circle.hpp"
#include "mixlab/diagnostics.hpp"
#include "mixlab/eigenfield.hpp"
#include "mixlab/gaussian.hpp"
#include "mixlab/operators.hpp"
#include "mixlab/semigroup.hpp"

namespace mixlab::experiments {

namespace {

using nlohmann::json;
using CsvMap = std::map<std::string, std::string>;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json num(double value, double tol) {
    return json{{"value", value}, {"tol", tol}};
}

json num_se(double value, double se) {
    return json{{"value", value}, {"se", se}};
}

const json& require(const json& config, const std::string& key) {
    if (!config.contains(key))
        throw std::invalid_argument("config." + key + ": missing");
    return config.at(key);
}

double get_num(const json& config, const std::string& key, double fallback) {
    if (!config.contains(key)) return fallback;
    const json& v = config.at(key);
    if (!v.is_number())
        throw std::invalid_argument("config." + key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& config, const std::string& key, int fallback) {
    if (!config.contains(key)) return fallback;
    const json& v = config.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument("config." + key + ": expected an integer");
    return v.get<int>();
}

std::string get_str(const json& config, const std::string& key,
                    const std::string& fallback) {
    if (!config.contains(key)) return fallback;
    const json& v = config.at(key);
    if (!v.is_string())
        throw std::invalid_argument("config." + key + ": expected a string");
    return v.get<std::string>();
}

std::uint64_t get_seed(const json& config) {
    const json& v = require(config, "seed");
    if (!v.is_number_integer())
        throw std::invalid_argument("config.seed: expected an integer");
    return v.get<std::uint64_t>();
}

MixingFamily get_family(const json& config) {
    std::string name = get_str(config, "family", "strong");
    if (name == "strong") return MixingFamily::strong();
    if (name == "weak") return MixingFamily::weak();
    if (name == "ergodic") return MixingFamily::ergodic();
    throw std::invalid_argument("config.family: unknown family '" + name + "'");
}

std::string trace_csv(const std::vector<complex>& coeffs) {
    std::string out = "n,re,im,abs\n";
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        out += std::to_string(n) + "," + fmt(coeffs[n].real()) + "," +
               fmt(coeffs[n].imag()) + "," + fmt(std::abs(coeffs[n])) + "\n";
    return out;
}

std::string phi_csv(const std::vector<double>& trace, int first_index) {
    std::string out = "n,phi_n\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out += std::to_string(first_index + static_cast<int>(i)) + "," +
               fmt(trace[i]) + "\n";
    return out;
}

json report_json(const MixingReport& rep, double tol) {
    const PairReport& worst = rep.pairs[rep.worst_pair];
    json pairs = json::array();
    for (const auto& pr : rep.pairs)
        pairs.push_back(json{{"probe_i", pr.trace.probe_i},
                             {"probe_j", pr.trace.probe_j},
                             {"verdict", to_string(pr.classification.verdict)}});
    json j{{"verdict", to_string(rep.verdict)},
           {"worst_pair",
            json{{"probe_i", worst.trace.probe_i},
                 {"probe_j", worst.trace.probe_j},
                 {"verdict", to_string(worst.classification.verdict)},
                 {"cauchy_schwarz_bound",
                  num(worst.trace.cauchy_schwarz_bound, 0.0)}}},
           {"tol", tol},
           {"pairs", pairs}};
    if (worst.classification.atom_at_one)
        j["worst_pair"]["atom_at_one"] =
            num(std::abs(*worst.classification.atom_at_one), tol);
    return j;
}

// ---- shift-mixing -------------------------------------------------------

std::pair<json, CsvMap> run_shift_mixing(const json& config, std::uint64_t seed) {
    int dim = get_int(config, "dim", 32);
    double w = get_num(config, "weight", 2.0);
    int nodes = get_int(config, "nodes", 1024);
    int horizon = get_int(config, "horizon", 128);
    double tol = get_num(config, "tol", 1e-6);
    MixingFamily family = get_family(config);

    ShiftSpec spec = ShiftSpec::constant(w, dim);
    TruncatedOperator t = weighted_shift(spec);
    EigenField field = make_shift_field(spec, nodes);
    GammaOperator k = GammaOperator::from_eigenfield(field);
    std::vector<Vec> probes = default_probes(dim, 8, seed);
    MixingReport rep = mixing_report(t, k, probes, family, horizon, tol,
                                     TraceMethod::quadrature);

    std::vector<Vec> inv_probes;
    for (int i = 0; i < dim - 1; ++i) {
        Vec e = Vec::Zero(dim);
        e[i] = 1.0;
        inv_probes.push_back(std::move(e));
    }
    double defect = invariance_defect(t, k, inv_probes);
    double tail = shift_eigenvector(spec, complex{1.0, 0.0}).tail_bound;

    json summary{{"experiment", "shift-mixing"},
                 {"family", family.name},
                 {"report", report_json(rep, tol)},
                 {"invariance_defect", num(defect, 1e-8 + tail)},
                 {"eigenvector_tail_bound", num(tail, 0.0)}};
    CsvMap csvs;
    const PairReport& worst = rep.pairs[rep.worst_pair];
    csvs["trace_worst.csv"] = trace_csv(worst.trace.coeffs);
    csvs["phi_worst.csv"] =
        phi_csv(worst.classification.trace, worst.classification.first_index);
    return {summary, csvs};
}

// ---- kalisch ------------------------------------------------------------

std::pair<json, CsvMap> run_kalisch(const json& config, std::uint64_t) {
    int grid = get_int(config, "grid", 4096);
    int t_count = get_int(config, "t_count", 10);
    if (t_count < 1)
        throw std::invalid_argument("config.t_count: must be >= 1");

    auto residual_at = [](int m, double tval) {
        KalischSpec spec{m};
        spec.validate();
        TruncatedOperator t = kalisch(spec);
        KalischEigenvector ev = kalisch_eigenvector(spec, tval);
        if (ev.degenerate) return 0.0;
        return (t.apply(ev.v) - ev.lambda * ev.v).norm() / ev.v.norm();
    };

    KalischSpec spec{grid};
    spec.validate();
    double h = spec.h();
    std::string csv = "t,residual,residual_refined,ratio\n";
    double worst = 0.0, worst_ratio = 0.0;
    for (int i = 0; i < t_count; ++i) {
        double tval = (i + 0.5) * two_pi / t_count;
        double r = residual_at(grid, tval);
        double r2 = residual_at(2 * grid, tval);
        double ratio = r > 0 ? r2 / r : 0.0;
        worst = std::max(worst, r);
        worst_ratio = std::max(worst_ratio, ratio);
        csv += fmt(tval) + "," + fmt(r) + "," + fmt(r2) + "," + fmt(ratio) + "\n";
    }
    json summary{{"experiment", "kalisch"},
                 {"grid", grid},
                 {"max_residual", num(worst, 10.0 * h)},
                 {"max_refinement_ratio", num(worst_ratio, 0.65)},
                 {"residual_bound", num(10.0 * h, 0.0)}};
    return {summary, CsvMap{{"residuals.csv", csv}}};
}

// ---- cantor-fourier -----------------------------------------------------

std::pair<json, CsvMap> run_cantor_fourier(const json& config, std::uint64_t) {
    int dim = get_int(config, "dim", 32);
    double w = get_num(config, "weight", 2.0);
    int depth = get_int(config, "depth", 10);
    double alpha = get_num(config, "alpha", 1.5);
    double lo = get_num(config, "arc_lo", 0.0);
    double hi = get_num(config, "arc_hi", pi);

    ShiftSpec spec = ShiftSpec::constant(w, dim);
    double lipschitz = 0.0;
    for (int n = 1; n < dim; ++n)
        lipschitz += n / std::abs(spec.weight_product(n));
    lipschitz = std::max(lipschitz, 1e-12);

    ArcField arc;
    arc.lo = lo;
    arc.hi = hi;
    arc.lipschitz = lipschitz;
    arc.E = [spec](double theta) {
        return shift_eigenvector(spec, std::polar(1.0, theta)).v;
    };

    CantorField cf = cantor_eigenfield(arc, depth, alpha);
    std::vector<Vec> coeffs = walsh_coeffs(cf.field);
    DecayCertificate cert = certify_decay(coeffs, cf.field.holder_C, alpha);
    std::vector<double> sums = level_sums(coeffs);

    double max_ratio = 0.0;
    std::string csv = "level,sum,ratio\n";
    for (std::size_t n = 0; n < sums.size(); ++n) {
        double ratio = n > 0 && sums[n - 1] > 0 ? sums[n] / sums[n - 1] : 0.0;
        if (n > 0) max_ratio = std::max(max_ratio, ratio);
        csv += std::to_string(n) + "," + fmt(sums[n]) + "," + fmt(ratio) + "\n";
    }

    json summary{{"experiment", "cantor-fourier"},
                 {"depth", depth},
                 {"alpha", alpha},
                 {"holder_C", num(cf.field.holder_C, 0.0)},
                 {"lipschitz", num(lipschitz, 0.0)},
                 {"certify_pass", cert.pass},
                 {"worst_ratio", num(cert.worst_ratio, 1.0)},
                 {"max_level_ratio", num(max_ratio, std::pow(2.0, -0.45))},
                 {"min_separation", num(cf.min_separation, 0.0)}};
    return {summary, CsvMap{{"level_sums.csv", csv}}};
}

// ---- wiener-classify ----------------------------------------------------

std::pair<json, CsvMap> run_wiener_classify(const json& config, std::uint64_t) {
    int horizon = get_int(config, "horizon", 512);
    double tol = get_num(config, "tol", 1e-6);
    int grid = get_int(config, "grid", std::max(4096, 4 * horizon));
    MixingFamily family = get_family(config);

    CircleMeasure sigma;
    sigma.grid_size = grid;
    double lw = get_num(config, "lebesgue", 0.0);
    if (lw != 0.0) sigma = complex{lw, 0.0} * CircleMeasure::lebesgue(grid);
    if (config.contains("atoms")) {
        const json& atoms = config.at("atoms");
        if (!atoms.is_array())
            throw std::invalid_argument("config.atoms: expected an array");
        for (const auto& a : atoms) {
            if (!a.is_array() || a.size() != 3)
                throw std::invalid_argument("config.atoms: entries are [theta,re,im]");
            sigma.atoms.push_back({wrap_angle(a.at(0).get<double>()),
                                   complex{a.at(1).get<double>(),
                                           a.at(2).get<double>()}});
        }
    }
    if (sigma.atoms.empty() && sigma.density.empty())
        throw std::invalid_argument("config: need atoms or lebesgue weight");

    ClassifyResult res = classify(sigma, family, horizon, tol);
    FourierSequence seq = fourier_sequence(sigma, horizon);

    json summary{{"experiment", "wiener-classify"},
                 {"family", family.name},
                 {"verdict", to_string(res.verdict)},
                 {"degenerate", res.degenerate},
                 {"tol", tol},
                 {"cesaro_abs", num(cesaro_abs(seq, horizon), 0.0)}};
    if (res.atom_at_one)
        summary["atom_at_one"] = num(std::abs(*res.atom_at_one), tol);
    CsvMap csvs;
    csvs["phi_trace.csv"] = phi_csv(res.trace, res.first_index);
    csvs["fourier.csv"] = trace_csv(seq.values);
    return {summary, csvs};
}

// ---- haar-null ----------------------------------------------------------

std::pair<json, CsvMap> run_haar_null(const json& config, std::uint64_t) {
    std::string op = get_str(config, "operator", "shift");
    int dim = get_int(config, "dim", 128);
    int n_terms = get_int(config, "n_terms", 100);
    double tail_tol = get_num(config, "tail_tol", 1e-3);

    TruncatedOperator t;
    Vec u;
    if (op == "shift") {
        double w = get_num(config, "weight", 2.0);
        double p = get_num(config, "p", 2.0);
        ShiftSpec spec = ShiftSpec::constant(w, dim);
        t = weighted_shift(spec);
        // Corollary probe u = sum_k |w_0...w_k|^{-1/(p+1)} e_k
        u = Vec(dim);
        for (int k = 0; k < dim; ++k)
            u[k] = std::pow(std::abs(spec.weight_product(k)), -1.0 / (p + 1.0));
    } else if (op == "identity") {
        t = TruncatedOperator::identity(dim);
        u = Vec::Zero(dim);
        u[0] = 1.0;
    } else {
        throw std::invalid_argument("config.operator: expected 'shift' or 'identity'");
    }

    HaarNullResult res = haar_null_check(t, u, n_terms, tail_tol);
    std::string csv = "n,partial_sum\n";
    for (std::size_t n = 0; n < res.partial_sums.size(); ++n)
        csv += std::to_string(n) + "," + fmt(res.partial_sums[n]) + "\n";

    json summary{{"experiment", "haar-null"},
                 {"operator", op},
                 {"verdict", to_string(res.verdict)},
                 {"tail", num(res.tail, tail_tol)},
                 {"zero_index", res.zero_index}};
    return {summary, CsvMap{{"partial_sums.csv", csv}}};
}

// ---- semigroup ----------------------------------------------------------

std::pair<json, CsvMap> run_semigroup(const json& config, std::uint64_t) {
    std::string weight = get_str(config, "weight", "exp");
    int size = get_int(config, "size", 16384);
    double h = get_num(config, "h", 1.0 / 512.0);
    double theta_lo = get_num(config, "theta_lo", 0.5);
    double theta_hi = get_num(config, "theta_hi", 1.5);
    double t0 = get_num(config, "t0", 1.0);
    int horizon = get_int(config, "horizon", 128);
    double tol = get_num(config, "tol", 1e-2);
    int nodes = get_int(config, "nodes", 128);

    WeightedLine wl;
    if (weight == "exp")
        wl = WeightedLine::exp_decay(size, h);
    else if (weight == "inv-linear")
        wl = WeightedLine::inverse_linear(size, h);
    else if (weight == "constant")
        wl = WeightedLine::constant(size, h);
    else
        throw std::invalid_argument(
            "config.weight: expected 'exp', 'inv-linear' or 'constant'");

    SemigroupMixingReport rep =
        semigroup_mixing_report(wl, theta_lo, theta_hi, t0, horizon, tol, nodes);

    json summary{{"experiment", "semigroup"},
                 {"weight", wl.weight_name},
                 {"admissibility_C_t0",
                  num(rep.admissibility.entries.front().second, 1e-6)},
                 {"weight_decay_ratio", num(rep.weight_decay_ratio, 1e-3)},
                 {"analytic_mixing", rep.analytic_mixing},
                 {"probe_verdict", to_string(rep.probe_report.verdict)},
                 {"verdict", to_string(rep.verdict)},
                 {"generator_residual_theta1",
                  num(generator_residual(wl, 1.0), 2.0 * h)}};
    const PairReport& worst = rep.probe_report.pairs[rep.probe_report.worst_pair];
    return {summary, CsvMap{{"trace_worst.csv", trace_csv(worst.trace.coeffs)}}};
}

// ---- chaos-check --------------------------------------------------------

std::pair<json, CsvMap> run_chaos_check(const json& config, std::uint64_t seed) {
    int dim = get_int(config, "dim", 32);
    double w = get_num(config, "weight", 2.0);
    int nodes = get_int(config, "nodes", 256);
    int k = get_int(config, "k", 2);
    std::int64_t mc = get_int(config, "mc", 100000);

    ShiftSpec spec = ShiftSpec::constant(w, dim);
    EigenField field = make_shift_field(spec, nodes);
    GaussianSampler sampler(GammaOperator::from_eigenfield(field), seed);

    Vec e0 = Vec::Zero(dim), e1 = Vec::Zero(dim), mixed = Vec::Zero(dim);
    e0[0] = 1.0;
    e1[1] = 1.0;
    // <u,v> = 0.5 after normalization: v* = e_0* + 2 sqrt(3) e_1*
    mixed[0] = 1.0;
    mixed[1] = 2.0 * std::sqrt(3.0);

    struct Pair {
        const char* name;
        double inner;
        Vec u, v;
    };
    std::vector<Pair> pairs{{"orthogonal", 0.0, e0, e1},
                            {"half", 0.5, e0, mixed},
                            {"equal", 1.0, e0, e0}};
    double band = 5.0 / std::sqrt(static_cast<double>(mc));
    std::string csv = "pair,inner_expected,inner_mc,lhs,rhs,abs_err\n";
    json results = json::array();
    for (const auto& p : pairs) {
        ChaosCheck c = hermite_chaos_check(sampler, k, p.u, p.v, mc);
        csv += std::string(p.name) + "," + fmt(p.inner) + "," + fmt(c.inner) +
               "," + fmt(c.lhs) + "," + fmt(c.rhs) + "," + fmt(c.abs_err) + "\n";
        results.push_back(json{{"pair", p.name},
                               {"inner_expected", p.inner},
                               {"inner", num_se(c.inner, band)},
                               {"lhs", num_se(c.lhs, band)},
                               {"rhs", num_se(c.rhs, band)},
                               {"abs_err", num(c.abs_err, band)}});
    }
    json summary{{"experiment", "chaos-check"},
                 {"k", k},
                 {"mc", mc},
                 {"pairs", results}};
    return {summary, CsvMap{{"chaos.csv", csv}}};
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json list() {
    return json::array({
        {{"kind", "shift-mixing"},
         {"description", "spectral mixing report for a weighted backward shift"},
         {"required", {"seed"}},
         {"optional", {"weight", "dim", "nodes", "horizon", "family", "tol"}}},
        {{"kind", "kalisch"},
         {"description", "Kalisch eigenpair residuals with grid refinement"},
         {"required", {"seed"}},
         {"optional", {"grid", "t_count"}}},
        {{"kind", "cantor-fourier"},
         {"description", "dyadic eigenfield construction and Walsh decay certificate"},
         {"required", {"seed"}},
         {"optional", {"dim", "weight", "depth", "alpha", "arc_lo", "arc_hi"}}},
        {{"kind", "wiener-classify"},
         {"description", "Fourier decay classification of a circle measure"},
         {"required", {"seed"}},
         {"optional", {"atoms", "lebesgue", "grid", "horizon", "family", "tol"}}},
        {{"kind", "haar-null"},
         {"description", "orbit-norm summability probe for Haar negligibility"},
         {"required", {"seed"}},
         {"optional", {"operator", "weight", "dim", "p", "n_terms", "tail_tol"}}},
        {{"kind", "semigroup"},
         {"description", "translation semigroup admissibility and mixing verdict"},
         {"required", {"seed"}},
         {"optional", {"weight", "size", "h", "theta_lo", "theta_hi", "t0",
                       "horizon", "tol", "nodes"}}},
        {{"kind", "chaos-check"},
         {"description", "Wiener chaos identity on the shift Gaussian measure"},
         {"required", {"seed"}},
         {"optional", {"dim", "weight", "nodes", "k", "mc"}}},
    });
}

json run(const nlohmann::json& config, const std::string& out_dir) {
    auto start = std::chrono::steady_clock::now();
    if (!config.is_object())
        throw std::invalid_argument("config: expected a JSON object");
    const json& kind_j = require(config, "experiment");
    if (!kind_j.is_string())
        throw std::invalid_argument("config.experiment: expected a string");
    std::string kind = kind_j.get<std::string>();
    std::uint64_t seed = get_seed(config);

    std::pair<json, CsvMap> result;
    if (kind == "shift-mixing")
        result = run_shift_mixing(config, seed);
    else if (kind == "kalisch")
        result = run_kalisch(config, seed);
    else if (kind == "cantor-fourier")
        result = run_cantor_fourier(config, seed);
    else if (kind == "wiener-classify")
        result = run_wiener_classify(config, seed);
    else if (kind == "haar-null")
        result = run_haar_null(config, seed);
    else if (kind == "semigroup")
        result = run_semigroup(config, seed);
    else if (kind == "chaos-check")
        result = run_chaos_check(config, seed);
    else
        throw std::invalid_argument("config.experiment: unknown kind '" + kind + "'");

    json& summary = result.first;
    summary["seed"] = seed;

    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot write " + (dir / name).string());
        f << content;
    };

    std::string summary_text = summary.dump(2) + "\n";
    std::string hashed = config.dump() + summary_text;
    for (const auto& [name, content] : result.second) {
        hashed += name + content;
        write(name, content);
    }
    write("summary.json", summary_text);

    auto elapsed = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    json manifest{{"schema_version", 1},
                  {"library_version", version},
                  {"experiment", kind},
                  {"config", config},
                  {"content_hash", fnv1a_hex(hashed)},
                  {"wall_time_ms", elapsed}};
    write("manifest.json", manifest.dump(2) + "\n");
    return summary;
}

}  // namespace mixlab::experiments
