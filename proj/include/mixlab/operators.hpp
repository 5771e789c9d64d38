#ifndef MIXLAB_OPERATORS_HPP
#define MIXLAB_OPERATORS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/common.hpp"

namespace mixlab {

// N-dimensional section of a concrete operator. Large sections (Kalisch)
// stay matrix-free; dense() materializes the matrix on demand.
class TruncatedOperator {
public:
    TruncatedOperator() = default;
    TruncatedOperator(Mat matrix, std::string label, std::string truncation_note);
    TruncatedOperator(int dim, std::function<Vec(const Vec&)> apply,
                      std::function<Vec(const Vec&)> adjoint, std::string label,
                      std::string truncation_note);

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    const std::string& truncation_note() const { return truncation_note_; }

    Vec apply(const Vec& x) const;
    // Hilbert adjoint T* (conjugate transpose action).
    Vec adjoint(const Vec& y) const;
    // Action on functional coefficient vectors under the bilinear pairing:
    // <x*, T v> = <dual_apply(x*), v>. Equals the plain transpose.
    Vec dual_apply(const Vec& xstar) const;

    const Mat& dense() const;

    static TruncatedOperator identity(int n);
    static TruncatedOperator diagonal(const Vec& entries, std::string label = "diagonal");

private:
    int dim_ = 0;
    std::string label_;
    std::string truncation_note_;
    std::function<Vec(const Vec&)> apply_;
    std::function<Vec(const Vec&)> adjoint_;
    mutable std::optional<Mat> dense_;
};

// Weighted backward shift B_w on X_p: e_k -> w_k e_{k-1}, e_0 -> 0.
struct ShiftSpec {
    int dim = 0;
    std::vector<complex> weights;  // w_1 .. w_{N-1}; w_0 := 1 implicitly
    double p = 2.0;                // 1, 2, or inf (c0) via p = INFINITY

    static ShiftSpec constant(complex w, int dim, double p = 2.0);

    complex weight(int k) const;  // w_k, k in [1, dim-1]
    // product w_0 * ... * w_n
    complex weight_product(int n) const;
    // whether the truncated profile |1/(w_0...w_n)| looks summable in X_p
    bool eigenvalue_existence_flag() const;
    void validate() const;
};

TruncatedOperator weighted_shift(const ShiftSpec& spec);

struct ShiftEigenvector {
    Vec v;                  // coordinates lambda^n / (w_0...w_n), n < N
    double tail_bound = 0;  // geometric estimate of sum_{n>=N} |1/(w_0...w_n)|
    bool tail_reliable = true;
    double residual = 0;    // ||B_w v - lambda v||_2 at truncation
};

ShiftEigenvector shift_eigenvector(const ShiftSpec& spec, complex lambda);

// Kalisch operator on a midpoint grid of (0, 2pi):
// (Tf)_j = e^{i t_j} f_j - h * sum_{k<j} i e^{i t_k} f_k.
struct KalischSpec {
    int grid = 4096;

    double h() const { return two_pi / grid; }
    double node(int j) const { return (j + 0.5) * h(); }
    void validate() const;
};

TruncatedOperator kalisch(const KalischSpec& spec);

struct KalischEigenvector {
    // grid indicator of (t, 2pi): the vector the stated formula actually
    // fixes, T 1_{(t,2pi)} = e^{it} 1_{(t,2pi)}; t -> 2pi degenerates to 0
    Vec v;
    complex lambda;
    bool degenerate = false;
};

KalischEigenvector kalisch_eigenvector(const KalischSpec& spec, double t);

// max_j dist(e_j, span of the given vectors); 0 means spanning at this
// truncation. Modified Gram-Schmidt with re-orthogonalization, rank
// tolerance 1e-10.
double spanning_defect(const std::vector<Vec>& vectors, int dim);

// Uniform sampling on the circle minus the given closed arcs
// [(lo, hi) angles], proportional to complement arc length.
std::vector<double> sample_angles_excluding(
    const std::vector<std::pair<double, double>>& excluded_arcs, int count,
    std::uint64_t seed);

}  // namespace mixlab

#endif
