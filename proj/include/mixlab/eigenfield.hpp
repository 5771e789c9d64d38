#ifndef MIXLAB_EIGENFIELD_HPP
#define MIXLAB_EIGENFIELD_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "mixlab/common.hpp"
#include "mixlab/operators.hpp"

namespace mixlab {

// Discretized T-eigenfield (E, phi) on a weighted node set (Omega, m):
// T E_j = e^{i phi_j} E_j up to a stored residual tolerance.
struct EigenField {
    struct Node {
        double m = 0.0;    // weight, > 0
        double phi = 0.0;  // eigenvalue angle in [0, 2pi)
        Vec E;
    };

    std::vector<Node> nodes;
    std::string operator_ref;
    double residual_tol = 1e-8;

    int state_dim() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().E.size()); }
    int size() const { return static_cast<int>(nodes.size()); }
    double total_mass() const;

    // max_j ||T E_j - e^{i phi_j} E_j|| / max(||E_j||, eps)
    double eigen_residual(const TruncatedOperator& T) const;

    void validate(const TruncatedOperator& T) const;
};

// Shift eigenfield over M uniform midpoint angles on [lo, hi), normalized
// total mass 1.
EigenField make_shift_field(const ShiftSpec& spec, int node_count,
                            double lo = 0.0, double hi = two_pi);

// K_E f = sum_j m_j f_j E_j
Vec k_apply(const EigenField& field, const Vec& f);

// (K_E* x*)_j = conj(<x*, E_j>) with the bilinear dual pairing
Vec k_adjoint(const EigenField& field, const Vec& xstar);

// max over a probe set of node functions of
// ||T(K_E f) - K_E(phi . f)|| / ||f||_{L2(m)}
double intertwining_residual(const TruncatedOperator& T, const EigenField& field);

struct SpanningResult {
    double defect = 1.0;
    bool degenerate = false;
};

SpanningResult m_spanning_defect(const EigenField& field);

// weights alpha^2, beta^2 disjoint-union merge
EigenField merge_fields(const EigenField& a, double alpha, const EigenField& b,
                        double beta);

void to_json(nlohmann::json& j, const EigenField& f);
void from_json(const nlohmann::json& j, EigenField& f);

}  // namespace mixlab

#endif
