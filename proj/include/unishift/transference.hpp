// transference.hpp — coordinate model of the Banach-side construction.
//
// The target space is a weighted l^p sequence space over the same grid: the
// image basis vectors are x_{i,n} = s_{i,n} f_{i,n} with f the unit
// coordinate vectors, the biorthogonal functionals have dual norm 1/s_{i,n},
// and the factor map J sends e_{i,n} to x_{i,n} (a diagonal positive
// scaling in coordinates, hence injective on every truncation). The shifted
// diagonal operator transported through J acts per coordinate with the
// inflow from level n+1 rescaled by s_{i,n}/s_{i,n+1}; the intertwining
// identity with the Hilbert-side operator then holds exactly.

#pragma once

#include <cstdint>
#include <vector>

#include "unishift/gaussian.hpp"
#include "unishift/hilbert.hpp"
#include "unishift/shift_op.hpp"

namespace unishift {

enum class ScaleLaw { unit, dyadic }; // s = 1 or s = 2^{-(i+n+1)}

struct BanachTarget {
    double p = 2.0;
    Grid grid{};
    std::vector<double> scales; // s_{i,n}, mode-major

    double scale(int i, int n) const;
    double dual_scale(int i, int n) const { return 1.0 / scale(i, n); }
};

BanachTarget make_banach_target(double p, const Grid& grid, ScaleLaw law);

// (sum |xi|^p)^{1/p}; coefficients indexed like a CVec.
double banach_norm(const BanachTarget& target, const CVec& xi);

// J e_{i,n} = s_{i,n} f_{i,n}: scale each coefficient.
CVec map_j(const BanachTarget& target, const CVec& x);

// The transported operator on coordinates: diagonal mu plus backward shift
// with inflow weight w(i,n) * s(i,n) / s(i,n+1).
CVec apply_shift_diag_x(const BanachTarget& target, const OperatorSpec& op, const CVec& xi);

struct IntertwineReport {
    int samples = 0;
    double max_defect = 0.0;            // max ||J(T x) - T_X(J x)||_X
    double max_normalized_defect = 0.0; // defect / (1 + ||J x||_X)
};

// Random-vector check of J T = T_X J (unit-norm complex Gaussian inputs).
IntertwineReport check_intertwine(const BanachTarget& target, const OperatorSpec& op,
                                  int samples, std::uint64_t seed);

struct NuclearitySums {
    std::vector<double> increments;   // term at source level n = 1..n_max
    std::vector<double> partial_sums; // running sums of the increments
    double max_ratio = 0.0;           // max of increment(n)/increment(n-1)
    bool geometric_decay = false;     // max_ratio < 0.9
};

// Partial sums of sum_i w(i,n-1) ||x_{i,n-1}|| ||x*_{i,n}||* — the nuclear
// bound for the backward shift, with the weight indexed at the shift's
// source convention (inflow to n-1 from n carries w(i,n-1)).
NuclearitySums nuclearity_partial_sums(const BanachTarget& target, const WeightFamily& w,
                                       int n_max);

struct PushforwardReport {
    int samples = 0;
    double covariance_distance = 0.0;
    double statistical_budget = 0.0;
    double deterministic_budget = 0.0;
    bool within_budget = false;
    int rank_source = 0;
    int rank_pushed = 0;
    bool rank_match = false;
};

// Push Gaussian samples through J and test invariance of the transported
// operator, mirroring invariance_test with the defect measured in X.
PushforwardReport pushforward_demo(const GaussianSampler& sampler, const BanachTarget& target,
                                   const OperatorSpec& op, int samples, std::uint64_t seed);

} // namespace unishift
