// gaussian.hpp — Gaussian measures carried by unimodular eigenvectors.
//
// The measure is a finite expansion x = sum_j a_j g_j E_{i_j}(lambda_j) with
// independent standard complex Gaussian gains g_j. When every lambda_j is a
// diagonal point with level <= N-2 the term vectors are exact eigenvectors of
// the truncation, the law of T x equals the law of x (rotation invariance of
// the gains), and the invariance defect is purely statistical. Ergodic
// behaviour is reported, never certified: the truncated system is a finite
// quasi-rotation, so time averages settle on the gain-dependent rotation
// average, which the report compares against explicitly.

#pragma once

#include <cstdint>
#include <vector>

#include "unishift/hilbert.hpp"
#include "unishift/shift_op.hpp"
#include "unishift/spectrum.hpp"

namespace unishift {

struct GaussianTerm {
    int mode = 0;
    cplx lambda{1.0, 0.0};
    double amplitude = 1.0;
};

struct GaussianSpec {
    std::vector<GaussianTerm> terms;
};

// Default spec: term j sits on mode j % modes at the j-th diagonal point
// with amplitude ratio^j. Requires count <= levels - 1 so every term is an
// exact eigenvector of the truncation.
GaussianSpec default_gaussian_spec(const EigenSequence& seq, const Grid& grid, int count,
                                   double ratio = 0.5);

// Bakes the term vectors once; sampling is then a small linear combination,
// deterministic per seed and safe to run in parallel over sample indices.
class GaussianSampler {
public:
    GaussianSampler(const GaussianSpec& spec, const EigenSequence& seq, const WeightFamily& w,
                    const Grid& grid);

    const Grid& grid() const { return grid_; }
    const GaussianSpec& spec() const { return spec_; }
    const std::vector<CVec>& term_fields() const { return fields_; }
    // true when every lambda_j is bit-identical to a diagonal point of level
    // <= levels - 2 (term vectors are exact eigenvectors of the truncation)
    bool exact_eigen() const { return exact_; }

    CVec sample(std::uint64_t seed) const;
    CVec sample(std::uint64_t seed, std::vector<cplx>& gains_out) const;

private:
    GaussianSpec spec_;
    Grid grid_;
    std::vector<CVec> fields_;
    bool exact_ = true;
};

struct InvarianceReport {
    int samples = 0;
    double covariance_distance = 0.0;  // Frobenius, cov(x) vs cov(Tx)
    double statistical_budget = 0.0;   // 5 tr(cov) / sqrt(M)
    double deterministic_budget = 0.0; // sum_j a_j^2 (2 res_j ||E_j|| + res_j^2)
    bool within_budget = false;
};

// Compare second moments of {x} and {T x} on M samples. Requires M >= 1000.
InvarianceReport invariance_test(const GaussianSampler& sampler, const OperatorSpec& op,
                                 int samples, std::uint64_t seed);

enum class FunctionalKind { re_inner, abs2_inner };

struct Functional {
    FunctionalKind kind = FunctionalKind::abs2_inner;
    int mode = 0;
    int level = 0;
};

struct BirkhoffReport {
    long orbit_length = 0;
    int orbits = 0;
    double ensemble_mean = 0.0;       // mean of f over the starting samples
    double time_mean = 0.0;           // mean of the per-orbit time averages
    double gap = 0.0;                 // |time_mean - ensemble_mean|
    double gap_budget = 0.0;          // paired 3 sigma / sqrt(M) fluctuation budget
    bool gap_within_budget = false;
    double dispersion_initial = 0.0;  // std of f(x) across samples (L = 1 statistics)
    double dispersion_time_avg = 0.0; // std of the time averages
    bool ergodic_consistent = false;  // time averages collapsed vs initial dispersion
    double oracle_max_err = 0.0;      // vs the exact rotation average; NaN if unavailable
};

// Time average of f along M orbits of length L versus the ensemble average.
// For exact-eigenvector specs the per-orbit limit is computed in closed form
// (the torus rotation average of the gain combination) and compared.
BirkhoffReport birkhoff_test(const GaussianSampler& sampler, const OperatorSpec& op,
                             const Functional& f, long orbit_length, int samples,
                             std::uint64_t seed, int threads = 1);

double functional_value(const Functional& f, const CVec& x);

// Two-sample Kolmogorov-Smirnov statistic (sorted-merge walk).
double ks_statistic(std::vector<double> a, std::vector<double> b);

} // namespace unishift
