// eigenfields.hpp — eigenvector fields of the shifted diagonal operator.
//
// For a spectral parameter lambda the field on mode i has coefficients
//   c_{i,0} = 1,   c_{i,n} = prod_{p<n} (lambda - mu_p) / w(i,p),
// truncated at the operator's level count. On the Cantor support the
// coefficients decay fast enough that the tail beyond level 2^k is bounded
// by 2^{-(k+1)}; that bound is recomputed here, not assumed. The truncation
// defect of the eigen-equation is a single dropped term at the top level,
// with a closed form checked against the measured residual.

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "unishift/hilbert.hpp"
#include "unishift/shift_op.hpp"
#include "unishift/spectrum.hpp"

namespace unishift {

struct EigenField {
    const EigenSequence& seq;
    const WeightFamily& weights;
    Grid grid{}; // levels = truncation, modes must cover `mode`
    int mode = 0;
};

EigenField make_field(const EigenSequence& seq, const WeightFamily& w, const Grid& grid, int mode);

// c_{i,n}(lambda); n = 0 gives 1. Evaluated factor by factor, switching to
// log-magnitude + phase accumulation when any factor drops below 1e-3 in
// modulus, so deep products underflow to an honest 0 instead of junk.
cplx eigen_coeff(const EigenField& f, int n, cplx lambda);

// The truncated field as a vector on the grid (zero outside `mode`).
// Throws std::range_error if a coefficient overflows 1e300.
CVec eval_field(const EigenField& f, cplx lambda);

// || T E(lambda) - lambda E(lambda) || measured in the ambient norm.
double residual(const OperatorSpec& op, const EigenField& f, cplx lambda);

// |lambda - mu_{N-1}| * |c_{N-1}(lambda)|: the dropped top-level inflow,
// which is the entire defect up to rounding.
double residual_closed_form(const EigenField& f, cplx lambda);

// sum_{n > from_level} |c_n(lambda)|^2 up to the truncation.
double tail_energy(const EigenField& f, cplx lambda, int from_level);

// Columns are the fields at the first `size` diagonal points, rows the
// levels; upper triangular with unit first row. min_diag_log is the log of
// the smallest diagonal modulus computed factor-wise (safe against
// underflow); singular means an exactly repeated diagonal point.
struct SpanningMatrix {
    Eigen::MatrixXcd mat;
    double min_diag_abs = 0.0;
    double min_diag_log = 0.0;
    bool singular = false;
};

SpanningMatrix spanning_matrix(const EigenSequence& seq, const WeightFamily& w, int mode,
                               int size);

// Backward-substitution solve against b with the normwise relative residual
// ||Mx - b|| / (||M||_F ||x|| + ||b||).
struct TriangularSolve {
    Eigen::VectorXcd x;
    double rel_residual = 0.0;
};

TriangularSolve solve_upper(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& b);

// Evaluate the field at both ends of each pair and compare against the
// partial-sum splitting at cut level 2^k0: deviation^2 should not exceed
// ||P(a) - P(b)||^2 + 2 * 2^{-(k0+1)}.
struct ContinuityProbe {
    double max_deviation = 0.0; // max ||E(a) - E(b)||
    double max_excess = 0.0;    // max of deviation^2 minus the splitting bound
    std::size_t pairs = 0;
};

ContinuityProbe continuity_probe(const EigenField& f,
                                 const std::vector<std::pair<cplx, cplx>>& pairs, int k0);

} // namespace unishift
