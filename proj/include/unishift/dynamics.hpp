// dynamics.hpp — orbit simulation and the finite-horizon statistics that
// witness recurrence and dense periodicity at truncation scale.
//
// A single orbit is inherently serial; everything recorded here (visit
// counters, running frequencies, the log-norm trend) is a conservative
// finite-horizon proxy. Periodicity is different: with a roots-of-unity
// diagonal, finite eigenvector combinations return exactly after the lcm of
// the orders, so those witnesses are sharp up to rounding.

#pragma once

#include <cstdint>
#include <vector>

#include "unishift/eigenfields.hpp"
#include "unishift/hilbert.hpp"
#include "unishift/shift_op.hpp"
#include "unishift/spectrum.hpp"

namespace unishift {

struct OrbitTarget {
    CVec center;
    double radius = 0.0;
};

struct OrbitStats {
    long steps = 0;
    std::vector<long> checkpoints;               // step indices, increasing
    std::vector<std::vector<long>> visits;       // [target][checkpoint], cumulative
    std::vector<std::vector<double>> frequency;  // visits / (checkpoint + 1)
    double max_norm = 0.0;
    double final_norm = 0.0;
    double lognorm_slope = 0.0; // least-squares slope of log ||T^n x|| vs n
};

// Iterate the operator for `steps` applications; a visit to target t at step
// n (n = 0 is the starting point) means ||T^n x - center|| <= radius.
OrbitStats run_orbit(const OperatorSpec& op, const CVec& x0, long steps,
                     const std::vector<OrbitTarget>& targets,
                     const std::vector<long>& checkpoints);

// Conservative liminf proxy: the smallest running frequency over checkpoints
// past the burn-in prefix. Throws std::out_of_range if no checkpoint
// survives the burn-in.
double lower_density_estimate(const OrbitStats& stats, std::size_t target,
                              double burn_in_fraction = 0.1);

struct PeriodicPick {
    int mode = 0;
    int level = 0; // diagonal index N' of the eigenvalue, N' <= levels - 2
    cplx coeff{1.0, 0.0};
};

struct PeriodicPoint {
    CVec x;
    std::uint64_t period = 1; // lcm of the recorded orders of the picked eigenvalues
};

// Finite combination of exact eigenvectors at root-of-unity eigenvalues.
// Requires roots_of_unity mode (std::domain_error otherwise) and every
// level <= grid.levels - 2 (std::out_of_range otherwise).
PeriodicPoint make_periodic_point(const EigenSequence& seq, const WeightFamily& w,
                                  const Grid& grid, const std::vector<PeriodicPick>& picks);

struct PeriodicDensityReport {
    int size = 0;
    double min_diag_abs = 0.0;
    double min_diag_log = 0.0;
    bool invertible = false;
};

// Truncation-level witness that periodic eigenvectors span: the spanning
// matrices at the first `size` (root-of-unity) diagonal points must be
// invertible on every mode, i.e. min |diagonal| > tol.
PeriodicDensityReport density_of_periodic_directions(const EigenSequence& seq,
                                                     const WeightFamily& w, const Grid& grid,
                                                     int size, double tol);

} // namespace unishift
