// spectrum.hpp — construction of the unimodular diagonal sequence.
//
// The points mu_p live on the unit circle and are laid down block by block:
// block k (indices 2^{k-1} .. 2^k - 1) places one new point very close to
// each existing point, subject to a summability constraint tying the step
// length to the shift weights. The closed arcs joining each new point to its
// anchor nest as k grows; their intersection is a Cantor set carrying the
// point spectrum of the shifted diagonal operator. A sampler for a continuous
// measure supported on that set descends the arc tree at random.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "unishift/hilbert.hpp"

namespace unishift {

// Closed circle arc between two unimodular endpoints (the shorter one).
struct Arc {
    cplx a{1.0, 0.0};
    cplx b{1.0, 0.0};

    double chord() const { return std::abs(a - b); }
    // midpoint along the shorter arc; endpoints must not be antipodal
    cplx midpoint() const;
    // angular half-width and center angle of the shorter arc
    double half_width() const;
    bool contains(cplx z, double slack = 0.0) const;
};

enum class SpectrumMode { generic, roots_of_unity };

std::string to_string(SpectrumMode m);
SpectrumMode spectrum_mode_from_string(const std::string& s);

struct EigenSequence {
    int depth = 0;                     // number of construction steps K
    SpectrumMode mode = SpectrumMode::generic;
    std::uint64_t seed = 0;
    std::vector<cplx> mu;              // size 2^depth, mu[0] = 1
    std::vector<Arc> arcs;             // arcs[p] joins mu[p - 2^{k-1}] and mu[p]; arcs[0] unused
    std::vector<double> lk;            // lk[k] = realized max step at block k; lk[0] unused
    std::vector<std::uint64_t> orders; // roots_of_unity only: mu[p]^orders[p] = 1
    double min_pairwise_gap = 0.0;     // recorded distinctness evidence
};

// Index block J_k: {0} for k = 0, [2^{k-1}, 2^k - 1] for k >= 1.
struct IndexBlock {
    std::size_t lo = 0;
    std::size_t hi = 0; // inclusive
    std::size_t size() const { return hi - lo + 1; }
};

IndexBlock j_block(int k);

// Constraint sum for block k and mode i:
//   S_i(k) = sum over n in J_{k+1} of prod_{p<n} w(i,p)^{-2}.
// Throws std::out_of_range if the weight grid is too small.
double constraint_sum(int k, const WeightFamily& w, int i);

// Largest admissible step length at block k, uniform over modes i <= i_max,
// with a 1/2 safety factor: min_i sqrt(2^{-(k+2)} / S_i(k)) / 2.
double max_step_length(int k, const WeightFamily& w, int i_max);

// Run the construction to `depth` blocks (2^depth points). Deterministic in
// (w, depth, mode, seed). In roots_of_unity mode every point is an exact
// root of unity with its order recorded.
EigenSequence build_sequence(const WeightFamily& w, int depth, SpectrumMode mode,
                             std::uint64_t seed);

struct ConstraintCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0; // bound/achieved for inequality checks; slack otherwise
    std::string detail;
};

struct ConstraintReport {
    std::vector<ConstraintCheck> checks;
    bool all_pass() const;
    // step-inequality margins only (criterion: every one >= 2)
    double min_step_margin() const;
};

// Recompute every stored invariant from scratch: unimodularity, mu_0 = 1,
// distinctness, the step inequalities for all k and i <= k, the realized
// step lengths against the stored ones, arc nesting, and (roots mode) the
// recorded orders. Violations are reported, never thrown.
ConstraintReport verify_constraints(const EigenSequence& seq, const WeightFamily& w);

// Arcs alive at a given depth (the k-th Cantor approximation). Depth 0 is
// the degenerate arc at mu_0.
struct CantorApprox {
    int depth = 0;
    std::vector<Arc> arcs;
};

CantorApprox cantor_level(const EigenSequence& seq, int k);

// Draw one point of the depth-level Cantor approximation: descend the arc
// tree choosing a child uniformly at each level, return the midpoint of the
// final arc. depth = 0 returns mu_0. Throws std::out_of_range if depth
// exceeds the construction depth.
cplx sample_cantor(const EigenSequence& seq, int depth, std::uint64_t seed);

// JSON round trip; bit-exact (doubles survive serialize/parse unchanged).
std::string sequence_to_json(const EigenSequence& seq);
EigenSequence sequence_from_json(const std::string& text);

} // namespace unishift
