// shift_op.hpp — the truncated operator: unimodular diagonal plus weighted
// backward shift, acting level-wise within each mode.
//
// On basis slots: (i, 0) picks up only the diagonal; (i, n) for n >= 1 feeds
// w(i, n-1) into (i, n-1). Per mode the matrix is upper bidiagonal with the
// diagonal entries on the unit circle. Truncation drops the inflow from the
// level just above the grid; that single dropped term is the only defect in
// the eigenvector identities (quantified in eigenfields).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "unishift/hilbert.hpp"
#include "unishift/spectrum.hpp"

namespace unishift {

struct OperatorSpec {
    Grid grid{};
    std::vector<cplx> mu; // size = grid.levels
    WeightFamily w;       // restricted copy on the operator grid
};

// Validated assembly: |mu[n]| = 1 within 1e-12, weights positive, and the
// sequence long enough for the grid. Copies the first `levels` diagonal
// entries and restricts the weights to the grid.
OperatorSpec make_operator(const Grid& grid, const EigenSequence& seq, const WeightFamily& w);

// Same, from a raw diagonal (hand-assembled spectra for lab use).
OperatorSpec make_operator(const Grid& grid, const std::vector<cplx>& mu, const WeightFamily& w);

// y(i,n) = mu[n] x(i,n) + w(i,n) x(i,n+1), top level diagonal only.
CVec apply(const OperatorSpec& op, const CVec& x);

// Dense per-mode matrices (upper bidiagonal), mostly for oracle checks.
std::vector<Eigen::MatrixXcd> to_matrix(const OperatorSpec& op);

// m-fold application. Throws std::range_error if any coefficient passes
// 1e300 (a mis-specified diagonal; with distinct unimodular entries the
// truncation is power-bounded).
CVec power_apply(const OperatorSpec& op, const CVec& x, long m);

std::string operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const std::string& text);

// Dense CSV of one mode's matrix, re/im column pairs.
void write_matrix_csv(std::ostream& out, const OperatorSpec& op, int mode,
                      const std::string& header_line);

} // namespace unishift
