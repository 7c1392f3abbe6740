#include "unishift/eigenfields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unishift {

EigenField make_field(const EigenSequence& seq, const WeightFamily& w, const Grid& grid,
                      int mode) {
    if (mode < 0 || mode >= grid.modes) throw std::out_of_range("make_field: mode outside grid");
    if (seq.mu.size() < static_cast<std::size_t>(grid.levels))
        throw std::invalid_argument("make_field: sequence too short for the truncation");
    if (w.grid.modes <= mode || w.grid.levels + 1 < grid.levels)
        throw std::invalid_argument("make_field: weight grid too small");
    return EigenField{seq, w, grid, mode};
}

cplx eigen_coeff(const EigenField& f, int n, cplx lambda) {
    if (n < 0 || n >= f.grid.levels) throw std::out_of_range("eigen_coeff: level out of range");

    // direct product, falling back to log space on small factors
    cplx prod{1.0, 0.0};
    bool log_path = false;
    for (int p = 0; p < n; ++p) {
        const cplx factor = (lambda - f.seq.mu[static_cast<std::size_t>(p)]) /
                            f.weights.at(f.mode, p);
        if (factor == cplx{0.0, 0.0}) return {0.0, 0.0};
        if (std::abs(factor) < 1e-3) {
            log_path = true;
            break;
        }
        prod *= factor;
    }
    if (!log_path) return prod;

    double log_mag = 0.0;
    double phase = 0.0;
    for (int p = 0; p < n; ++p) {
        const cplx factor = (lambda - f.seq.mu[static_cast<std::size_t>(p)]) /
                            f.weights.at(f.mode, p);
        if (factor == cplx{0.0, 0.0}) return {0.0, 0.0};
        log_mag += std::log(std::abs(factor));
        phase += std::arg(factor);
        phase = std::remainder(phase, 2.0 * std::numbers::pi);
    }
    const double mag = std::exp(log_mag); // underflows to an honest zero
    return std::polar(mag, phase);
}

CVec eval_field(const EigenField& f, cplx lambda) {
    CVec v(f.grid);
    cplx coeff{1.0, 0.0};
    bool clean = true; // running product valid so far
    for (int n = 0; n < f.grid.levels; ++n) {
        if (n > 0) {
            if (clean) {
                const cplx factor = (lambda - f.seq.mu[static_cast<std::size_t>(n - 1)]) /
                                    f.weights.at(f.mode, n - 1);
                if (std::abs(factor) < 1e-3 || factor == cplx{0.0, 0.0}) {
                    clean = false;
                    coeff = eigen_coeff(f, n, lambda);
                } else {
                    coeff *= factor;
                }
            } else {
                coeff = eigen_coeff(f, n, lambda);
            }
        }
        if (std::abs(coeff) > 1e300)
            throw std::range_error("eval_field: coefficient overflow (lambda far outside support)");
        v(f.mode, n) = coeff;
    }
    return v;
}

double residual(const OperatorSpec& op, const EigenField& f, cplx lambda) {
    if (!(op.grid == f.grid)) throw std::invalid_argument("residual: grid mismatch");
    const CVec e = eval_field(f, lambda);
    return norm(apply(op, e) - lambda * e);
}

double residual_closed_form(const EigenField& f, cplx lambda) {
    const int top = f.grid.levels - 1;
    return std::abs(lambda - f.seq.mu[static_cast<std::size_t>(top)]) *
           std::abs(eigen_coeff(f, top, lambda));
}

double tail_energy(const EigenField& f, cplx lambda, int from_level) {
    const CVec e = eval_field(f, lambda);
    double acc = 0.0;
    for (int n = from_level + 1; n < f.grid.levels; ++n) acc += std::norm(e(f.mode, n));
    return acc;
}

SpanningMatrix spanning_matrix(const EigenSequence& seq, const WeightFamily& w, int mode,
                               int size) {
    if (size < 1) throw std::invalid_argument("spanning_matrix: size must be >= 1");
    if (seq.mu.size() < static_cast<std::size_t>(size))
        throw std::invalid_argument("spanning_matrix: sequence too short");

    SpanningMatrix out;
    out.mat = Eigen::MatrixXcd::Zero(size, size);
    out.min_diag_abs = std::numeric_limits<double>::infinity();
    out.min_diag_log = std::numeric_limits<double>::infinity();

    const Grid g = make_grid(mode + 1, std::max(size, 2));
    const EigenField f = make_field(seq, w, g, mode);

    for (int j = 0; j < size; ++j) {
        const cplx lam = seq.mu[static_cast<std::size_t>(j)];
        // column j is supported on rows 0..j: the factor at p = j vanishes
        for (int n = 0; n <= j && n < size; ++n)
            out.mat(n, j) = eigen_coeff(f, n, lam);

        double diag_log = 0.0;
        bool zero = false;
        for (int p = 0; p < j; ++p) {
            const double d = std::abs(lam - seq.mu[static_cast<std::size_t>(p)]);
            if (d == 0.0) {
                zero = true;
                break;
            }
            diag_log += std::log(d) - std::log(w.at(mode, p));
        }
        if (zero) {
            out.singular = true;
            out.min_diag_abs = 0.0;
            out.min_diag_log = -std::numeric_limits<double>::infinity();
        } else {
            out.min_diag_abs = std::min(out.min_diag_abs, std::abs(out.mat(j, j)));
            out.min_diag_log = std::min(out.min_diag_log, diag_log);
        }
    }
    return out;
}

TriangularSolve solve_upper(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& b) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n || b.size() != n) throw std::invalid_argument("solve_upper: shape mismatch");
    TriangularSolve out;
    out.x = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index r = n - 1; r >= 0; --r) {
        cplx acc = b(r);
        for (Eigen::Index c = r + 1; c < n; ++c) acc -= m(r, c) * out.x(c);
        if (m(r, r) == cplx{0.0, 0.0}) throw std::range_error("solve_upper: zero pivot");
        out.x(r) = acc / m(r, r);
    }
    const double num = (m * out.x - b).norm();
    const double den = m.norm() * out.x.norm() + b.norm();
    out.rel_residual = den > 0.0 ? num / den : num;
    return out;
}

ContinuityProbe continuity_probe(const EigenField& f,
                                 const std::vector<std::pair<cplx, cplx>>& pairs, int k0) {
    if (k0 < 0) throw std::invalid_argument("continuity_probe: negative cut");
    const int cut = 1 << k0;
    ContinuityProbe out;
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& [la, lb] : pairs) {
        const CVec ea = eval_field(f, la);
        const CVec eb = eval_field(f, lb);
        const double dev = norm(ea - eb);

        double partial_sq = 0.0; // ||P(la) - P(lb)||^2 over levels 0..min(cut, N-1)
        for (int n = 0; n <= cut && n < f.grid.levels; ++n)
            partial_sq += std::norm(ea(f.mode, n) - eb(f.mode, n));
        const double bound = partial_sq + 2.0 * std::ldexp(1.0, -(k0 + 1));

        out.max_deviation = std::max(out.max_deviation, dev);
        out.max_excess = std::max(out.max_excess, dev * dev - bound);
        ++out.pairs;
    }
    if (out.pairs == 0) out.max_excess = 0.0;
    return out;
}

} // namespace unishift
