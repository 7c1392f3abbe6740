#include "unishift/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace unishift {

OrbitStats run_orbit(const OperatorSpec& op, const CVec& x0, long steps,
                     const std::vector<OrbitTarget>& targets,
                     const std::vector<long>& checkpoints) {
    if (steps < 1) throw std::invalid_argument("run_orbit: steps must be >= 1");
    for (const auto& t : targets) {
        if (!(t.radius > 0.0)) throw std::invalid_argument("run_orbit: radius must be positive");
        if (!(t.center.grid() == op.grid))
            throw std::invalid_argument("run_orbit: target grid mismatch");
    }
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw std::invalid_argument("run_orbit: checkpoints must be increasing");
    for (long c : checkpoints)
        if (c < 0 || c > steps) throw std::invalid_argument("run_orbit: checkpoint out of range");

    OrbitStats stats;
    stats.steps = steps;
    stats.checkpoints = checkpoints;
    stats.visits.assign(targets.size(), {});
    stats.frequency.assign(targets.size(), {});

    std::vector<long> count(targets.size(), 0);
    CVec x = x0;

    // least-squares slope accumulators for log ||T^n x||, n = 0..steps
    long double s_t = 0, s_tt = 0, s_y = 0, s_ty = 0;
    long n_pts = 0;

    std::size_t next_cp = 0;
    for (long n = 0; n <= steps; ++n) {
        if (n > 0) {
            x = apply(op, x);
            if (max_abs(x) > 1e300)
                throw std::range_error("run_orbit: coefficient overflow");
        }
        const double nn = norm(x);
        stats.max_norm = std::max(stats.max_norm, nn);
        stats.final_norm = nn;
        if (nn > 0.0) {
            const long double y = std::log(nn);
            s_t += n;
            s_tt += static_cast<long double>(n) * n;
            s_y += y;
            s_ty += n * y;
            ++n_pts;
        }
        for (std::size_t t = 0; t < targets.size(); ++t)
            if (norm(x - targets[t].center) <= targets[t].radius) ++count[t];
        while (next_cp < checkpoints.size() && checkpoints[next_cp] == n) {
            for (std::size_t t = 0; t < targets.size(); ++t) {
                stats.visits[t].push_back(count[t]);
                stats.frequency[t].push_back(static_cast<double>(count[t]) /
                                             static_cast<double>(n + 1));
            }
            ++next_cp;
        }
    }

    if (n_pts >= 2) {
        const long double denom = s_tt - s_t * s_t / n_pts;
        if (denom > 0)
            stats.lognorm_slope = static_cast<double>((s_ty - s_t * s_y / n_pts) / denom);
    }
    return stats;
}

double lower_density_estimate(const OrbitStats& stats, std::size_t target,
                              double burn_in_fraction) {
    if (target >= stats.frequency.size())
        throw std::out_of_range("lower_density_estimate: bad target index");
    const double cutoff = burn_in_fraction * static_cast<double>(stats.steps);
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
        if (static_cast<double>(stats.checkpoints[c]) <= cutoff) continue;
        best = std::min(best, stats.frequency[target][c]);
        any = true;
    }
    if (!any) throw std::out_of_range("lower_density_estimate: no checkpoint after burn-in");
    return best;
}

PeriodicPoint make_periodic_point(const EigenSequence& seq, const WeightFamily& w,
                                  const Grid& grid, const std::vector<PeriodicPick>& picks) {
    if (seq.mode != SpectrumMode::roots_of_unity)
        throw std::domain_error("make_periodic_point: sequence is not in roots_of_unity mode");

    PeriodicPoint out{CVec(grid), 1};
    for (const auto& pick : picks) {
        if (pick.level < 0 || pick.level > grid.levels - 2)
            throw std::out_of_range("make_periodic_point: eigenvalue level beyond levels - 2");
        if (pick.mode < 0 || pick.mode >= grid.modes)
            throw std::out_of_range("make_periodic_point: mode outside grid");
        const EigenField f = make_field(seq, w, grid, pick.mode);
        out.x += pick.coeff * eval_field(f, seq.mu[static_cast<std::size_t>(pick.level)]);

        const std::uint64_t ord = seq.orders.at(static_cast<std::size_t>(pick.level));
        const std::uint64_t g = std::gcd(out.period, ord);
        if (out.period / g > (std::uint64_t{1} << 62) / ord)
            throw std::range_error("make_periodic_point: period overflow");
        out.period = out.period / g * ord;
    }
    return out;
}

PeriodicDensityReport density_of_periodic_directions(const EigenSequence& seq,
                                                     const WeightFamily& w, const Grid& grid,
                                                     int size, double tol) {
    if (seq.mode != SpectrumMode::roots_of_unity)
        throw std::domain_error("density_of_periodic_directions: not in roots_of_unity mode");
    PeriodicDensityReport rep;
    rep.size = size;
    rep.min_diag_abs = std::numeric_limits<double>::infinity();
    rep.min_diag_log = std::numeric_limits<double>::infinity();
    bool singular = false;
    for (int i = 0; i < grid.modes; ++i) {
        const SpanningMatrix sm = spanning_matrix(seq, w, i, size);
        singular = singular || sm.singular;
        rep.min_diag_abs = std::min(rep.min_diag_abs, sm.min_diag_abs);
        rep.min_diag_log = std::min(rep.min_diag_log, sm.min_diag_log);
    }
    rep.invertible = !singular && rep.min_diag_abs > tol;
    return rep;
}

} // namespace unishift
