#include "unishift/transference.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "unishift/rng.hpp"

namespace unishift {

double BanachTarget::scale(int i, int n) const {
    if (!grid.contains(i, n)) throw std::out_of_range("banach target: slot outside grid");
    return scales[grid.flat(i, n)];
}

BanachTarget make_banach_target(double p, const Grid& grid, ScaleLaw law) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("banach target: p must be in [1, inf)");
    BanachTarget t;
    t.p = p;
    t.grid = grid;
    t.scales.resize(grid.size());
    for (int i = 0; i < grid.modes; ++i)
        for (int n = 0; n < grid.levels; ++n)
            t.scales[grid.flat(i, n)] =
                law == ScaleLaw::unit ? 1.0 : std::ldexp(1.0, -(i + n + 1));
    return t;
}

double banach_norm(const BanachTarget& target, const CVec& xi) {
    if (!(xi.grid() == target.grid)) throw std::invalid_argument("banach_norm: grid mismatch");
    if (target.p == 2.0) return norm(xi);
    double acc = 0.0;
    for (const auto& v : xi.data()) acc += std::pow(std::abs(v), target.p);
    return std::pow(acc, 1.0 / target.p);
}

CVec map_j(const BanachTarget& target, const CVec& x) {
    if (!(x.grid() == target.grid)) throw std::invalid_argument("map_j: grid mismatch");
    CVec out = x;
    auto vals = out.data();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] *= target.scales[k];
    return out;
}

CVec apply_shift_diag_x(const BanachTarget& target, const OperatorSpec& op, const CVec& xi) {
    if (!(xi.grid() == target.grid) || !(op.grid == target.grid))
        throw std::invalid_argument("apply_shift_diag_x: grid mismatch");
    const int I = target.grid.modes;
    const int N = target.grid.levels;
    CVec out(target.grid);
    for (int i = 0; i < I; ++i) {
        for (int n = 0; n < N - 1; ++n) {
            const double inflow = op.w.at(i, n) * (target.scale(i, n) / target.scale(i, n + 1));
            out(i, n) = op.mu[static_cast<std::size_t>(n)] * xi(i, n) + inflow * xi(i, n + 1);
        }
        out(i, N - 1) = op.mu[static_cast<std::size_t>(N - 1)] * xi(i, N - 1);
    }
    return out;
}

IntertwineReport check_intertwine(const BanachTarget& target, const OperatorSpec& op,
                                  int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("check_intertwine: need samples >= 1");
    IntertwineReport rep;
    rep.samples = samples;
    for (int m = 0; m < samples; ++m) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(m)));
        CVec x(target.grid);
        for (auto& v : x.data()) v = rng.complex_gaussian();
        const double nx = norm(x);
        if (nx > 0.0) x *= cplx{1.0 / nx, 0.0};

        const CVec lhs = map_j(target, apply(op, x));
        const CVec jx = map_j(target, x);
        const CVec rhs = apply_shift_diag_x(target, op, jx);
        const double defect = banach_norm(target, lhs - rhs);
        rep.max_defect = std::max(rep.max_defect, defect);
        rep.max_normalized_defect =
            std::max(rep.max_normalized_defect, defect / (1.0 + banach_norm(target, jx)));
    }
    return rep;
}

NuclearitySums nuclearity_partial_sums(const BanachTarget& target, const WeightFamily& w,
                                       int n_max) {
    if (n_max < 1) throw std::invalid_argument("nuclearity_partial_sums: n_max must be >= 1");
    if (n_max >= target.grid.levels)
        throw std::invalid_argument("nuclearity_partial_sums: n_max beyond target grid");
    NuclearitySums out;
    double running = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        double term = 0.0;
        for (int i = 0; i < target.grid.modes; ++i)
            term += w.at(i, n - 1) * target.scale(i, n - 1) * target.dual_scale(i, n);
        out.increments.push_back(term);
        running += term;
        out.partial_sums.push_back(running);
    }
    for (std::size_t n = 1; n < out.increments.size(); ++n)
        out.max_ratio = std::max(out.max_ratio, out.increments[n] / out.increments[n - 1]);
    if (out.increments.size() < 2) out.max_ratio = 0.0;
    out.geometric_decay = out.max_ratio < 0.9;
    return out;
}

namespace {

int numerical_rank(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
    const auto& ev = es.eigenvalues();
    const double top = ev.size() > 0 ? std::abs(ev(ev.size() - 1)) : 0.0;
    if (top <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (std::abs(ev(k)) > 1e-10 * top) ++r;
    return r;
}

} // namespace

PushforwardReport pushforward_demo(const GaussianSampler& sampler, const BanachTarget& target,
                                   const OperatorSpec& op, int samples, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("pushforward_demo: need at least 1000 samples");
    if (!(sampler.grid() == target.grid))
        throw std::invalid_argument("pushforward_demo: sampler/target grid mismatch");

    const auto dim = static_cast<Eigen::Index>(target.grid.size());
    Eigen::MatrixXcd cov_src = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd cov_pushed = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd cov_moved = Eigen::MatrixXcd::Zero(dim, dim);

    auto as_vec = [](const CVec& v) {
        return Eigen::Map<const Eigen::VectorXcd>(v.data().data(),
                                                  static_cast<Eigen::Index>(v.data().size()));
    };

    for (int m = 0; m < samples; ++m) {
        const CVec x = sampler.sample(mix_seed(seed, static_cast<std::uint64_t>(m)));
        const CVec jx = map_j(target, x);
        const CVec tjx = apply_shift_diag_x(target, op, jx);
        cov_src.noalias() += as_vec(x) * as_vec(x).adjoint();
        cov_pushed.noalias() += as_vec(jx) * as_vec(jx).adjoint();
        cov_moved.noalias() += as_vec(tjx) * as_vec(tjx).adjoint();
    }
    cov_src /= static_cast<double>(samples);
    cov_pushed /= static_cast<double>(samples);
    cov_moved /= static_cast<double>(samples);

    PushforwardReport rep;
    rep.samples = samples;
    rep.covariance_distance = (cov_pushed - cov_moved).norm();
    rep.statistical_budget =
        5.0 * cov_pushed.trace().real() / std::sqrt(static_cast<double>(samples));

    double det = 0.0;
    const auto& terms = sampler.spec().terms;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const CVec je = map_j(target, sampler.term_fields()[j]);
        const double res = norm(apply_shift_diag_x(target, op, je) - terms[j].lambda * je);
        const double a2 = terms[j].amplitude * terms[j].amplitude;
        det += a2 * (2.0 * res * norm(je) + res * res);
    }
    rep.deterministic_budget = det;
    rep.within_budget = rep.covariance_distance <= rep.statistical_budget + det;

    rep.rank_source = numerical_rank(cov_src);
    rep.rank_pushed = numerical_rank(cov_pushed);
    rep.rank_match = rep.rank_source == rep.rank_pushed;
    return rep;
}

} // namespace unishift
