#include "unishift/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "unishift/eigenfields.hpp"
#include "unishift/parallel.hpp"
#include "unishift/rng.hpp"

namespace unishift {

GaussianSpec default_gaussian_spec(const EigenSequence& seq, const Grid& grid, int count,
                                   double ratio) {
    if (count < 0 || count > grid.levels - 1)
        throw std::invalid_argument("default_gaussian_spec: need count <= levels - 1");
    if (seq.mu.size() < static_cast<std::size_t>(count))
        throw std::invalid_argument("default_gaussian_spec: sequence too short");
    GaussianSpec spec;
    double a = 1.0;
    for (int j = 0; j < count; ++j) {
        spec.terms.push_back({j % grid.modes, seq.mu[static_cast<std::size_t>(j)], a});
        a *= ratio;
    }
    return spec;
}

GaussianSampler::GaussianSampler(const GaussianSpec& spec, const EigenSequence& seq,
                                 const WeightFamily& w, const Grid& grid)
    : spec_(spec), grid_(grid) {
    fields_.reserve(spec.terms.size());
    for (const auto& term : spec.terms) {
        if (!(term.amplitude > 0.0))
            throw std::invalid_argument("gaussian term amplitude must be positive");
        const EigenField f = make_field(seq, w, grid, term.mode);
        fields_.push_back(eval_field(f, term.lambda));

        bool is_exact = false;
        for (int p = 0; p <= grid.levels - 2 && p < static_cast<int>(seq.mu.size()); ++p)
            if (seq.mu[static_cast<std::size_t>(p)] == term.lambda) {
                is_exact = true;
                break;
            }
        exact_ = exact_ && is_exact;
    }
}

CVec GaussianSampler::sample(std::uint64_t seed) const {
    std::vector<cplx> gains;
    return sample(seed, gains);
}

CVec GaussianSampler::sample(std::uint64_t seed, std::vector<cplx>& gains_out) const {
    Rng rng(seed);
    CVec x(grid_);
    gains_out.clear();
    gains_out.reserve(spec_.terms.size());
    for (std::size_t j = 0; j < spec_.terms.size(); ++j) {
        const cplx g = rng.complex_gaussian();
        gains_out.push_back(g);
        const cplx s = spec_.terms[j].amplitude * g;
        auto xs = x.data();
        auto fs = fields_[j].data();
        for (std::size_t k = 0; k < xs.size(); ++k) xs[k] += s * fs[k];
    }
    return x;
}

namespace {

Eigen::Map<const Eigen::VectorXcd> as_vector(const CVec& v) {
    return {v.data().data(), static_cast<Eigen::Index>(v.data().size())};
}

} // namespace

InvarianceReport invariance_test(const GaussianSampler& sampler, const OperatorSpec& op,
                                 int samples, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("invariance_test: need at least 1000 samples");
    if (!(sampler.grid() == op.grid))
        throw std::invalid_argument("invariance_test: sampler/operator grid mismatch");

    const auto dim = static_cast<Eigen::Index>(op.grid.size());
    Eigen::MatrixXcd cov_x = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd cov_tx = Eigen::MatrixXcd::Zero(dim, dim);

    for (int m = 0; m < samples; ++m) {
        const CVec x = sampler.sample(mix_seed(seed, static_cast<std::uint64_t>(m)));
        const CVec tx = apply(op, x);
        const auto vx = as_vector(x);
        const auto vtx = as_vector(tx);
        cov_x.noalias() += vx * vx.adjoint();
        cov_tx.noalias() += vtx * vtx.adjoint();
    }
    cov_x /= static_cast<double>(samples);
    cov_tx /= static_cast<double>(samples);

    InvarianceReport rep;
    rep.samples = samples;
    rep.covariance_distance = (cov_x - cov_tx).norm();
    rep.statistical_budget = 5.0 * cov_x.trace().real() / std::sqrt(static_cast<double>(samples));

    // systematic part: each term vector fails the eigen-equation by a single
    // dropped top-level inflow; bound its effect on the second moment
    double det = 0.0;
    const auto& terms = sampler.spec().terms;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const CVec& e = sampler.term_fields()[j];
        const double res = norm(apply(op, e) - terms[j].lambda * e);
        const double a2 = terms[j].amplitude * terms[j].amplitude;
        det += a2 * (2.0 * res * norm(e) + res * res);
    }
    rep.deterministic_budget = det;
    rep.within_budget = rep.covariance_distance <= rep.statistical_budget + det;
    return rep;
}

double functional_value(const Functional& f, const CVec& x) {
    const cplx c = x.at(f.mode, f.level);
    return f.kind == FunctionalKind::re_inner ? c.real() : std::norm(c);
}

namespace {

// (1/L) sum_{l<L} z^l for unimodular z
cplx rotation_mean(cplx z, long L) {
    if (std::abs(z - cplx{1.0, 0.0}) < 1e-15) return {1.0, 0.0};
    cplx zl{1.0, 0.0};
    std::uint64_t e = static_cast<std::uint64_t>(L);
    cplx base = z;
    while (e != 0) {
        if (e & 1ULL) zl *= base;
        base *= base;
        e >>= 1;
    }
    return (zl - 1.0) / (static_cast<double>(L) * (z - 1.0));
}

} // namespace

BirkhoffReport birkhoff_test(const GaussianSampler& sampler, const OperatorSpec& op,
                             const Functional& f, long orbit_length, int samples,
                             std::uint64_t seed, int threads) {
    if (orbit_length < 1) throw std::invalid_argument("birkhoff_test: orbit length must be >= 1");
    if (samples < 2) throw std::invalid_argument("birkhoff_test: need at least 2 orbits");
    if (!op.grid.contains(f.mode, f.level))
        throw std::invalid_argument("birkhoff_test: functional slot outside grid");

    const auto& terms = sampler.spec().terms;
    const std::size_t J = terms.size();

    std::vector<double> initial(static_cast<std::size_t>(samples));
    std::vector<double> timeavg(static_cast<std::size_t>(samples));
    std::vector<double> oracle(static_cast<std::size_t>(samples), 0.0);

    // slot coefficient of each term vector
    std::vector<cplx> slot_coeff(J);
    for (std::size_t j = 0; j < J; ++j) slot_coeff[j] = sampler.term_fields()[j].at(f.mode, f.level);

    const bool have_oracle = sampler.exact_eigen();
    std::vector<cplx> rot_mean_1(J);
    std::vector<std::vector<cplx>> rot_mean_2;
    if (have_oracle) {
        for (std::size_t j = 0; j < J; ++j) rot_mean_1[j] = rotation_mean(terms[j].lambda, orbit_length);
        if (f.kind == FunctionalKind::abs2_inner) {
            rot_mean_2.assign(J, std::vector<cplx>(J));
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t jp = 0; jp < J; ++jp)
                    rot_mean_2[j][jp] =
                        rotation_mean(terms[j].lambda * std::conj(terms[jp].lambda), orbit_length);
        }
    }

    parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t m) {
        std::vector<cplx> gains;
        CVec y = sampler.sample(mix_seed(seed, m), gains);
        initial[m] = functional_value(f, y);
        double acc = 0.0;
        for (long l = 0; l < orbit_length; ++l) {
            acc += functional_value(f, y);
            if (l + 1 < orbit_length) y = apply(op, y);
        }
        timeavg[m] = acc / static_cast<double>(orbit_length);

        if (have_oracle) {
            std::vector<cplx> alpha(J);
            for (std::size_t j = 0; j < J; ++j)
                alpha[j] = terms[j].amplitude * gains[j] * slot_coeff[j];
            if (f.kind == FunctionalKind::re_inner) {
                cplx s{0.0, 0.0};
                for (std::size_t j = 0; j < J; ++j) s += alpha[j] * rot_mean_1[j];
                oracle[m] = s.real();
            } else {
                cplx s{0.0, 0.0};
                for (std::size_t j = 0; j < J; ++j)
                    for (std::size_t jp = 0; jp < J; ++jp)
                        s += alpha[j] * std::conj(alpha[jp]) * rot_mean_2[j][jp];
                oracle[m] = s.real();
            }
        }
    });

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto std_of = [&](const std::vector<double>& v, double mean) {
        double s = 0.0;
        for (double x : v) s += (x - mean) * (x - mean);
        return std::sqrt(s / static_cast<double>(v.size()));
    };

    BirkhoffReport rep;
    rep.orbit_length = orbit_length;
    rep.orbits = samples;
    rep.ensemble_mean = mean_of(initial);
    rep.time_mean = mean_of(timeavg);
    rep.gap = std::abs(rep.time_mean - rep.ensemble_mean);
    rep.dispersion_initial = std_of(initial, rep.ensemble_mean);
    rep.dispersion_time_avg = std_of(timeavg, rep.time_mean);

    // paired fluctuation budget: the gap is the mean of d_m = timeavg - f(x),
    // whose shared (l = 0) variance cancels
    std::vector<double> d(static_cast<std::size_t>(samples));
    for (std::size_t m = 0; m < d.size(); ++m) d[m] = timeavg[m] - initial[m];
    const double d_mean = mean_of(d);
    rep.gap_budget =
        3.0 * std_of(d, d_mean) / std::sqrt(static_cast<double>(samples)) + 1e-12;
    rep.gap_within_budget = rep.gap <= rep.gap_budget;

    rep.ergodic_consistent = rep.dispersion_time_avg < 0.8 * rep.dispersion_initial;

    if (have_oracle) {
        double worst = 0.0;
        for (std::size_t m = 0; m < oracle.size(); ++m)
            worst = std::max(worst, std::abs(timeavg[m] - oracle[m]));
        rep.oracle_max_err = worst;
    } else {
        rep.oracle_max_err = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] <= b[ib])
            ++ia;
        else
            ++ib;
        const double fa = static_cast<double>(ia) / static_cast<double>(a.size());
        const double fb = static_cast<double>(ib) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

} // namespace unishift
