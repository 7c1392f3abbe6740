#include "unishift/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "unishift/rng.hpp"

namespace unishift {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smallest step angle the construction will accept. Below this, distinct
// points on the unit circle stop being distinguishable in double precision.
constexpr double kAngleFloor = 1e-14;

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

cplx pow_u64(cplx z, std::uint64_t e) {
    cplx r{1.0, 0.0};
    while (e != 0) {
        if (e & 1ULL) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

} // namespace

// ------------------------------- Arc ----------------------------------

cplx Arc::midpoint() const {
    const cplx m = a + b;
    const double n = std::abs(m);
    if (n == 0.0) throw std::range_error("arc midpoint: antipodal endpoints");
    return m / n;
}

double Arc::half_width() const {
    double h = chord() / 2.0;
    h = std::min(h, 1.0);
    return std::asin(h);
}

bool Arc::contains(cplx z, double slack) const {
    const cplx c = a + b;
    const double n = std::abs(c);
    if (n == 0.0) return false;
    const double off = std::abs(wrap_angle(std::arg(z) - std::arg(c / n)));
    return off <= half_width() + slack;
}

std::string to_string(SpectrumMode m) {
    return m == SpectrumMode::generic ? "generic" : "roots_of_unity";
}

SpectrumMode spectrum_mode_from_string(const std::string& s) {
    if (s == "generic") return SpectrumMode::generic;
    if (s == "roots_of_unity") return SpectrumMode::roots_of_unity;
    throw std::invalid_argument("unknown spectrum mode: " + s);
}

// ----------------------------- blocks ---------------------------------

IndexBlock j_block(int k) {
    if (k < 0) throw std::invalid_argument("j_block: negative block index");
    if (k == 0) return IndexBlock{0, 0};
    if (k > 62) throw std::invalid_argument("j_block: block index too large");
    const std::size_t lo = std::size_t{1} << (k - 1);
    return IndexBlock{lo, 2 * lo - 1};
}

double constraint_sum(int k, const WeightFamily& w, int i) {
    if (k < 1) throw std::invalid_argument("constraint_sum: k must be >= 1");
    const IndexBlock blk = j_block(k + 1);
    const int need_levels = static_cast<int>(blk.hi); // products reach p = hi - 1
    if (i < 0 || i >= w.grid.modes || need_levels > w.grid.levels)
        throw std::out_of_range("constraint_sum: weight grid too small");

    double prod = 1.0; // running prod_{p<n} w(i,p)^{-2}
    for (std::size_t p = 0; p < blk.lo; ++p) {
        const double v = w.at(i, static_cast<int>(p));
        prod /= v * v;
    }
    double s = 0.0;
    for (std::size_t n = blk.lo; n <= blk.hi; ++n) {
        s += prod;
        const double v = w.at(i, static_cast<int>(n));
        prod /= v * v;
    }
    return s;
}

double max_step_length(int k, const WeightFamily& w, int i_max) {
    if (k < 1) throw std::invalid_argument("max_step_length: k must be >= 1");
    if (i_max < 0) throw std::invalid_argument("max_step_length: negative mode range");
    const double bound = std::ldexp(1.0, -(k + 2));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= i_max; ++i) {
        const double s = constraint_sum(k, w, i);
        best = std::min(best, std::sqrt(bound / s));
    }
    return best / 2.0;
}

// --------------------------- construction ------------------------------

namespace {

// exact dyadic angle num / 2^t, num in [0, 2^t)
struct DyadicAngle {
    std::uint64_t num = 0;
    int t = 0;

    void reduce() {
        while (t > 0 && (num & 1ULL) == 0) {
            num >>= 1;
            --t;
        }
    }
    bool operator==(const DyadicAngle&) const = default;
    double radians() const { return kTwoPi * (static_cast<double>(num) / std::ldexp(1.0, t)); }
};

struct Placement {
    std::size_t anchor;
    double direction; // +1 ccw, -1 cw
    double span_cap;  // max angular step, > 0
};

} // namespace

EigenSequence build_sequence(const WeightFamily& w, int depth, SpectrumMode mode,
                             std::uint64_t seed) {
    if (depth < 1) throw std::invalid_argument("build_sequence: depth must be >= 1");
    if (depth > 20) throw std::invalid_argument("build_sequence: depth > 20 not supported");
    const std::size_t count = std::size_t{1} << depth;
    {
        const int need_levels = (1 << (depth + 1)) - 1;
        if (w.grid.modes <= depth || w.grid.levels < need_levels)
            throw std::out_of_range("build_sequence: weight grid too small for requested depth");
    }

    EigenSequence seq;
    seq.depth = depth;
    seq.mode = mode;
    seq.seed = seed;
    seq.mu.assign(count, cplx{0.0, 0.0});
    seq.arcs.assign(count, Arc{});
    seq.lk.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    seq.mu[0] = cplx{1.0, 0.0};

    const bool roots = (mode == SpectrumMode::roots_of_unity);
    std::vector<DyadicAngle> angle; // exact angles, roots mode only
    if (roots) {
        seq.orders.assign(count, 1);
        angle.assign(count, DyadicAngle{});
    }

    Rng rng(seed);

    for (int k = 1; k <= depth; ++k) {
        const double target = max_step_length(k, w, k);
        if (!(target > kAngleFloor))
            throw std::range_error("build_sequence: admissible step underflows double precision");
        // cap keeps every chord < 1 (the step-1 requirement; later caps are tiny anyway)
        const double base_cap = std::min(target, 1.0);

        const std::size_t half = std::size_t{1} << (k - 1);
        double realized = 0.0;

        for (std::size_t j = 0; j < half; ++j) {
            const std::size_t idx = half + j;

            Placement pl{};
            if (k == 1) {
                pl = Placement{0, +1.0, base_cap};
            } else {
                const std::size_t quarter = half / 2;
                const std::size_t parent = (j < quarter) ? j + quarter : j;
                const std::size_t other = (j < quarter) ? parent : j - quarter;
                const double delta = wrap_angle(std::arg(seq.mu[other]) - std::arg(seq.mu[j]));
                // stay within half the parent arc: keeps nesting and makes the
                // realized step lengths strictly decreasing
                pl = Placement{j, delta >= 0.0 ? +1.0 : -1.0,
                               std::min(base_cap, std::abs(delta) / 2.0)};
            }

            double theta = rng.uniform_pos() * pl.span_cap;
            cplx candidate;
            DyadicAngle cand_angle;

            if (!roots) {
                for (;;) {
                    candidate = seq.mu[pl.anchor] * std::polar(1.0, pl.direction * theta);
                    bool clash = false;
                    for (std::size_t q = 0; q < idx && !clash; ++q)
                        clash = std::abs(candidate - seq.mu[q]) < 4e-16;
                    if (!clash) break;
                    theta /= 2.0;
                    if (theta < kAngleFloor)
                        throw std::range_error("build_sequence: cannot separate points");
                }
            } else {
                const DyadicAngle base = angle[pl.anchor];
                for (;;) {
                    int t = base.t;
                    while (kTwoPi / std::ldexp(1.0, t) > theta && t < 52) ++t;
                    if (kTwoPi / std::ldexp(1.0, t) > theta)
                        throw std::range_error("build_sequence: root-of-unity grid exhausted");
                    const double step = kTwoPi / std::ldexp(1.0, t);
                    const auto n_steps =
                        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(theta / step));
                    const std::uint64_t den = std::uint64_t{1} << t;
                    const std::uint64_t anchored = base.num << (t - base.t);
                    std::uint64_t num;
                    if (pl.direction > 0)
                        num = (anchored + n_steps) & (den - 1);
                    else
                        num = (anchored + den - (n_steps & (den - 1))) & (den - 1);
                    cand_angle = DyadicAngle{num, t};
                    cand_angle.reduce();
                    bool clash = false;
                    for (std::size_t q = 0; q < idx && !clash; ++q)
                        clash = (angle[q] == cand_angle);
                    if (!clash) break;
                    theta /= 2.0;
                    if (theta < kAngleFloor)
                        throw std::range_error("build_sequence: cannot separate points");
                }
                candidate = std::polar(1.0, cand_angle.radians());
                angle[idx] = cand_angle;
                seq.orders[idx] = std::uint64_t{1} << cand_angle.t;
            }

            seq.mu[idx] = candidate;
            seq.arcs[idx] = Arc{seq.mu[pl.anchor], candidate};
            realized = std::max(realized, std::abs(candidate - seq.mu[pl.anchor]));
        }
        seq.lk[static_cast<std::size_t>(k)] = realized;
    }

    // min pairwise chord distance: adjacent pairs in angular order suffice
    {
        std::vector<std::size_t> order(count);
        for (std::size_t p = 0; p < count; ++p) order[p] = p;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::arg(seq.mu[a]) < std::arg(seq.mu[b]);
        });
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < count; ++p) {
            const cplx a = seq.mu[order[p]];
            const cplx b = seq.mu[order[(p + 1) % count]];
            if (count > 1) gap = std::min(gap, std::abs(a - b));
        }
        seq.min_pairwise_gap = (count > 1) ? gap : 0.0;
    }

    return seq;
}

// --------------------------- verification ------------------------------

bool ConstraintReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ConstraintCheck& c) { return c.pass; });
}

double ConstraintReport::min_step_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : checks)
        if (c.name.rfind("step_ineq", 0) == 0) m = std::min(m, c.margin);
    return m;
}

namespace {

double safe_ratio(double bound, double achieved) {
    if (achieved <= 0.0) return std::numeric_limits<double>::infinity();
    return bound / achieved;
}

} // namespace

ConstraintReport verify_constraints(const EigenSequence& seq, const WeightFamily& w) {
    ConstraintReport rep;
    const std::size_t count = seq.mu.size();

    auto push = [&rep](std::string name, bool pass, double margin, std::string detail) {
        rep.checks.push_back({std::move(name), pass, margin, std::move(detail)});
    };

    // shape
    {
        const bool ok = count == (std::size_t{1} << seq.depth) && seq.arcs.size() == count &&
                        seq.lk.size() == static_cast<std::size_t>(seq.depth) + 1 &&
                        (seq.mode != SpectrumMode::roots_of_unity || seq.orders.size() == count);
        push("shape", ok, ok ? 1.0 : 0.0, "container sizes vs depth");
        if (!ok) return rep;
    }

    // unimodularity within 1e-12
    {
        double worst = 0.0;
        for (const auto& m : seq.mu) worst = std::max(worst, std::abs(std::abs(m) - 1.0));
        push("unimodular", worst <= 1e-12, safe_ratio(1e-12, worst),
             "max | |mu|-1 | = " + std::to_string(worst));
    }

    // mu_0 = 1
    {
        const double dev = std::abs(seq.mu[0] - cplx{1.0, 0.0});
        push("mu0_is_one", dev <= 1e-14, safe_ratio(1e-14, dev),
             "|mu_0 - 1| = " + std::to_string(dev));
    }

    // pairwise distinctness via angular neighbours
    {
        std::vector<std::size_t> order(count);
        for (std::size_t p = 0; p < count; ++p) order[p] = p;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::arg(seq.mu[a]) < std::arg(seq.mu[b]);
        });
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < count && count > 1; ++p)
            gap = std::min(gap, std::abs(seq.mu[order[p]] - seq.mu[order[(p + 1) % count]]));
        if (count == 1) gap = 1.0;
        push("distinct", gap > 0.0, gap, "min pairwise gap = " + std::to_string(gap));
    }

    // step inequalities and realized step lengths
    for (int k = 1; k <= seq.depth; ++k) {
        const double bound = std::ldexp(1.0, -(k + 2));
        const double lk = seq.lk[static_cast<std::size_t>(k)];
        for (int i = 0; i <= k; ++i) {
            double lhs;
            std::string detail;
            try {
                lhs = lk * lk * constraint_sum(k, w, i);
                detail = "lhs = " + std::to_string(lhs) + ", bound = " + std::to_string(bound);
            } catch (const std::out_of_range&) {
                push("step_ineq k=" + std::to_string(k) + " i=" + std::to_string(i), false, 0.0,
                     "weight grid too small");
                continue;
            }
            push("step_ineq k=" + std::to_string(k) + " i=" + std::to_string(i), lhs < bound,
                 safe_ratio(bound, lhs), std::move(detail));
        }

        const std::size_t half = std::size_t{1} << (k - 1);
        double realized = 0.0;
        for (std::size_t j = 0; j < half; ++j)
            realized = std::max(realized, std::abs(seq.mu[half + j] - seq.mu[j]));
        const double dev = std::abs(realized - lk);
        push("realized_lk k=" + std::to_string(k), dev <= 1e-14, safe_ratio(1e-14, dev),
             "recomputed = " + std::to_string(realized) + ", stored = " + std::to_string(lk));
    }

    // strictly decreasing realized lengths
    {
        bool ok = true;
        for (int k = 2; k <= seq.depth; ++k)
            ok = ok && seq.lk[static_cast<std::size_t>(k)] < seq.lk[static_cast<std::size_t>(k) - 1];
        push("lk_decreasing", ok, ok ? 1.0 : 0.0, "l_k strictly decreasing in k");
    }

    // arc nesting: each block-k arc sits inside its parent arc of block k-1
    for (int k = 2; k <= seq.depth; ++k) {
        const std::size_t half = std::size_t{1} << (k - 1);
        const std::size_t quarter = half / 2;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < half; ++j) {
            const std::size_t parent = (j < quarter) ? j + quarter : j;
            const Arc& child = seq.arcs[half + j];
            const Arc& par = seq.arcs[parent];
            const cplx center = par.a + par.b;
            const double ctr_arg = std::arg(center / std::abs(center));
            const double hw = par.half_width();
            for (const cplx& end : {child.a, child.b}) {
                const double excess = std::abs(wrap_angle(std::arg(end) - ctr_arg)) - hw;
                worst = std::max(worst, excess);
            }
        }
        push("arc_nesting k=" + std::to_string(k), worst <= 1e-12,
             safe_ratio(1e-12, std::max(worst, 0.0)),
             "worst containment excess (radians) = " + std::to_string(worst));
    }

    // roots mode: recorded orders really are periods
    if (seq.mode == SpectrumMode::roots_of_unity) {
        double worst = 0.0;
        for (std::size_t p = 0; p < count; ++p)
            worst = std::max(worst, std::abs(pow_u64(seq.mu[p], seq.orders[p]) - cplx{1.0, 0.0}));
        push("root_orders", worst <= 1e-10, safe_ratio(1e-10, worst),
             "max |mu^order - 1| = " + std::to_string(worst));
    }

    return rep;
}

// ------------------------------ sampling --------------------------------

CantorApprox cantor_level(const EigenSequence& seq, int k) {
    if (k < 0 || k > seq.depth) throw std::out_of_range("cantor_level: depth out of range");
    CantorApprox out;
    out.depth = k;
    if (k == 0) {
        out.arcs.push_back(Arc{seq.mu[0], seq.mu[0]});
        return out;
    }
    const IndexBlock blk = j_block(k);
    for (std::size_t p = blk.lo; p <= blk.hi; ++p) out.arcs.push_back(seq.arcs[p]);
    return out;
}

cplx sample_cantor(const EigenSequence& seq, int depth, std::uint64_t seed) {
    if (depth < 0 || depth > seq.depth) throw std::out_of_range("sample_cantor: depth out of range");
    if (depth == 0) return seq.mu[0];
    Rng rng(seed);
    std::size_t q = 1; // the single block-1 arc
    for (int lev = 1; lev < depth; ++lev) {
        const std::size_t lo = std::size_t{1} << (lev - 1);
        const std::size_t c0 = 2 * lo + (q - lo); // child grown from the far endpoint
        const std::size_t c1 = 2 * lo + q;        // child grown from this arc's own point
        q = (rng.below(2) == 0) ? c0 : c1;
    }
    return seq.arcs[q].midpoint();
}

// ---------------------------- serialization -----------------------------

namespace {

using ojson = nlohmann::ordered_json;

ojson cplx_to_json(const cplx& z) { return ojson::array({z.real(), z.imag()}); }

cplx cplx_from_json(const ojson& j) {
    return cplx{j.at(0).get<double>(), j.at(1).get<double>()};
}

} // namespace

std::string sequence_to_json(const EigenSequence& seq) {
    ojson j;
    j["depth"] = seq.depth;
    j["mode"] = to_string(seq.mode);
    j["seed"] = seq.seed;
    j["min_pairwise_gap"] = seq.min_pairwise_gap;
    ojson mu = ojson::array();
    for (const auto& m : seq.mu) mu.push_back(cplx_to_json(m));
    j["mu"] = std::move(mu);
    ojson lk = ojson::array();
    for (std::size_t k = 1; k < seq.lk.size(); ++k) lk.push_back(seq.lk[k]);
    j["lk"] = std::move(lk);
    ojson arcs = ojson::array();
    for (std::size_t p = 1; p < seq.arcs.size(); ++p)
        arcs.push_back(ojson{{"a", cplx_to_json(seq.arcs[p].a)}, {"b", cplx_to_json(seq.arcs[p].b)}});
    j["arcs"] = std::move(arcs);
    if (seq.mode == SpectrumMode::roots_of_unity) j["orders"] = seq.orders;
    return j.dump(2);
}

EigenSequence sequence_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    EigenSequence seq;
    seq.depth = j.at("depth").get<int>();
    seq.mode = spectrum_mode_from_string(j.at("mode").get<std::string>());
    seq.seed = j.at("seed").get<std::uint64_t>();
    seq.min_pairwise_gap = j.at("min_pairwise_gap").get<double>();
    for (const auto& m : j.at("mu")) seq.mu.push_back(cplx_from_json(m));
    seq.lk.push_back(0.0);
    for (const auto& v : j.at("lk")) seq.lk.push_back(v.get<double>());
    seq.arcs.push_back(Arc{});
    for (const auto& a : j.at("arcs"))
        seq.arcs.push_back(Arc{cplx_from_json(a.at("a")), cplx_from_json(a.at("b"))});
    if (j.contains("orders")) seq.orders = j.at("orders").get<std::vector<std::uint64_t>>();
    return seq;
}

} // namespace unishift
