#include "unishift/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace unishift {

Grid make_grid(int modes, int levels) {
    if (modes < 1) throw std::invalid_argument("grid: modes must be >= 1");
    if (levels < 2) throw std::invalid_argument("grid: levels must be >= 2");
    return Grid{modes, levels};
}

namespace {

[[noreturn]] void throw_slot(const Grid& g, int i, int n) {
    throw std::out_of_range("slot (" + std::to_string(i) + ", " + std::to_string(n) +
                            ") outside grid " + std::to_string(g.modes) + "x" +
                            std::to_string(g.levels));
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

} // namespace

cplx& CVec::at(int i, int n) {
    if (!grid_.contains(i, n)) throw_slot(grid_, i, n);
    return c_[grid_.flat(i, n)];
}

const cplx& CVec::at(int i, int n) const {
    if (!grid_.contains(i, n)) throw_slot(grid_, i, n);
    return c_[grid_.flat(i, n)];
}

CVec& CVec::operator+=(const CVec& other) {
    require_same_grid(grid_, other.grid_, "add");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += other.c_[k];
    return *this;
}

CVec& CVec::operator-=(const CVec& other) {
    require_same_grid(grid_, other.grid_, "sub");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= other.c_[k];
    return *this;
}

CVec& CVec::operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
}

CVec operator+(CVec a, const CVec& b) { return a += b; }
CVec operator-(CVec a, const CVec& b) { return a -= b; }
CVec operator*(cplx s, CVec x) { return x *= s; }

CVec basis_vector(const Grid& g, int i, int n) {
    if (!g.contains(i, n)) throw_slot(g, i, n);
    CVec e(g);
    e(i, n) = cplx{1.0, 0.0};
    return e;
}

cplx inner(const CVec& x, const CVec& y) {
    require_same_grid(x.grid(), y.grid(), "inner");
    cplx acc{0.0, 0.0};
    auto xs = x.data();
    auto ys = y.data();
    for (std::size_t k = 0; k < xs.size(); ++k) acc += xs[k] * std::conj(ys[k]);
    return acc;
}

double norm(const CVec& x) {
    double acc = 0.0;
    for (const auto& v : x.data()) acc += std::norm(v);
    return std::sqrt(acc);
}

double max_abs(const CVec& x) {
    double m = 0.0;
    for (const auto& v : x.data()) m = std::max(m, std::abs(v));
    return m;
}

void require_finite(const CVec& x, const char* what) {
    for (const auto& v : x.data()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
    }
}

double WeightFamily::at(int i, int n) const {
    if (!grid.contains(i, n)) throw_slot(grid, i, n);
    return w[grid.flat(i, n)];
}

namespace {

WeightFamily finish(const Grid& g, std::vector<double> w) {
    double sup = 0.0;
    for (double v : w) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("weights must be positive and finite");
        sup = std::max(sup, v);
    }
    return WeightFamily{g, std::move(w), sup};
}

} // namespace

WeightFamily constant_weights(const Grid& g, double value) {
    return finish(g, std::vector<double>(g.size(), value));
}

WeightFamily geometric_weights(const Grid& g, double ratio) {
    std::vector<double> w(g.size());
    for (int i = 0; i < g.modes; ++i) {
        double v = 1.0;
        for (int n = 0; n < g.levels; ++n) {
            w[g.flat(i, n)] = v;
            v *= ratio;
        }
    }
    return finish(g, std::move(w));
}

WeightFamily weights_from_table(const Grid& g, const std::vector<std::vector<double>>& table) {
    if (static_cast<int>(table.size()) < g.modes)
        throw std::invalid_argument("weight table: too few mode rows");
    std::vector<double> w(g.size());
    for (int i = 0; i < g.modes; ++i) {
        if (static_cast<int>(table[i].size()) < g.levels)
            throw std::invalid_argument("weight table: row " + std::to_string(i) + " too short");
        for (int n = 0; n < g.levels; ++n) w[g.flat(i, n)] = table[i][n];
    }
    return finish(g, std::move(w));
}

} // namespace unishift
