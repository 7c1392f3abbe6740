// hilbert.hpp — finite truncation of the doubly indexed Hilbert space.
//
// The space is a direct sum of `levels` copies of a `modes`-dimensional
// coordinate block; a vector stores one complex coefficient per basis slot
// (i, n) with i < modes (the index inside a block) and n < levels (the block).
// Everything here is a plain value type: immutable after construction in
// practice, safe to share across threads.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace unishift {

using cplx = std::complex<double>;

struct Grid {
    int modes = 1;  // range of i
    int levels = 2; // range of n

    bool operator==(const Grid&) const = default;

    std::size_t size() const {
        return static_cast<std::size_t>(modes) * static_cast<std::size_t>(levels);
    }
    bool contains(int i, int n) const { return i >= 0 && i < modes && n >= 0 && n < levels; }
    std::size_t flat(int i, int n) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(levels) +
               static_cast<std::size_t>(n);
    }
};

// Validated constructor: modes >= 1, levels >= 2 (at least one shift step).
Grid make_grid(int modes, int levels);

// Complex coefficient array over a grid. Mode-major storage.
class CVec {
public:
    CVec() = default;
    explicit CVec(const Grid& g) : grid_(g), c_(g.size(), cplx{0.0, 0.0}) {}

    const Grid& grid() const { return grid_; }

    // Bounds-checked element access; throws std::out_of_range.
    cplx& at(int i, int n);
    const cplx& at(int i, int n) const;

    // Unchecked access for hot loops.
    cplx& operator()(int i, int n) { return c_[grid_.flat(i, n)]; }
    const cplx& operator()(int i, int n) const { return c_[grid_.flat(i, n)]; }

    std::span<const cplx> data() const { return c_; }
    std::span<cplx> data() { return c_; }

    CVec& operator+=(const CVec& other);
    CVec& operator-=(const CVec& other);
    CVec& operator*=(cplx s);

private:
    Grid grid_{};
    std::vector<cplx> c_;
};

CVec operator+(CVec a, const CVec& b);
CVec operator-(CVec a, const CVec& b);
CVec operator*(cplx s, CVec x);

// e_{i,n}: coefficient 1 at (i, n), 0 elsewhere. Throws std::out_of_range
// if the slot is outside the grid.
CVec basis_vector(const Grid& g, int i, int n);

// Sesquilinear pairing, conjugate on the second argument. Grids must match
// structurally (std::invalid_argument otherwise).
cplx inner(const CVec& x, const CVec& y);

double norm(const CVec& x);
double max_abs(const CVec& x);

// Throws std::invalid_argument if any coefficient is NaN or infinite.
void require_finite(const CVec& x, const char* what);

// Positive bounded weights indexed like a CVec. Carries its own grid, which
// may be larger than any operator grid it later restricts to.
struct WeightFamily {
    Grid grid{};
    std::vector<double> w; // mode-major
    double sup_bound = 0.0;

    double at(int i, int n) const;
};

WeightFamily constant_weights(const Grid& g, double value);
// w_{i,n} = ratio^n, independent of the mode
WeightFamily geometric_weights(const Grid& g, double ratio);
// explicit per-slot table, validated positive and bounded
WeightFamily weights_from_table(const Grid& g, const std::vector<std::vector<double>>& table);

} // namespace unishift
