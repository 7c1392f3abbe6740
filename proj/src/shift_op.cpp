#include "unishift/shift_op.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace unishift {

namespace {

WeightFamily restrict_weights(const Grid& grid, const WeightFamily& w) {
    if (w.grid.modes < grid.modes || w.grid.levels < grid.levels)
        throw std::invalid_argument("operator weights do not cover the grid");
    std::vector<double> vals(grid.size());
    double sup = 0.0;
    for (int i = 0; i < grid.modes; ++i)
        for (int n = 0; n < grid.levels; ++n) {
            const double v = w.at(i, n);
            vals[grid.flat(i, n)] = v;
            sup = std::max(sup, v);
        }
    return WeightFamily{grid, std::move(vals), sup};
}

void validate_diagonal(const std::vector<cplx>& mu) {
    for (const auto& m : mu)
        if (std::abs(std::abs(m) - 1.0) > 1e-12)
            throw std::invalid_argument("operator diagonal must be unimodular within 1e-12");
}

} // namespace

OperatorSpec make_operator(const Grid& grid, const EigenSequence& seq, const WeightFamily& w) {
    if (seq.mu.size() < static_cast<std::size_t>(grid.levels))
        throw std::invalid_argument("sequence shorter than the operator grid");
    std::vector<cplx> mu(seq.mu.begin(), seq.mu.begin() + grid.levels);
    return make_operator(grid, mu, w);
}

OperatorSpec make_operator(const Grid& grid, const std::vector<cplx>& mu, const WeightFamily& w) {
    if (mu.size() != static_cast<std::size_t>(grid.levels))
        throw std::invalid_argument("diagonal length must equal grid levels");
    validate_diagonal(mu);
    return OperatorSpec{grid, mu, restrict_weights(grid, w)};
}

CVec apply(const OperatorSpec& op, const CVec& x) {
    if (!(x.grid() == op.grid)) throw std::invalid_argument("apply: grid mismatch");
    const int I = op.grid.modes;
    const int N = op.grid.levels;
    CVec y(op.grid);
    for (int i = 0; i < I; ++i) {
        for (int n = 0; n < N - 1; ++n)
            y(i, n) = op.mu[static_cast<std::size_t>(n)] * x(i, n) + op.w.at(i, n) * x(i, n + 1);
        y(i, N - 1) = op.mu[static_cast<std::size_t>(N - 1)] * x(i, N - 1);
    }
    return y;
}

std::vector<Eigen::MatrixXcd> to_matrix(const OperatorSpec& op) {
    const int N = op.grid.levels;
    std::vector<Eigen::MatrixXcd> mats;
    mats.reserve(static_cast<std::size_t>(op.grid.modes));
    for (int i = 0; i < op.grid.modes; ++i) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
        for (int n = 0; n < N; ++n) {
            m(n, n) = op.mu[static_cast<std::size_t>(n)];
            if (n + 1 < N) m(n, n + 1) = op.w.at(i, n);
        }
        mats.push_back(std::move(m));
    }
    return mats;
}

CVec power_apply(const OperatorSpec& op, const CVec& x, long m) {
    if (m < 0) throw std::invalid_argument("power_apply: negative exponent");
    CVec y = x;
    for (long s = 0; s < m; ++s) {
        y = apply(op, y);
        if (max_abs(y) > 1e300)
            throw std::range_error("power_apply: coefficient overflow (operator not power-bounded)");
    }
    return y;
}

namespace {

using ojson = nlohmann::ordered_json;

} // namespace

std::string operator_to_json(const OperatorSpec& op) {
    ojson j;
    j["grid"] = ojson{{"modes", op.grid.modes}, {"levels", op.grid.levels}};
    ojson mu = ojson::array();
    for (const auto& m : op.mu) mu.push_back(ojson::array({m.real(), m.imag()}));
    j["mu"] = std::move(mu);
    ojson w = ojson::array();
    for (int i = 0; i < op.grid.modes; ++i) {
        ojson row = ojson::array();
        for (int n = 0; n < op.grid.levels; ++n) row.push_back(op.w.at(i, n));
        w.push_back(std::move(row));
    }
    j["w"] = std::move(w);
    return j.dump(2);
}

OperatorSpec operator_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    const Grid grid = make_grid(j.at("grid").at("modes").get<int>(),
                                j.at("grid").at("levels").get<int>());
    std::vector<cplx> mu;
    for (const auto& m : j.at("mu")) mu.push_back(cplx{m.at(0).get<double>(), m.at(1).get<double>()});
    std::vector<std::vector<double>> table;
    for (const auto& row : j.at("w")) table.push_back(row.get<std::vector<double>>());
    return make_operator(grid, mu, weights_from_table(grid, table));
}

void write_matrix_csv(std::ostream& out, const OperatorSpec& op, int mode,
                      const std::string& header_line) {
    if (mode < 0 || mode >= op.grid.modes) throw std::out_of_range("write_matrix_csv: bad mode");
    const auto mats = to_matrix(op);
    const auto& m = mats[static_cast<std::size_t>(mode)];
    out << header_line << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ",";
            out << m(r, c).real() << "," << m(r, c).imag();
        }
        out << "\n";
    }
}

} // namespace unishift
