#include "lhdl/sim/generator.hpp"

#include "lhdl/core/errors.hpp"
#include "lhdl/model/conditions.hpp"

#include <cmath>
#include <vector>

namespace lhdl {

namespace {

size_t state_count(int k, int n)
{
    double c = std::pow(double(k), n);
    if (n < 1 || c > 4096) throw Error(ErrorKind::TooLarge, "|Omega|^n exceeds 4096");
    return size_t(std::llround(c));
}

} // namespace

Eigen::MatrixXd generator_matrix(const SpinModel& m, int n, GeneratorPart part)
{
    const int K = m.K();
    size_t S = state_count(K, n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(S, S);
    std::vector<int> x(n), y(n);
    const auto& rates = part == GeneratorPart::L ? m.r : m.s;
    for (size_t code = 0; code < S; ++code) {
        decode_config(code, K, n, x.data());
        for (int j = 0; j < n; ++j) {
            int j1 = (j + 1) % n;
            if (j1 == j) continue;
            for (int c = 0; c < K; ++c)
                for (int d = 0; d < K; ++d) {
                    if (c == x[j] && d == x[j1]) continue;
                    double rate = rates[m.idx(x[j], x[j1], c, d)];
                    if (rate == 0) continue;
                    y = x;
                    y[j] = c;
                    y[j1] = d;
                    size_t to = encode_config(y.data(), K, n);
                    G(code, to) += rate;
                    G(code, code) -= rate;
                }
        }
    }
    return G;
}

Eigen::VectorXd product_measure(const std::vector<double>& p, int n)
{
    const int K = (int)p.size();
    size_t S = state_count(K, n);
    Eigen::VectorXd v(S);
    std::vector<int> x(n);
    for (size_t code = 0; code < S; ++code) {
        decode_config(code, K, n, x.data());
        double w = 1;
        for (int j = 0; j < n; ++j) w *= p[x[j]];
        v[code] = w;
    }
    return v;
}

Eigen::VectorXd product_measure(const SpinModel& m, int n)
{
    return product_measure(m.pi, n);
}

StationarityCheck check_stationarity(const SpinModel& m, int n, const std::vector<double>& site_measure)
{
    StationarityCheck out;
    Eigen::MatrixXd L = generator_matrix(m, n, GeneratorPart::L);
    Eigen::MatrixXd K = generator_matrix(m, n, GeneratorPart::K);
    Eigen::VectorXd p = product_measure(site_measure, n);
    out.piL = (p.transpose() * L).cwiseAbs().maxCoeff();
    out.piK = (p.transpose() * K).cwiseAbs().maxCoeff();
    out.row_sum = std::max(L.rowwise().sum().cwiseAbs().maxCoeff(), K.rowwise().sum().cwiseAbs().maxCoeff());
    Eigen::MatrixXd F = p.asDiagonal() * K;
    out.detailed_balance = (F - F.transpose()).cwiseAbs().maxCoeff();
    return out;
}

} // namespace lhdl
