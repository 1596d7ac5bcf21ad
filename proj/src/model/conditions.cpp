#include "lhdl/model/conditions.hpp"
#include "lhdl/core/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace lhdl {

void decode_config(size_t code, int k, int n, int* out)
{
    for (int j = 0; j < n; ++j) {
        out[j] = int(code % k);
        code /= k;
    }
}

size_t encode_config(const int* spins, int k, int n)
{
    size_t code = 0;
    for (int j = n - 1; j >= 0; --j) code = code * k + spins[j];
    return code;
}

double asym_Q(const SpinModel& m, int a, int b)
{
    const int k = m.K();
    double pab = m.pi[a] * m.pi[b];
    double in = 0.0, out = 0.0;
    for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) {
            out += m.rate_r(a, b, c, d);
            if (pab > 0) in += m.pi[c] * m.pi[d] / pab * m.rate_r(c, d, a, b);
        }
    return in - out;
}

bool ConditionReport::all_pass() const
{
    return conservation.pass && irreducibility.pass && lr_symmetry.pass && asym_stationarity.pass &&
           sym_reversibility.pass && gradient_flux.pass;
}

std::string ConditionReport::render() const
{
    std::ostringstream os;
    auto line = [&](const char* tag, const ConditionResult& c) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-26s %s  residual=%.3e  %s\n", tag, c.pass ? "PASS" : "FAIL", c.residual,
                      c.detail.c_str());
        os << buf;
    };
    line("(A) conservation", conservation);
    line(("(B) irreducibility n=" + std::to_string(block_len)).c_str(), irreducibility);
    line("(C) left-right symmetry", lr_symmetry);
    line("(D) asym. stationarity", asym_stationarity);
    line("(E) sym. reversibility", sym_reversibility);
    line("(F) gradient condition", gradient_flux);
    os << "kappa =";
    for (double v : kappa) os << " " << v;
    os << "\nchi   =";
    for (double v : chi) os << " " << v;
    os << "\n";
    return os.str();
}

static ConditionResult check_conservation(const SpinModel& m, double tol)
{
    const int k = m.K();
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d) {
                    if (m.rate_r(a, b, c, d) <= 0 && m.rate_s(a, b, c, d) <= 0) continue;
                    worst = std::max(worst, std::fabs(m.eta[a] + m.eta[b] - m.eta[c] - m.eta[d]));
                    worst = std::max(worst, std::fabs(m.zeta[a] + m.zeta[b] - m.zeta[c] - m.zeta[d]));
                }
    return {worst <= tol, worst, ""};
}

static ConditionResult check_lr(const SpinModel& m, double tol)
{
    const int k = m.K();
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d) {
                    const auto& R = m.R;
                    worst = std::max(worst, std::fabs(m.rate_r(R[b], R[a], R[d], R[c]) - m.rate_r(a, b, c, d)));
                    worst = std::max(worst, std::fabs(m.rate_s(R[b], R[a], R[d], R[c]) - m.rate_s(a, b, c, d)));
                }
    return {worst <= tol, worst, ""};
}

static ConditionResult check_D(const SpinModel& m, double tol)
{
    const int k = m.K();
    std::vector<double> Q(k * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) Q[a * k + b] = asym_Q(m, a, b);
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c) {
                if (m.pi[a] * m.pi[b] * m.pi[c] <= 0) continue;
                worst = std::max(worst, std::fabs(Q[a * k + b] + Q[b * k + c] + Q[c * k + a]));
            }
    return {worst <= tol, worst, ""};
}

static ConditionResult check_E(const SpinModel& m, double tol)
{
    const int k = m.K();
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d)
                    worst = std::max(worst, std::fabs(m.pi[a] * m.pi[b] * m.rate_s(a, b, c, d) -
                                                      m.pi[c] * m.pi[d] * m.rate_s(c, d, a, b)));
    return {worst <= tol, worst, ""};
}

// Least squares for f(w1,w2) = g(w1) - g(w2) over pairs in supp(pi)^2 with
// one extra gauge row.
static std::pair<std::vector<double>, double> solve_gradient(const SpinModel& m, bool psi_part)
{
    const int k = m.K();
    std::vector<std::array<int, 2>> pairs;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (m.pi[a] > 0 && m.pi[b] > 0) pairs.push_back({a, b});
    int gauge_rows = 0;
    if (psi_part) {
        for (int w = 0; w < k; ++w)
            if (m.eta[w] == 0) ++gauge_rows;
    } else {
        gauge_rows = 1;
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(pairs.size() + gauge_rows, k);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(pairs.size() + gauge_rows);
    for (size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs[i];
        A(i, a) += 1.0;
        A(i, b) -= 1.0;
        y(i) = psi_part ? m.psi_s(a, b) : m.phi_s(a, b);
    }
    int row = (int)pairs.size();
    if (psi_part) {
        for (int w = 0; w < k; ++w)
            if (m.eta[w] == 0) A(row++, w) = 1.0;
    } else {
        for (int w = 0; w < k; ++w) A(row, w) = m.pi[w];
    }
    Eigen::VectorXd g = A.colPivHouseholderQr().solve(y);
    double res = 0.0;
    for (size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs[i];
        res = std::max(res, std::fabs(g(a) - g(b) - y(i)));
    }
    // the gauge rows are part of the requirement as well
    for (int r = (int)pairs.size(); r < A.rows(); ++r) res = std::max(res, std::fabs(A.row(r).dot(g) - y(r)));
    return {std::vector<double>(g.data(), g.data() + k), res};
}

static ConditionResult check_irreducible(const SpinModel& m, int n)
{
    const int k = m.K();
    double states = std::pow((double)k, n);
    if (states > 6e7) throw Error(ErrorKind::TooLarge, "Omega^n too large for the irreducibility search");
    size_t S = (size_t)states;
    // adjacency: positive rates on the n periodic bonds
    std::vector<std::vector<std::array<int, 2>>> moves(k * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d)
                    if ((a != c || b != d) && (m.rate_r(a, b, c, d) > 0 || m.rate_s(a, b, c, d) > 0))
                        moves[a * k + b].push_back({c, d});
    // level set labels
    std::vector<long> level(S);
    std::vector<int> spins(n);
    std::vector<char> alive(S, 1);
    for (size_t x = 0; x < S; ++x) {
        decode_config(x, k, n, spins.data());
        double N = 0, Z = 0;
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            N += m.eta[spins[j]];
            Z += m.zeta[spins[j]];
            if (m.pi[spins[j]] <= 0) ok = false;
        }
        alive[x] = ok;
        level[x] = std::lround(N) * 1000003L + std::lround(2 * Z / m.v0);
    }
    auto neighbours = [&](size_t x, std::vector<size_t>& out) {
        out.clear();
        std::vector<int> sp(n);
        decode_config(x, k, n, sp.data());
        int bonds = (n == 2) ? 1 : n;
        for (int j = 0; j < bonds; ++j) {
            int jn = (j + 1) % n;
            int a = sp[j], b = sp[jn];
            for (auto& cd : moves[a * k + b]) {
                sp[j] = cd[0];
                sp[jn] = cd[1];
                out.push_back(encode_config(sp.data(), k, n));
                sp[j] = a;
                sp[jn] = b;
            }
            if (n == 2) {
                // the second bond of the 2-torus joins site 1 to site 0
                int a2 = sp[1], b2 = sp[0];
                for (auto& cd : moves[a2 * k + b2]) {
                    sp[1] = cd[0];
                    sp[0] = cd[1];
                    out.push_back(encode_config(sp.data(), k, n));
                    sp[1] = a2;
                    sp[0] = b2;
                }
            }
        }
    };
    // strong connectivity per level set: forward and backward reach from a root
    std::map<long, std::vector<size_t>> sets;
    for (size_t x = 0; x < S; ++x)
        if (alive[x]) sets[level[x]].push_back(x);
    std::vector<std::vector<size_t>> rev(S);
    std::vector<size_t> nb;
    for (size_t x = 0; x < S; ++x) {
        if (!alive[x]) continue;
        neighbours(x, nb);
        for (size_t y : nb) rev[y].push_back(x);
    }
    size_t bad_sets = 0;
    std::vector<char> seen(S, 0);
    for (auto& [lev, members] : sets) {
        for (int dir = 0; dir < 2; ++dir) {
            for (size_t x : members) seen[x] = 0;
            std::vector<size_t> stack{members.front()};
            seen[members.front()] = 1;
            size_t count = 1;
            while (!stack.empty()) {
                size_t x = stack.back();
                stack.pop_back();
                if (dir == 0) neighbours(x, nb);
                else nb = rev[x];
                for (size_t y : nb)
                    if (!seen[y]) {
                        seen[y] = 1;
                        ++count;
                        stack.push_back(y);
                    }
            }
            if (count != members.size()) {
                ++bad_sets;
                break;
            }
        }
    }
    ConditionResult res;
    res.pass = bad_sets == 0;
    res.residual = (double)bad_sets;
    res.detail = std::to_string(sets.size()) + " level sets, " + std::to_string(bad_sets) + " not strongly connected";
    return res;
}

ConditionReport validate_conditions(const SpinModel& m, int block_len, double tol)
{
    ConditionReport rep;
    rep.block_len = block_len;
    rep.tolerance = tol;
    rep.conservation = check_conservation(m, tol);
    rep.irreducibility = check_irreducible(m, block_len);
    rep.lr_symmetry = check_lr(m, tol);
    rep.asym_stationarity = check_D(m, tol);
    rep.sym_reversibility = check_E(m, tol);
    auto [kappa, rk] = solve_gradient(m, true);
    auto [chi, rc] = solve_gradient(m, false);
    rep.kappa = kappa;
    rep.chi = chi;
    rep.gradient_flux.residual = std::max(rk, rc);
    rep.gradient_flux.pass = rep.gradient_flux.residual <= tol;
    return rep;
}

} // namespace lhdl
