#include "lhdl/model/spin_model.hpp"
#include "lhdl/core/errors.hpp"

#include <cmath>
#include <sstream>

namespace lhdl {

int SpinModel::label_index(const std::string& lab) const
{
    for (int i = 0; i < K(); ++i)
        if (labels[i] == lab) return i;
    return -1;
}

double SpinModel::psi(int a, int b) const
{
    double acc = 0.0;
    for (int c = 0; c < K(); ++c)
        for (int d = 0; d < K(); ++d) acc += rate_r(a, b, c, d) * (eta[d] - eta[b]);
    return acc;
}

double SpinModel::phi(int a, int b) const
{
    double acc = 0.0;
    for (int c = 0; c < K(); ++c)
        for (int d = 0; d < K(); ++d) acc += rate_r(a, b, c, d) * (zeta[d] - zeta[b]);
    return acc;
}

double SpinModel::psi_s(int a, int b) const
{
    double acc = 0.0;
    for (int c = 0; c < K(); ++c)
        for (int d = 0; d < K(); ++d) acc += rate_s(a, b, c, d) * (eta[d] - eta[b]);
    return acc;
}

double SpinModel::phi_s(int a, int b) const
{
    double acc = 0.0;
    for (int c = 0; c < K(); ++c)
        for (int d = 0; d < K(); ++d) acc += rate_s(a, b, c, d) * (zeta[d] - zeta[b]);
    return acc;
}

static void fail(const std::string& what) { throw Error(ErrorKind::InvalidModel, what); }

SpinModel build_model(const RawModelTables& raw)
{
    const int k = (int)raw.labels.size();
    if (k < 2) fail("need at least two site states");
    if ((int)raw.eta.size() != k || (int)raw.zeta_raw.size() != k || (int)raw.pi.size() != k ||
        (int)raw.R.size() != k)
        fail("omega tables have inconsistent lengths");
    size_t k4 = size_t(k) * k * k * k;
    if (raw.r.size() != k4 || raw.s.size() != k4) fail("rate tensors must have |Omega|^4 entries");

    double total = 0.0;
    for (double p : raw.pi) {
        if (!(p >= 0.0)) fail("pi has a negative or NaN entry");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) fail("pi does not sum to 1");
    for (int w = 0; w < k; ++w) {
        int rw = raw.R[w];
        if (rw < 0 || rw >= k || raw.R[rw] != w) fail("R is not an involution");
        if (std::fabs(raw.pi[rw] - raw.pi[w]) > 1e-12) fail("pi is not R-invariant");
        if (raw.eta[rw] != raw.eta[w]) fail("eta is not R-invariant");
        if (raw.zeta_raw[rw] != -raw.zeta_raw[w]) fail("zeta is not R-odd");
        if (raw.eta[w] < 0 || std::floor(raw.eta[w]) != raw.eta[w]) fail("eta must be a nonnegative integer");
        if (std::floor(2.0 * raw.zeta_raw[w]) != 2.0 * raw.zeta_raw[w]) fail("zeta must lie in Z or Z+1/2");
    }
    for (size_t i = 0; i < k4; ++i)
        if (!(raw.r[i] >= 0.0) || !(raw.s[i] >= 0.0)) fail("negative rate");

    // v0 from Var(zeta | eta=0); the conditional mean vanishes by R-symmetry
    double p0 = 0.0, m2 = 0.0, pz0 = 0.0;
    for (int w = 0; w < k; ++w)
        if (raw.eta[w] == 0.0) {
            p0 += raw.pi[w];
            m2 += raw.pi[w] * raw.zeta_raw[w] * raw.zeta_raw[w];
            if (raw.zeta_raw[w] == 0.0) pz0 += raw.pi[w];
        }
    if (p0 <= 0.0) fail("pi gives no mass to eta=0");
    if (pz0 / p0 >= 1.0) fail("P(zeta=0 | eta=0) must be < 1");
    double var = m2 / p0;

    SpinModel m;
    m.name = raw.name;
    m.labels = raw.labels;
    m.eta = raw.eta;
    m.v0 = 1.0 / std::sqrt(var);
    m.zeta.resize(k);
    for (int w = 0; w < k; ++w) m.zeta[w] = m.v0 * raw.zeta_raw[w];
    m.pi = raw.pi;
    m.R = raw.R;
    m.r = raw.r;
    m.s = raw.s;
    m.phi_gauge = raw.phi_gauge;
    m.gamma_param = raw.gamma_param;

    std::vector<std::array<double, 2>> pts;
    for (int w = 0; w < k; ++w)
        if (m.pi[w] > 0.0) pts.push_back({m.eta[w], m.zeta[w]});
    m.domain = Domain::hull(pts);
    if (m.domain.planes.size() < 3) fail("1, eta, zeta are linearly dependent on supp(pi)");
    return m;
}

static RawModelTables pm1_tables()
{
    RawModelTables t;
    t.name = "pm1";
    t.labels = {"-1", "0", "+1"};
    t.eta = {0, 1, 0};
    t.zeta_raw = {-1, 0, 1};
    t.pi = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    t.R = {2, 1, 0};
    const int k = 3;
    t.r.assign(81, 0.0);
    t.s.assign(81, 0.0);
    auto at = [k](int a, int b, int c, int d) { return ((size_t(a) * k + b) * k + c) * k + d; };
    const int M = 0, O = 1, P = 2;
    t.r[at(M, P, P, M)] = 2.0;
    t.r[at(M, O, O, M)] = 1.0;
    t.r[at(O, P, P, O)] = 1.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (a != b) t.s[at(a, b, b, a)] = 1.0;
    // The exact current sum gives rho+u^2-1; the constant is a gauge and is
    // removed so Phi(0,0)=0 for this model.
    t.phi_gauge = 1.0;
    return t;
}

// Sites carry (eta,zeta) in {0,1} x {-1/2,+1/2}.  The particle lane hops
// with a bias set by the slopes, the slope lane flips with a bias set by
// the particle numbers.  gamma enters only through the slope-lane rates.
static RawModelTables two_lane_tables(double gamma)
{
    RawModelTables t;
    t.name = "two-lane";
    t.gamma_param = gamma;
    t.labels = {"0-", "0+", "1-", "1+"};
    const int k = 4;
    auto e = [](int w) { return w / 2; };
    auto z = [](int w) { return (w % 2) ? 0.5 : -0.5; };
    for (int w = 0; w < k; ++w) {
        t.eta.push_back(e(w));
        t.zeta_raw.push_back(z(w));
        t.pi.push_back(0.25);
    }
    t.R = {1, 0, 3, 2};
    t.r.assign(256, 0.0);
    t.s.assign(256, 0.0);
    auto at = [k](int a, int b, int c, int d) { return ((size_t(a) * k + b) * k + c) * k + d; };
    auto site = [](int ee, double zz) { return 2 * ee + (zz > 0 ? 1 : 0); };
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            int e1 = e(a), e2 = e(b);
            double z1 = z(a), z2 = z(b);
            if (e1 != e2) {
                int c = site(e2, z1), d = site(e1, z2);
                double rate = (e1 == 1) ? 1.0 + 0.5 * (z1 + z2) : 1.0 - 0.5 * (z1 + z2);
                t.r[at(a, b, c, d)] += rate;
                t.s[at(a, b, c, d)] += 1.0;
            }
            if (z1 != z2) {
                int c = site(e1, z2), d = site(e2, z1);
                double drive = e1 + e2 - 2.0 * gamma;
                double rate = (z1 > 0) ? std::max(0.0, drive) : std::max(0.0, -drive);
                t.r[at(a, b, c, d)] += rate;
                t.s[at(a, b, c, d)] += 1.0;
            }
        }
    return t;
}

std::vector<std::string> builtin_model_names() { return {"pm1", "two-lane"}; }

SpinModel build_model(const std::string& name, double gamma)
{
    if (name == "pm1" || name == "pm1-model") return build_model(pm1_tables());
    if (name == "two-lane" || name == "two_lane") {
        if (!std::isfinite(gamma)) fail("two-lane gamma must be finite");
        return build_model(two_lane_tables(gamma));
    }
    throw Error(ErrorKind::Config, "unknown built-in model '" + name + "'");
    return {};
}

static std::vector<int> parse_quad(const std::string& key, const std::vector<std::string>& labels)
{
    // "a,b;c,d"
    std::vector<int> out;
    std::string tok;
    auto flush = [&]() {
        int found = -1;
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == tok) found = (int)i;
        if (found < 0) fail("rate key '" + key + "' names unknown state '" + tok + "'");
        out.push_back(found);
        tok.clear();
    };
    for (char c : key) {
        if (c == ' ') continue;
        if (c == ',' || c == ';') flush();
        else tok += c;
    }
    flush();
    if (out.size() != 4) fail("rate key '" + key + "' must look like a,b;c,d");
    return out;
}

SpinModel build_model(const Config& cfg)
{
    std::string name = cfg.string("model", "name", "pm1");
    if (name != "custom") return build_model(name, cfg.number("model", "gamma", 2.0));

    RawModelTables t;
    t.name = cfg.string("model", "label", "custom");
    t.labels = cfg.at("omega", "labels").as_strings();
    t.eta = cfg.at("omega", "eta").as_numbers();
    t.zeta_raw = cfg.at("omega", "zeta").as_numbers();
    auto inv = cfg.at("omega", "involution");
    for (auto& it : inv.items) {
        if (it.type == ConfigValue::Type::String) {
            int found = -1;
            for (size_t i = 0; i < t.labels.size(); ++i)
                if (t.labels[i] == it.str) found = (int)i;
            if (found < 0) fail("involution names unknown state " + it.str);
            t.R.push_back(found);
        } else {
            t.R.push_back((int)it.as_number());
        }
    }
    t.pi = cfg.at("measure", "pi").as_numbers();
    t.phi_gauge = cfg.number("model", "phi_gauge", 0.0);
    size_t k = t.labels.size();
    t.r.assign(k * k * k * k, 0.0);
    t.s.assign(k * k * k * k, 0.0);
    auto fill = [&](const std::string& sec, std::vector<double>& dst) {
        for (auto& [key, val] : cfg.section(sec)) {
            auto q = parse_quad(key, t.labels);
            dst[((size_t(q[0]) * k + q[1]) * k + q[2]) * k + q[3]] = val.as_number();
        }
    };
    fill("rates.r", t.r);
    fill("rates.s", t.s);
    return build_model(t);
}

} // namespace lhdl
