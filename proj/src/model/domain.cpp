#include "lhdl/model/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lhdl {

double Domain::margin(double rho, double u) const
{
    double m = std::numeric_limits<double>::infinity();
    for (auto& p : planes) m = std::min(m, p.c - p.a * rho - p.b * u);
    return m;
}

double Domain::reach(double rho, double u, double er, double eu) const
{
    double t = std::numeric_limits<double>::infinity();
    for (auto& p : planes) {
        double slack = p.c - p.a * rho - p.b * u;
        double dir = std::fabs(p.a * er + p.b * eu);
        if (dir > 1e-15) t = std::min(t, slack / dir);
    }
    return t;
}

std::array<double, 2> Domain::project(double rho, double u) const
{
    for (int it = 0; it < 8; ++it) {
        bool moved = false;
        for (auto& p : planes) {
            double v = p.a * rho + p.b * u - p.c;
            if (v > 0) {
                rho -= v * p.a;
                u -= v * p.b;
                moved = true;
            }
        }
        if (!moved) break;
    }
    return {rho, u};
}

Domain Domain::scaled(double s_rho, double s_u) const
{
    // (rho,u) in result  <=>  (rho/s_rho, u/s_u) in *this
    Domain d;
    for (auto& p : planes) {
        double a = p.a / s_rho, b = p.b / s_u, c = p.c;
        double nrm = std::hypot(a, b);
        d.planes.push_back({a / nrm, b / nrm, c / nrm});
    }
    for (auto& v : vertices) d.vertices.push_back({v[0] * s_rho, v[1] * s_u});
    return d;
}

std::string Domain::describe() const
{
    std::string out;
    char buf[128];
    for (auto& p : planes) {
        std::snprintf(buf, sizeof buf, "%s%.6g*rho%+.6g*u<=%.6g", out.empty() ? "" : " & ", p.a, p.b, p.c);
        out += buf;
    }
    return out.empty() ? "R^2" : out;
}

Domain Domain::hull(std::vector<std::array<double, 2>> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k > 1 ? k - 1 : k);
    Domain d;
    d.vertices = h;
    // counter-clockwise order: interior on the left of each edge
    for (size_t i = 0; i < h.size() && h.size() >= 3; ++i) {
        auto& p = h[i];
        auto& q = h[(i + 1) % h.size()];
        double ex = q[0] - p[0], ey = q[1] - p[1];
        double a = ey, b = -ex;
        double nrm = std::hypot(a, b);
        a /= nrm;
        b /= nrm;
        d.planes.push_back({a, b, a * p[0] + b * p[1]});
    }
    return d;
}

Domain Domain::rho_nonnegative()
{
    Domain d;
    d.planes.push_back({-1.0, 0.0, 0.0});
    return d;
}

} // namespace lhdl
