#pragma once
#include "lhdl/core/config.hpp"
#include "lhdl/model/domain.hpp"

#include <string>
#include <vector>

namespace lhdl {

// Single-site state space with two conserved quantities and the two rate
// tables of the generator.  Rate tensors are indexed (w1,w2;w1',w2') and
// stored flat, see idx().
struct SpinModel {
    std::string name;
    std::vector<std::string> labels;
    std::vector<double> eta;
    std::vector<double> zeta;      // already multiplied by v0
    double v0 = 1.0;
    std::vector<double> pi;        // reference measure
    std::vector<int> R;            // involution
    std::vector<double> r;         // asymmetric rates
    std::vector<double> s;         // symmetric rates
    double phi_gauge = 0.0;        // additive constant carried into Phi
    double gamma_param = 0.0;      // only meaningful for the two-lane family
    Domain domain;                 // closed convex hull of (eta,zeta) over supp(pi)

    int K() const { return (int)labels.size(); }
    size_t idx(int a, int b, int c, int d) const
    {
        size_t k = labels.size();
        return ((size_t(a) * k + b) * k + c) * k + d;
    }
    double rate_r(int a, int b, int c, int d) const { return r[idx(a, b, c, d)]; }
    double rate_s(int a, int b, int c, int d) const { return s[idx(a, b, c, d)]; }
    int label_index(const std::string& lab) const;

    // microscopic currents across the bond (w1,w2)
    double psi(int a, int b) const;
    double phi(int a, int b) const;
    double psi_s(int a, int b) const;
    double phi_s(int a, int b) const;
};

struct RawModelTables {
    std::string name = "custom";
    std::vector<std::string> labels;
    std::vector<double> eta, zeta_raw, pi;
    std::vector<int> R;
    std::vector<double> r, s;
    double phi_gauge = 0.0;
    double gamma_param = 0.0;
};

// Validates the type invariants, fixes v0 and the domain.  Throws
// Error(InvalidModel) on a non-probability pi, a broken involution,
// negative rates or a degenerate zeta.
SpinModel build_model(const RawModelTables& raw);

// Built-ins: "pm1" (alias "pm1-model") and "two-lane" (parameter gamma).
SpinModel build_model(const std::string& name, double gamma = 2.0);

// [model] name=..., gamma=...  or name="custom" with [omega], [measure],
// [rates.r], [rates.s] sections.
SpinModel build_model(const Config& cfg);

std::vector<std::string> builtin_model_names();

} // namespace lhdl
