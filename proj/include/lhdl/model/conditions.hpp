#pragma once
#include "lhdl/model/spin_model.hpp"

#include <string>
#include <vector>

namespace lhdl {

struct ConditionResult {
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

struct ConditionReport {
    ConditionResult conservation;       // (A)
    ConditionResult irreducibility;     // (B), at block_len
    ConditionResult lr_symmetry;        // (C)
    ConditionResult asym_stationarity;  // (D)
    ConditionResult sym_reversibility;  // (E)
    ConditionResult gradient_flux;      // (F)
    int block_len = 0;
    double tolerance = 1e-12;
    std::vector<double> kappa, chi;     // site functions from (F)

    bool all_pass() const;
    std::string render() const;
};

ConditionReport validate_conditions(const SpinModel& m, int block_len = 6, double tol = 1e-12);

// Q(w1,w2) of the stationarity condition, with the reference measure
double asym_Q(const SpinModel& m, int a, int b);

// Decodes a configuration index of Omega^n (site 0 is the least significant digit)
void decode_config(size_t code, int k, int n, int* out);
size_t encode_config(const int* spins, int k, int n);

} // namespace lhdl
