#pragma once
#include "lhdl/model/spin_model.hpp"

#include <Eigen/Dense>
#include <vector>

namespace lhdl {

enum class GeneratorPart { L, K };

// Dense generator on Omega^n with periodic bonds; TooLarge if |Omega|^n > 4096.
Eigen::MatrixXd generator_matrix(const SpinModel& m, int n, GeneratorPart part);

// product reference measure pi^n on Omega^n (same indexing)
Eigen::VectorXd product_measure(const SpinModel& m, int n);
Eigen::VectorXd product_measure(const std::vector<double>& p, int n);

struct StationarityCheck {
    double piL = 0.0;          // max |pi^T L|
    double piK = 0.0;          // max |pi^T K|
    double detailed_balance = 0.0;   // max |pi(x)K(x,y) - pi(y)K(y,x)|
    double row_sum = 0.0;
};

StationarityCheck check_stationarity(const SpinModel& m, int n, const std::vector<double>& site_measure);

} // namespace lhdl
