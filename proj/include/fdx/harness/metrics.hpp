#pragma once

#include <string>
#include <vector>

#include "fdx/complex_matrix.hpp"

namespace fdx::harness {

enum class Method { LS, MMSE, CNN0, CNN1, CNN2, CNN10, FNN };

std::string to_string(Method m);
Method method_from_string(const std::string& s);
bool is_cnn(Method m);
int cnn_hidden_layers(Method m);

enum class Target { SI, UE };
std::string to_string(Target t);

/// Per-sample normalized error ||H - H_hat||_F^2 / ||H||_F^2. The harness
/// averages these ratios across trials before converting to dB.
double nmse(const ComplexMatrix& h_true, const ComplexMatrix& h_est);

/// 10 log10 of a ratio, floored so exact zeros stay finite.
double to_db(double ratio);

/// FLOP count per estimate. LS: N_r N_d tau; MMSE: N_r^2 N_d tau;
/// CNN: N_r N_d tau + N_r N_d sum_l zeta^2 f_{l-1} f_l with zeta = 3.
/// N_d is N_t for the SI target and K for the UE target. features is the
/// layer size list f_0..f_L, required for CNN methods.
long long flops(Method method, Target target, int n_r, int n_d, int tau,
                const std::vector<int>* features = nullptr);

} // namespace fdx::harness
