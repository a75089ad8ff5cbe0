#include "fdx/harness/metrics.hpp"

#include <cmath>

namespace fdx::harness {

std::string to_string(Method m) {
    switch (m) {
        case Method::LS: return "LS";
        case Method::MMSE: return "MMSE";
        case Method::CNN0: return "CNN0";
        case Method::CNN1: return "CNN1";
        case Method::CNN2: return "CNN2";
        case Method::CNN10: return "CNN10";
        case Method::FNN: return "FNN";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "LS") return Method::LS;
    if (s == "MMSE") return Method::MMSE;
    if (s == "CNN0") return Method::CNN0;
    if (s == "CNN1") return Method::CNN1;
    if (s == "CNN2") return Method::CNN2;
    if (s == "CNN10") return Method::CNN10;
    if (s == "FNN") return Method::FNN;
    throw std::invalid_argument("unknown method: " + s);
}

bool is_cnn(Method m) {
    return m == Method::CNN0 || m == Method::CNN1 || m == Method::CNN2 ||
           m == Method::CNN10;
}

int cnn_hidden_layers(Method m) {
    switch (m) {
        case Method::CNN0: return 0;
        case Method::CNN1: return 1;
        case Method::CNN2: return 2;
        case Method::CNN10: return 10;
        default: throw std::invalid_argument("not a CNN method");
    }
}

std::string to_string(Target t) { return t == Target::SI ? "SI" : "UE"; }

double nmse(const ComplexMatrix& h_true, const ComplexMatrix& h_est) {
    if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols())
        throw ShapeMismatch("nmse: shapes differ");
    const double ref = h_true.frobenius_norm_sq();
    if (!(ref > 0.0)) throw ZeroReference("nmse: zero reference channel");
    ComplexMatrix d = h_true;
    d -= h_est;
    return d.frobenius_norm_sq() / ref;
}

double to_db(double ratio) {
    if (ratio < 1e-30) ratio = 1e-30;
    return 10.0 * std::log10(ratio);
}

long long flops(Method method, Target target, int n_r, int n_d, int tau,
                const std::vector<int>* features) {
    if (n_r < 1 || n_d < 1 || tau < 1)
        throw std::invalid_argument("flops: dims must be positive");
    const long long base = 1LL * n_r * n_d * tau;
    switch (method) {
        case Method::LS: return base;
        case Method::MMSE: return 1LL * n_r * base;
        case Method::CNN0:
        case Method::CNN1:
        case Method::CNN2:
        case Method::CNN10: {
            if (!features) throw std::invalid_argument("flops: CNN needs layer sizes");
            long long conv = 0;
            for (std::size_t l = 1; l < features->size(); ++l)
                conv += 9LL * (*features)[l - 1] * (*features)[l];
            return base + 1LL * n_r * n_d * conv;
        }
        case Method::FNN: {
            if (!features) throw std::invalid_argument("flops: FNN needs layer sizes");
            long long dense = 0;
            for (std::size_t l = 1; l < features->size(); ++l)
                dense += 1LL * (*features)[l - 1] * (*features)[l];
            return dense;
        }
    }
    (void)target;
    return 0;
}

} // namespace fdx::harness
