#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdx/channel.hpp"
#include "fdx/estimators.hpp"
#include "fdx/harness/metrics.hpp"
#include "fdx/nn/train.hpp"
#include "fdx/pilot.hpp"

namespace fdx::harness {

struct InlineTrainConfig {
    bool enabled = false;
    std::size_t dataset_size = 50000;
    std::size_t n_train = 20000;
    std::size_t n_val = 20000;
    std::size_t n_test = 10000;
    nn::TrainHyper hyper;
};

/// Full description of one experiment sweep; mirrors the config file.
struct ExperimentConfig {
    channel::SystemConfig system;
    pilot::SchemeKind scheme = pilot::SchemeKind::SharedNt;
    std::vector<Method> estimators = {Method::LS, Method::MMSE};
    std::vector<Target> targets = {Target::SI, Target::UE};
    std::vector<double> snr_si_db = {0.0};
    std::vector<double> snr_ue_db = {0.0};
    std::vector<double> theta_as_deg = {60.0};
    std::vector<double> kappa_db = {40.0};
    std::vector<int> bits = {0}; ///< 0 = unquantized
    std::vector<bool> cancellation = {true};
    int trials = 100;
    std::uint64_t seed = 1;
    int threads = 0; ///< 0 = default_threads()
    int covariance_realizations = 1000;
    InlineTrainConfig train;
};

struct ResultRecord {
    double snr_si_db = 0.0;
    double snr_ue_db = 0.0;
    double theta_as_deg = 60.0;
    double kappa_db = 40.0;
    int bits = 0;
    pilot::SchemeKind scheme = pilot::SchemeKind::SharedNt;
    Method method = Method::LS;
    Target target = Target::SI;
    bool cancellation = true;
    int trials = 0;
    double nmse_db = 0.0;
    long long flops = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0; ///< diagnostic only, not emitted
};

/// Operating point of one grid cell.
struct PointSpec {
    double snr_si_db = 0.0;
    double snr_ue_db = 0.0;
    int bits = 0;
    bool cancellation = true;
};

using ModelKey = std::pair<Method, Target>;

/// Runs every requested estimator on the same generated trials (paired
/// comparison) and returns the mean NMSE ratio per (method, target).
/// Trial t is driven by RngStream(seed, stream_base + t). The MMSE SI
/// estimate performs the cancellation for every method, matching the
/// evaluation protocol of the estimators under test.
std::map<ModelKey, double> evaluate_point(
    const channel::SystemConfig& sys, const pilot::PilotScheme& scheme,
    const PointSpec& pt, const std::vector<Method>& methods,
    const std::vector<Target>& targets, const est::CovarianceModel* cov,
    const std::map<ModelKey, const nn::Model*>& models, int trials,
    std::uint64_t seed, std::uint64_t stream_base, int threads);

/// Deterministic sub-seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Full grid sweep: builds covariances and inline-trained models as
/// needed, evaluates every grid point, and returns records sorted on the
/// axis values. Byte-reproducible for a fixed config.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg);

/// Writes records as CSV or JSON with the fixed column set
/// (snr_si_db, snr_ue_db, theta_as_deg, kappa_db, bits, scheme, method,
/// target, cancellation, trials, nmse_db, flops, seed).
void emit_results(const std::vector<ResultRecord>& records, const std::string& format,
                  const std::string& path);

std::string format_double(double v); ///< locale-independent shortest form

} // namespace fdx::harness
