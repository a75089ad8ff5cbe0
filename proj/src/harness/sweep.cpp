#include "fdx/harness/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fdx/parallel.hpp"
#include "fdx/quantizer.hpp"

namespace fdx::harness {

namespace {
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    RngStream r(seed, tag);
    return r.next_u64();
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::map<ModelKey, double> evaluate_point(
    const channel::SystemConfig& sys, const pilot::PilotScheme& scheme,
    const PointSpec& pt, const std::vector<Method>& methods,
    const std::vector<Target>& targets, const est::CovarianceModel* cov,
    const std::map<ModelKey, const nn::Model*>& models, int trials,
    std::uint64_t seed, std::uint64_t stream_base, int threads) {
    const double snr_si = db_to_linear(pt.snr_si_db);
    const double snr_ue = db_to_linear(pt.snr_ue_db);

    const bool want_si =
        std::find(targets.begin(), targets.end(), Target::SI) != targets.end();
    const bool want_ue =
        std::find(targets.begin(), targets.end(), Target::UE) != targets.end();
    const bool has_mmse =
        std::find(methods.begin(), methods.end(), Method::MMSE) != methods.end();
    const bool need_cov = has_mmse || (want_ue && pt.cancellation);
    if (need_cov && cov == nullptr)
        throw std::invalid_argument("evaluate_point: covariance model required");

    // Per-point linear operators are built once and applied per trial.
    std::optional<est::MmseOperator> si_op;
    std::optional<est::MmseOperator> ue_op;
    if (need_cov)
        si_op = est::build_mmse_si(scheme, *cov, snr_si, snr_ue, sys.n_rx);
    if (has_mmse && want_ue) {
        const ComplexMatrix r_e =
            pt.cancellation
                ? est::si_error_covariance(scheme, *cov, snr_si, snr_ue, sys.n_rx)
                : cov->r_si;
        ue_op = est::build_mmse_ue(scheme, *cov, r_e, snr_si, snr_ue, sys.n_rx);
    }

    std::map<ModelKey, std::vector<double>> ratios;
    for (Method m : methods)
        for (Target t : targets) {
            if (m == Method::FNN) continue;
            if (is_cnn(m) && !models.count({m, t}))
                throw std::invalid_argument("evaluate_point: missing model for " +
                                            to_string(m) + "/" + to_string(t));
            ratios[{m, t}].assign(std::size_t(trials), 0.0);
        }

    const quant::QuantizerSpec qspec =
        pt.bits > 0 ? quant::make_quantizer(pt.bits) : quant::QuantizerSpec{};

    parallel_chunks(std::size_t(trials), threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t t = b; t < e; ++t) {
            RngStream rng(seed, stream_base + t);
            channel::ChannelRealization ch = channel::gen_realization(sys, rng);
            pilot::normalize_channels(ch);
            pilot::ReceivedPilot y =
                pilot::assemble_rx(scheme, ch.h_si, ch.h_ue, snr_si, snr_ue, rng);
            if (pt.bits > 0) y.y = quant::agc_quantize(y.y, qspec);

            if (want_si) {
                for (Method m : methods) {
                    if (m == Method::FNN) continue;
                    ComplexMatrix h_hat;
                    if (m == Method::LS) {
                        h_hat = est::ls_si(y, scheme);
                    } else if (m == Method::MMSE) {
                        h_hat = est::apply_mmse(*si_op, y, std::size_t(sys.n_rx));
                    } else {
                        h_hat = nn::predict_channel(*models.at({m, Target::SI}),
                                                    pilot::correlate(y, scheme.w_si));
                    }
                    ratios.at({m, Target::SI})[t] = nmse(ch.h_si, h_hat);
                }
            }
            if (want_ue) {
                pilot::ReceivedPilot y_ue = y;
                if (pt.cancellation) {
                    const ComplexMatrix h_si_mmse =
                        est::apply_mmse(*si_op, y, std::size_t(sys.n_rx));
                    y_ue = pilot::cancel_si(y, h_si_mmse, scheme);
                }
                for (Method m : methods) {
                    if (m == Method::FNN) continue;
                    ComplexMatrix h_hat;
                    if (m == Method::LS) {
                        h_hat = est::ls_ue(y_ue, scheme);
                    } else if (m == Method::MMSE) {
                        h_hat = est::apply_mmse(*ue_op, y_ue, std::size_t(sys.n_rx));
                    } else {
                        h_hat = nn::predict_channel(*models.at({m, Target::UE}),
                                                    pilot::correlate(y_ue, scheme.w_ue));
                    }
                    ratios.at({m, Target::UE})[t] = nmse(ch.h_ue, h_hat);
                }
            }
        }
    });

    std::map<ModelKey, double> out;
    for (auto& [key, vals] : ratios) {
        double acc = 0.0;
        for (double v : vals) acc += v;
        out[key] = acc / double(trials);
    }
    return out;
}

namespace {

struct AxisPoint {
    std::size_t i_theta, i_kappa, i_bits, i_canc, i_ssi, i_sue;
};

std::string model_cache_key(Method m, Target t, const PointSpec& pt, double theta,
                            double kappa) {
    return to_string(m) + "/" + to_string(t) + "/" + format_double(pt.snr_si_db) +
           "/" + format_double(pt.snr_ue_db) + "/" + std::to_string(pt.bits) + "/" +
           format_double(theta) + "/" + format_double(kappa);
}

} // namespace

std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg) {
    cfg.system.validate();
    if (cfg.trials < 1) throw std::invalid_argument("run_sweep: trials >= 1");
    if (cfg.snr_si_db.empty() || cfg.snr_ue_db.empty() || cfg.theta_as_deg.empty() ||
        cfg.kappa_db.empty() || cfg.bits.empty() || cfg.cancellation.empty())
        throw std::invalid_argument("run_sweep: empty grid axis");
    const int threads = cfg.threads > 0 ? cfg.threads : default_threads();

    const bool wants_nn = std::any_of(cfg.estimators.begin(), cfg.estimators.end(),
                                      [](Method m) { return is_cnn(m); });
    if (wants_nn && !cfg.train.enabled)
        throw std::invalid_argument(
            "run_sweep: CNN estimators need train.enabled (inline training)");

    std::vector<ResultRecord> records;
    std::map<std::string, nn::Model> model_cache;

    for (std::size_t it = 0; it < cfg.theta_as_deg.size(); ++it) {
        for (std::size_t ik = 0; ik < cfg.kappa_db.size(); ++ik) {
            channel::SystemConfig sys = cfg.system;
            sys.angular_spread_deg = cfg.theta_as_deg[it];
            sys.rician_kappa_db = cfg.kappa_db[ik];
            const pilot::PilotScheme scheme = pilot::build_scheme(cfg.scheme, sys);

            const bool want_ue = std::find(cfg.targets.begin(), cfg.targets.end(),
                                           Target::UE) != cfg.targets.end();
            const bool has_mmse = std::find(cfg.estimators.begin(), cfg.estimators.end(),
                                            Method::MMSE) != cfg.estimators.end();
            const bool any_cancel =
                std::find(cfg.cancellation.begin(), cfg.cancellation.end(), true) !=
                cfg.cancellation.end();
            std::optional<est::CovarianceModel> cov;
            if (has_mmse || (want_ue && any_cancel)) {
                const std::uint64_t cov_seed =
                    derive_seed(cfg.seed, 0xc0c0 + it * 1000 + ik);
                cov = est::build_covariance(sys, cfg.covariance_realizations, cov_seed,
                                            0, threads);
            }

            std::size_t point_idx = 0;
            for (int bits : cfg.bits) {
                for (bool canc : cfg.cancellation) {
                    for (double ssi : cfg.snr_si_db) {
                        for (double sue : cfg.snr_ue_db) {
                            PointSpec pt{ssi, sue, bits, canc};
                            const std::uint64_t pt_seed = derive_seed(
                                cfg.seed, 0xe7a1 + it * 7919 + ik * 104729 +
                                              point_idx * 1299709);
                            ++point_idx;

                            std::map<ModelKey, const nn::Model*> models;
                            for (Method m : cfg.estimators) {
                                if (!is_cnn(m)) continue;
                                for (Target tgt : cfg.targets) {
                                    const std::string key = model_cache_key(
                                        m, tgt, pt, cfg.theta_as_deg[it],
                                        cfg.kappa_db[ik]);
                                    auto found = model_cache.find(key);
                                    if (found == model_cache.end()) {
                                        nn::DatasetMeta meta;
                                        meta.target = tgt == Target::SI
                                                          ? nn::TargetKind::SI
                                                          : nn::TargetKind::UE;
                                        meta.scheme = cfg.scheme;
                                        meta.snr_si_db = {ssi};
                                        meta.snr_ue_db = {sue};
                                        meta.theta_as_deg = cfg.theta_as_deg[it];
                                        meta.kappa_db = cfg.kappa_db[ik];
                                        meta.bits = bits;
                                        meta.seed = derive_seed(pt_seed, 0xda7a);
                                        const nn::Dataset ds = nn::make_dataset(
                                            sys, meta, cfg.train.dataset_size,
                                            cfg.train.n_train, cfg.train.n_val,
                                            cfg.train.n_test, threads);
                                        nn::NetworkSpec spec = nn::NetworkSpec::cnn(
                                            cnn_hidden_layers(m), sys.n_rx,
                                            tgt == Target::SI ? sys.n_tx
                                                              : sys.k_total());
                                        nn::TrainHyper hyper = cfg.train.hyper;
                                        hyper.threads = threads;
                                        hyper.seed = derive_seed(pt_seed, 0x1717);
                                        nn::TrainResult tr = nn::train(spec, ds, hyper);
                                        found = model_cache
                                                    .emplace(key, std::move(tr.model))
                                                    .first;
                                    }
                                    models[{m, tgt}] = &found->second;
                                }
                            }

                            const auto t0 = std::chrono::steady_clock::now();
                            const std::uint64_t eval_seed = derive_seed(pt_seed, 0xe0a1);
                            const auto results = evaluate_point(
                                sys, scheme, pt, cfg.estimators, cfg.targets,
                                cov ? &*cov : nullptr, models, cfg.trials, eval_seed, 0,
                                threads);
                            const double wall =
                                std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();

                            for (const auto& [key, ratio] : results) {
                                ResultRecord rec;
                                rec.snr_si_db = ssi;
                                rec.snr_ue_db = sue;
                                rec.theta_as_deg = cfg.theta_as_deg[it];
                                rec.kappa_db = cfg.kappa_db[ik];
                                rec.bits = bits;
                                rec.scheme = cfg.scheme;
                                rec.method = key.first;
                                rec.target = key.second;
                                rec.cancellation = canc;
                                rec.trials = cfg.trials;
                                rec.nmse_db = to_db(ratio);
                                const int n_d = key.second == Target::SI
                                                    ? sys.n_tx
                                                    : sys.k_total();
                                if (is_cnn(key.first)) {
                                    const nn::NetworkSpec spec = nn::NetworkSpec::cnn(
                                        cnn_hidden_layers(key.first), sys.n_rx, n_d);
                                    const std::vector<int> f = spec.features();
                                    rec.flops = flops(key.first, key.second, sys.n_rx,
                                                      n_d, scheme.tau, &f);
                                } else {
                                    rec.flops = flops(key.first, key.second, sys.n_rx,
                                                      n_d, scheme.tau);
                                }
                                rec.seed = cfg.seed;
                                rec.wall_time_s = wall;
                                records.push_back(rec);
                            }
                        }
                    }
                }
            }
        }
    }

    std::sort(records.begin(), records.end(), [](const ResultRecord& a,
                                                 const ResultRecord& b) {
        auto key = [](const ResultRecord& r) {
            return std::make_tuple(r.theta_as_deg, r.kappa_db, r.bits, r.cancellation,
                                   r.snr_si_db, r.snr_ue_db, int(r.target),
                                   to_string(r.method));
        };
        return key(a) < key(b);
    });
    return records;
}

void emit_results(const std::vector<ResultRecord>& records, const std::string& format,
                  const std::string& path) {
    if (records.empty()) throw std::invalid_argument("emit_results: no records");
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    if (format == "csv") {
        f << "snr_si_db,snr_ue_db,theta_as_deg,kappa_db,bits,scheme,method,target,"
             "cancellation,trials,nmse_db,flops,seed\n";
        for (const auto& r : records) {
            f << format_double(r.snr_si_db) << ',' << format_double(r.snr_ue_db) << ','
              << format_double(r.theta_as_deg) << ',' << format_double(r.kappa_db)
              << ',' << r.bits << ',' << pilot::to_string(r.scheme) << ','
              << to_string(r.method) << ',' << to_string(r.target) << ','
              << (r.cancellation ? "on" : "off") << ',' << r.trials << ','
              << format_double(r.nmse_db) << ',' << r.flops << ',' << r.seed << '\n';
        }
    } else if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : records) {
            nlohmann::json j;
            j["snr_si_db"] = r.snr_si_db;
            j["snr_ue_db"] = r.snr_ue_db;
            j["theta_as_deg"] = r.theta_as_deg;
            j["kappa_db"] = r.kappa_db;
            j["bits"] = r.bits;
            j["scheme"] = pilot::to_string(r.scheme);
            j["method"] = to_string(r.method);
            j["target"] = to_string(r.target);
            j["cancellation"] = r.cancellation ? "on" : "off";
            j["trials"] = r.trials;
            j["nmse_db"] = r.nmse_db;
            j["flops"] = r.flops;
            j["seed"] = r.seed;
            arr.push_back(j);
        }
        f << arr.dump(2) << "\n";
    } else {
        throw std::invalid_argument("emit_results: format must be csv or json");
    }
    if (!f) throw IoError("write failed: " + path);
}

} // namespace fdx::harness
