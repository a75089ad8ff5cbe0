#include "fdx/harness/config.hpp"

#include <fstream>

namespace fdx::harness {

namespace {

channel::SystemConfig system_from_json(const nlohmann::json& j) {
    channel::SystemConfig s;
    s.n_tx = j.value("n_tx", s.n_tx);
    s.n_rx = j.value("n_rx", s.n_rx);
    s.k_uplink = j.value("k_uplink", s.k_uplink);
    s.k_downlink = j.value("k_downlink", s.k_downlink);
    s.n_paths = j.value("n_paths", s.n_paths);
    s.angular_spread_deg = j.value("angular_spread_deg", s.angular_spread_deg);
    s.nominal_angle_deg = j.value("nominal_angle_deg", s.nominal_angle_deg);
    s.carrier_hz = j.value("carrier_hz", s.carrier_hz);
    s.antenna_spacing_wl = j.value("antenna_spacing_wl", s.antenna_spacing_wl);
    s.array_separation_wl = j.value("array_separation_wl", s.array_separation_wl);
    s.rician_kappa_db = j.value("rician_kappa_db", s.rician_kappa_db);
    s.si_suppression_db = j.value("si_suppression_db", s.si_suppression_db);
    s.si_beta = j.value("si_beta", s.si_beta);
    s.pathloss_ref_db = j.value("pathloss_ref_db", s.pathloss_ref_db);
    s.pathloss_exp = j.value("pathloss_exp", s.pathloss_exp);
    s.shadow_std_db = j.value("shadow_std_db", s.shadow_std_db);
    s.ue_standoff_m = j.value("ue_standoff_m", s.ue_standoff_m);
    s.ue_area_m2 = j.value("ue_area_m2", s.ue_area_m2);
    return s;
}

nlohmann::json system_to_json(const channel::SystemConfig& s) {
    nlohmann::json j;
    j["n_tx"] = s.n_tx;
    j["n_rx"] = s.n_rx;
    j["k_uplink"] = s.k_uplink;
    j["k_downlink"] = s.k_downlink;
    j["n_paths"] = s.n_paths;
    j["angular_spread_deg"] = s.angular_spread_deg;
    j["nominal_angle_deg"] = s.nominal_angle_deg;
    j["carrier_hz"] = s.carrier_hz;
    j["antenna_spacing_wl"] = s.antenna_spacing_wl;
    j["array_separation_wl"] = s.array_separation_wl;
    j["rician_kappa_db"] = s.rician_kappa_db;
    j["si_suppression_db"] = s.si_suppression_db;
    j["si_beta"] = s.si_beta;
    j["pathloss_ref_db"] = s.pathloss_ref_db;
    j["pathloss_exp"] = s.pathloss_exp;
    j["shadow_std_db"] = s.shadow_std_db;
    j["ue_standoff_m"] = s.ue_standoff_m;
    j["ue_area_m2"] = s.ue_area_m2;
    return j;
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (j.contains("system")) cfg.system = system_from_json(j.at("system"));
    if (j.contains("scheme")) cfg.scheme = pilot::scheme_from_string(j.at("scheme"));
    if (j.contains("estimators")) {
        cfg.estimators.clear();
        for (const auto& e : j.at("estimators"))
            cfg.estimators.push_back(method_from_string(e));
    }
    if (j.contains("targets")) {
        cfg.targets.clear();
        for (const auto& t : j.at("targets"))
            cfg.targets.push_back(std::string(t) == "SI" ? Target::SI : Target::UE);
    }
    cfg.snr_si_db = j.value("snr_si_db", cfg.snr_si_db);
    cfg.snr_ue_db = j.value("snr_ue_db", cfg.snr_ue_db);
    cfg.theta_as_deg = j.value("theta_as_deg", cfg.theta_as_deg);
    cfg.kappa_db = j.value("kappa_db", cfg.kappa_db);
    cfg.bits = j.value("bits", cfg.bits);
    if (j.contains("cancellation")) {
        cfg.cancellation.clear();
        for (const auto& c : j.at("cancellation"))
            cfg.cancellation.push_back(std::string(c) == "on");
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.covariance_realizations =
        j.value("covariance_realizations", cfg.covariance_realizations);
    if (j.contains("train")) {
        const auto& t = j.at("train");
        cfg.train.enabled = t.value("inline", cfg.train.enabled);
        cfg.train.dataset_size = t.value("dataset_size", cfg.train.dataset_size);
        if (t.contains("split")) {
            const auto split = t.at("split");
            cfg.train.n_train = split.at(0);
            cfg.train.n_val = split.at(1);
            cfg.train.n_test = split.at(2);
        }
        cfg.train.hyper.batch_size = t.value("batch_size", cfg.train.hyper.batch_size);
        cfg.train.hyper.lr = t.value("lr", cfg.train.hyper.lr);
        cfg.train.hyper.max_epochs = t.value("max_epochs", cfg.train.hyper.max_epochs);
        cfg.train.hyper.patience = t.value("patience", cfg.train.hyper.patience);
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["system"] = system_to_json(cfg.system);
    j["scheme"] = pilot::to_string(cfg.scheme);
    nlohmann::json est = nlohmann::json::array();
    for (Method m : cfg.estimators) est.push_back(to_string(m));
    j["estimators"] = est;
    nlohmann::json tg = nlohmann::json::array();
    for (Target t : cfg.targets) tg.push_back(to_string(t));
    j["targets"] = tg;
    j["snr_si_db"] = cfg.snr_si_db;
    j["snr_ue_db"] = cfg.snr_ue_db;
    j["theta_as_deg"] = cfg.theta_as_deg;
    j["kappa_db"] = cfg.kappa_db;
    j["bits"] = cfg.bits;
    nlohmann::json canc = nlohmann::json::array();
    for (bool c : cfg.cancellation) canc.push_back(c ? "on" : "off");
    j["cancellation"] = canc;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["covariance_realizations"] = cfg.covariance_realizations;
    nlohmann::json t;
    t["inline"] = cfg.train.enabled;
    t["dataset_size"] = cfg.train.dataset_size;
    t["split"] = {cfg.train.n_train, cfg.train.n_val, cfg.train.n_test};
    t["batch_size"] = cfg.train.hyper.batch_size;
    t["lr"] = cfg.train.hyper.lr;
    t["max_epochs"] = cfg.train.hyper.max_epochs;
    t["patience"] = cfg.train.hyper.patience;
    j["train"] = t;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return config_from_json(j);
}

void write_config_sidecar(const ExperimentConfig& cfg, const std::string& out_path) {
    std::ofstream f(out_path + ".meta.json");
    if (!f) throw IoError("cannot write sidecar for: " + out_path);
    f << config_to_json(cfg).dump(2) << "\n";
}

} // namespace fdx::harness
