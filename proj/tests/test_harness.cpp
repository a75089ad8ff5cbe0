#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fdx/harness/config.hpp"
#include "fdx/harness/dataset_io.hpp"
#include "fdx/harness/metrics.hpp"
#include "fdx/harness/sweep.hpp"
#include "support/oracles.hpp"

using namespace fdx;
using namespace fdx::harness;

namespace {

ExperimentConfig small_sweep_cfg() {
    ExperimentConfig cfg;
    cfg.system.n_tx = 4;
    cfg.system.n_rx = 4;
    cfg.system.k_uplink = 1;
    cfg.system.k_downlink = 1;
    cfg.system.n_paths = 3;
    cfg.scheme = pilot::SchemeKind::SharedNt;
    cfg.estimators = {Method::LS, Method::MMSE};
    cfg.targets = {Target::SI, Target::UE};
    cfg.snr_si_db = {0.0, 10.0};
    cfg.snr_ue_db = {0.0};
    cfg.trials = 50;
    cfg.seed = 3;
    cfg.threads = 2;
    cfg.covariance_realizations = 200;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("nmse definition") {
    RngStream rng(61, 0);
    ComplexMatrix h = sample_cn_matrix(rng, 3, 4);
    CHECK(nmse(h, h) == 0.0);
    CHECK(nmse(h, ComplexMatrix(3, 4)) == doctest::Approx(1.0));
    ComplexMatrix twice = h;
    twice *= 2.0;
    CHECK(nmse(h, twice) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)nmse(ComplexMatrix(2, 2), ComplexMatrix(2, 2)), ZeroReference);
    CHECK_THROWS_AS((void)nmse(h, ComplexMatrix(2, 2)), ShapeMismatch);
}

TEST_CASE("flops reproduces the complexity table") {
    CHECK(flops(Method::LS, Target::SI, 16, 16, 16) == 4096);
    CHECK(flops(Method::MMSE, Target::SI, 16, 16, 16) == 65536);

    nn::NetworkSpec cnn0 = nn::NetworkSpec::cnn(0, 16, 16);
    std::vector<int> f0 = cnn0.features();
    CHECK(flops(Method::CNN0, Target::SI, 16, 16, 16, &f0) ==
          4096 + 256LL * 9 * 2 * 2);

    nn::NetworkSpec cnn1 = nn::NetworkSpec::cnn(1, 16, 16);
    nn::NetworkSpec cnn2 = nn::NetworkSpec::cnn(2, 16, 16);
    std::vector<int> f1 = cnn1.features();
    std::vector<int> f2 = cnn2.features();
    const long long inc = flops(Method::CNN2, Target::SI, 16, 16, 16, &f2) -
                          flops(Method::CNN1, Target::SI, 16, 16, 16, &f1);
    CHECK(inc == 256LL * 9 * 64 * 64);
    CHECK(inc == 9437184);

    // UE flavor uses K in place of N_t.
    CHECK(flops(Method::LS, Target::UE, 16, 8, 16) == 2048);
    CHECK_THROWS(flops(Method::CNN2, Target::SI, 16, 16, 16, nullptr));
}

TEST_CASE("degenerate one-point sweep yields one record per method and target") {
    ExperimentConfig cfg = small_sweep_cfg();
    cfg.estimators = {Method::LS};
    cfg.snr_si_db = {5.0};
    cfg.trials = 1;
    const auto records = run_sweep(cfg);
    CHECK(records.size() == 2); // SI and UE
    for (const auto& r : records) {
        CHECK(r.trials == 1);
        CHECK(std::isfinite(r.nmse_db));
        CHECK(r.flops > 0);
    }
}

TEST_CASE("noiseless orthogonal LS sweep records an (numerically) zero NMSE") {
    // Noise always enters at unit variance; push the pilot power high
    // enough that the LS error is at the arithmetic floor.
    ExperimentConfig cfg = small_sweep_cfg();
    cfg.scheme = pilot::SchemeKind::Orthogonal;
    cfg.estimators = {Method::LS};
    cfg.targets = {Target::SI};
    cfg.snr_si_db = {280.0};
    cfg.trials = 5;
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].nmse_db <= -200.0);
}

TEST_CASE("sweep rerun with identical config is byte-identical (CSV)") {
    ExperimentConfig cfg = small_sweep_cfg();
    const auto r1 = run_sweep(cfg);
    const auto r2 = run_sweep(cfg);
    emit_results(r1, "csv", "sweep_a.csv");
    emit_results(r2, "csv", "sweep_b.csv");
    CHECK(slurp("sweep_a.csv") == slurp("sweep_b.csv"));
    std::remove("sweep_a.csv");
    std::remove("sweep_b.csv");
}

TEST_CASE("emitted CSV round-trips through parsing") {
    ExperimentConfig cfg = small_sweep_cfg();
    cfg.estimators = {Method::LS};
    cfg.trials = 8;
    const auto records = run_sweep(cfg);
    emit_results(records, "csv", "sweep_rt.csv");

    std::ifstream f("sweep_rt.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header ==
          "snr_si_db,snr_ue_db,theta_as_deg,kappa_db,bits,scheme,method,target,"
          "cancellation,trials,nmse_db,flops,seed");
    std::size_t n = 0;
    std::string line;
    while (std::getline(f, line)) {
        REQUIRE(!line.empty());
        // Locale-independent decimal points.
        CHECK(line.find(',') != std::string::npos);
        CHECK(line.find(';') == std::string::npos);
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 13);
        CHECK(std::stod(fields[0]) == records[n].snr_si_db);
        CHECK(std::stod(fields[10]) == records[n].nmse_db);
        CHECK(std::stoll(fields[11]) == records[n].flops);
        ++n;
    }
    CHECK(n == records.size());
    std::remove("sweep_rt.csv");

    CHECK_THROWS(emit_results({}, "csv", "x.csv"));
    CHECK_THROWS(emit_results(records, "xml", "x.xml"));
}

TEST_CASE("emit_results JSON mirrors the CSV fields") {
    ExperimentConfig cfg = small_sweep_cfg();
    cfg.estimators = {Method::LS};
    cfg.targets = {Target::SI};
    cfg.snr_si_db = {0.0};
    cfg.trials = 4;
    const auto records = run_sweep(cfg);
    emit_results(records, "json", "sweep.json");
    nlohmann::json j;
    std::ifstream("sweep.json") >> j;
    REQUIRE(j.is_array());
    REQUIRE(j.size() == records.size());
    CHECK(j[0]["method"] == "LS");
    CHECK(j[0]["target"] == "SI");
    CHECK(j[0]["scheme"] == "shared_nt");
    CHECK(double(j[0]["nmse_db"]) == doctest::Approx(records[0].nmse_db));
    std::remove("sweep.json");
}

TEST_CASE("quadrupling trials shrinks the estimator spread about twofold") {
    // Monte Carlo consistency on the NMSE mean: the standard error of the
    // per-point estimate scales like 1/sqrt(trials).
    ExperimentConfig base = small_sweep_cfg();
    base.estimators = {Method::LS};
    base.targets = {Target::SI};
    base.snr_si_db = {0.0};

    auto spread = [&](int trials, std::uint64_t seed0) {
        std::vector<double> means;
        for (int rep = 0; rep < 24; ++rep) {
            const channel::SystemConfig sys = base.system;
            const pilot::PilotScheme scheme = pilot::build_scheme(base.scheme, sys);
            PointSpec pt{0.0, 0.0, 0, false};
            const auto res = evaluate_point(sys, scheme, pt, {Method::LS},
                                            {Target::SI}, nullptr, {}, trials,
                                            derive_seed(seed0, std::uint64_t(rep)), 0, 2);
            means.push_back(res.at({Method::LS, Target::SI}));
        }
        double mu = 0.0;
        for (double m : means) mu += m;
        mu /= double(means.size());
        double var = 0.0;
        for (double m : means) var += (m - mu) * (m - mu);
        return std::sqrt(var / double(means.size() - 1));
    };

    const double s1 = spread(40, 11);
    const double s4 = spread(160, 12);
    CHECK(s1 / s4 > 1.3);
    CHECK(s1 / s4 < 3.2);
}

TEST_CASE("CEDS dataset export/import round trip is bit exact") {
    channel::SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.k_uplink = 1;
    cfg.k_downlink = 1;
    nn::DatasetMeta meta;
    meta.target = nn::TargetKind::UE;
    meta.scheme = pilot::SchemeKind::SharedK;
    meta.snr_si_db = {0.0, 10.0};
    meta.seed = 77;
    nn::Dataset ds = nn::make_dataset(cfg, meta, 32, 16, 8, 8);
    export_dataset(ds, "ds_a.ceds");
    nn::Dataset back = import_dataset("ds_a.ceds");
    CHECK(back.inputs.shape == ds.inputs.shape);
    CHECK(back.inputs.data == ds.inputs.data);
    CHECK(back.labels.data == ds.labels.data);
    CHECK(back.n_train == 16);
    CHECK(back.meta.source == "synthetic");
    CHECK(back.meta.scheme == pilot::SchemeKind::SharedK);

    // Re-export gives identical bytes.
    export_dataset(back, "ds_b.ceds");
    CHECK(slurp("ds_a.ceds") == slurp("ds_b.ceds"));

    // Without a sidecar the import is marked external.
    std::remove("ds_a.ceds.json");
    nn::Dataset ext = import_dataset("ds_a.ceds");
    CHECK(ext.meta.source == "external");

    // Truncated payload reports the byte offset.
    {
        std::string all = slurp("ds_b.ceds");
        std::ofstream out("ds_b.ceds", std::ios::binary);
        out.write(all.data(), std::streamsize(all.size() - 64));
    }
    try {
        (void)import_dataset("ds_b.ceds");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
    std::remove("ds_a.ceds");
    std::remove("ds_b.ceds");
    std::remove("ds_b.ceds.json");
}

TEST_CASE("distribution shift degrades a trained estimator") {
    // Train a small CNN0 on theta_AS = 60 deg, then test both in
    // distribution and on an imported narrow-spread dataset.
    channel::SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.k_uplink = 1;
    cfg.k_downlink = 1;
    nn::DatasetMeta meta;
    meta.target = nn::TargetKind::SI;
    meta.scheme = pilot::SchemeKind::SharedNt;
    meta.snr_si_db = {10.0};
    meta.theta_as_deg = 10.0; // narrow spread: strong learnable structure
    meta.seed = 31;
    nn::Dataset train_ds = nn::make_dataset(cfg, meta, 2400, 2000, 200, 200, 2);

    nn::TrainHyper hyper;
    hyper.batch_size = 128;
    hyper.lr = 2e-3;
    hyper.max_epochs = 40;
    hyper.patience = 40;
    hyper.seed = 4;
    hyper.threads = 2;
    nn::TrainResult tr = nn::train(nn::NetworkSpec::cnn(0, 4, 4), train_ds, hyper);

    // Test on wide-spread channels whose spatial structure the model never
    // saw; the learned correlation prior no longer applies.
    nn::DatasetMeta shifted = meta;
    shifted.theta_as_deg = 360.0;
    shifted.seed = 32;
    nn::Dataset shift_ds = nn::make_dataset(cfg, shifted, 400, 0, 0, 400, 2);
    export_dataset(shift_ds, "shift.ceds");
    std::remove("shift.ceds.json"); // simulate an externally produced file
    nn::Dataset ext = import_dataset("shift.ceds");
    CHECK(ext.meta.source == "external");

    const double in_dist = nn::evaluate_nmse(tr.model, train_ds, 2, 2);
    const double shifted_nmse = nn::evaluate_nmse(tr.model, ext, 2, 2);
    CHECK(shifted_nmse >= in_dist);
    std::remove("shift.ceds");
}

TEST_CASE("config file round trip with overrides") {
    ExperimentConfig cfg = small_sweep_cfg();
    cfg.train.enabled = true;
    cfg.train.dataset_size = 1234;
    const nlohmann::json j = config_to_json(cfg);
    ExperimentConfig back = config_from_json(j);
    CHECK(back.system.n_tx == cfg.system.n_tx);
    CHECK(back.scheme == cfg.scheme);
    CHECK(back.estimators == cfg.estimators);
    CHECK(back.snr_si_db == cfg.snr_si_db);
    CHECK(back.train.enabled);
    CHECK(back.train.dataset_size == 1234);

    std::ofstream("cfg_rt.json") << j.dump(2);
    ExperimentConfig loaded = load_config("cfg_rt.json");
    CHECK(loaded.trials == cfg.trials);
    std::remove("cfg_rt.json");
    CHECK_THROWS_AS((void)load_config("missing_config.json"), IoError);

    write_config_sidecar(cfg, "artifact.bin");
    nlohmann::json side;
    std::ifstream("artifact.bin.meta.json") >> side;
    CHECK(side["trials"] == cfg.trials);
    std::remove("artifact.bin.meta.json");
}
