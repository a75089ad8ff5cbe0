#include "fdx/harness/dataset_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace fdx::harness {

namespace {

constexpr char kMagic[4] = {'C', 'E', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_tensor_header(std::ofstream& f, const nn::Tensor& t) {
    const std::uint32_t rank = std::uint32_t(t.shape.size());
    f.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    for (auto d : t.shape) {
        const std::uint64_t v = std::uint64_t(d);
        f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

struct Reader {
    std::ifstream f;
    std::size_t offset = 0;
    std::string path;
    Reader(const std::string& p) : f(p, std::ios::binary), path(p) {
        if (!f) throw IoError("cannot open for reading: " + p);
    }
    template <class T>
    T get() {
        T v;
        f.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!f)
            throw FormatError(path + ": truncated at byte offset " +
                              std::to_string(offset));
        offset += sizeof(T);
        return v;
    }
    void get_raw(void* p, std::size_t n) {
        f.read(reinterpret_cast<char*>(p), std::streamsize(n));
        if (!f)
            throw FormatError(path + ": truncated at byte offset " +
                              std::to_string(offset));
        offset += n;
    }
};

nn::Tensor read_tensor(Reader& r) {
    const auto rank = r.get<std::uint32_t>();
    if (rank == 0 || rank > 8) throw FormatError(r.path + ": bad tensor rank");
    std::vector<std::int64_t> shape(rank);
    for (auto& d : shape) {
        const auto v = r.get<std::uint64_t>();
        if (v == 0 || v > (1ULL << 40)) throw FormatError(r.path + ": bad dimension");
        d = std::int64_t(v);
    }
    nn::Tensor t(shape);
    r.get_raw(t.data.data(), t.data.size() * sizeof(float));
    return t;
}

nlohmann::json meta_to_json(const nn::DatasetMeta& m) {
    nlohmann::json j;
    j["target"] = nn::to_string(m.target);
    j["scheme"] = pilot::to_string(m.scheme);
    j["snr_si_db"] = m.snr_si_db;
    j["snr_ue_db"] = m.snr_ue_db;
    j["theta_as_deg"] = m.theta_as_deg;
    j["kappa_db"] = m.kappa_db;
    j["bits"] = m.bits;
    j["rxtx_spreads_deg"] = m.rxtx_spreads_deg;
    j["seed"] = m.seed;
    j["source"] = m.source;
    return j;
}

nn::DatasetMeta meta_from_json(const nlohmann::json& j) {
    nn::DatasetMeta m;
    m.target = nn::target_from_string(j.value("target", "SI"));
    m.scheme = pilot::scheme_from_string(j.value("scheme", "orthogonal"));
    m.snr_si_db = j.value("snr_si_db", std::vector<double>{0.0});
    m.snr_ue_db = j.value("snr_ue_db", std::vector<double>{0.0});
    m.theta_as_deg = j.value("theta_as_deg", 60.0);
    m.kappa_db = j.value("kappa_db", 40.0);
    m.bits = j.value("bits", 0);
    m.rxtx_spreads_deg = j.value("rxtx_spreads_deg", std::vector<double>{});
    m.seed = j.value("seed", std::uint64_t(1));
    m.source = j.value("source", "external");
    return m;
}

} // namespace

void export_dataset(const nn::Dataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(kMagic, 4);
    f.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    const std::uint8_t target = std::uint8_t(ds.meta.target);
    f.write(reinterpret_cast<const char*>(&target), 1);
    const std::uint64_t splits[3] = {ds.n_train, ds.n_val, ds.n_test};
    f.write(reinterpret_cast<const char*>(splits), sizeof(splits));
    write_tensor_header(f, ds.inputs);
    f.write(reinterpret_cast<const char*>(ds.inputs.data.data()),
            std::streamsize(ds.inputs.data.size() * sizeof(float)));
    write_tensor_header(f, ds.labels);
    f.write(reinterpret_cast<const char*>(ds.labels.data.data()),
            std::streamsize(ds.labels.data.size() * sizeof(float)));
    if (!f) throw IoError("write failed: " + path);
    f.close();

    std::ofstream side(path + ".json");
    if (!side) throw IoError("cannot open sidecar for writing: " + path + ".json");
    side << meta_to_json(ds.meta).dump(2) << "\n";
}

nn::Dataset import_dataset(const std::string& path) {
    Reader r(path);
    char magic[4];
    r.f.read(magic, 4);
    if (!r.f || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError(path + ": bad magic at byte offset 0");
    r.offset = 4;
    const auto version = r.get<std::uint32_t>();
    if (version != kVersion)
        throw FormatError(path + ": unsupported format version " +
                          std::to_string(version));
    nn::Dataset ds;
    const auto target = r.get<std::uint8_t>();
    if (target > 2) throw FormatError(path + ": unknown target tag");
    ds.n_train = std::size_t(r.get<std::uint64_t>());
    ds.n_val = std::size_t(r.get<std::uint64_t>());
    ds.n_test = std::size_t(r.get<std::uint64_t>());
    ds.inputs = read_tensor(r);
    ds.labels = read_tensor(r);
    if (ds.inputs.shape[0] != ds.labels.shape[0])
        throw FormatError(path + ": input/label sample counts differ");
    if (ds.n_train + ds.n_val + ds.n_test != std::size_t(ds.inputs.shape[0]))
        throw FormatError(path + ": split sizes do not sum to sample count");

    ds.meta.target = nn::TargetKind(target);
    std::ifstream side(path + ".json");
    if (side) {
        try {
            nlohmann::json j;
            side >> j;
            ds.meta = meta_from_json(j);
            ds.meta.target = nn::TargetKind(target); // binary header wins
        } catch (const nlohmann::json::exception&) {
            ds.meta.source = "external";
        }
    } else {
        ds.meta.source = "external";
    }
    return ds;
}

} // namespace fdx::harness
