#include "fdx/nn/model_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace fdx::nn {

namespace {

constexpr char kMagic[4] = {'F', 'D', 'X', 'M'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
    std::ofstream f;
    explicit Writer(const std::string& path) : f(path, std::ios::binary) {
        if (!f) throw IoError("cannot open for writing: " + path);
    }
    template <class T>
    void put(const T& v) {
        f.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void put_floats(const float* p, std::size_t n) {
        f.write(reinterpret_cast<const char*>(p), std::streamsize(n * sizeof(float)));
    }
};

struct Reader {
    std::ifstream f;
    std::size_t offset = 0;
    std::string path;
    explicit Reader(const std::string& p) : f(p, std::ios::binary), path(p) {
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
    void get_floats(float* p, std::size_t n) {
        f.read(reinterpret_cast<char*>(p), std::streamsize(n * sizeof(float)));
        if (!f)
            throw FormatError(path + ": truncated at byte offset " +
                              std::to_string(offset));
        offset += n * sizeof(float);
    }
};

} // namespace

void save_model(const Model& model, const std::string& path) {
    Writer w(path);
    w.f.write(kMagic, 4);
    w.put(kVersion);
    w.put(std::uint8_t(model.spec.kind == NetKind::CNN ? 0 : 1));
    w.put(std::int32_t(model.spec.n_hidden));
    w.put(std::int32_t(model.spec.hidden_channels));
    w.put(std::int32_t(model.spec.hidden_width));
    w.put(std::int32_t(model.spec.in_h));
    w.put(std::int32_t(model.spec.in_w));
    w.put(std::int32_t(model.spec.in_len));
    w.put(std::int32_t(model.spec.out_len));
    w.put(double(model.in_scaler.lo));
    w.put(double(model.in_scaler.hi));
    w.put(double(model.label_scaler.lo));
    w.put(double(model.label_scaler.hi));
    w.put(std::uint32_t(model.weights.size()));
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        w.put(std::uint64_t(model.weights[l].size()));
        w.put(std::uint64_t(model.biases[l].size()));
    }
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        w.put_floats(model.weights[l].data(), model.weights[l].size());
        w.put_floats(model.biases[l].data(), model.biases[l].size());
    }
    if (!w.f) throw IoError("write failed: " + path);
}

Model load_model(const std::string& path) {
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

    Model m;
    const auto kind = r.get<std::uint8_t>();
    if (kind > 1) throw FormatError(path + ": unknown network kind");
    m.spec.kind = kind == 0 ? NetKind::CNN : NetKind::FNN;
    m.spec.n_hidden = r.get<std::int32_t>();
    m.spec.hidden_channels = r.get<std::int32_t>();
    m.spec.hidden_width = r.get<std::int32_t>();
    m.spec.in_h = r.get<std::int32_t>();
    m.spec.in_w = r.get<std::int32_t>();
    m.spec.in_len = r.get<std::int32_t>();
    m.spec.out_len = r.get<std::int32_t>();
    try {
        m.spec.validate();
    } catch (const std::exception& e) {
        throw FormatError(path + ": inconsistent spec: " + e.what());
    }
    m.in_scaler.lo = r.get<double>();
    m.in_scaler.hi = r.get<double>();
    m.in_scaler.fitted = true;
    m.label_scaler.lo = r.get<double>();
    m.label_scaler.hi = r.get<double>();
    m.label_scaler.fitted = true;

    const auto n_layers = r.get<std::uint32_t>();
    if (int(n_layers) != m.spec.n_layers())
        throw FormatError(path + ": layer count does not match spec");

    // Validate declared sizes against the spec-derived shapes before
    // reading any payload.
    const std::vector<int> f = m.spec.features();
    std::vector<std::uint64_t> w_counts(n_layers), b_counts(n_layers);
    for (std::uint32_t l = 0; l < n_layers; ++l) {
        w_counts[l] = r.get<std::uint64_t>();
        b_counts[l] = r.get<std::uint64_t>();
        const std::uint64_t expect_w =
            m.spec.kind == NetKind::CNN
                ? std::uint64_t(9) * std::uint64_t(f[l]) * std::uint64_t(f[l + 1])
                : std::uint64_t(f[l]) * std::uint64_t(f[l + 1]);
        const std::uint64_t expect_b = std::uint64_t(f[l + 1]);
        if (w_counts[l] != expect_w || b_counts[l] != expect_b)
            throw FormatError(path + ": parameter shape mismatch in layer " +
                              std::to_string(l));
    }
    m.weights.resize(n_layers);
    m.biases.resize(n_layers);
    for (std::uint32_t l = 0; l < n_layers; ++l) {
        m.weights[l].resize(std::size_t(w_counts[l]));
        m.biases[l].resize(std::size_t(b_counts[l]));
        r.get_floats(m.weights[l].data(), m.weights[l].size());
        r.get_floats(m.biases[l].data(), m.biases[l].size());
    }
    return m;
}

} // namespace fdx::nn
