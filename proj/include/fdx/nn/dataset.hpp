#pragma once

#include <cstdint>
#include <string>

#include "fdx/channel.hpp"
#include "fdx/nn/network.hpp"
#include "fdx/nn/tensor.hpp"
#include "fdx/pilot.hpp"

namespace fdx::nn {

enum class TargetKind { SI, UE, RXTX };

std::string to_string(TargetKind t);
TargetKind target_from_string(const std::string& s);

struct DatasetMeta {
    TargetKind target = TargetKind::SI;
    pilot::SchemeKind scheme = pilot::SchemeKind::Orthogonal;
    std::vector<double> snr_si_db{0.0};
    std::vector<double> snr_ue_db{0.0};
    double theta_as_deg = 60.0;
    double kappa_db = 40.0;
    int bits = 0; ///< 0 = no quantization
    std::vector<double> rxtx_spreads_deg; ///< angular-spread mixture for RXTX pools
    std::uint64_t seed = 1;
    std::string source = "synthetic";
};

/// Supervised pairs plus the train/val/test split layout. Tensors are
/// [N, H, W, 2] for SI/UE targets and [N, L] for the RXTX mapping.
struct Dataset {
    Tensor inputs;
    Tensor labels;
    std::size_t n_train = 0, n_val = 0, n_test = 0;
    DatasetMeta meta;

    std::size_t size() const {
        return inputs.shape.empty() ? 0 : std::size_t(inputs.shape[0]);
    }
    std::size_t in_stride() const;
    std::size_t label_stride() const;
    const float* input_at(std::size_t i) const {
        return inputs.data.data() + i * in_stride();
    }
    const float* label_at(std::size_t i) const {
        return labels.data.data() + i * label_stride();
    }
    std::size_t split_offset(int split) const; ///< 0 train, 1 val, 2 test
    std::size_t split_size(int split) const;
    void validate() const;
};

/// Interleaved [h][w][2] real/imag stacking used by the CNN path.
void stack_complex(const ComplexMatrix& m, float* out);
ComplexMatrix unstack_complex(const float* in, std::size_t rows, std::size_t cols);

/// Concatenated [Re; Im] stacking used by the FNN path.
void stack_complex_vector(const ComplexMatrix& v, float* out);
ComplexMatrix unstack_complex_vector(const float* in, std::size_t n);

/// Builds a pilot-domain dataset: inputs are correlated (optionally
/// quantized) received pilots, labels the true channels, sample i fully
/// determined by stream id seed+i. Per-sample SNRs are drawn uniformly
/// from the meta grids.
Dataset make_dataset(const channel::SystemConfig& cfg, const DatasetMeta& meta,
                     std::size_t size, std::size_t n_train, std::size_t n_val,
                     std::size_t n_test, int threads = 1);

/// Fits global input/label scalers on the training split only.
std::pair<MinMaxScaler, MinMaxScaler> fit_scaler(const Dataset& ds);

/// Input/label tensor shape (excluding the batch dimension) for a target.
std::vector<std::int64_t> input_dims(const channel::SystemConfig& cfg,
                                     const DatasetMeta& meta);
std::vector<std::int64_t> label_dims(const channel::SystemConfig& cfg,
                                     const DatasetMeta& meta);

} // namespace fdx::nn
