#pragma once

#include "fdx/nn/dataset.hpp"
#include "fdx/nn/network.hpp"

namespace fdx::nn {

struct TrainResult {
    Model model;
    std::vector<double> train_loss; ///< mean per-sample MSE per epoch
    std::vector<double> val_loss;
    int best_epoch = -1;
};

/// Mini-batch Adam on min-max-scaled data with early stopping on the
/// validation MSE. Scalers are fitted on the training split here and
/// stored in the returned model. Deterministic given (seed, threads).
TrainResult train(const NetworkSpec& spec, const Dataset& ds, const TrainHyper& hyper);

/// Scale input, forward, inverse-scale output, unstack to complex.
/// For CNN models the input is the correlated pilot block (h x w); for
/// FNN models a column vector of length in_len/2.
ComplexMatrix predict_channel(const Model& model, const ComplexMatrix& input);

/// Mean NMSE ratio of the model over one dataset split (0 train, 1 val,
/// 2 test), evaluated in the unscaled channel domain.
double evaluate_nmse(const Model& model, const Dataset& ds, int split,
                     int threads = 1);

} // namespace fdx::nn
