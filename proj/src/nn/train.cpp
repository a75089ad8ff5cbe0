#include "fdx/nn/train.hpp"

#include <algorithm>
#include <cmath>

#include "fdx/kernels/kernels.hpp"
#include "fdx/parallel.hpp"
#include "fdx/rng.hpp"

namespace fdx::nn {

namespace {

/// Scaled copy of a full dataset tensor.
std::vector<float> transform_all(const MinMaxScaler& s, const std::vector<float>& x) {
    std::vector<float> y(x.size());
    s.transform(x.data(), y.data(), x.size());
    return y;
}

double eval_split_mse(const Model& model, const std::vector<float>& xs,
                      const std::vector<float>& ys, std::size_t offset,
                      std::size_t count, std::size_t in_stride,
                      std::size_t out_stride, int threads) {
    if (count == 0) return 0.0;
    std::vector<double> losses(count, 0.0);
    parallel_chunks(count, threads, [&](std::size_t b, std::size_t e, int) {
        Model::Workspace ws = model.make_workspace();
        std::vector<float> diff(out_stride);
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t s = offset + i;
            const float* out = model.forward(xs.data() + s * in_stride, ws);
            const float* lab = ys.data() + s * out_stride;
            for (std::size_t j = 0; j < out_stride; ++j) diff[j] = out[j] - lab[j];
            losses[i] = kern::active().sumsq(diff.data(), out_stride);
        }
    });
    double acc = 0.0;
    for (double l : losses) acc += l;
    return acc / double(count);
}

} // namespace

TrainResult train(const NetworkSpec& spec, const Dataset& ds, const TrainHyper& hyper) {
    spec.validate();
    ds.validate();
    if (ds.n_train == 0 || ds.n_val == 0)
        throw std::invalid_argument("train: needs non-empty train and val splits");
    if (spec.in_elems() != ds.in_stride() || spec.out_elems() != ds.label_stride())
        throw ShapeMismatch("train: dataset strides do not match the network spec");

    TrainResult res;
    res.model.spec = spec;
    auto [in_s, lab_s] = fit_scaler(ds);
    res.model.in_scaler = in_s;
    res.model.label_scaler = lab_s;
    res.model.init_params(hyper.seed);

    const std::size_t in_stride = ds.in_stride();
    const std::size_t out_stride = ds.label_stride();
    const std::vector<float> xs = transform_all(in_s, ds.inputs.data);
    const std::vector<float> ys = transform_all(lab_s, ds.labels.data);

    Model& model = res.model;
    AdamState adam;
    adam.init_like(model);

    const int threads = std::max(1, hyper.threads);
    std::vector<Grads> chunk_grads{std::size_t(threads)};
    for (auto& g : chunk_grads) g.init_like(model);
    Grads total;
    total.init_like(model);

    std::vector<std::size_t> order(ds.n_train);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<std::vector<float>> best_w;
    std::vector<std::vector<float>> best_b;
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        // Deterministic Fisher-Yates reshuffle per epoch.
        RngStream shuffle_rng(hyper.seed, 10000 + std::uint64_t(epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);

        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < ds.n_train;
             start += std::size_t(hyper.batch_size)) {
            const std::size_t bn =
                std::min(std::size_t(hyper.batch_size), ds.n_train - start);
            std::vector<double> chunk_loss(std::size_t(threads), 0.0);
            parallel_chunks(bn, threads, [&](std::size_t b, std::size_t e, int c) {
                Grads& g = chunk_grads[std::size_t(c)];
                g.zero();
                Model::Workspace ws = model.make_workspace();
                std::vector<float> gout(out_stride);
                const float inv_bn = float(1.0 / double(bn));
                for (std::size_t i = b; i < e; ++i) {
                    const std::size_t s = order[start + i];
                    const float* x = xs.data() + s * in_stride;
                    const float* out = model.forward(x, ws);
                    const float* lab = ys.data() + s * out_stride;
                    double lsum = 0.0;
                    for (std::size_t j = 0; j < out_stride; ++j) {
                        const float d = out[j] - lab[j];
                        lsum += double(d) * double(d);
                        gout[j] = 2.0f * d * inv_bn;
                    }
                    chunk_loss[std::size_t(c)] += lsum;
                    model.backward(x, gout.data(), ws, g);
                }
            });
            // Fixed chunk-order reduction keeps the update deterministic
            // for a given thread configuration.
            total.zero();
            double batch_loss = 0.0;
            for (int c = 0; c < threads; ++c) {
                total.add(chunk_grads[std::size_t(c)]);
                batch_loss += chunk_loss[std::size_t(c)];
            }
            batch_loss /= double(bn);
            if (!std::isfinite(batch_loss))
                throw NonFiniteLoss("train: non-finite batch loss at epoch " +
                                    std::to_string(epoch) + ", step " +
                                    std::to_string(adam.step));
            adam_update(model, total, adam, hyper);
            epoch_loss += batch_loss;
            ++n_batches;
        }
        res.train_loss.push_back(epoch_loss / double(n_batches));

        const double val = eval_split_mse(model, xs, ys, ds.split_offset(1), ds.n_val,
                                          in_stride, out_stride, threads);
        res.val_loss.push_back(val);
        if (!std::isfinite(val))
            throw NonFiniteLoss("train: non-finite validation loss");

        if (val < best_val) {
            best_val = val;
            best_w = model.weights;
            best_b = model.biases;
            res.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best > hyper.patience) {
            break;
        }
    }

    if (!best_w.empty()) {
        model.weights = std::move(best_w);
        model.biases = std::move(best_b);
    }
    return res;
}

ComplexMatrix predict_channel(const Model& model, const ComplexMatrix& input) {
    const NetworkSpec& spec = model.spec;
    std::vector<float> x(spec.in_elems());
    if (spec.kind == NetKind::CNN) {
        if (input.rows() != std::size_t(spec.in_h) || input.cols() != std::size_t(spec.in_w))
            throw ShapeMismatch("predict_channel: input dims");
        stack_complex(input, x.data());
    } else {
        if (input.cols() != 1 || 2 * input.rows() != std::size_t(spec.in_len))
            throw ShapeMismatch("predict_channel: input vector length");
        stack_complex_vector(input, x.data());
    }
    model.in_scaler.transform(x.data(), x.data(), x.size());
    Model::Workspace ws = model.make_workspace();
    const float* out = model.forward(x.data(), ws);
    std::vector<float> y(spec.out_elems());
    model.label_scaler.inverse(out, y.data(), y.size());
    if (spec.kind == NetKind::CNN)
        return unstack_complex(y.data(), std::size_t(spec.in_h), std::size_t(spec.in_w));
    return unstack_complex_vector(y.data(), std::size_t(spec.out_len / 2));
}

double evaluate_nmse(const Model& model, const Dataset& ds, int split, int threads) {
    const std::size_t count = ds.split_size(split);
    const std::size_t offset = ds.split_offset(split);
    if (count == 0) throw std::invalid_argument("evaluate_nmse: empty split");
    const std::size_t in_stride = ds.in_stride();
    const std::size_t out_stride = ds.label_stride();
    std::vector<double> ratios(count, 0.0);
    parallel_chunks(count, threads, [&](std::size_t b, std::size_t e, int) {
        Model::Workspace ws = model.make_workspace();
        std::vector<float> x(in_stride);
        std::vector<float> y(out_stride);
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t s = offset + i;
            model.in_scaler.transform(ds.inputs.data.data() + s * in_stride, x.data(),
                                      in_stride);
            const float* out = model.forward(x.data(), ws);
            model.label_scaler.inverse(out, y.data(), out_stride);
            const float* lab = ds.labels.data.data() + s * out_stride;
            double err = 0.0, ref = 0.0;
            for (std::size_t j = 0; j < out_stride; ++j) {
                const double d = double(y[j]) - double(lab[j]);
                err += d * d;
                ref += double(lab[j]) * double(lab[j]);
            }
            ratios[i] = ref > 0.0 ? err / ref : 0.0;
        }
    });
    double acc = 0.0;
    for (double r : ratios) acc += r;
    return acc / double(count);
}

} // namespace fdx::nn
