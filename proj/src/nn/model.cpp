#include "ergokit/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ergokit/errors.hpp"
#include "ergokit/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergokit::nn {

namespace {

constexpr std::uint64_t kInitStreamTag = 0x6d6f64656c696e69ULL;
constexpr std::uint64_t kCheckStreamTag = 0x6772616463686b31ULL;

// ---- forward kernels -------------------------------------------------------

void conv3x3_forward(const double* in, int g, int ic, const double* w,
                     const double* b, double* out, int oc) {
    for (int y = 0; y < g; ++y) {
        for (int x = 0; x < g; ++x) {
            double* out_px = out + (static_cast<std::size_t>(y) * g + x) * oc;
            for (int o = 0; o < oc; ++o) out_px[o] = b[o];
            const int ky0 = y == 0 ? 1 : 0;
            const int ky1 = y == g - 1 ? 2 : 3;
            const int kx0 = x == 0 ? 1 : 0;
            const int kx1 = x == g - 1 ? 2 : 3;
            for (int ky = ky0; ky < ky1; ++ky) {
                const int iy = y + ky - 1;
                for (int kx = kx0; kx < kx1; ++kx) {
                    const int ix = x + kx - 1;
                    const double* in_px =
                        in + (static_cast<std::size_t>(iy) * g + ix) * ic;
                    const double* w_k = w + (static_cast<std::size_t>(ky) * 3 + kx) * ic;
                    for (int o = 0; o < oc; ++o) {
                        const double* w_o = w_k + static_cast<std::size_t>(o) * 9 * ic;
                        double acc = 0.0;
                        for (int i = 0; i < ic; ++i) acc += in_px[i] * w_o[i];
                        out_px[o] += acc;
                    }
                }
            }
        }
    }
}

void pointwise_forward(const double* in, int cells, int ic, const double* w,
                       const double* b, double* out, int oc) {
    for (int px = 0; px < cells; ++px) {
        const double* in_px = in + static_cast<std::size_t>(px) * ic;
        double* out_px = out + static_cast<std::size_t>(px) * oc;
        for (int o = 0; o < oc; ++o) {
            const double* w_o = w + static_cast<std::size_t>(o) * ic;
            double acc = b[o];
            for (int i = 0; i < ic; ++i) acc += in_px[i] * w_o[i];
            out_px[o] = acc;
        }
    }
}

void relu_inplace(double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

// 2x2 stride-2 pooling, trailing row/column dropped on odd grids. Ties go
// to the first cell in row-major window order.
void maxpool_forward(const double* in, int g, int c, double* out,
                     int* argmax, int h) {
    for (int py = 0; py < h; ++py) {
        for (int px = 0; px < h; ++px) {
            double* out_px = out + (static_cast<std::size_t>(py) * h + px) * c;
            int* arg_px = argmax + (static_cast<std::size_t>(py) * h + px) * c;
            const int y0 = 2 * py;
            const int x0 = 2 * px;
            for (int ch = 0; ch < c; ++ch) {
                double best = in[(static_cast<std::size_t>(y0) * g + x0) * c + ch];
                int best_cell = y0 * g + x0;
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        if (dy == 0 && dx == 0) continue;
                        const int cell = (y0 + dy) * g + (x0 + dx);
                        const double v = in[static_cast<std::size_t>(cell) * c + ch];
                        if (v > best) {
                            best = v;
                            best_cell = cell;
                        }
                    }
                }
                out_px[ch] = best;
                arg_px[ch] = best_cell;
            }
        }
    }
}

void dense_forward(const double* in, int n_in, const double* w, const double* b,
                   double* out, int n_out) {
    for (int o = 0; o < n_out; ++o) {
        const double* w_o = w + static_cast<std::size_t>(o) * n_in;
        double acc = b[o];
        for (int i = 0; i < n_in; ++i) acc += in[i] * w_o[i];
        out[o] = acc;
    }
}

// ---- backward kernels ------------------------------------------------------

void conv3x3_backward(const double* in, int g, int ic, const double* w, int oc,
                      const double* d_out, double* d_w, double* d_b,
                      double* d_in) {
    for (int y = 0; y < g; ++y) {
        for (int x = 0; x < g; ++x) {
            const double* dout_px =
                d_out + (static_cast<std::size_t>(y) * g + x) * oc;
            const int ky0 = y == 0 ? 1 : 0;
            const int ky1 = y == g - 1 ? 2 : 3;
            const int kx0 = x == 0 ? 1 : 0;
            const int kx1 = x == g - 1 ? 2 : 3;
            for (int o = 0; o < oc; ++o) {
                const double go = dout_px[o];
                if (go == 0.0) continue;  // relu zeros are common
                d_b[o] += go;
                for (int ky = ky0; ky < ky1; ++ky) {
                    const int iy = y + ky - 1;
                    for (int kx = kx0; kx < kx1; ++kx) {
                        const int ix = x + kx - 1;
                        const std::size_t px_off =
                            (static_cast<std::size_t>(iy) * g + ix) * ic;
                        const std::size_t w_off =
                            (static_cast<std::size_t>(o) * 9 +
                             static_cast<std::size_t>(ky) * 3 + kx) * ic;
                        const double* in_px = in + px_off;
                        double* dw = d_w + w_off;
                        for (int i = 0; i < ic; ++i) dw[i] += go * in_px[i];
                        if (d_in) {
                            const double* w_k = w + w_off;
                            double* din_px = d_in + px_off;
                            for (int i = 0; i < ic; ++i) din_px[i] += go * w_k[i];
                        }
                    }
                }
            }
        }
    }
}

void pointwise_backward(const double* in, int cells, int ic, const double* w,
                        int oc, const double* d_out, double* d_w, double* d_b,
                        double* d_in) {
    for (int px = 0; px < cells; ++px) {
        const double* in_px = in + static_cast<std::size_t>(px) * ic;
        const double* dout_px = d_out + static_cast<std::size_t>(px) * oc;
        double* din_px = d_in + static_cast<std::size_t>(px) * ic;
        for (int o = 0; o < oc; ++o) {
            const double go = dout_px[o];
            if (go == 0.0) continue;
            d_b[o] += go;
            const double* w_o = w + static_cast<std::size_t>(o) * ic;
            double* dw_o = d_w + static_cast<std::size_t>(o) * ic;
            for (int i = 0; i < ic; ++i) {
                dw_o[i] += go * in_px[i];
                din_px[i] += go * w_o[i];
            }
        }
    }
}

void dense_backward(const double* in, int n_in, const double* w, int n_out,
                    const double* d_out, double* d_w, double* d_b,
                    double* d_in) {
    for (int o = 0; o < n_out; ++o) {
        const double go = d_out[o];
        if (go == 0.0) continue;
        d_b[o] += go;
        const double* w_o = w + static_cast<std::size_t>(o) * n_in;
        double* dw_o = d_w + static_cast<std::size_t>(o) * n_in;
        for (int i = 0; i < n_in; ++i) {
            dw_o[i] += go * in[i];
            if (d_in) d_in[i] += go * w_o[i];
        }
    }
}

// Relu backward: gradient passes where the stored activation is positive.
void relu_backward(const double* activated, double* grad, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (activated[i] <= 0.0) grad[i] = 0.0;
    }
}

// ---- trace -----------------------------------------------------------------

struct ForwardTrace {
    std::vector<double> x0, a1, a2, a3, pooled, a4, h1;
    std::vector<int> argmax;
    double raw = 0.0;

    void resize(const ArchSpec& a) {
        const std::size_t cells = static_cast<std::size_t>(a.grid) * a.grid;
        const std::size_t pcells = static_cast<std::size_t>(a.pooled()) * a.pooled();
        x0.resize(cells * a.in_channels);
        a1.resize(cells * a.conv_a);
        a2.resize(cells * a.pointwise);
        a3.resize(cells * a.conv_b);
        pooled.resize(pcells * a.conv_b);
        argmax.resize(pcells * a.conv_b);
        a4.resize(pcells * a.conv_c);
        h1.resize(static_cast<std::size_t>(a.hidden));
    }
};

double run_forward(const AngleModel& m, const InputGrid& input,
                   ForwardTrace& t) {
    const ArchSpec& a = m.arch;
    const ParamLayout layout(a);
    const double* p = m.params.data();
    const int g = a.grid;
    const int cells = g * g;
    const int h = a.pooled();

    // Masking stage: absent pairs contribute exactly zero.
    for (int px = 0; px < cells; ++px) {
        const double mval = input.mask[static_cast<std::size_t>(px)];
        const double* in_px =
            input.features.data() + static_cast<std::size_t>(px) * a.in_channels;
        double* out_px = t.x0.data() + static_cast<std::size_t>(px) * a.in_channels;
        for (int c = 0; c < a.in_channels; ++c) out_px[c] = in_px[c] * mval;
    }

    conv3x3_forward(t.x0.data(), g, a.in_channels, p + layout.conv_a_w,
                    p + layout.conv_a_b, t.a1.data(), a.conv_a);
    relu_inplace(t.a1.data(), t.a1.size());

    pointwise_forward(t.a1.data(), cells, a.conv_a, p + layout.pw_w,
                      p + layout.pw_b, t.a2.data(), a.pointwise);
    relu_inplace(t.a2.data(), t.a2.size());

    conv3x3_forward(t.a2.data(), g, a.pointwise, p + layout.conv_b_w,
                    p + layout.conv_b_b, t.a3.data(), a.conv_b);
    relu_inplace(t.a3.data(), t.a3.size());

    maxpool_forward(t.a3.data(), g, a.conv_b, t.pooled.data(), t.argmax.data(), h);

    conv3x3_forward(t.pooled.data(), h, a.conv_b, p + layout.conv_c_w,
                    p + layout.conv_c_b, t.a4.data(), a.conv_c);
    relu_inplace(t.a4.data(), t.a4.size());

    dense_forward(t.a4.data(), a.flat(), p + layout.dense1_w,
                  p + layout.dense1_b, t.h1.data(), a.hidden);
    relu_inplace(t.h1.data(), t.h1.size());

    double raw = p[layout.dense2_b];
    const double* w2 = p + layout.dense2_w;
    for (int i = 0; i < a.hidden; ++i) raw += t.h1[static_cast<std::size_t>(i)] * w2[i];
    t.raw = raw;
    return raw;
}

// Accumulates this sample's gradient (scaled by d_raw) into grad.
void run_backward(const AngleModel& m, const InputGrid& /*input*/,
                  const ForwardTrace& t, double d_raw, double* grad) {
    const ArchSpec& a = m.arch;
    const ParamLayout layout(a);
    const double* p = m.params.data();
    const int g = a.grid;
    const int cells = g * g;
    const int h = a.pooled();
    const int pcells = h * h;

    std::vector<double> dh1(static_cast<std::size_t>(a.hidden));
    const double* w2 = p + layout.dense2_w;
    grad[layout.dense2_b] += d_raw;
    for (int i = 0; i < a.hidden; ++i) {
        grad[layout.dense2_w + static_cast<std::size_t>(i)] +=
            d_raw * t.h1[static_cast<std::size_t>(i)];
        dh1[static_cast<std::size_t>(i)] = d_raw * w2[i];
    }
    relu_backward(t.h1.data(), dh1.data(), dh1.size());

    std::vector<double> da4(t.a4.size(), 0.0);
    dense_backward(t.a4.data(), a.flat(), p + layout.dense1_w, a.hidden,
                   dh1.data(), grad + layout.dense1_w, grad + layout.dense1_b,
                   da4.data());
    relu_backward(t.a4.data(), da4.data(), da4.size());

    std::vector<double> dpool(t.pooled.size(), 0.0);
    conv3x3_backward(t.pooled.data(), h, a.conv_b, p + layout.conv_c_w,
                     a.conv_c, da4.data(), grad + layout.conv_c_w,
                     grad + layout.conv_c_b, dpool.data());

    // Route pooled gradients back to the argmax cells.
    std::vector<double> da3(t.a3.size(), 0.0);
    for (int px = 0; px < pcells; ++px) {
        for (int ch = 0; ch < a.conv_b; ++ch) {
            const std::size_t idx = static_cast<std::size_t>(px) * a.conv_b + ch;
            const int cell = t.argmax[idx];
            da3[static_cast<std::size_t>(cell) * a.conv_b + ch] += dpool[idx];
        }
    }
    relu_backward(t.a3.data(), da3.data(), da3.size());

    std::vector<double> da2(t.a2.size(), 0.0);
    conv3x3_backward(t.a2.data(), g, a.pointwise, p + layout.conv_b_w, a.conv_b,
                     da3.data(), grad + layout.conv_b_w, grad + layout.conv_b_b,
                     da2.data());
    relu_backward(t.a2.data(), da2.data(), da2.size());

    std::vector<double> da1(t.a1.size(), 0.0);
    pointwise_backward(t.a1.data(), cells, a.conv_a, p + layout.pw_w,
                       a.pointwise, da2.data(), grad + layout.pw_w,
                       grad + layout.pw_b, da1.data());
    relu_backward(t.a1.data(), da1.data(), da1.size());

    conv3x3_backward(t.x0.data(), g, a.in_channels, p + layout.conv_a_w,
                     a.conv_a, da1.data(), grad + layout.conv_a_w,
                     grad + layout.conv_a_b, nullptr);
}

InputGrid random_input_grid(const ArchSpec& arch, Rng& rng) {
    InputGrid in;
    in.grid = arch.grid;
    in.channels = arch.in_channels;
    const std::size_t cells = static_cast<std::size_t>(arch.grid) * arch.grid;
    in.mask.resize(cells);
    in.features.resize(cells * arch.in_channels);
    for (std::size_t px = 0; px < cells; ++px) {
        in.mask[px] = rng.uniform() < 0.85 ? 1.0 : 0.0;
        for (int c = 0; c < arch.in_channels; ++c) {
            in.features[px * arch.in_channels + static_cast<std::size_t>(c)] =
                in.mask[px] * rng.uniform(-1.0, 1.0);
        }
    }
    return in;
}

double loss_only(const AngleModel& model, std::span<const LabeledGrid> batch,
                 ForwardTrace& trace) {
    double sum = 0.0;
    for (const LabeledGrid& item : batch) {
        const double raw = run_forward(model, *item.input, trace);
        const double delta = raw - item.truth_degrees / 180.0;
        sum += delta * delta;
    }
    return sum / static_cast<double>(batch.size());
}

}  // namespace

InputGrid InputGrid::from_relation(const RelationTensor& tensor) {
    InputGrid in;
    in.grid = kNumKeypoints;
    in.channels = kRelationChannels;
    in.features = tensor.features;
    in.mask = tensor.mask;
    return in;
}

AngleModel init_model(AngleName angle, std::uint64_t seed,
                      const ArchSpec& arch) {
    AngleModel m;
    m.angle = angle;
    m.arch = arch;
    m.seed = seed;
    const ParamLayout layout(arch);
    m.params.assign(layout.total, 0.0);

    Rng rng = Rng::derive(seed ^ kInitStreamTag,
                          static_cast<std::uint64_t>(angle));
    auto fill = [&m, &rng](std::size_t offset, std::size_t count, int fan_in) {
        const double bound = std::sqrt(6.0 / fan_in);
        for (std::size_t i = 0; i < count; ++i) {
            m.params[offset + i] = rng.uniform(-bound, bound);
        }
    };
    fill(layout.conv_a_w, static_cast<std::size_t>(arch.conv_a) * 9 * arch.in_channels,
         9 * arch.in_channels);
    fill(layout.pw_w, static_cast<std::size_t>(arch.pointwise) * arch.conv_a,
         arch.conv_a);
    fill(layout.conv_b_w, static_cast<std::size_t>(arch.conv_b) * 9 * arch.pointwise,
         9 * arch.pointwise);
    fill(layout.conv_c_w, static_cast<std::size_t>(arch.conv_c) * 9 * arch.conv_b,
         9 * arch.conv_b);
    fill(layout.dense1_w, static_cast<std::size_t>(arch.hidden) * arch.flat(),
         arch.flat());
    fill(layout.dense2_w, static_cast<std::size_t>(arch.hidden), arch.hidden);
    return m;
}

AngleModel zero_model(AngleName angle, const ArchSpec& arch) {
    AngleModel m;
    m.angle = angle;
    m.arch = arch;
    m.params.assign(ParamLayout(arch).total, 0.0);
    return m;
}

double forward_raw(const AngleModel& model, const InputGrid& input) {
    if (input.grid != model.arch.grid ||
        input.channels != model.arch.in_channels ||
        input.features.size() !=
            static_cast<std::size_t>(input.grid) * input.grid * input.channels ||
        input.mask.size() != static_cast<std::size_t>(input.grid) * input.grid) {
        throw ShapeMismatch("input grid does not match model architecture");
    }
    ForwardTrace trace;
    trace.resize(model.arch);
    return run_forward(model, input, trace);
}

double forward(const AngleModel& model, const RelationTensor& tensor) {
    const double raw = forward_raw(model, InputGrid::from_relation(tensor));
    return std::clamp(raw * 180.0, 0.0, 180.0);
}

double loss_and_gradients_grids(const AngleModel& model,
                                std::span<const LabeledGrid> batch,
                                std::vector<double>& grad_out) {
    if (batch.empty()) throw Error("loss_and_gradients: empty batch");
    for (const LabeledGrid& item : batch) {
        if (item.input->grid != model.arch.grid ||
            item.input->channels != model.arch.in_channels) {
            throw ShapeMismatch("batch tensor does not match model architecture");
        }
    }
    const ParamLayout layout(model.arch);
    const std::size_t n = batch.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Per-sample gradient buffers reduced in sample order keep the sum
    // bitwise identical for any thread count.
    std::vector<std::vector<double>> sample_grads(n);
    std::vector<double> sample_losses(n, 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const LabeledGrid& item = batch[static_cast<std::size_t>(i)];
        ForwardTrace trace;
        trace.resize(model.arch);
        const double raw = run_forward(model, *item.input, trace);
        const double delta = raw - item.truth_degrees / 180.0;
        sample_losses[static_cast<std::size_t>(i)] = delta * delta;
        auto& grad = sample_grads[static_cast<std::size_t>(i)];
        grad.assign(layout.total, 0.0);
        run_backward(model, *item.input, trace, 2.0 * delta * inv_n, grad.data());
    }

    grad_out.assign(layout.total, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        loss += sample_losses[i];
        const auto& grad = sample_grads[i];
        for (std::size_t k = 0; k < layout.total; ++k) grad_out[k] += grad[k];
    }
    return loss * inv_n;
}

double loss_and_gradients(const AngleModel& model,
                          std::span<const LabeledTensor> batch,
                          std::vector<double>& grad_out) {
    std::vector<InputGrid> grids;
    grids.reserve(batch.size());
    std::vector<LabeledGrid> items;
    items.reserve(batch.size());
    for (const LabeledTensor& item : batch) {
        grids.push_back(InputGrid::from_relation(*item.tensor));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
        items.push_back({&grids[i], batch[i].truth_degrees});
    }
    return loss_and_gradients_grids(model, items, grad_out);
}

double gradient_check(CheckArch which, std::uint64_t seed) {
    const ArchSpec arch =
        which == CheckArch::Full ? ArchSpec::full() : ArchSpec::downsized();
    AngleModel model = init_model(AngleName::EL, seed, arch);

    Rng rng = Rng::derive(seed ^ kCheckStreamTag, 0);
    // Shift every parameter (biases included) off zero. Fresh-initialized
    // biases leave masked regions with pre-activations exactly at the relu
    // kink, where a secant slope does not match the one-sided derivative.
    for (double& p : model.params) p += rng.uniform(-0.2, 0.2);
    std::vector<InputGrid> inputs;
    std::vector<LabeledGrid> batch;
    for (int i = 0; i < 3; ++i) inputs.push_back(random_input_grid(arch, rng));
    for (int i = 0; i < 3; ++i) {
        batch.push_back({&inputs[static_cast<std::size_t>(i)], rng.uniform(0.0, 180.0)});
    }

    std::vector<double> analytic;
    loss_and_gradients_grids(model, batch, analytic);

    const ParamLayout layout(model.arch);
    const double step = 1e-5;
    double worst = 0.0;

#pragma omp parallel
    {
        AngleModel probe = model;
        ForwardTrace trace;
        trace.resize(probe.arch);
        double local_worst = 0.0;
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(layout.total); ++k) {
            const std::size_t idx = static_cast<std::size_t>(k);
            const double saved = probe.params[idx];
            probe.params[idx] = saved + step;
            const double plus = loss_only(probe, batch, trace);
            probe.params[idx] = saved - step;
            const double minus = loss_only(probe, batch, trace);
            probe.params[idx] = saved;
            const double numeric = (plus - minus) / (2.0 * step);
            const double denom =
                std::max(1e-5, std::abs(analytic[idx]) + std::abs(numeric));
            local_worst =
                std::max(local_worst, std::abs(analytic[idx] - numeric) / denom);
        }
#pragma omp critical
        worst = std::max(worst, local_worst);
    }
    return worst;
}

}  // namespace ergokit::nn
