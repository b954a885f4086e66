#include "ergokit/nn/reference.hpp"

#include <algorithm>
#include <vector>

#include "ergokit/errors.hpp"

namespace ergokit::nn::ref {

namespace {

// A value grid indexed (y, x, c) with nothing shared with the fast path.
struct Grid {
    int size = 0;
    int channels = 0;
    std::vector<double> v;

    Grid(int size, int channels)
        : size(size), channels(channels),
          v(static_cast<std::size_t>(size) * size * channels, 0.0) {}

    double get(int y, int x, int c) const {
        return v[(static_cast<std::size_t>(y) * size + x) * channels + c];
    }
    void set(int y, int x, int c, double val) {
        v[(static_cast<std::size_t>(y) * size + x) * channels + c] = val;
    }
};

double relu(double x) { return x > 0.0 ? x : 0.0; }

Grid conv3x3(const Grid& in, const double* weights, const double* biases,
             int out_channels) {
    Grid out(in.size, out_channels);
    for (int y = 0; y < in.size; ++y) {
        for (int x = 0; x < in.size; ++x) {
            for (int o = 0; o < out_channels; ++o) {
                double acc = biases[o];
                for (int ky = -1; ky <= 1; ++ky) {
                    for (int kx = -1; kx <= 1; ++kx) {
                        const int yy = y + ky;
                        const int xx = x + kx;
                        if (yy < 0 || yy >= in.size || xx < 0 || xx >= in.size)
                            continue;  // same padding: zero outside
                        for (int c = 0; c < in.channels; ++c) {
                            const double w =
                                weights[((static_cast<std::size_t>(o) * 3 + (ky + 1)) * 3 +
                                         (kx + 1)) * in.channels + c];
                            acc += w * in.get(yy, xx, c);
                        }
                    }
                }
                out.set(y, x, o, relu(acc));
            }
        }
    }
    return out;
}

Grid pointwise(const Grid& in, const double* weights, const double* biases,
               int out_channels) {
    Grid out(in.size, out_channels);
    for (int y = 0; y < in.size; ++y) {
        for (int x = 0; x < in.size; ++x) {
            for (int o = 0; o < out_channels; ++o) {
                double acc = biases[o];
                for (int c = 0; c < in.channels; ++c) {
                    acc += weights[static_cast<std::size_t>(o) * in.channels + c] *
                           in.get(y, x, c);
                }
                out.set(y, x, o, relu(acc));
            }
        }
    }
    return out;
}

Grid maxpool2(const Grid& in) {
    Grid out(in.size / 2, in.channels);
    for (int y = 0; y < out.size; ++y) {
        for (int x = 0; x < out.size; ++x) {
            for (int c = 0; c < in.channels; ++c) {
                double best = in.get(2 * y, 2 * x, c);
                best = std::max(best, in.get(2 * y, 2 * x + 1, c));
                best = std::max(best, in.get(2 * y + 1, 2 * x, c));
                best = std::max(best, in.get(2 * y + 1, 2 * x + 1, c));
                out.set(y, x, c, best);
            }
        }
    }
    return out;
}

}  // namespace

double forward_raw(const AngleModel& model, const InputGrid& input) {
    const ArchSpec& a = model.arch;
    if (input.grid != a.grid || input.channels != a.in_channels) {
        throw ShapeMismatch("reference: input grid does not match architecture");
    }
    const ParamLayout layout(a);
    const double* p = model.params.data();

    Grid masked(a.grid, a.in_channels);
    for (int y = 0; y < a.grid; ++y) {
        for (int x = 0; x < a.grid; ++x) {
            const double m =
                input.mask[static_cast<std::size_t>(y) * a.grid + x];
            for (int c = 0; c < a.in_channels; ++c) {
                masked.set(y, x, c,
                           m * input.features[(static_cast<std::size_t>(y) * a.grid + x) *
                                              a.in_channels + c]);
            }
        }
    }

    const Grid g1 = conv3x3(masked, p + layout.conv_a_w, p + layout.conv_a_b, a.conv_a);
    const Grid g2 = pointwise(g1, p + layout.pw_w, p + layout.pw_b, a.pointwise);
    const Grid g3 = conv3x3(g2, p + layout.conv_b_w, p + layout.conv_b_b, a.conv_b);
    const Grid g4 = maxpool2(g3);
    const Grid g5 = conv3x3(g4, p + layout.conv_c_w, p + layout.conv_c_b, a.conv_c);

    std::vector<double> hidden(static_cast<std::size_t>(a.hidden), 0.0);
    for (int o = 0; o < a.hidden; ++o) {
        double acc = p[layout.dense1_b + static_cast<std::size_t>(o)];
        for (int i = 0; i < a.flat(); ++i) {
            acc += p[layout.dense1_w + static_cast<std::size_t>(o) * a.flat() + i] *
                   g5.v[static_cast<std::size_t>(i)];
        }
        hidden[static_cast<std::size_t>(o)] = relu(acc);
    }
    double raw = p[layout.dense2_b];
    for (int i = 0; i < a.hidden; ++i) {
        raw += p[layout.dense2_w + static_cast<std::size_t>(i)] *
               hidden[static_cast<std::size_t>(i)];
    }
    return raw;
}

double forward(const AngleModel& model, const RelationTensor& tensor) {
    const double raw = ref::forward_raw(model, InputGrid::from_relation(tensor));
    return std::clamp(raw * 180.0, 0.0, 180.0);
}

}  // namespace ergokit::nn::ref
