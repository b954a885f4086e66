#pragma once

#include <cstddef>

namespace ergokit::nn {

// Fixed layer stack:
//   mask multiply -> conv 3x3 (in->a) -> relu
//   -> pointwise 1x1 dense (a->p) -> relu
//   -> conv 3x3 (p->b) -> relu
//   -> max-pool 2x2 (floor)
//   -> conv 3x3 (b->c) -> relu
//   -> flatten -> dense (flat->hidden) -> relu -> dense (hidden->1)
// Only the grid size differs between the full and the downsized variant
// used for finite-difference checks.
struct ArchSpec {
    int grid = 25;
    int in_channels = 5;
    int conv_a = 8;
    int pointwise = 16;
    int conv_b = 16;
    int conv_c = 8;
    int hidden = 32;

    int pooled() const { return grid / 2; }
    int flat() const { return pooled() * pooled() * conv_c; }

    static ArchSpec full() { return {}; }
    static ArchSpec downsized() {
        ArchSpec a;
        a.grid = 7;
        return a;
    }

    bool operator==(const ArchSpec&) const = default;
};

// Offsets of each layer's weights inside the flat parameter vector.
// Conv weights are stored [out][ky][kx][in], dense weights [out][in],
// biases after their weights; everything row-major.
struct ParamLayout {
    explicit ParamLayout(const ArchSpec& a) {
        std::size_t at = 0;
        auto claim = [&at](std::size_t n) {
            const std::size_t o = at;
            at += n;
            return o;
        };
        conv_a_w = claim(static_cast<std::size_t>(a.conv_a) * 9 * a.in_channels);
        conv_a_b = claim(static_cast<std::size_t>(a.conv_a));
        pw_w = claim(static_cast<std::size_t>(a.pointwise) * a.conv_a);
        pw_b = claim(static_cast<std::size_t>(a.pointwise));
        conv_b_w = claim(static_cast<std::size_t>(a.conv_b) * 9 * a.pointwise);
        conv_b_b = claim(static_cast<std::size_t>(a.conv_b));
        conv_c_w = claim(static_cast<std::size_t>(a.conv_c) * 9 * a.conv_b);
        conv_c_b = claim(static_cast<std::size_t>(a.conv_c));
        dense1_w = claim(static_cast<std::size_t>(a.hidden) * a.flat());
        dense1_b = claim(static_cast<std::size_t>(a.hidden));
        dense2_w = claim(static_cast<std::size_t>(a.hidden));
        dense2_b = claim(1);
        total = at;
    }

    std::size_t conv_a_w, conv_a_b;
    std::size_t pw_w, pw_b;
    std::size_t conv_b_w, conv_b_b;
    std::size_t conv_c_w, conv_c_b;
    std::size_t dense1_w, dense1_b;
    std::size_t dense2_w, dense2_b;
    std::size_t total;
};

}  // namespace ergokit::nn
