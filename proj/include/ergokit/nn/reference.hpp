#pragma once

#include "ergokit/nn/model.hpp"

namespace ergokit::nn::ref {

// Straightforward per-cell re-implementation of the forward pass, written
// independently of the optimized kernels. Serial by construction; used to
// pin down the fast path in tests and as the benchmark baseline.
double forward_raw(const AngleModel& model, const InputGrid& input);

double forward(const AngleModel& model, const RelationTensor& tensor);

}  // namespace ergokit::nn::ref
