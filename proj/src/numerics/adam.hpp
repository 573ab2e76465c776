#pragma once

#include <cstddef>

#include "numerics/matrix.hpp"

namespace argviz {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment estimates for one parameter block.
struct AdamState {
  Matrix first_moment;
  Matrix second_moment;
  std::size_t step = 0;

  static AdamState zeros_like(const Matrix& params) {
    return {Matrix(params.rows(), params.cols()), Matrix(params.rows(), params.cols()), 0};
  }
};

// One bias-corrected Adam update of `params` in place.
void adam_step(Matrix& params, const Matrix& grads, AdamState& state,
               const AdamConfig& config = {});

}  // namespace argviz
