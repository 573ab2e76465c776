#include "numerics/adam.hpp"

#include <cmath>

#include "core/error.hpp"

namespace argviz {

void adam_step(Matrix& params, const Matrix& grads, AdamState& state,
               const AdamConfig& config) {
  const auto same_shape = [&](const Matrix& m) {
    return m.rows() == params.rows() && m.cols() == params.cols();
  };
  require(same_shape(grads), "adam_step: gradient shape does not match parameters");
  require(same_shape(state.first_moment) && same_shape(state.second_moment),
          "adam_step: optimizer state shape does not match parameters");

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);

  auto p = params.data();
  auto g = grads.data();
  auto m = state.first_moment.data();
  auto v = state.second_moment.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    p[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

}  // namespace argviz
