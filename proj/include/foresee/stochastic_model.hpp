#pragma once

#include <functional>

#include "foresee/rng.hpp"
#include "foresee/types.hpp"

namespace foresee {

// Conditional next-state distribution x_{t+1} ~ D(x_t). `step` is the time
// index of the transition; autonomous models ignore it. For fixed inputs and
// a fixed stream, sample() is deterministic.
class StochasticModel {
 public:
  virtual ~StochasticModel() = default;
  virtual int state_dim() const = 0;
  virtual GaussianMoments conditional_moments(const Eigen::VectorXd& x, int step) const = 0;
  virtual Eigen::VectorXd sample(const Eigen::VectorXd& x, int step, RngStream& rng) const = 0;
};

// Plant with an explicit control input; closed with a policy below.
class ControlledModel {
 public:
  virtual ~ControlledModel() = default;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual GaussianMoments conditional_moments(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                              int step) const = 0;
  virtual Eigen::VectorXd sample(const Eigen::VectorXd& x, const Eigen::VectorXd& u, int step,
                                 RngStream& rng) const = 0;
};

using PolicyFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, int step)>;

class ClosedLoopModel : public StochasticModel {
 public:
  ClosedLoopModel(const ControlledModel& plant, PolicyFn policy)
      : plant_(plant), policy_(std::move(policy)) {}

  int state_dim() const override { return plant_.state_dim(); }
  GaussianMoments conditional_moments(const Eigen::VectorXd& x, int step) const override {
    return plant_.conditional_moments(x, policy_(x, step), step);
  }
  Eigen::VectorXd sample(const Eigen::VectorXd& x, int step, RngStream& rng) const override {
    return plant_.sample(x, policy_(x, step), step, rng);
  }

 private:
  const ControlledModel& plant_;
  PolicyFn policy_;
};

}  // namespace foresee
