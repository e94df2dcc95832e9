#pragma once

#include "foresee/cbf_qp.hpp"
#include "foresee/models.hpp"

namespace foresee {

// Follower controller for the leader-follower scenario: a CBF-CLF-QP over
// the joint state [leader_x, leader_y, follower_x, follower_y, follower_phi]
// with tunable decay rates theta = [raw_a0 (CLF), raw_a1..raw_a3 (CBF)],
// squashed into (0,1). The leader is held fixed over the step inside the QP.
struct LfControllerConfig {
  LeaderFollowerParams plant;
  double q_slack = 100.0;
  bool bounded = true;
  double track_gain_s = 2.0;
  double track_gain_phi = 3.0;
};

// Proportional tracking law toward the mid-range distance and zero bearing
// error; this is the nominal input the QP minimally modifies.
Eigen::Vector2d lf_nominal_input(const Eigen::VectorXd& joint, const LfControllerConfig& cfg);

CbfQpProblem build_lf_qp(const Eigen::VectorXd& joint, const Eigen::VectorXd& raw_theta,
                         const LfControllerConfig& cfg);

// Solves the QP; throws QpInfeasibleError with the conflicting rows when the
// constraint set is empty (the signal the adaptive experiment measures).
Eigen::Vector2d lf_cbf_policy(const Eigen::VectorXd& joint, const Eigen::VectorXd& raw_theta,
                              const LfControllerConfig& cfg);

}  // namespace foresee
