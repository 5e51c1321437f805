#include "fsmppi/systems.hpp"

#include <algorithm>
#include <cmath>

namespace fsmppi {

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

void DoubleIntegrator::step(Eigen::Ref<Eigen::VectorXd> x,
                            const Eigen::Ref<const Eigen::VectorXd>& u,
                            double dt) const {
  x[0] += x[1] * dt;
  x[1] += u[0] * dt;
}

double DoubleIntegrator::running_cost(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double p = x[0] + 4.0;
  return 5.0 * p * p + 0.5 * x[1] * x[1];
}

Eigen::VectorXd DoubleIntegrator::initial_state() const {
  Eigen::VectorXd x(2);
  x << -9.0, 0.0;
  return x;
}

LaggedVehicle::LaggedVehicle(LaggedVehicleParams params) : params_(params) {}

void LaggedVehicle::step(Eigen::Ref<Eigen::VectorXd> x,
                         const Eigen::Ref<const Eigen::VectorXd>& u, double dt) const {
  const double steer_cmd = std::clamp(u[0], -1.0, 1.0);
  const double throttle_cmd = std::clamp(u[1], -1.0, 1.0);

  double& px = x[0];
  double& py = x[1];
  double& heading = x[2];
  double& speed = x[3];
  double& steer = x[4];
  double& throttle = x[5];

  steer += (steer_cmd - steer) * dt / params_.tau_steer;
  throttle += (throttle_cmd - throttle) * dt / params_.tau_throttle;

  heading = wrap_angle(heading +
                       (speed / params_.wheelbase) *
                           std::tan(params_.max_steer * steer) * dt);
  px += speed * std::cos(heading) * dt;
  py += speed * std::sin(heading) * dt;
  speed += params_.accel_gain * throttle * dt;
}

double LaggedVehicle::running_cost(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double dx = x[0] - params_.goal_x;
  return 0.5 * (dx * dx + x[1] * x[1]) + 0.1 * x[3] * x[3];
}

Eigen::VectorXd LaggedVehicle::initial_state() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
  x[3] = params_.initial_speed;
  return x;
}

}  // namespace fsmppi
