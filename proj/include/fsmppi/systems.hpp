#ifndef FSMPPI_SYSTEMS_HPP_
#define FSMPPI_SYSTEMS_HPP_

#include <Eigen/Core>

namespace fsmppi {

/// Discrete-time benchmark plant: explicit Euler step plus running/terminal
/// state costs. Implementations must be pure (safe from parallel rollouts).
class System {
 public:
  virtual ~System() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;

  /// x <- x + F(x, u) * dt (in place).
  virtual void step(Eigen::Ref<Eigen::VectorXd> x,
                    const Eigen::Ref<const Eigen::VectorXd>& u, double dt) const = 0;

  virtual double running_cost(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;

  virtual double terminal_cost(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    (void)x;
    return 0.0;
  }

  virtual Eigen::VectorXd initial_state() const = 0;
};

/// Point mass on a line: state (position, velocity), control acceleration.
/// Running cost q(x) = 5 (x0 + 4)^2 + 0.5 x1^2, minimized at (-4, 0).
class DoubleIntegrator final : public System {
 public:
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }

  void step(Eigen::Ref<Eigen::VectorXd> x, const Eigen::Ref<const Eigen::VectorXd>& u,
            double dt) const override;
  double running_cost(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd initial_state() const override;  // (-9, 0)
};

struct LaggedVehicleParams {
  double tau_steer = 1.0;     // s; full traversal takes about two seconds
  double tau_throttle = 0.4;  // s
  double wheelbase = 3.0;     // m
  double max_steer = 0.35;    // rad
  double accel_gain = 4.0;    // m/s^2 at full throttle
  double initial_speed = 5.0; // m/s
  double goal_x = 20.0;       // m, for the running cost
};

/// Kinematic bicycle with first-order actuator lag on steering and throttle.
/// State: (px, py, heading, speed, steer_actual, throttle_actual).
/// Controls: (steer_cmd, throttle_cmd), clamped to [-1, 1].
class LaggedVehicle final : public System {
 public:
  explicit LaggedVehicle(LaggedVehicleParams params = {});

  const LaggedVehicleParams& params() const { return params_; }

  int state_dim() const override { return 6; }
  int control_dim() const override { return 2; }

  void step(Eigen::Ref<Eigen::VectorXd> x, const Eigen::Ref<const Eigen::VectorXd>& u,
            double dt) const override;
  double running_cost(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd initial_state() const override;

 private:
  LaggedVehicleParams params_;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace fsmppi

#endif  // FSMPPI_SYSTEMS_HPP_
