#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace dickeqfi {

/// Five-stage, L-stable, stiffly accurate SDIRK of order 4 with an embedded
/// order-3 solution (Hairer & Wanner, Solving ODEs II, table 6.5).
struct Sdirk4Tableau {
  static constexpr int stages = 5;
  static constexpr double gamma = 0.25;
  std::array<double, stages> c;
  std::array<std::array<double, stages>, stages> a;
  std::array<double, stages> b;
  std::array<double, stages> b_hat;
};

const Sdirk4Tableau& sdirk4_tableau();

/// dy_k/dt = -decay[k] y_k + feed[k] y_{k-1}: a linear chain in which each
/// component is filled only by its predecessor. feed[0] is ignored.
struct BidiagonalSystem {
  std::vector<double> decay;
  std::vector<double> feed;

  std::size_t size() const { return decay.size(); }
  void apply(const std::vector<double>& y, std::vector<double>& out) const;
  // Solves (I - scale * J) x = r in place.
  void solve_shifted(double scale, std::vector<double>& r) const;
};

struct StepControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  // 0 picks one from the fastest rate
  std::size_t max_steps = 50'000'000;
};

/// Adaptive integrator for a BidiagonalSystem. Alongside the state it
/// accumulates the time integral of every component with the same stage
/// values, so residence times come out at the order of the method.
class SdirkIntegrator {
 public:
  SdirkIntegrator(BidiagonalSystem system, std::vector<double> y0, StepControl control = {});

  // Steps until exactly t_end; the last step is clipped to land on it.
  void advance_to(double t_end);

  double time() const { return t_; }
  const std::vector<double>& state() const { return y_; }
  const std::vector<double>& integral() const { return q_; }
  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }

 private:
  // Returns the scaled error norm; fills y_new_ and dq_.
  double attempt(double h);

  BidiagonalSystem sys_;
  StepControl control_;
  double t_ = 0.0;
  double h_ = 0.0;
  std::vector<double> y_;
  std::vector<double> q_;
  std::vector<double> y_new_;
  std::vector<double> dq_;
  std::array<std::vector<double>, Sdirk4Tableau::stages> k_;
  std::vector<double> work_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace dickeqfi
