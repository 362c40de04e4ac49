#pragma once

// Linear "diversity vibration" model
//
//     M D'' + R D' + E D = F(t)
//
// where D is the displacement of a diversity index around an operating point
// (so negative values are meaningful), M the diversity inertia, R the system
// resistance and E the resilience. Closed forms are provided for the free
// undamped, overdamped, critically damped and underdamped regimes, for
// sinusoidal forcing (including undamped resonance), steps and impulses. A
// classical RK4 integrator serves as an independent oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divkit/error.hpp"

namespace divkit {

class VibrationParams {
 public:
  VibrationParams(double mass, double resistance, double resilience)
      : mass_(mass), resistance_(resistance), resilience_(resilience) {
    require(std::isfinite(mass) && mass > 0.0, ErrorKind::validation, "M must be positive");
    require(std::isfinite(resilience) && resilience > 0.0, ErrorKind::validation, "E must be positive");
    require(std::isfinite(resistance) && resistance >= 0.0, ErrorKind::validation, "R must be non-negative");
  }

  double mass() const noexcept { return mass_; }
  double resistance() const noexcept { return resistance_; }
  double resilience() const noexcept { return resilience_; }

  /// R^2 - 4ME; its sign selects the damping regime.
  double discriminant() const noexcept { return resistance_ * resistance_ - 4.0 * mass_ * resilience_; }

 private:
  double mass_;
  double resistance_;
  double resilience_;
};

struct InitialConditions {
  double displacement = 0.0;  // D(0)
  double speed = 0.0;         // D'(0)
};

/// F0 cos(omega t + phase)
struct SinusoidTerm {
  std::string label;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

/// `amplitude` for t >= onset, 0 before.
struct StepTerm {
  std::string label;
  double amplitude = 0.0;
  double onset = 0.0;
};

/// Instantaneous momentum change of `magnitude` at `time` (speed jumps by magnitude / M).
struct ImpulseTerm {
  std::string label;
  double magnitude = 0.0;
  double time = 0.0;
};

/// Sum of named driver terms. Labels are metadata only.
struct Forcing {
  std::vector<SinusoidTerm> sinusoids;
  std::vector<StepTerm> steps;
  std::vector<ImpulseTerm> impulses;

  static Forcing none() { return {}; }

  static Forcing sinusoid(double amplitude, double omega, double phase = 0.0, std::string label = "periodic") {
    Forcing f;
    f.sinusoids.push_back({std::move(label), amplitude, omega, phase});
    return f;
  }

  static Forcing constant(double value, std::string label = "constant") {
    Forcing f;
    f.steps.push_back({std::move(label), value, 0.0});
    return f;
  }

  Forcing& operator+=(const Forcing& o) {
    sinusoids.insert(sinusoids.end(), o.sinusoids.begin(), o.sinusoids.end());
    steps.insert(steps.end(), o.steps.begin(), o.steps.end());
    impulses.insert(impulses.end(), o.impulses.begin(), o.impulses.end());
    return *this;
  }

  /// Applied force at t (impulses excluded; they act on the speed directly).
  double value(double t) const {
    double f = 0.0;
    for (const auto& s : sinusoids) f += s.amplitude * std::cos(s.omega * t + s.phase);
    for (const auto& s : steps)
      if (t >= s.onset) f += s.amplitude;
    return f;
  }

  bool empty() const { return sinusoids.empty() && steps.empty() && impulses.empty(); }

  void validate() const {
    for (const auto& s : sinusoids)
      require(std::isfinite(s.amplitude) && std::isfinite(s.omega) && std::isfinite(s.phase) && s.omega >= 0.0,
              ErrorKind::validation, "forcing term '" + s.label + "': amplitude/phase must be finite, omega >= 0");
    for (const auto& s : steps)
      require(std::isfinite(s.amplitude) && std::isfinite(s.onset) && s.onset >= 0.0, ErrorKind::validation,
              "step term '" + s.label + "': finite amplitude and onset >= 0 required");
    for (const auto& s : impulses)
      require(std::isfinite(s.magnitude) && std::isfinite(s.time) && s.time >= 0.0, ErrorKind::validation,
              "impulse term '" + s.label + "': finite magnitude and time >= 0 required");
  }
};

inline Forcing operator+(Forcing a, const Forcing& b) { return a += b; }

enum class Regime { undamped_free, overdamped, critically_damped, underdamped, forced_undamped, forced_damped };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::undamped_free: return "undamped-free";
    case Regime::overdamped: return "overdamped";
    case Regime::critically_damped: return "critically-damped";
    case Regime::underdamped: return "underdamped";
    case Regime::forced_undamped: return "forced-undamped";
    case Regime::forced_damped: return "forced-damped";
  }
  return "unknown";
}

inline double natural_frequency(const VibrationParams& p) { return std::sqrt(p.resilience() / p.mass()); }

inline double natural_period(const VibrationParams& p) { return 2.0 * std::numbers::pi / natural_frequency(p); }

/// R / (2 sqrt(ME)).
inline double damping_ratio(const VibrationParams& p) {
  return p.resistance() / (2.0 * std::sqrt(p.mass() * p.resilience()));
}

struct RegimeReport {
  Regime regime = Regime::undamped_free;
  Regime damping = Regime::undamped_free;  // free-motion class, also set for forced regimes
  double natural_frequency = 0.0;
  double damping_ratio = 0.0;
  double discriminant = 0.0;
  std::optional<double> quasi_frequency;  // oscillatory free motion only
  std::optional<double> quasiperiod;
  std::optional<std::pair<double, double>> roots;  // real characteristic roots (g >= h)
};

/// Free-motion damping class from the sign of R^2 - 4ME.
/// |R^2 - 4ME| <= 1e-12 max(R^2, 4ME) counts as critical.
inline Regime damping_class(const VibrationParams& p) {
  if (p.resistance() == 0.0) return Regime::undamped_free;
  const double r2 = p.resistance() * p.resistance();
  const double me4 = 4.0 * p.mass() * p.resilience();
  const double disc = r2 - me4;
  if (std::abs(disc) <= 1e-12 * std::max(r2, me4)) return Regime::critically_damped;
  return disc > 0.0 ? Regime::overdamped : Regime::underdamped;
}

namespace detail {

// Real characteristic roots (g, h), g the slower one, computed without cancellation.
inline std::pair<double, double> real_roots(const VibrationParams& p) {
  const double disc = std::max(p.discriminant(), 0.0);
  const double q = -0.5 * (p.resistance() + std::sqrt(disc));
  return {p.resilience() / q, q / p.mass()};
}

}  // namespace detail

inline RegimeReport classify_regime(const VibrationParams& p, const Forcing* forcing = nullptr) {
  RegimeReport r;
  r.damping = damping_class(p);
  r.natural_frequency = natural_frequency(p);
  r.damping_ratio = damping_ratio(p);
  r.discriminant = p.discriminant();
  r.regime = r.damping;
  if (forcing != nullptr && !forcing->sinusoids.empty())
    r.regime = p.resistance() == 0.0 ? Regime::forced_undamped : Regime::forced_damped;
  switch (r.damping) {
    case Regime::undamped_free:
      r.quasi_frequency = r.natural_frequency;
      r.quasiperiod = natural_period(p);
      break;
    case Regime::underdamped: {
      double mu = std::sqrt(-p.discriminant()) / (2.0 * p.mass());
      r.quasi_frequency = mu;
      r.quasiperiod = 2.0 * std::numbers::pi / mu;
      break;
    }
    case Regime::critically_damped: {
      double root = -p.resistance() / (2.0 * p.mass());
      r.roots = std::make_pair(root, root);
      break;
    }
    default:
      r.roots = detail::real_roots(p);
  }
  return r;
}

/// D, D' and D'' at one instant.
struct Kinematics {
  double d = 0.0;
  double v = 0.0;
  double a = 0.0;

  Kinematics& operator+=(const Kinematics& o) {
    d += o.d;
    v += o.v;
    a += o.a;
    return *this;
  }
};

/// One analytic term of a closed-form solution, zero before `onset`.
struct ResponseTerm {
  enum class Kind {
    oscillatory,  // e^{alpha tau} (c1 cos(mu tau) + c2 sin(mu tau))
    critical,     // (c1 + c2 tau) e^{alpha tau}
    exponential,  // c1 e^{alpha tau} + c2 e^{mu tau}
    harmonic,     // c1 cos(mu t + c2)
    secular,      // c1 t sin(mu t + c2)
    offset,       // c1
  };

  Kind kind = Kind::offset;
  double alpha = 0.0;
  double mu = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double onset = 0.0;

  Kinematics at(double t) const {
    if (t < onset) return {};
    const double tau = t - onset;
    switch (kind) {
      case Kind::oscillatory: {
        const double e = std::exp(alpha * tau), c = std::cos(mu * tau), s = std::sin(mu * tau);
        const double p = alpha * c1 + mu * c2, q = alpha * c2 - mu * c1;
        return {e * (c1 * c + c2 * s), e * (p * c + q * s), e * ((alpha * p + mu * q) * c + (alpha * q - mu * p) * s)};
      }
      case Kind::critical: {
        const double e = std::exp(alpha * tau), r = alpha;
        return {(c1 + c2 * tau) * e, (c2 + r * c1 + r * c2 * tau) * e, (2.0 * r * c2 + r * r * c1 + r * r * c2 * tau) * e};
      }
      case Kind::exponential: {
        const double eg = std::exp(alpha * tau), eh = std::exp(mu * tau);
        return {c1 * eg + c2 * eh, c1 * alpha * eg + c2 * mu * eh, c1 * alpha * alpha * eg + c2 * mu * mu * eh};
      }
      case Kind::harmonic: {
        const double th = mu * t + c2;
        return {c1 * std::cos(th), -c1 * mu * std::sin(th), -c1 * mu * mu * std::cos(th)};
      }
      case Kind::secular: {
        const double th = mu * t + c2, s = std::sin(th), c = std::cos(th);
        return {c1 * t * s, c1 * s + c1 * mu * t * c, 2.0 * c1 * mu * c - c1 * mu * mu * t * s};
      }
      case Kind::offset:
        return {c1, 0.0, 0.0};
    }
    return {};
  }
};

/// A sum of analytic terms.
struct Response {
  std::vector<ResponseTerm> terms;

  Kinematics at(double t) const {
    Kinematics k;
    for (const auto& term : terms) k += term.at(t);
    return k;
  }

  Response& operator+=(const Response& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
  }
};

/// Homogeneous solution with D(onset) = d0, D'(onset) = v0.
inline ResponseTerm free_mode(const VibrationParams& p, double d0, double v0, double onset = 0.0) {
  ResponseTerm t;
  t.onset = onset;
  switch (damping_class(p)) {
    case Regime::undamped_free:
    case Regime::underdamped: {
      t.kind = ResponseTerm::Kind::oscillatory;
      t.alpha = -p.resistance() / (2.0 * p.mass());
      t.mu = p.resistance() == 0.0 ? natural_frequency(p) : std::sqrt(-p.discriminant()) / (2.0 * p.mass());
      t.c1 = d0;
      t.c2 = (v0 - t.alpha * d0) / t.mu;
      break;
    }
    case Regime::critically_damped: {
      t.kind = ResponseTerm::Kind::critical;
      t.alpha = -p.resistance() / (2.0 * p.mass());
      t.c1 = d0;
      t.c2 = v0 - t.alpha * d0;
      break;
    }
    default: {
      auto [g, h] = detail::real_roots(p);
      t.kind = ResponseTerm::Kind::exponential;
      t.alpha = g;
      t.mu = h;
      t.c1 = (v0 - h * d0) / (g - h);
      t.c2 = d0 - t.c1;
    }
  }
  return t;
}

/// F0 / sqrt(M^2 (w0^2 - w^2)^2 + R^2 w^2)
inline double steady_amplitude(const VibrationParams& p, double amplitude, double omega) {
  const double w0sq = p.resilience() / p.mass();
  const double a = p.mass() * (w0sq - omega * omega);
  const double b = p.resistance() * omega;
  return std::abs(amplitude) / std::hypot(a, b);
}

/// Phase lag of the steady displacement behind the force, in [0, pi].
inline double steady_phase_lag(const VibrationParams& p, double omega) {
  const double w0sq = p.resilience() / p.mass();
  return std::atan2(p.resistance() * omega, p.mass() * (w0sq - omega * omega));
}

inline bool at_resonance(const VibrationParams& p, double omega) {
  const double w0 = natural_frequency(p);
  return p.resistance() == 0.0 && std::abs(omega - w0) <= 1e-12 * w0;
}

/// Closed-form solution split into the decaying part and the forced part.
///
/// `steady` holds every particular solution: harmonic steady states, step
/// offsets and, at undamped resonance, the secular term t sin(w0 t) which
/// grows without bound. `transient` holds the homogeneous modes fitted to the
/// initial conditions plus the free responses launched by later steps and
/// impulses.
struct ClosedForm {
  RegimeReport report;
  Response transient;
  Response steady;
  bool unbounded = false;  // undamped resonance present

  Kinematics at(double t) const {
    Kinematics k = transient.at(t);
    k += steady.at(t);
    return k;
  }
};

inline ClosedForm solve(const VibrationParams& p, const Forcing& forcing, const InitialConditions& init) {
  forcing.validate();
  require(std::isfinite(init.displacement) && std::isfinite(init.speed), ErrorKind::validation,
          "initial conditions must be finite");
  ClosedForm cf;
  cf.report = classify_regime(p, &forcing);

  for (const auto& s : forcing.sinusoids) {
    if (s.amplitude == 0.0) continue;
    ResponseTerm t;
    t.mu = s.omega;
    if (at_resonance(p, s.omega)) {
      t.kind = ResponseTerm::Kind::secular;
      t.c1 = s.amplitude / (2.0 * p.mass() * s.omega);
      t.c2 = s.phase;
      cf.unbounded = true;
    } else {
      t.kind = ResponseTerm::Kind::harmonic;
      const double w0sq = p.resilience() / p.mass();
      // Signed amplitude keeps the undamped above-resonance case (lag pi) exact.
      t.c1 = s.amplitude / std::hypot(p.mass() * (w0sq - s.omega * s.omega), p.resistance() * s.omega);
      t.c2 = s.phase - steady_phase_lag(p, s.omega);
    }
    cf.steady.terms.push_back(t);
  }
  for (const auto& s : forcing.steps) {
    if (s.amplitude == 0.0) continue;
    const double level = s.amplitude / p.resilience();
    cf.steady.terms.push_back({ResponseTerm::Kind::offset, 0.0, 0.0, level, 0.0, s.onset});
    if (s.onset > 0.0) cf.transient.terms.push_back(free_mode(p, -level, 0.0, s.onset));
  }
  for (const auto& s : forcing.impulses) {
    if (s.magnitude == 0.0) continue;
    cf.transient.terms.push_back(free_mode(p, 0.0, s.magnitude / p.mass(), s.time));
  }
  // Fit the homogeneous part to what the particular terms leave over at t = 0.
  // Impulses at t = 0 already carry their own free mode.
  Kinematics at0;
  for (const auto& t : cf.steady.terms)
    if (t.onset == 0.0) at0 += t.at(0.0);
  cf.transient.terms.insert(cf.transient.terms.begin(),
                            free_mode(p, init.displacement - at0.d, init.speed - at0.v, 0.0));
  return cf;
}

struct FreeUndampedSolution {
  ClosedForm solution;
  double a = 0.0;          // D = a cos(w0 t) + b sin(w0 t)
  double b = 0.0;
  double amplitude = 0.0;  // D = amplitude cos(w0 t - phase)
  double phase = 0.0;
};

inline FreeUndampedSolution solve_free_undamped(const VibrationParams& p, const InitialConditions& init) {
  require(p.resistance() == 0.0, ErrorKind::wrong_regime, "solve_free_undamped: R must be 0 (use solve_free_damped)");
  FreeUndampedSolution out;
  out.solution = solve(p, Forcing::none(), init);
  out.a = init.displacement;
  out.b = init.speed / natural_frequency(p);
  out.amplitude = std::hypot(out.a, out.b);
  out.phase = std::atan2(out.b, out.a);
  return out;
}

inline ClosedForm solve_free_damped(const VibrationParams& p, const InitialConditions& init) {
  require(p.resistance() > 0.0, ErrorKind::wrong_regime, "solve_free_damped: R must be positive (use solve_free_undamped)");
  return solve(p, Forcing::none(), init);
}

struct ForcedSolution {
  ClosedForm solution;
  double steady_amplitude = 0.0;  // F0 / sqrt(M^2 (w0^2 - w^2)^2 + R^2 w^2); unused at undamped resonance
  double phase_lag = 0.0;         // radians, displacement behind force
  bool unbounded = false;
};

inline ForcedSolution solve_forced(const VibrationParams& p, const SinusoidTerm& term, const InitialConditions& init) {
  Forcing f;
  f.sinusoids.push_back(term);
  ForcedSolution out;
  out.solution = solve(p, f, init);
  out.unbounded = out.solution.unbounded;
  if (!out.unbounded) {
    out.steady_amplitude = steady_amplitude(p, term.amplitude, term.omega);
    out.phase_lag = steady_phase_lag(p, term.omega);
  } else {
    out.phase_lag = std::numbers::pi / 2.0;
  }
  return out;
}

struct TrajectorySample {
  double t = 0.0;
  double d = 0.0;
  double v = 0.0;
  double f = 0.0;  // applied force (impulses excluded)
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::string regime;
  std::string solver;

  double max_abs_displacement(double t_until) const {
    double m = 0.0;
    for (const auto& s : samples)
      if (s.t <= t_until) m = std::max(m, std::abs(s.d));
    return m;
  }
};

namespace detail {

inline std::size_t grid_steps(double dt, double t_end) {
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::validation, "dt must be positive");
  require(std::isfinite(t_end) && t_end > 0.0, ErrorKind::validation, "t_end must be positive");
  double n = std::ceil(t_end / dt - 1e-9);
  require(n < 1e9, ErrorKind::validation, "grid too fine: more than 1e9 steps");
  return static_cast<std::size_t>(std::max(n, 1.0));
}

}  // namespace detail

/// Samples a closed form on t_k = k dt, k = 0..ceil(t_end / dt).
inline Trajectory sample(const ClosedForm& cf, const Forcing& forcing, double dt, double t_end) {
  const std::size_t n = detail::grid_steps(dt, t_end);
  Trajectory tr;
  tr.regime = to_string(cf.report.regime);
  tr.solver = "closed-form";
  tr.samples.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    Kinematics q = cf.at(t);
    tr.samples.push_back({t, q.d, q.v, forcing.value(t)});
  }
  return tr;
}

namespace detail {

struct State {
  double d, v;
};

template <typename Force>
State rk4_step(const VibrationParams& p, const Force& force, State s, double t, double h) {
  const double m = p.mass(), r = p.resistance(), e = p.resilience();
  auto accel = [&](double tt, double d, double v) { return (force(tt) - r * v - e * d) / m; };
  const double k1d = s.v, k1v = accel(t, s.d, s.v);
  const double k2d = s.v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, s.d + 0.5 * h * k1d, s.v + 0.5 * h * k1v);
  const double k3d = s.v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, s.d + 0.5 * h * k2d, s.v + 0.5 * h * k2v);
  const double k4d = s.v + h * k3v, k4v = accel(t + h, s.d + h * k3d, s.v + h * k3v);
  return {s.d + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d), s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

inline void check_finite(State s, double t) {
  if (!std::isfinite(s.d) || !std::isfinite(s.v))
    fail(ErrorKind::numerical, "rk4: state became non-finite at t = " + std::to_string(t));
}

}  // namespace detail

/// Classical fourth-order Runge-Kutta on (D, D')' = (D', (F(t) - R D' - E D) / M)
/// for a smooth forcing function.
inline Trajectory rk4_integrate(const VibrationParams& p, const std::function<double(double)>& force,
                                const InitialConditions& init, double dt, double t_end) {
  const std::size_t n = detail::grid_steps(dt, t_end);
  Trajectory tr;
  tr.regime = to_string(classify_regime(p).regime);
  tr.solver = "rk4";
  tr.samples.reserve(n + 1);
  detail::State s{init.displacement, init.speed};
  detail::check_finite(s, 0.0);
  tr.samples.push_back({0.0, s.d, s.v, force(0.0)});
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    s = detail::rk4_step(p, force, s, t, dt);
    const double t1 = static_cast<double>(k + 1) * dt;
    detail::check_finite(s, t1);
    tr.samples.push_back({t1, s.d, s.v, force(t1)});
  }
  return tr;
}

/// RK4 for structured forcing. Steps are split at step onsets and impulse
/// times so discontinuities never fall inside an RK4 stage; impulses are
/// applied as speed jumps.
inline Trajectory rk4_integrate(const VibrationParams& p, const Forcing& forcing, const InitialConditions& init,
                                double dt, double t_end) {
  forcing.validate();
  const std::size_t n = detail::grid_steps(dt, t_end);
  Trajectory tr;
  tr.regime = to_string(classify_regime(p, &forcing).regime);
  tr.solver = "rk4";
  tr.samples.reserve(n + 1);

  struct Event {
    double time;
    double jump;  // speed change, 0 for step onsets
  };
  std::vector<Event> events;
  for (const auto& s : forcing.steps)
    if (s.onset > 0.0) events.push_back({s.onset, 0.0});
  for (const auto& s : forcing.impulses) events.push_back({s.time, s.magnitude / p.mass()});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
  std::size_t next = 0;
  const double eps = 1e-12 * std::max(1.0, t_end);

  // Steps are piecewise constant; inside a segment they are frozen at the segment start.
  auto segment_force = [&](double seg_start) {
    double level = 0.0;
    for (const auto& s : forcing.steps)
      if (s.onset <= seg_start + eps) level += s.amplitude;
    return [&forcing, level](double t) {
      double f = level;
      for (const auto& s : forcing.sinusoids) f += s.amplitude * std::cos(s.omega * t + s.phase);
      return f;
    };
  };
  auto fire_events_at = [&](double t, detail::State& s) {
    while (next < events.size() && events[next].time <= t + eps) s.v += events[next++].jump;
  };

  detail::State s{init.displacement, init.speed};
  fire_events_at(0.0, s);
  detail::check_finite(s, 0.0);
  tr.samples.push_back({0.0, s.d, s.v, forcing.value(0.0)});
  for (std::size_t k = 0; k < n; ++k) {
    double a = static_cast<double>(k) * dt;
    const double b = static_cast<double>(k + 1) * dt;
    while (next < events.size() && events[next].time < b - eps) {
      const double cut = events[next].time;
      s = detail::rk4_step(p, segment_force(a), s, a, cut - a);
      a = cut;
      fire_events_at(a, s);
    }
    s = detail::rk4_step(p, segment_force(a), s, a, b - a);
    fire_events_at(b, s);
    detail::check_finite(s, b);
    tr.samples.push_back({b, s.d, s.v, forcing.value(b)});
  }
  return tr;
}

/// Largest |D_a - D_b| over samples present in both trajectories (same grid).
inline double max_deviation(const Trajectory& a, const Trajectory& b) {
  require(a.samples.size() == b.samples.size(), ErrorKind::validation, "trajectories sampled on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) m = std::max(m, std::abs(a.samples[i].d - b.samples[i].d));
  return m;
}

struct ForceComponents {
  double inertial = 0.0;   // F_C = M D''
  double resistive = 0.0;  // F_R = R D'
  double resilient = 0.0;  // F_E = E D
  double total = 0.0;
};

struct TrajectoryPoint {
  double d = 0.0;
  double v = 0.0;
  double applied = 0.0;
  std::optional<double> acceleration;  // when absent D'' is recovered from the equation of motion
};

inline ForceComponents force_components(const VibrationParams& p, const TrajectoryPoint& pt) {
  ForceComponents c;
  c.resistive = p.resistance() * pt.v;
  c.resilient = p.resilience() * pt.d;
  const double acc = pt.acceleration ? *pt.acceleration : (pt.applied - c.resistive - c.resilient) / p.mass();
  c.inertial = p.mass() * acc;
  c.total = c.inertial + c.resistive + c.resilient;
  return c;
}

/// Amplitude of the slowly varying envelope of a beating motion.
struct BeatReport {
  bool detected = false;
  double envelope_period = 0.0;
  double beat_frequency = 0.0;  // angular frequency of the modulating sinusoid, pi / envelope_period
  double modulation_depth = 0.0;
  std::size_t envelope_peaks = 0;
};

namespace detail {

struct Peak {
  double t;
  double value;
};

// Vertex of the parabola through three points.
inline Peak refine_peak(double t0, double y0, double t1, double y1, double t2, double y2) {
  const double d0 = (y1 - y0) / (t1 - t0), d1 = (y2 - y1) / (t2 - t1);
  const double curv = (d1 - d0) / (t2 - t0);
  if (curv >= 0.0) return {t1, y1};
  // Newton form y0 + d0 (t - t0) + curv (t - t0)(t - t1); its derivative vanishes at tv.
  const double tv = std::clamp(0.5 * (t0 + t1) - d0 / (2.0 * curv), t0, t2);
  return {tv, y0 + d0 * (tv - t0) + curv * (tv - t0) * (tv - t1)};
}

inline std::vector<Peak> local_maxima(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<Peak> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(refine_peak(t[i - 1], y[i - 1], t[i], y[i], t[i + 1], y[i + 1]));
  return out;
}

}  // namespace detail

/// Extracts the envelope from the local maxima of D and measures its period.
///
/// A trajectory whose envelope varies by less than `min_depth` (relative) is
/// reported as not beating. An envelope that varies but shows fewer than two
/// maxima is too short to measure.
inline BeatReport detect_beats(const Trajectory& tr, double min_depth = 0.05) {
  std::vector<double> t, d;
  t.reserve(tr.samples.size());
  d.reserve(tr.samples.size());
  for (const auto& s : tr.samples) {
    t.push_back(s.t);
    d.push_back(s.d);
  }
  const auto carrier = detail::local_maxima(t, d);
  require(carrier.size() >= 3, ErrorKind::insufficient_data, "detect_beats: fewer than 3 oscillation peaks");

  BeatReport r;
  double hi = carrier.front().value, lo = carrier.front().value;
  for (const auto& p : carrier) {
    hi = std::max(hi, p.value);
    lo = std::min(lo, p.value);
  }
  r.modulation_depth = hi + std::abs(lo) > 0.0 ? (hi - lo) / (hi + std::abs(lo)) : 0.0;
  if (r.modulation_depth < min_depth) return r;

  std::vector<double> et, ev;
  for (const auto& p : carrier) {
    et.push_back(p.t);
    ev.push_back(p.value);
  }
  const double mid = 0.5 * (hi + lo);
  std::vector<detail::Peak> env;
  for (const auto& p : detail::local_maxima(et, ev))
    if (p.value > mid) env.push_back(p);
  r.envelope_peaks = env.size();
  if (env.empty()) return r;  // monotone envelope: decay or growth, not a beat
  require(env.size() >= 2, ErrorKind::insufficient_data, "detect_beats: fewer than 2 envelope periods in the trajectory");
  r.detected = true;
  r.envelope_period = (env.back().t - env.front().t) / static_cast<double>(env.size() - 1);
  r.beat_frequency = std::numbers::pi / r.envelope_period;
  return r;
}

/// Least-squares phase lag of D behind cos(omega t + phase) over samples with t >= t_from.
inline double measure_phase_lag(const Trajectory& tr, double omega, double phase, double t_from) {
  double scc = 0.0, sss = 0.0, scs = 0.0, sdc = 0.0, sds = 0.0;
  std::size_t n = 0;
  for (const auto& s : tr.samples) {
    if (s.t < t_from) continue;
    const double c = std::cos(omega * s.t + phase), sn = std::sin(omega * s.t + phase);
    scc += c * c;
    sss += sn * sn;
    scs += c * sn;
    sdc += s.d * c;
    sds += s.d * sn;
    ++n;
  }
  require(n >= 3, ErrorKind::insufficient_data, "measure_phase_lag: fewer than 3 samples after t_from");
  const double det = scc * sss - scs * scs;
  require(det > 0.0, ErrorKind::insufficient_data, "measure_phase_lag: samples do not span a period");
  const double a = (sdc * sss - sds * scs) / det;
  const double b = (sds * scc - sdc * scs) / det;
  return std::atan2(b, a);
}

struct ResonancePoint {
  double omega = 0.0;
  double amplitude = 0.0;
  double phase_lag = 0.0;
};

struct ResonanceScan {
  std::vector<ResonancePoint> points;  // input grid order
  std::size_t peak = 0;                // index of the largest amplitude
};

inline ResonanceScan resonance_scan(const VibrationParams& p, const std::vector<double>& omegas, double amplitude) {
  require(p.resistance() > 0.0, ErrorKind::wrong_regime,
          "resonance_scan: R = 0 has unbounded resonance; use solve_forced for the secular solution");
  require(!omegas.empty(), ErrorKind::validation, "resonance_scan: empty frequency grid");
  ResonanceScan out;
  for (double w : omegas) {
    require(std::isfinite(w) && w >= 0.0, ErrorKind::validation, "resonance_scan: frequencies must be finite and >= 0");
    out.points.push_back({w, steady_amplitude(p, amplitude, w), steady_phase_lag(p, w)});
    if (out.points.back().amplitude > out.points[out.peak].amplitude) out.peak = out.points.size() - 1;
  }
  return out;
}

/// Last time after which |D - target| stays within `band`; nullopt if never.
inline std::optional<double> settling_time(const Trajectory& tr, double target, double band) {
  const std::size_t n = tr.samples.size();
  for (std::size_t i = n; i-- > 0;)
    if (std::abs(tr.samples[i].d - target) > band) return i + 1 < n ? std::optional<double>(tr.samples[i + 1].t) : std::nullopt;
  return n == 0 ? std::nullopt : std::optional<double>(tr.samples.front().t);
}

struct StepResponse {
  Trajectory trajectory;
  double equilibrium = 0.0;            // F_step / E
  std::optional<double> settling_time;  // within 2% of the step size
};

inline StepResponse step_response(const VibrationParams& p, double step, const InitialConditions& init, double dt,
                                  double t_end) {
  const Forcing f = Forcing::constant(step, "step");
  StepResponse out;
  out.equilibrium = step / p.resilience();
  out.trajectory = sample(solve(p, f, init), f, dt, t_end);
  const double span = std::abs(out.equilibrium - init.displacement);
  out.settling_time = settling_time(out.trajectory, out.equilibrium, span > 0.0 ? 0.02 * span : 1e-12);
  return out;
}

struct CompensationReport {
  Trajectory trajectory;
  double pre_level = 0.0;
  double minimum = 0.0;
  double final_level = 0.0;
};

/// A system resting at `pre_level` loses a member at `event_time`: a downward
/// impulse knocks the diversity down and the sustaining force drops to
/// `retained` of its former value. The remaining restoring force partly
/// compensates, so D settles between the post-event minimum and `pre_level`.
inline CompensationReport partial_compensation(const VibrationParams& p, double pre_level, double drop_impulse,
                                               double retained, double event_time, double dt, double t_end) {
  require(retained >= 0.0 && retained <= 1.0, ErrorKind::validation, "retained fraction must lie in [0, 1]");
  require(event_time >= 0.0 && event_time < t_end, ErrorKind::validation, "event must fall inside the run");
  const double sustain = p.resilience() * pre_level;
  Forcing f = Forcing::constant(sustain, "sustaining drivers");
  f.steps.push_back({"lost member", -(1.0 - retained) * sustain, event_time});
  f.impulses.push_back({"malfunction", -std::abs(drop_impulse), event_time});
  CompensationReport out;
  out.trajectory = sample(solve(p, f, {pre_level, 0.0}), f, dt, t_end);
  out.pre_level = pre_level;
  out.minimum = pre_level;
  for (const auto& s : out.trajectory.samples) out.minimum = std::min(out.minimum, s.d);
  out.final_level = out.trajectory.samples.back().d;
  return out;
}

}  // namespace divkit
