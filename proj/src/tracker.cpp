#include "galmon/tracker.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <thread>

#include "galmon/errors.hpp"

namespace galmon {

void TrackerOptions::validate() const {
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step && max_step < 1.0))
    throw InvalidArgument("tracker options: need 0 < min_step <= initial_step <= max_step < 1");
  if (!(step_increase_factor > 1.0) || !(step_decrease_factor > 0.0 && step_decrease_factor < 1.0))
    throw InvalidArgument("tracker options: step factors on the wrong side of 1");
  if (!(stall_acceptance >= 1.0)) throw InvalidArgument("tracker options: stall_acceptance below 1");
  if (corrector_tolerance <= 0.0 || max_corrector_iters < 1 || max_steps < 1 || endpoint_refine_iters < 0)
    throw InvalidArgument("tracker options: non-positive tolerance or iteration count");
}

const char* to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Success:
      return "success";
    case TrackStatus::MinStepReached:
      return "min-step-reached";
    case TrackStatus::MaxStepsReached:
      return "max-steps-reached";
    case TrackStatus::CorrectorDiverged:
      return "corrector-diverged";
    case TrackStatus::SingularEndpoint:
      return "singular-endpoint";
  }
  return "unknown";
}

namespace {

Complex weight(const PathSegment& seg, double t) {
  const Complex d = (1.0 - t) * seg.gamma_start + t * seg.gamma_end;
  if (std::abs(d) < 1e-12) throw DegeneratePath("path weight vanishes; redraw gamma");
  return d;
}

void check_segment(const PathSegment& seg) {
  if (seg.z_start.size() != seg.z_end.size()) throw InvalidArgument("path segment endpoints differ in length");
  if (std::abs(std::abs(seg.gamma_start) - 1.0) > 1e-12 || std::abs(std::abs(seg.gamma_end) - 1.0) > 1e-12)
    throw InvalidArgument("path segment gammas must have unit modulus");
}

// Per-path working state; one instance per tracked path.
class PathTracker {
public:
  PathTracker(const GateSystem& sys, const PathSegment& seg, const TrackerOptions& opts)
      : ev_(sys), seg_(seg), opts_(opts), n_(sys.num_unknowns()), f_(n_), ft_(n_), zero_dz_(sys.num_parameters()) {}

  TrackResult run(std::span<const Complex> x_start) {
    TrackResult res;
    CVector x(x_start.begin(), x_start.end());
    try {
      ev_.evaluate(seg_.z_start, x, f_);
    } catch (const Error&) {
      res.status = TrackStatus::CorrectorDiverged;
      return res;
    }
    if (norm2(f_) > 1e-6 * (1.0 + norm_inf(x))) {
      res.status = TrackStatus::CorrectorDiverged;
      return res;
    }

    double t = 0.0;
    double h = opts_.initial_step;
    while (t < 1.0) {
      if (res.steps_taken >= opts_.max_steps) {
        res.status = TrackStatus::MaxStepsReached;
        res.t_reached = t;
        return res;
      }
      double step = std::min(h, 1.0 - t);
      const bool last = step >= 1.0 - t;
      const double t_next = last ? 1.0 : t + step;
      step = t_next - t;

      CVector xn;
      bool accepted = false;
      try {
        xn = predict(t, step, x);
        accepted = correct(t_next, xn);
      } catch (const Error&) {
        accepted = false;
      }

      if (accepted) {
        x = std::move(xn);
        t = t_next;
        ++res.steps_taken;
        h = std::min(h * opts_.step_increase_factor, opts_.max_step);
        if (norm_inf(x) > 1e8) {
          res.status = TrackStatus::CorrectorDiverged;
          res.t_reached = t;
          return res;
        }
      } else {
        h *= opts_.step_decrease_factor;
        if (h < opts_.min_step) {
          res.status = TrackStatus::MinStepReached;
          res.t_reached = t;
          return res;
        }
      }
    }
    res.t_reached = 1.0;

    try {
      RefineResult r = refine(ev_.system(), seg_.z_end, x, opts_.endpoint_refine_iters);
      res.residual = r.residual;
      x = std::move(r.x);
    } catch (const Error&) {
      res.status = TrackStatus::SingularEndpoint;
      return res;
    }
    if (!(res.residual <= 10.0 * opts_.corrector_tolerance)) {
      res.status = TrackStatus::SingularEndpoint;
      return res;
    }
    res.status = TrackStatus::Success;
    res.endpoint = std::move(x);
    return res;
  }

private:
  // dx/dt = -(df/dx)^{-1} (df/dz) phi'(t)
  CVector velocity(double t, std::span<const Complex> x) {
    const CVector z = path_point(seg_, t);
    const CVector dz = path_derivative(seg_, t);
    ev_.linearize(z, x, dz, f_, jac_, ft_);
    CVector v = lu_solve(jac_, ft_);
    for (auto& c : v) c = -c;
    return v;
  }

  CVector predict(double t, double h, const CVector& x) {
    const auto axpy = [&](double a, const CVector& k) {
      CVector y = x;
      for (std::size_t i = 0; i < n_; ++i) y[i] += a * k[i];
      return y;
    };
    const CVector k1 = velocity(t, x);
    const CVector k2 = velocity(t + 0.5 * h, axpy(0.5 * h, k1));
    const CVector k3 = velocity(t + 0.5 * h, axpy(0.5 * h, k2));
    const CVector k4 = velocity(t + h, axpy(h, k3));
    CVector y = x;
    for (std::size_t i = 0; i < n_; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return y;
  }

  bool correct(double t, CVector& x) {
    const CVector z = path_point(seg_, t);
    double previous = 0.0;
    for (int it = 0; it < opts_.max_corrector_iters; ++it) {
      ev_.linearize(z, x, zero_dz_, f_, jac_, ft_);
      const CVector delta = lu_solve(jac_, f_);
      for (std::size_t i = 0; i < n_; ++i) x[i] -= delta[i];
      const double size = norm_inf(delta);
      const double tol = opts_.corrector_tolerance * (1.0 + norm_inf(x));
      if (size <= tol) {
#ifndef NDEBUG
        ev_.evaluate(z, x, f_);
        assert(norm2(f_) <= 1e3 * opts_.corrector_tolerance * (1.0 + norm_inf(x)));
#endif
        return true;
      }
      // Newton must contract; otherwise the prediction left the basin. A
      // stalled update close to the tolerance is rounding noise from an
      // ill-conditioned Jacobian.
      if (it > 0 && size > 0.5 * previous) return size <= opts_.stall_acceptance * tol;
      previous = size;
    }
    return false;
  }

  Evaluator ev_;
  const PathSegment& seg_;
  const TrackerOptions& opts_;
  std::size_t n_;
  CVector f_;
  CVector ft_;
  CVector zero_dz_;
  CMatrix jac_;
};

}  // namespace

CVector path_point(const PathSegment& seg, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("path_point: t outside [0, 1]");
  if (t == 0.0) return seg.z_start;
  if (t == 1.0) return seg.z_end;
  const Complex d = weight(seg, t);
  const Complex a = (1.0 - t) * seg.gamma_start / d;
  const Complex b = t * seg.gamma_end / d;
  CVector z(seg.z_start.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * seg.z_start[i] + b * seg.z_end[i];
  return z;
}

CVector path_derivative(const PathSegment& seg, double t) {
  const Complex d = weight(seg, t);
  const Complex f = seg.gamma_start * seg.gamma_end / (d * d);
  CVector dz(seg.z_start.size());
  for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = f * (seg.z_end[i] - seg.z_start[i]);
  return dz;
}

RefineResult refine(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x, int iters) {
  Evaluator ev(sys);
  RefineResult r{CVector(x.begin(), x.end()), 0.0};
  CVector f(sys.num_outputs());
  CMatrix jac;
  for (int it = 0; it < iters; ++it) {
    ev.evaluate(z, r.x, f);
    if (norm2(f) == 0.0) break;
    ev.jacobian_unknowns(z, r.x, jac);
    const CVector delta = lu_solve(jac, f);
    for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] -= delta[i];
  }
  ev.evaluate(z, r.x, f);
  r.residual = norm2(f);
  return r;
}

TrackResult track(const GateSystem& sys, const PathSegment& seg, std::span<const Complex> x_start,
                  const TrackerOptions& opts) {
  opts.validate();
  check_segment(seg);
  if (sys.num_outputs() != sys.num_unknowns()) throw InvalidArgument("track: system is not square");
  if (seg.z_start.size() != sys.num_parameters()) throw InvalidArgument("track: segment has wrong parameter count");
  if (x_start.size() != sys.num_unknowns()) throw InvalidArgument("track: start point has wrong length");
  return PathTracker(sys, seg, opts).run(x_start);
}

std::vector<TrackResult> track_many(const GateSystem& sys, const PathSegment& seg, const std::vector<CVector>& starts,
                                    const TrackerOptions& opts, unsigned workers) {
  std::vector<TrackResult> results(starts.size());
  if (starts.empty()) return results;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(starts.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) results[i] = track(sys, seg, starts[i], opts);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < starts.size(); i = next++) results[i] = track(sys, seg, starts[i], opts);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace galmon
