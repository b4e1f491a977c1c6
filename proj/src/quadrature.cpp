#include "gpb/quadrature.h"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <vector>

#include "gpb/errors.h"

namespace gpb {
namespace {

struct GslSetup {
  GslSetup() { gsl_set_error_handler_off(); }
};
const GslSetup gsl_setup;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

// Per-thread stack of workspaces, one per nesting depth (integrate_2d runs
// inner integrals while the outer one holds its workspace).
class WorkspaceLease {
 public:
  explicit WorkspaceLease(std::size_t limit) {
    auto& pool = stack();
    if (depth() == pool.size()) pool.emplace_back();
    auto& slot = pool[depth()];
    if (!slot || slot->limit < limit) slot.reset(gsl_integration_workspace_alloc(limit));
    if (!slot) throw std::bad_alloc();
    ws_ = slot.get();
    ++depth();
  }
  ~WorkspaceLease() { --depth(); }
  WorkspaceLease(const WorkspaceLease&) = delete;
  WorkspaceLease& operator=(const WorkspaceLease&) = delete;
  gsl_integration_workspace* get() const { return ws_; }

 private:
  using Slot = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;
  static std::vector<Slot>& stack() {
    thread_local std::vector<Slot> pool;
    return pool;
  }
  static std::size_t& depth() {
    thread_local std::size_t d = 0;
    return d;
  }
  gsl_integration_workspace* ws_;
};

struct Thunk {
  const Integrand* f;
  std::size_t evals = 0;
  std::exception_ptr error;
};

double call(double x, void* p) {
  auto* t = static_cast<Thunk*>(p);
  ++t->evals;
  if (t->error) return 0.0;
  try {
    return (*t->f)(x);
  } catch (...) {
    t->error = std::current_exception();
    return 0.0;
  }
}

// QUADPACK qagp: 21-point Gauss-Kronrod with epsilon-algorithm extrapolation,
// so integrable endpoint singularities at the break points are handled.
QuadResult adaptive(const Integrand& f, std::vector<double> breaks, const QuadratureSettings& s) {
  s.validate();
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadResult out;
  if (breaks.size() < 2) return out;
  Thunk thunk{&f, 0, nullptr};
  gsl_function fn{&call, &thunk};
  // qagp needs room for at least one interval per piece.
  const std::size_t limit = std::max(s.max_subdivisions, breaks.size());
  const WorkspaceLease lease(limit);
  gsl_integration_workspace* ws = lease.get();
  const int status = gsl_integration_qagp(&fn, breaks.data(), breaks.size(), s.abs_tol, s.rel_tol, limit, ws,
                                          &out.value, &out.abs_error);
  out.evaluations = thunk.evals;
  out.subdivisions = ws->size;
  if (thunk.error) std::rethrow_exception(thunk.error);
  if (!std::isfinite(out.value)) {
    throw QuadratureError("quadrature produced a non-finite value", out.value, out.abs_error);
  }
  if (status != GSL_SUCCESS) {
    std::ostringstream msg;
    msg << "quadrature did not converge: " << gsl_strerror(status) << " after " << out.subdivisions
        << " subdivisions (estimate " << out.value << ", error " << out.abs_error << ")";
    throw QuadratureError(msg.str(), out.value, out.abs_error);
  }
  return out;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("quadrature abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw DomainError("quadrature rel_tol must be > 0");
  if (max_subdivisions < 1) throw DomainError("quadrature max_subdivisions must be >= 1");
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSettings& settings) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integrate: bounds must be finite");
  if (a == b) return {};
  if (a > b) {
    QuadResult r = adaptive(f, {b, a}, settings);
    r.value = -r.value;
    return r;
  }
  return adaptive(f, {a, b}, settings);
}

QuadResult quad_improper(const Integrand& f, const QuadratureSettings& settings) {
  const InfiniteMap map = settings.infinite_map;
  // x in (0, 1]: theta = x^4.  x in (1, 2): y = 2 - x in (0, 1), theta = y^{-4} or 1 - log y.
  Integrand mapped = [&f, map](double x) -> double {
    if (x <= 1.0) {
      const double x2 = x * x;
      const double v = f(x2 * x2);
      return v == 0.0 ? 0.0 : 4.0 * x2 * x * v;
    }
    const double y = 2.0 - x;
    if (map == InfiniteMap::kRational) {
      const double y2 = y * y;
      const double y4 = y2 * y2;
      const double theta = 1.0 / y4;
      if (!std::isfinite(theta)) return 0.0;
      const double v = f(theta);
      return v == 0.0 ? 0.0 : 4.0 * v * theta / y;
    }
    const double theta = 1.0 - std::log(y);
    const double v = f(theta);
    return v == 0.0 ? 0.0 : v / y;
  };
  return adaptive(mapped, {0.0, 1.0, 2.0}, settings);
}

QuadResult integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                        const std::function<double(double)>& ay, const std::function<double(double)>& by,
                        const std::function<double(double)>& y_break, const QuadratureSettings& settings) {
  settings.validate();
  QuadratureSettings inner = settings;
  inner.abs_tol = settings.abs_tol / 100.0;
  inner.rel_tol = settings.rel_tol / 100.0;
  std::size_t inner_evals = 0;
  Integrand outer = [&](double x) {
    const double lo = ay(x);
    const double hi = by(x);
    if (!(lo < hi)) return 0.0;
    Integrand g = [&f, x](double y) { return f(x, y); };
    std::vector<double> pts{lo};
    if (y_break) {
      const double c = y_break(x);
      if (c > lo && c < hi) pts.push_back(c);
    }
    pts.push_back(hi);
    try {
      QuadResult r = adaptive(g, pts, inner);
      inner_evals += r.evaluations;
      return r.value;
    } catch (const QuadratureError& e) {
      // The tightened inner target can be out of reach in double precision;
      // the outer tolerance is what is promised.
      if (std::isfinite(e.partial_value()) &&
          e.error_estimate() <= std::max(settings.abs_tol, settings.rel_tol * std::abs(e.partial_value()))) {
        return e.partial_value();
      }
      throw;
    }
  };
  QuadResult r = integrate(outer, ax, bx, settings);
  r.evaluations += inner_evals;
  return r;
}

}  // namespace gpb
