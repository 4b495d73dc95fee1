#include "tailcop/gaussian.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tailcop/rng.hpp"

namespace tailcop {

GridField simulate_sheet(int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("simulate_sheet: m must be >= 1");
  GridField f;
  f.m = m;
  f.values.assign(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
  Rng rng(seed);
  const double sd = 1.0 / static_cast<double>(m);  // cell variance 1/m^2
  // W(i/m, j/m) = sum of increments over [0,i/m] x [0,j/m]; running row sums
  // plus the row above give the cumulative rectangle sum.
  for (int i = 1; i <= m; ++i) {
    double row_acc = 0.0;
    for (int j = 1; j <= m; ++j) {
      row_acc += sd * rng.normal();
      f.at(i, j) = f.at(i - 1, j) + row_acc;
    }
  }
  return f;
}

GridField sheet_to_bridge(const GridField& sheet) {
  GridField f = sheet;
  const int m = f.m;
  const double w11 = sheet.at(m, m);
  for (int i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i) / m;
    for (int j = 0; j <= m; ++j) {
      const double t = static_cast<double>(j) / m;
      f.at(i, j) = sheet.at(i, j) - s * t * w11;
    }
  }
  return f;
}

GridField bridge_to_tied_down(const GridField& bridge) {
  GridField f = bridge;
  const int m = f.m;
  for (int i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i) / m;
    for (int j = 0; j <= m; ++j) {
      const double t = static_cast<double>(j) / m;
      f.at(i, j) = bridge.at(i, j) - s * bridge.at(m, j) - t * bridge.at(i, m);
    }
  }
  return f;
}

double covariance(CovKind kind, double s1, double t1, double s2, double t2,
                  const CopulaModel* model) {
  const double ms = std::min(s1, s2);
  const double mt = std::min(t1, t2);
  switch (kind) {
    case CovKind::Sheet:
      return ms * mt;
    case CovKind::Bridge:
      return ms * mt - s1 * t1 * s2 * t2;
    case CovKind::TiedDown:
      return (ms - s1 * s2) * (mt - t1 * t2);
    case CovKind::GeneralBridge: {
      if (model == nullptr) {
        throw std::invalid_argument("covariance: GeneralBridge needs a model");
      }
      return copula_eval(*model, ms, mt) -
             copula_eval(*model, s1, t1) * copula_eval(*model, s2, t2);
    }
  }
  return 0.0;
}

namespace {

// int_a^b x^{2nu + k} dx, valid for 2nu + k + 1 > 0.
double weight_moment(double a, double b, double two_nu, int k) {
  const double e = two_nu + k + 1.0;
  return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

double integral_squared_weighted(const GridField& field, double window,
                                 double nu1, double nu2) {
  if (!(window > 0.0 && window <= 1.0)) {
    throw std::invalid_argument("integral_squared_weighted: window in (0,1]");
  }
  if (!(nu1 > -0.5 && nu2 > -0.5)) {
    throw std::invalid_argument(
        "integral_squared_weighted: nu1, nu2 must exceed -1/2");
  }
  const int m = field.m;
  const double cell = 1.0 / static_cast<double>(m);

  // Per-cell bilinear interpolation in local coordinates z = (x - x0)/cell:
  // f = f0 (1-z) + f1 z per axis. The weighted integrals of the basis
  // products (1-z)^2, z(1-z), z^2 against x^{2nu} expand into the moments
  // int x^{2nu + k} dx over the clipped cell, k = 0..2.
  struct CellW {
    double w[2][2];  // [p][r] = int x^{2nu} phi_p phi_r dx over the clip
  };
  auto axis_weights = [&](double two_nu) {
    std::vector<CellW> ws;
    ws.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const double x0 = i * cell;
      const double hi = std::min((i + 1) * cell, window);
      CellW cw{};
      if (hi > x0) {
        const double mom0 = weight_moment(x0, hi, two_nu, 0);
        const double mom1 = weight_moment(x0, hi, two_nu, 1);
        const double mom2 = weight_moment(x0, hi, two_nu, 2);
        // z = (x - x0)/cell  =>  z^k in powers of x via binomial expansion
        const double inv = 1.0 / cell;
        const double z1 = inv * (mom1 - x0 * mom0);
        const double z2 = inv * inv * (mom2 - 2.0 * x0 * mom1 + x0 * x0 * mom0);
        cw.w[0][0] = mom0 - 2.0 * z1 + z2;  // (1-z)^2
        cw.w[0][1] = z1 - z2;               // z(1-z)
        cw.w[1][0] = cw.w[0][1];
        cw.w[1][1] = z2;                    // z^2
      }
      ws.push_back(cw);
      if (hi >= window) break;
    }
    return ws;
  };

  const auto wu = axis_weights(2.0 * nu1);
  const auto wv = axis_weights(2.0 * nu2);

  double total = 0.0;
  for (std::size_t i = 0; i < wu.size(); ++i) {
    for (std::size_t j = 0; j < wv.size(); ++j) {
      double csum = 0.0;
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          const double fpq = field.at(static_cast<int>(i) + p,
                                      static_cast<int>(j) + q);
          for (int r = 0; r < 2; ++r) {
            for (int t = 0; t < 2; ++t) {
              const double frt = field.at(static_cast<int>(i) + r,
                                          static_cast<int>(j) + t);
              csum += fpq * frt * wu[i].w[p][r] * wv[j].w[q][t];
            }
          }
        }
      }
      total += csum;
    }
  }
  return total;
}

void write_field(std::ostream& os, const GridField& field, char delim) {
  for (int i = 0; i <= field.m; ++i) {
    for (int j = 0; j <= field.m; ++j) {
      if (j > 0) os << delim;
      os << field.at(i, j);
    }
    os << '\n';
  }
}

}  // namespace tailcop
