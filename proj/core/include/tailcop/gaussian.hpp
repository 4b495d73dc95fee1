#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tailcop/models.hpp"

namespace tailcop {

// Real values on the lattice {(i/m, j/m) : i,j = 0..m} over [0,1]^2.
struct GridField {
  int m = 0;
  std::vector<double> values;  // (m+1)*(m+1), row-major in i (the s axis)

  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * (m + 1) + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * (m + 1) + j]; }
};

enum class CovKind { Sheet, Bridge, TiedDown, GeneralBridge };

// Brownian sheet restricted to the lattice: cell increments are i.i.d.
// centered Gaussian with variance 1/m^2 and values are cumulative rectangle
// sums, which is exact in law at the lattice points.
GridField simulate_sheet(int m, std::uint64_t seed);

// B(s,t) = W(s,t) - s t W(1,1).
GridField sheet_to_bridge(const GridField& sheet);

// BB(s,t) = B(s,t) - s B(1,t) - t B(s,1); zero on the whole boundary.
GridField bridge_to_tied_down(const GridField& bridge);

// Closed-form covariances. GeneralBridge needs a model:
//   C(s1 ^ s2, t1 ^ t2) - C(s1,t1) C(s2,t2).
double covariance(CovKind kind, double s1, double t1, double s2, double t2,
                  const CopulaModel* model = nullptr);

// Integral of u^{2 nu1} v^{2 nu2} field(u,v)^2 over [0,window]^2, with the
// field interpolated bilinearly per cell and the weight monomials integrated
// exactly. Requires nu1, nu2 > -1/2.
double integral_squared_weighted(const GridField& field, double window,
                                 double nu1, double nu2);

// Delimiter-separated matrix dump for external plotting.
void write_field(std::ostream& os, const GridField& field, char delim = ',');

}  // namespace tailcop
