#pragma once

#include <string>

#include "spacetime/geometry.hpp"

namespace spacetime {

/// Named analytic test case with its parameters.
struct CaseSpec {
  std::string name = "static-sphere";  // static-sphere | expanding-sphere | expanding-torus | box | kuhn
  double r0 = 0.1, rf = 0.125;
  double R0 = 0.4, Rf = 0.5;
  double l = 1.0;
  double t0 = 0.0, tf = 1.0;
  int slabs = 10;
  double h = 0.02;
  int kuhn_n = 1;

  bool is_sphere() const { return name == "static-sphere" || name == "expanding-sphere"; }
  bool is_known() const;
  /// Final sphere radius honoring the static case.
  double sphere_rf() const { return name == "static-sphere" ? r0 : rf; }
};

/// Geometry for a non-Kuhn case.
Geometry make_case_geometry(const CaseSpec& c);

}  // namespace spacetime
