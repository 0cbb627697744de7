#include "spacetime/cases.hpp"

namespace spacetime {

bool CaseSpec::is_known() const {
  return name == "static-sphere" || name == "expanding-sphere" || name == "expanding-torus" ||
         name == "box" || name == "kuhn";
}

Geometry make_case_geometry(const CaseSpec& c) {
  if (c.is_sphere()) return make_sphere_in_box(c.r0, c.sphere_rf(), c.l, c.t0, c.tf);
  if (c.name == "expanding-torus") return make_torus_in_box(c.r0, c.R0, c.rf, c.Rf, c.l, c.t0, c.tf);
  if (c.name == "box") return make_box(c.l, c.t0, c.tf);
  throw GeometryError("case '" + c.name + "' has no surface geometry");
}

}  // namespace spacetime
