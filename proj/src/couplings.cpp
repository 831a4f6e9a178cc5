#include "pottsflow/couplings.hpp"

#include "pottsflow/error.hpp"

namespace pottsflow::param_map {

namespace {

void require_unit_interval(double x) {
    if (!(x >= 0.0 && x < 1.0)) throw InvalidArgument("flow parameter x must lie in [0, 1)");
}

}  // namespace

double rc_from_flow(double x, Residue q) {
    require_unit_interval(x);
    return q * x / (1.0 - x);
}

double potts_from_flow(double x, Residue q) {
    require_unit_interval(x);
    return (1.0 + (q - 1.0) * x) / (1.0 - x);
}

double flow_from_rc(double y, Residue q) {
    if (!(y >= 0.0)) throw InvalidArgument("random-cluster parameter y must be non-negative");
    return y / (q + y);
}

double flow_from_potts(double w, Residue q) {
    if (!(w >= 1.0)) throw InvalidArgument("Potts parameter w must be at least 1");
    return (w - 1.0) / (w + q - 1.0);
}

}  // namespace pottsflow::param_map
