#include "gstree/rng.hpp"

#include <cmath>

namespace gstree {
namespace {

// Ziggurat tables, 128 layers (Marsaglia & Tsang constants).
struct ZigTables {
  std::uint32_t kn[128];
  double wn[128];
  double fn[128];

  ZigTables() {
    const double m1 = 2147483648.0;
    double dn = 3.442619855899;
    double tn = dn;
    const double vn = 9.91256303526217e-3;

    double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
    kn[1] = 0;
    wn[0] = q / m1;
    wn[127] = dn / m1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m1;
    }
  }
};

const ZigTables& tables() {
  static const ZigTables t;
  return t;
}

}  // namespace

std::uint32_t GaussianGen::kn(unsigned i) { return tables().kn[i]; }
double GaussianGen::wn(unsigned i) { return tables().wn[i]; }
double GaussianGen::fn(unsigned i) { return tables().fn[i]; }

double GaussianGen::fix(std::int32_t hz, unsigned iz) {
  const double r = 3.442619855899;
  for (;;) {
    double x = hz * wn(iz);
    if (iz == 0) {
      // Tail beyond r: exponential rejection.
      double y;
      do {
        x = -std::log(rng_.uniform01() + 0x1.0p-54) / r;
        y = -std::log(rng_.uniform01() + 0x1.0p-54);
      } while (y + y < x * x);
      return hz > 0 ? r + x : -r - x;
    }
    if (fn(iz) + rng_.uniform01() * (fn(iz - 1) - fn(iz)) <
        std::exp(-0.5 * x * x))
      return x;
    const std::uint32_t u = static_cast<std::uint32_t>(rng_.next());
    hz = static_cast<std::int32_t>(u);
    iz = u & 127u;
    if (static_cast<std::uint32_t>(hz < 0 ? -hz : hz) < kn(iz))
      return hz * wn(iz);
  }
}

}  // namespace gstree
