#include "sqz/cavity.hpp"

#include <cmath>
#include <complex>

#include "sqz/constants.hpp"

namespace sqz {

namespace {

bool is_mirror(const Element& e) {
  return std::holds_alternative<CurvedMirror>(e);
}

void validate_element(const Element& e) {
  if (const auto* g = std::get_if<Gap>(&e)) {
    if (!(g->length > 0.0)) throw LayoutError("gap length must be positive");
  } else if (const auto* s = std::get_if<Slab>(&e)) {
    if (!(s->length > 0.0)) throw LayoutError("slab length must be positive");
    if (!(s->refractive_index >= 1.0))
      throw LayoutError("slab refractive index must be >= 1");
  } else if (const auto* m = std::get_if<CurvedMirror>(&e)) {
    if (m->roc == 0.0) throw LayoutError("mirror roc must be nonzero");
    if (!(m->power_reflectivity > 0.0 && m->power_reflectivity <= 1.0))
      throw LayoutError("mirror reflectivity must lie in (0, 1]");
    if (!(m->immersed_index >= 1.0))
      throw LayoutError("mirror immersion index must be >= 1");
  }
}

}  // namespace

void CavityLayout::validate() const {
  if (elements.size() < 2)
    throw LayoutError("layout needs at least coupler and end mirror");
  if (!is_mirror(elements.front()) || !is_mirror(elements.back()))
    throw LayoutError("first and last elements must be mirrors");
  for (std::size_t i = 1; i + 1 < elements.size(); ++i)
    if (is_mirror(elements[i]))
      throw LayoutError("interior mirrors are not supported");
  for (const auto& e : elements) validate_element(e);
  if (!(wavelength > 0.0)) throw LayoutError("wavelength must be positive");
}

const CurvedMirror& CavityLayout::coupler() const {
  return std::get<CurvedMirror>(elements.front());
}

const CurvedMirror& CavityLayout::end_mirror() const {
  return std::get<CurvedMirror>(elements.back());
}

RayMatrix RayMatrix::operator*(const RayMatrix& rhs) const {
  return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
          c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

RayMatrix element_matrix(const Element& e) {
  if (const auto* g = std::get_if<Gap>(&e)) return {1.0, g->length, 0.0, 1.0};
  if (const auto* s = std::get_if<Slab>(&e))
    return {1.0, s->length / s->refractive_index, 0.0, 1.0};
  if (const auto* m = std::get_if<CurvedMirror>(&e)) {
    if (std::isinf(m->roc)) return {1.0, 0.0, 0.0, 1.0};
    // Effective roc R/n for a mirror immersed in index n.
    return {1.0, 0.0, -2.0 * m->immersed_index / m->roc, 1.0};
  }
  return {1.0, 0.0, 0.0, 1.0};  // FlatInterface
}

RayMatrix round_trip_matrix(const CavityLayout& layout) {
  layout.validate();
  RayMatrix forward;  // identity
  for (std::size_t i = 1; i + 1 < layout.elements.size(); ++i)
    forward = element_matrix(layout.elements[i]) * forward;
  RayMatrix backward;
  for (std::size_t i = layout.elements.size() - 2; i >= 1; --i)
    backward = element_matrix(layout.elements[i]) * backward;
  const RayMatrix end = element_matrix(layout.elements.back());
  const RayMatrix coupler = element_matrix(layout.elements.front());
  return coupler * backward * end * forward;
}

double optical_round_trip_length(const CavityLayout& layout) {
  layout.validate();
  double single_pass = 0.0;
  for (const auto& e : layout.elements) {
    if (const auto* g = std::get_if<Gap>(&e)) single_pass += g->length;
    if (const auto* s = std::get_if<Slab>(&e))
      single_pass += s->refractive_index * s->length;
  }
  return 2.0 * single_pass;
}

double free_spectral_range(const CavityLayout& layout) {
  return kSpeedOfLight / optical_round_trip_length(layout);
}

double finesse(double r1, double r2, double loss) {
  if (!(r1 > 0.0 && r1 <= 1.0) || !(r2 > 0.0 && r2 <= 1.0))
    throw DomainError("reflectivities must lie in (0, 1]");
  if (!(loss >= 0.0 && loss < 1.0))
    throw DomainError("round-trip loss must lie in [0, 1)");
  const double rho = std::sqrt(r1 * r2 * (1.0 - loss));
  if (!(rho < 1.0))
    throw DomainError("lossless perfectly reflective cavity has no finesse");
  return kPi * std::sqrt(rho) / (1.0 - rho);
}

double fwhm_linewidth(const CavityLayout& layout, double r1, double r2,
                      double loss) {
  return free_spectral_range(layout) / finesse(r1, r2, loss);
}

EigenmodeResult eigenmode(const CavityLayout& layout) {
  const RayMatrix m = round_trip_matrix(layout);
  EigenmodeResult result;
  result.stability_parameter = (m.trace() + 2.0) / 4.0;
  if (!(result.stability_parameter > 0.0 && result.stability_parameter < 1.0))
    throw InstabilityError(result.stability_parameter);

  // Self-consistent reduced beam parameter at the plane just after the
  // coupler: 1/q = (D - A)/(2B) - i sqrt(4 - (A+D)^2) / (2|B|).
  const double disc = std::sqrt(4.0 - m.trace() * m.trace());
  if (m.b == 0.0) throw LayoutError("degenerate round trip (B = 0)");
  const std::complex<double> inv_q((m.d - m.a) / (2.0 * m.b),
                                   -disc / (2.0 * std::abs(m.b)));
  std::complex<double> q = 1.0 / inv_q;

  const double lambda = layout.wavelength;
  auto spot = [&](const std::complex<double>& qr) {
    return std::sqrt(lambda / (kPi * (-std::imag(1.0 / qr))));
  };

  // Walk the single pass toward the end mirror looking for the plane of
  // minimum spot size; in a slab the physical step is n times the
  // reduced step.
  double best_w = spot(q);
  double best_pos = 0.0;
  double best_zr = std::imag(q);
  double pos = 0.0;
  for (std::size_t i = 1; i + 1 < layout.elements.size(); ++i) {
    const Element& e = layout.elements[i];
    double reduced = 0.0, scale = 1.0;
    if (const auto* g = std::get_if<Gap>(&e)) {
      reduced = g->length;
    } else if (const auto* s = std::get_if<Slab>(&e)) {
      reduced = s->length / s->refractive_index;
      scale = s->refractive_index;
    }
    if (reduced > 0.0) {
      const double z_waist = -std::real(q);
      if (z_waist > 0.0 && z_waist < reduced) {
        const std::complex<double> qw = q + z_waist;
        const double w = spot(qw);
        if (w < best_w) {
          best_w = w;
          best_pos = pos + scale * z_waist;
          best_zr = std::imag(qw);
        }
      }
      q += reduced;
      pos += scale * reduced;
    }
    const double end_w = spot(q);
    if (end_w < best_w) {
      best_w = end_w;
      best_pos = pos;
      best_zr = std::imag(q);
    }
  }

  result.waist_radius = best_w;
  result.waist_position = best_pos;
  result.rayleigh_range = best_zr;
  return result;
}

}  // namespace sqz
