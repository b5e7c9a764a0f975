#pragma once

#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

#include "sqz/errors.hpp"

namespace sqz {

// Optical elements of a standing-wave resonator, listed once from the
// coupling mirror to the end mirror. Matrices use the reduced-angle
// convention: a slab of length d and index n propagates as d/n, a flat
// interface is the identity, and a mirror immersed in index n has an
// effective radius of curvature roc/n.

struct Gap {
  double length = 0.0;  // m
};

struct Slab {
  double length = 0.0;            // m, physical
  double refractive_index = 1.0;  // n >= 1
};

struct CurvedMirror {
  // Radius of curvature in meters, concave toward the beam positive.
  // Infinity means a flat mirror.
  double roc = std::numeric_limits<double>::infinity();
  double power_reflectivity = 1.0;
  double immersed_index = 1.0;  // index of the medium facing the mirror
};

struct FlatInterface {};

using Element = std::variant<Gap, Slab, CurvedMirror, FlatInterface>;

struct CavityLayout {
  std::vector<Element> elements;  // coupler first, end mirror last
  double wavelength = 0.0;        // m, vacuum

  void validate() const;
  const CurvedMirror& coupler() const;
  const CurvedMirror& end_mirror() const;
};

struct EigenmodeResult {
  double waist_radius = 0.0;        // w0, m
  double waist_position = 0.0;      // m from the coupler, physical path
  double stability_parameter = 0.0; // (A + D + 2) / 4, stable in (0, 1)
  double rayleigh_range = 0.0;      // m (reduced path)
};

// 2x2 real ray-transfer matrix.
struct RayMatrix {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  RayMatrix operator*(const RayMatrix& rhs) const;
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
};

RayMatrix element_matrix(const Element& e);

// Round-trip matrix starting at the intra-cavity plane just after the
// coupler, heading toward the end mirror.
RayMatrix round_trip_matrix(const CavityLayout& layout);

// Resonator eigenmode via the self-consistent Gaussian beam parameter.
// Throws InstabilityError if the stability parameter leaves (0, 1).
EigenmodeResult eigenmode(const CavityLayout& layout);

// Optical round-trip path length 2 * sum(n_i d_i) in meters.
double optical_round_trip_length(const CavityLayout& layout);

// FSR = c / optical round-trip length.
double free_spectral_range(const CavityLayout& layout);

// Airy finesse pi sqrt(rho) / (1 - rho) with
// rho = sqrt(r1 r2 (1 - loss)).
double finesse(double r1, double r2, double loss);

// FWHM = FSR / finesse.
double fwhm_linewidth(const CavityLayout& layout, double r1, double r2,
                      double loss);

}  // namespace sqz
