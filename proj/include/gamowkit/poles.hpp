#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gamowkit/model.hpp"

namespace gamowkit {

enum class PoleClass { Bound, Virtual, Resonance, AntiResonance };

std::string_view to_string(PoleClass cls) noexcept;

struct PoleRecord {
  Complex k;
  PoleClass cls = PoleClass::Resonance;
  bool proper = false;     // Re k > |Im k|, only ever set for resonances
  Complex dDdk;            // dispersion derivative at k
  double residual = 0.0;   // |D(k)|
  int newton_iterations = 0;
};

struct SearchRegion {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  int depth = 24;  // maximum subdivision depth of find_poles
};

/// Throws AmbiguousOnAxis when both components are below 1e-12.
PoleClass classify_pole(Complex k);
bool is_proper(Complex k);

/// Accepted |D(k)| for a refined zero: 1e-10 plus the roundoff floor
/// 64 eps |k| |D'(k)|, which only matters far out in the plane.
double pole_residual_tolerance(const PotentialModel& model, Complex k);

/// Rectangle [-0.01/L, 15 pi/L] x [-3/L, 5/L]i with L the model range (for
/// the delta barrier, L = 2/|lambda|, the inverse depth of its single pole).
SearchRegion default_region(const PotentialModel& model);

/// Number of zeros of pole_function(model, .) inside the rectangle, from the
/// winding of its phase along the boundary. A zero on the boundary triggers
/// one outward nudge of the rectangle before ZeroOnBoundary is raised.
int count_zeros(const PotentialModel& model, const SearchRegion& region);

/// All zeros inside the region, refined by Newton to |D| < 1e-10, deduplicated
/// and sorted by (Re k, Im k). Columns of the region are searched on up to
/// `threads` workers (0 = all cores); the result does not depend on it.
std::vector<PoleRecord> find_poles(const PotentialModel& model, const SearchRegion& region,
                                   int threads = 1);

/// Builds the record for an already refined zero.
PoleRecord make_pole_record(const PotentialModel& model, Complex k, int newton_iterations = 0);

/// The n fourth-quadrant poles of smallest Re k, found by growing the search
/// rectangle until the selection is stable against deepening it.
std::vector<PoleRecord> first_resonances(const PotentialModel& model, int n, int threads = 1);

/// Zeros inside an arbitrary closed polygon (vertices in order, closed implicitly).
int count_zeros_in_polygon(const PotentialModel& model, const std::vector<Complex>& vertices);

/// Bound states (zeros on the positive imaginary axis) of a radial model.
std::vector<PoleRecord> bound_states(const PotentialModel& model);

/// Mirror partner -k* of a resonance (an anti-resonance record).
PoleRecord mirror_pole(const PotentialModel& model, const PoleRecord& pole);

std::string poles_to_csv(const std::vector<PoleRecord>& poles);
std::string poles_to_json(const std::vector<PoleRecord>& poles);

}  // namespace gamowkit
