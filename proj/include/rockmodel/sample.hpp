#pragma once

#include "rockmodel/geo_frame.hpp"
#include "rockmodel/kml_io.hpp"
#include "rockmodel/wireframe.hpp"

// Bundled Haut-Barr example: four rock-mass footprints and three layers,
// in meters of the local frame anchored at the south-west corner.
namespace rockmodel::sample {

inline constexpr double kMaxAlt = 470.0;
inline constexpr double kTerrainAlt = 425.0;
inline constexpr double kUndergroundPad = 5.0;

// Illustrative origin near Saverne, not a surveyed position. Altitude 0 keeps
// local up equal to geodetic altitude.
GeoPoint origin();

PlanarSubdivision plan();
PlanarSubdivision profile();

// Outer boundaries of the union of plan units and of profile units.
Ring merged_footprint();
Ring merged_profile();

Palette palette();

}  // namespace rockmodel::sample
