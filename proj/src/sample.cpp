#include "rockmodel/sample.hpp"

namespace rockmodel::sample {

GeoPoint origin() { return GeoPoint{48.7296, 7.3402, 0.0}; }

PlanarSubdivision plan() {
  PlanarSubdivision s{Plane::kPlanXY, {}};
  s.units.push_back({1, "Markenfels", {{0, 28}, {95, 30}, {90, 55}, {50, 62}, {10, 50}}, {}});
  s.units.push_back(
      {2, "Median Rock", {{95, 30}, {175, 32}, {170, 60}, {130, 70}, {100, 58}}, {}});
  s.units.push_back(
      {3, "Septentrional Rock", {{175, 32}, {255, 30}, {245, 55}, {200, 64}, {180, 50}}, {}});
  s.units.push_back({4,
                     "base rock bar",
                     {{0, 10}, {40, 0}, {230, 0}, {255, 15}, {255, 30}, {175, 32}, {95, 30}, {0, 28}},
                     {}});
  return s;
}

PlanarSubdivision profile() {
  PlanarSubdivision s{Plane::kProfileXZ, {}};
  s.units.push_back(
      {1, "lower layer", {{0, 420}, {255, 420}, {255, 433}, {128, 436}, {0, 438}}, {}});
  s.units.push_back({2,
                     "middle layer",
                     {{0, 438}, {128, 436}, {255, 433}, {255, 450}, {128, 453}, {0, 455}},
                     {}});
  s.units.push_back({3,
                     "upper layer",
                     {{0, 455}, {128, 453}, {255, 450}, {255, 462}, {200, 470}, {150, 462},
                      {100, 468}, {40, 466}, {0, 460}},
                     {}});
  return s;
}

Ring merged_footprint() {
  return {{0, 10},   {40, 0},   {230, 0},   {255, 15},  {255, 30},  {245, 55},
          {200, 64}, {180, 50}, {175, 32},  {170, 60},  {130, 70},  {100, 58},
          {95, 30},  {90, 55},  {50, 62},   {10, 50},   {0, 28}};
}

Ring merged_profile() {
  return {{0, 420},   {255, 420}, {255, 433}, {255, 450}, {255, 462}, {200, 470},
          {150, 462}, {100, 468}, {40, 466},  {0, 460},   {0, 455},   {0, 438}};
}

Palette palette() {
  return {{1, {139, 90, 60, 255}}, {2, {181, 140, 96, 255}}, {3, {214, 196, 160, 255}}};
}

}  // namespace rockmodel::sample
