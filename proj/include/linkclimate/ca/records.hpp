#pragma once

#include <optional>
#include <string>

#include "linkclimate/util/date.hpp"

namespace linkclimate::ca {

// One NOAA station as reported by the CDO stations endpoint.
struct StationRecord {
  std::string id;  // e.g. "GHCND:EI000003969"
  std::string name;
  double latitude = 0;
  double longitude = 0;
  std::optional<double> elevation;  // meters

  friend bool operator==(const StationRecord&, const StationRecord&) = default;
};

// One daily-summary value, in NOAA-reported units.
struct ObservationRecord {
  std::string station_id;
  std::string datatype_id;  // "TMAX", "PRCP", ...
  Date date;
  double value = 0;

  friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

}  // namespace linkclimate::ca
