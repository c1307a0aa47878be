#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkclimate/ca/records.hpp"
#include "linkclimate/util/csv.hpp"
#include "linkclimate/util/date.hpp"
#include "linkclimate/util/error.hpp"
#include "linkclimate/util/text.hpp"

namespace linkclimate::noaa {

inline constexpr const char* default_api_base = "https://www.ncei.noaa.gov/cdo-web/api/v2";

enum class Endpoint { stations, data };

inline const char* to_string(Endpoint e) { return e == Endpoint::stations ? "stations" : "data"; }

// Ordered query parameters; "stationid" may repeat.
using QueryParams = std::vector<std::pair<std::string, std::string>>;

/// One CDO v2 request. Dates bound the stations endpoint too (stations with
/// data in the range).
struct CdoRequest {
  Endpoint endpoint = Endpoint::data;
  std::string dataset_id = "GHCND";
  std::optional<std::string> location_id;
  std::vector<std::string> station_ids;
  Date start_date;
  Date end_date;
  int limit = 1000;
  int offset = 1;
  std::string units = "metric";

  void validate() const {
    if (!start_date.ok()) throw ValidationError("startdate", "invalid date");
    if (!end_date.ok()) throw ValidationError("enddate", "invalid date");
    auto span = std::chrono::sys_days{end_date} - std::chrono::sys_days{start_date};
    if (span.count() < 0) throw ValidationError("startdate", "start date is after end date");
    if (span.count() > 365) throw ValidationError("enddate", "date range exceeds 365 days");
    if (limit < 1 || limit > 1000) throw ValidationError("limit", "must be within 1..1000");
    if (offset < 1) throw ValidationError("offset", "must be >= 1");
  }

  QueryParams params() const {
    QueryParams p{{"datasetid", dataset_id}};
    if (location_id) p.emplace_back("locationid", *location_id);
    for (const auto& id : station_ids) p.emplace_back("stationid", id);
    p.emplace_back("startdate", format_date(start_date));
    p.emplace_back("enddate", format_date(end_date));
    p.emplace_back("limit", std::to_string(limit));
    p.emplace_back("offset", std::to_string(offset));
    if (endpoint == Endpoint::data) p.emplace_back("units", units);
    return p;
  }

  // "data?datasetid=GHCND&..." used in logs and error messages.
  std::string descriptor() const {
    std::string out = to_string(endpoint);
    char sep = '?';
    for (const auto& [k, v] : params()) {
      out += sep;
      out += k + "=" + text::percent_encode(v);
      sep = '&';
    }
    return out;
  }
};

struct CdoPage {
  Endpoint endpoint = Endpoint::data;
  std::vector<ca::StationRecord> stations;
  std::vector<ca::ObservationRecord> observations;
  std::size_t total_count = 0;
  std::size_t offset = 1;
  std::size_t limit = 0;

  std::size_t size() const { return endpoint == Endpoint::stations ? stations.size() : observations.size(); }
};

// Any failure talking to CDO; carries the request descriptor.
class CdoError : public Error {
 public:
  CdoError(std::string descriptor, const std::string& message)
      : Error(message + (descriptor.empty() ? "" : " [" + descriptor + "]")), descriptor_(std::move(descriptor)) {}
  const std::string& descriptor() const noexcept { return descriptor_; }

 private:
  std::string descriptor_;
};

// HTTP 400 and other non-retryable 4xx responses.
class CdoRequestError : public CdoError {
 public:
  CdoRequestError(std::string descriptor, int status, const std::string& message)
      : CdoError(std::move(descriptor), "NOAA rejected the request (HTTP " + std::to_string(status) + "): " + message),
        status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class CdoCredentialError : public CdoError {
 public:
  using CdoError::CdoError;
};

class CdoTransportError : public CdoError {
 public:
  using CdoError::CdoError;
};

// Malformed payload. record_index is -1 for envelope-level problems.
class CdoParseError : public CdoError {
 public:
  CdoParseError(long record_index, std::string field, std::string detail, std::string descriptor = {})
      : CdoError(std::move(descriptor),
                 (record_index >= 0 ? "record " + std::to_string(record_index) + ", " : std::string()) + "field '" +
                     field + "': " + detail),
        record_index_(record_index),
        field_(std::move(field)),
        detail_(std::move(detail)) {}
  long record_index() const noexcept { return record_index_; }
  const std::string& field() const noexcept { return field_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  long record_index_;
  std::string field_;
  std::string detail_;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* field, long index) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) throw CdoParseError(index, field, "missing");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* field, long index) {
  const auto& v = require(obj, field, index);
  if (!v.is_string()) throw CdoParseError(index, field, "expected a string");
  return v.get<std::string>();
}

inline double require_number(const nlohmann::json& obj, const char* field, long index) {
  const auto& v = require(obj, field, index);
  if (v.is_number()) return v.get<double>();
  if (v.is_string())
    if (auto d = text::parse_number(v.get<std::string>())) return *d;
  throw CdoParseError(index, field, "expected a number");
}

// "2021-06-01T00:00:00" or "2021-06-01"
inline Date parse_cdo_date(const std::string& s, long index, const char* field) {
  std::string_view day = s;
  if (day.size() > 10 && day[10] == 'T') day = day.substr(0, 10);
  auto date = parse_date(day);
  if (!date) throw CdoParseError(index, field, "unparseable date '" + s + "'");
  return *date;
}

inline std::size_t resultset_field(const nlohmann::json& rs, const char* field, std::size_t fallback) {
  auto it = rs.find(field);
  if (it == rs.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 0) throw CdoParseError(-1, std::string("metadata.resultset.") + field, "expected a non-negative integer");
  return it->get<std::size_t>();
}

}  // namespace detail

/// Parses the CDO v2 JSON envelope. A document with no "results" is an
/// empty page (CDO answers "{}" when nothing matches).
inline CdoPage parse_cdo_payload(std::string_view body, Endpoint endpoint) {
  nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw CdoParseError(-1, "document", "not valid JSON");
  if (!doc.is_object()) throw CdoParseError(-1, "document", "expected a JSON object");

  CdoPage page;
  page.endpoint = endpoint;
  if (auto meta = doc.find("metadata"); meta != doc.end()) {
    if (!meta->is_object()) throw CdoParseError(-1, "metadata", "expected an object");
    auto rs = meta->find("resultset");
    if (rs == meta->end() || !rs->is_object()) throw CdoParseError(-1, "metadata.resultset", "missing");
    page.offset = detail::resultset_field(*rs, "offset", 1);
    page.total_count = detail::resultset_field(*rs, "count", 0);
    page.limit = detail::resultset_field(*rs, "limit", 0);
  }

  auto results = doc.find("results");
  if (results == doc.end()) {
    if (page.total_count != 0 && page.offset <= page.total_count)
      throw CdoParseError(-1, "results", "missing while metadata reports records");
    return page;
  }
  if (!results->is_array()) throw CdoParseError(-1, "results", "expected an array");

  long index = 0;
  for (const auto& row : *results) {
    if (!row.is_object()) throw CdoParseError(index, "record", "expected an object");
    if (endpoint == Endpoint::stations) {
      ca::StationRecord s;
      s.id = detail::require_string(row, "id", index);
      s.name = detail::require_string(row, "name", index);
      s.latitude = detail::require_number(row, "latitude", index);
      s.longitude = detail::require_number(row, "longitude", index);
      if (auto e = row.find("elevation"); e != row.end() && !e->is_null())
        s.elevation = detail::require_number(row, "elevation", index);
      page.stations.push_back(std::move(s));
    } else {
      ca::ObservationRecord o;
      o.station_id = detail::require_string(row, "station", index);
      o.datatype_id = detail::require_string(row, "datatype", index);
      o.date = detail::parse_cdo_date(detail::require_string(row, "date", index), index, "date");
      o.value = detail::require_number(row, "value", index);
      page.observations.push_back(std::move(o));
    }
    ++index;
  }
  if (page.limit == 0) page.limit = page.size();
  if (page.total_count == 0 && page.size() > 0) page.total_count = page.size();
  return page;
}

/// Parses a NOAA CSV export in either shape:
///   wide:   STATION,[NAME,...],DATE,TMAX,TMIN,...   (one value per non-blank cell)
///   narrow: station,datatype,date,value             (one value per row)
/// Station ids without a dataset prefix get id_prefix ("GHCND:").
inline std::vector<ca::ObservationRecord> parse_cdo_csv(std::string_view body, std::string_view id_prefix = "GHCND:") {
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(body);
  } catch (const SyntaxError& e) {
    throw CdoParseError(static_cast<long>(e.line()) - 2, "csv", e.what());
  }
  if (rows.empty()) throw CdoParseError(-1, "header", "empty document");

  const csv::Row& header = rows.front();
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (text::iequals(text::trim(header[i]), name)) return i;
    return std::nullopt;
  };
  auto station_of = [&](std::string id) {
    if (id.find(':') == std::string::npos) id = std::string(id_prefix) + id;
    return id;
  };

  std::vector<ca::ObservationRecord> out;
  auto station_col = column("station"), date_col = column("date");
  auto datatype_col = column("datatype"), value_col = column("value");

  auto cell = [&](const csv::Row& row, std::size_t i, long index, const std::string& field) -> std::string {
    if (i >= row.size()) throw CdoParseError(index, field, "row has too few columns");
    return std::string(text::trim(row[i]));
  };

  if (station_col && date_col && datatype_col && value_col) {
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      long index = static_cast<long>(r - 1);
      if (row.size() == 1 && text::trim(row[0]).empty()) continue;
      std::string value = cell(row, *value_col, index, "value");
      if (value.empty()) continue;
      ca::ObservationRecord o;
      o.station_id = cell(row, *station_col, index, "station");
      if (o.station_id.empty()) throw CdoParseError(index, "station", "missing");
      o.station_id = station_of(std::move(o.station_id));
      o.datatype_id = cell(row, *datatype_col, index, "datatype");
      o.date = detail::parse_cdo_date(cell(row, *date_col, index, "date"), index, "date");
      auto v = text::parse_number(value);
      if (!v) throw CdoParseError(index, "value", "not a number: '" + value + "'");
      o.value = *v;
      if (o.datatype_id.empty()) throw CdoParseError(index, "datatype", "missing");
      out.push_back(std::move(o));
    }
    return out;
  }

  static const char* const metadata_columns[] = {"STATION", "NAME", "LATITUDE", "LONGITUDE", "ELEVATION", "DATE"};
  std::vector<std::pair<std::size_t, std::string>> datatype_columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = text::to_upper(text::trim(header[i]));
    if (name.empty() || std::find(std::begin(metadata_columns), std::end(metadata_columns), name) != std::end(metadata_columns))
      continue;
    if (name.size() > 11 && name.ends_with("_ATTRIBUTES")) continue;
    if (!std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isupper(c) || std::isdigit(c); }))
      continue;
    datatype_columns.emplace_back(i, name);
  }
  if (!station_col || !date_col || datatype_columns.empty())
    throw CdoParseError(-1, "header",
                        "unrecognized CSV shape; expected wide (STATION,DATE,<datatype>...) "
                        "or narrow (station,datatype,date,value)");

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    long index = static_cast<long>(r - 1);
    if (row.size() == 1 && text::trim(row[0]).empty()) continue;
    std::string station = cell(row, *station_col, index, "STATION");
    if (station.empty()) throw CdoParseError(index, "STATION", "missing");
    station = station_of(std::move(station));
    Date date = detail::parse_cdo_date(cell(row, *date_col, index, "DATE"), index, "DATE");
    for (const auto& [i, datatype] : datatype_columns) {
      if (i >= row.size()) continue;
      std::string value(text::trim(row[i]));
      if (value.empty()) continue;
      auto v = text::parse_number(value);
      if (!v) throw CdoParseError(index, datatype, "not a number: '" + value + "'");
      out.push_back({station, datatype, date, *v});
    }
  }
  return out;
}

}  // namespace linkclimate::noaa
