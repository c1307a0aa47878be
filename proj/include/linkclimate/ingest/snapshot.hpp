#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "linkclimate/rdf/ntriples.hpp"
#include "linkclimate/util/log.hpp"

namespace linkclimate::ingest {

/// Writes sorted N-Triples to "<path>.tmp" and renames it over path, so
/// the file at path is always a complete snapshot.
inline void save_snapshot(const rdf::Graph& graph, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write snapshot " + tmp.string());
    const std::string body = rdf::serialize_ntriples(graph);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.flush();
    if (!out) throw Error("short write on snapshot " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot replace snapshot " + path.string() + ": " + ec.message());
  }
}

/// A missing file (or an empty path) is an empty graph. A corrupt file
/// throws the parser's SyntaxError; nothing is partially loaded.
inline rdf::Graph load_snapshot(const std::filesystem::path& path, const LogSink& log = {}) {
  if (path.empty()) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) {
      if (log) log(LogLevel::info, "snapshot " + path.string() + " not found; starting with an empty graph");
      return {};
    }
    throw Error("cannot read snapshot " + path.string());
  }
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return rdf::parse_ntriples(body);
}

}  // namespace linkclimate::ingest
