#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "volpipe/geo.hpp"

namespace volpipe {

/// Header-indexed CSV reader. Handles RFC-4180 quoting and reads
/// gzip-compressed files transparently (zlib).
class CsvReader {
public:
  explicit CsvReader(const std::string& path);
  ~CsvReader();
  CsvReader(const CsvReader&) = delete;
  CsvReader& operator=(const CsvReader&) = delete;

  /// Column index for a header name, or -1 if absent.
  int col(const std::string& name) const;
  bool has_col(const std::string& name) const { return col(name) >= 0; }

  /// Reads the next record into `fields`. Returns false at end of file.
  bool next(std::vector<std::string>& fields);

  const std::vector<std::string>& header() const { return header_; }
  size_t line_number() const { return line_; }

private:
  bool read_line(std::string& out);

  void* gz_ = nullptr;  // gzFile
  std::vector<std::string> header_;
  std::unordered_map<std::string, int> col_index_;
  size_t line_ = 0;
  std::string pending_;
};

class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  void write_row(const std::vector<std::string>& fields);
  void flush() { out_.flush(); }

private:
  std::ofstream out_;
};

/// Splits one CSV record (quotes and embedded commas handled).
std::vector<std::string> split_csv_line(const std::string& line);

std::vector<GeoPoint> parse_wkt_linestring(const std::string& wkt);
std::string format_wkt_linestring(const std::vector<GeoPoint>& pts);

std::optional<double> parse_double_opt(const std::string& s);
std::optional<long long> parse_int_opt(const std::string& s);

/// Formats a double with enough digits to round-trip.
std::string fmt_double(double v);

}  // namespace volpipe
