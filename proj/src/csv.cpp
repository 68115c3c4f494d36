#include "volpipe/csv.hpp"

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>

#include "volpipe/errors.hpp"

namespace volpipe {

CsvReader::CsvReader(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");  // reads plain files too
  if (!f) throw InputError("cannot open file: " + path);
  gz_ = f;
  std::string line;
  if (!read_line(line)) throw InputError("empty file (missing header row): " + path);
  header_ = split_csv_line(line);
  for (size_t i = 0; i < header_.size(); ++i) {
    // strip UTF-8 BOM on the first column if present
    if (i == 0 && header_[i].size() >= 3 && (unsigned char)header_[i][0] == 0xEF) {
      header_[i].erase(0, 3);
    }
    col_index_[header_[i]] = static_cast<int>(i);
  }
}

CsvReader::~CsvReader() {
  if (gz_) gzclose(static_cast<gzFile>(gz_));
}

int CsvReader::col(const std::string& name) const {
  auto it = col_index_.find(name);
  return it == col_index_.end() ? -1 : it->second;
}

bool CsvReader::read_line(std::string& out) {
  out.clear();
  char buf[65536];
  gzFile f = static_cast<gzFile>(gz_);
  bool got = false;
  while (gzgets(f, buf, sizeof(buf)) != nullptr) {
    got = true;
    out += buf;
    if (!out.empty() && out.back() == '\n') break;
  }
  if (!got) return false;
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  ++line_;
  return true;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  do {
    if (!read_line(line)) return false;
  } while (line.empty());
  fields = split_csv_line(line);
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw InputError("cannot open file for writing: " + path);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") != std::string::npos) {
      out_ << '"';
      for (char c : f) {
        if (c == '"') out_ << "\"\"";
        else out_ << c;
      }
      out_ << '"';
    } else {
      out_ << f;
    }
  }
  out_ << '\n';
}

std::vector<GeoPoint> parse_wkt_linestring(const std::string& wkt) {
  // Expected form: LINESTRING (lon lat, lon lat, ...)
  size_t open = wkt.find('(');
  size_t close = wkt.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close <= open) {
    throw InputError("malformed WKT linestring: " + wkt);
  }
  std::vector<GeoPoint> pts;
  std::string body = wkt.substr(open + 1, close - open - 1);
  size_t pos = 0;
  while (pos < body.size()) {
    size_t end = body.find(',', pos);
    if (end == std::string::npos) end = body.size();
    std::string pair = body.substr(pos, end - pos);
    double lon = 0, lat = 0;
    if (std::sscanf(pair.c_str(), " %lf %lf", &lon, &lat) != 2) {
      throw InputError("malformed WKT coordinate: " + pair);
    }
    pts.push_back({lat, lon});
    pos = end + 1;
  }
  if (pts.size() < 2) throw InputError("WKT linestring needs at least 2 points: " + wkt);
  return pts;
}

std::string format_wkt_linestring(const std::vector<GeoPoint>& pts) {
  std::string out = "LINESTRING (";
  char buf[64];
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    std::snprintf(buf, sizeof(buf), "%.9f %.9f", pts[i].lon, pts[i].lat);
    out += buf;
  }
  out += ")";
  return out;
}

std::optional<double> parse_double_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && std::isspace((unsigned char)*b)) ++b;
  while (e > b && std::isspace((unsigned char)e[-1])) --e;
  if (b == e) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) return std::nullopt;
  return v;
}

std::optional<long long> parse_int_opt(const std::string& s) {
  auto d = parse_double_opt(s);
  if (!d) return std::nullopt;
  long long v = static_cast<long long>(*d);
  if (static_cast<double>(v) != *d) return std::nullopt;
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // shorten when a shorter form round-trips
  for (int prec = 1; prec <= 16; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back = 0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

}  // namespace volpipe
