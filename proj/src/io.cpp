#include "spartan/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "spartan/errors.hpp"

namespace spartan {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& token, double& out) {
  const std::string t = trimmed(token);
  if (t.empty()) return false;
  const char* begin = t.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + t.size();
}

bool is_nan_token(const std::string& token) {
  const std::string t = trimmed(token);
  if (t.size() != 3) return false;
  return (t[0] == 'n' || t[0] == 'N') && (t[1] == 'a' || t[1] == 'A') &&
         (t[2] == 'n' || t[2] == 'N');
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SeriesFile read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open series file: " + path);
  }

  SeriesFile out;
  std::vector<double> times;
  std::vector<std::size_t> row_lines;
  std::string line;
  std::size_t lineno = 0;
  bool saw_data = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;

    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("expected \"time,value\" with a comma delimiter",
                       lineno);
    }
    const std::string time_tok = line.substr(0, comma);
    const std::string value_tok = line.substr(comma + 1);
    if (value_tok.find(',') != std::string::npos) {
      throw ParseError("expected exactly two comma-separated fields", lineno);
    }

    double t = 0.0;
    if (!parse_double(time_tok, t)) {
      if (!saw_data && out.header.empty()) {
        out.header = line;  // first unparseable row doubles as the header
        continue;
      }
      throw ParseError("cannot parse time field \"" + trimmed(time_tok) +
                           "\"",
                       lineno);
    }
    if (!std::isfinite(t)) {
      throw ParseError("time field must be finite", lineno);
    }

    double v = std::numeric_limits<double>::quiet_NaN();
    bool present = false;
    const std::string vt = trimmed(value_tok);
    if (!vt.empty() && !is_nan_token(vt)) {
      if (!parse_double(value_tok, v)) {
        throw ParseError("cannot parse value field \"" + vt + "\"", lineno);
      }
      if (!std::isfinite(v)) {
        throw ParseError(
            "non-finite value; use an empty field or NaN for missing data",
            lineno);
      }
      present = true;
    } else {
      v = std::numeric_limits<double>::quiet_NaN();
    }

    saw_data = true;
    times.push_back(t);
    row_lines.push_back(lineno);
    out.series.values.push_back(v);
    out.series.present.push_back(present ? 1 : 0);
    out.time_tokens.push_back(time_tok);
    out.value_tokens.push_back(value_tok);
  }

  const std::size_t n = times.size();
  if (n < 2) {
    throw InputError("series file " + path +
                     ": need at least 2 data rows to infer the step");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (times[i] <= times[i - 1]) {
      throw ParseError("duplicate or non-increasing time", row_lines[i]);
    }
  }
  // Strictly increasing times make the endpoint-inferred step positive.
  const double step = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = times[0] + static_cast<double>(i) * step;
    const double tol =
        1e-9 * std::max(std::abs(step), std::abs(expected));
    if (std::abs(times[i] - expected) > tol) {
      throw ParseError(
          "time does not lie on the regular grid (expected " +
              format17(expected) + ", got " + format17(times[i]) + ")",
          row_lines[i]);
    }
  }

  out.t0 = times[0];
  out.series.alpha = step;
  return out;
}

void write_series_csv(const std::string& path, const GappySeries& x,
                      double t0) {
  std::ofstream outf(path);
  if (!outf) {
    throw InputError("cannot write series file: " + path);
  }
  outf << "time,value\n";
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    outf << format17(t0 + static_cast<double>(i) * x.alpha) << ',';
    if (x.present[i]) outf << format17(x.values[i]);
    outf << '\n';
  }
  if (!outf) {
    throw InputError("error while writing series file: " + path);
  }
}

void write_filled_csv(const std::string& path, const SeriesFile& original,
                      const FilledSeries& filled) {
  const std::size_t n = original.series.values.size();
  if (filled.values.size() != n || filled.source.size() != n) {
    throw InputError("write_filled_csv: filled series length differs from "
                     "the source file");
  }
  std::ofstream outf(path);
  if (!outf) {
    throw InputError("cannot write series file: " + path);
  }
  outf << (original.header.empty() ? std::string("time,value")
                                   : original.header)
       << ",source\n";
  for (std::size_t i = 0; i < n; ++i) {
    outf << original.time_tokens[i] << ',';
    if (filled.source[i] == PointSource::observed) {
      outf << original.value_tokens[i] << ",observed\n";
    } else {
      outf << format17(filled.values[i]) << ",predicted\n";
    }
  }
  if (!outf) {
    throw InputError("error while writing series file: " + path);
  }
}

}  // namespace spartan
