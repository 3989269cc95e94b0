#pragma once

#include <string>
#include <vector>

#include "spartan/predict.hpp"
#include "spartan/series.hpp"

namespace spartan {

// A series file as read from disk: rows of "time,value" with an optional
// header, comma delimiter, and missing values written as an empty field or a
// NaN token. Raw tokens are preserved so observed rows can be written back
// byte-identically.
struct SeriesFile {
  GappySeries series;
  double t0 = 0.0;  // first time stamp
  std::string header;                        // empty when the file had none
  std::vector<std::string> time_tokens;      // original time text per row
  std::vector<std::string> value_tokens;     // original value text per row
};

// Parse a CSV series file. The times must form an arithmetic progression
// within relative tolerance 1e-9 of the inferred step; duplicates and
// non-increasing times are rejected. Throws ParseError with the offending
// line number.
SeriesFile read_series_csv(const std::string& path);

// Write "time,value" rows with a header, 17 significant digits, missing
// values as empty fields.
void write_series_csv(const std::string& path, const GappySeries& x,
                      double t0);

// Write a filled series next to its source file: time and observed values
// reuse the original tokens byte for byte, predicted values are printed with
// 17 significant digits, and a third column tags each row observed/predicted.
void write_filled_csv(const std::string& path, const SeriesFile& original,
                      const FilledSeries& filled);

}  // namespace spartan
