// Copyright 2026 The refprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "refprice/tender_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

#include "refprice/error.h"

namespace refprice {

namespace {

// Bound checks on normalized deviations tolerate representation error of
// (x - E) / E at the thresholds.
constexpr double kBoundSlack = 1e-12;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double ParseNumber(std::string_view field, int line, const char* what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorKind::kParseError,
                std::string("bad ") + what + " value '" + std::string(field) + "'",
                line);
  }
  return value;
}

// Rounding step implied by a plain decimal field: "12.50" -> 0.01. Fields in
// exponent notation carry no step and give 0.
double DecimalStep(std::string_view field) {
  if (field.find_first_of("eE") != std::string_view::npos) return 0.0;
  const std::size_t dot = field.find('.');
  const int digits =
      dot == std::string_view::npos ? 0 : static_cast<int>(field.size() - dot - 1);
  return std::pow(10.0, -digits);
}

// Keeps the finest known step; "150" next to "149.99" is a cent price
// written without its trailing zeros.
void Refine(double& resolution, double step) {
  if (step > 0.0 && (resolution == 0.0 || step < resolution)) resolution = step;
}

// Reads the header and hands each nonblank data row to `row`.
template <typename RowFn>
int ReadCsv(std::istream& in, const std::vector<std::string_view>& header,
            RowFn row) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitFields(line);
    if (!have_header) {
      if (fields != header) {
        std::string expected;
        for (auto h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
        throw Error(ErrorKind::kParseError, "expected header '" + expected + "'",
                    line_no);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::kParseError,
                  "expected " + std::to_string(header.size()) + " columns", line_no);
    }
    row(fields, line_no);
    ++rows;
  }
  if (!have_header) throw Error(ErrorKind::kInvalidInput, "empty input file");
  if (rows == 0) throw Error(ErrorKind::kInvalidInput, "input has no data rows");
  return rows;
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot open " + path);
  return in;
}

}  // namespace

TenderIngest IngestTenders(std::istream& in, ContractKind kind) {
  TenderIngest result;
  std::map<std::string, std::size_t, std::less<>> index;
  const double lower = RelativeLowerThreshold(kind);
  const double upper = RelativeUpperThreshold(kind);
  result.rows_read = ReadCsv(
      in, {"tender_id", "estimate", "bid"},
      [&](const std::vector<std::string_view>& fields, int line) {
        const std::string id(fields[0]);
        if (id.empty()) throw Error(ErrorKind::kParseError, "empty tender_id", line);
        const double estimate = ParseNumber(fields[1], line, "estimate");
        const double bid = ParseNumber(fields[2], line, "bid");
        if (!(estimate > 0.0)) {
          throw Error(ErrorKind::kParseError, "estimate must be positive", line);
        }
        auto it = index.find(id);
        if (it == index.end()) {
          it = index.emplace(id, result.tenders.size()).first;
          result.tenders.push_back({id, estimate, {}, kind});
        } else if (result.tenders[it->second].estimate != estimate) {
          throw Error(ErrorKind::kParseError,
                      "estimate differs from earlier rows of tender " + id, line);
        }
        result.tenders[it->second].bids.push_back(bid);
        const double deviation = (bid - estimate) / estimate;
        if (deviation < lower - kBoundSlack || deviation > upper + kBoundSlack) {
          ++result.rows_dropped;
          return;
        }
        result.sample.deviations.push_back(deviation);
        result.sample.tender_ids.push_back(id);
        Refine(result.sample.resolution, DecimalStep(fields[2]) / estimate);
      });
  return result;
}

TenderIngest IngestTendersFile(const std::string& path, ContractKind kind) {
  std::ifstream in = OpenOrThrow(path);
  return IngestTenders(in, kind);
}

DeviationIngest IngestDeviations(std::istream& in, double lower, double upper) {
  DeviationIngest result;
  result.rows_read = ReadCsv(
      in, {"deviation"},
      [&](const std::vector<std::string_view>& fields, int line) {
        const double y = ParseNumber(fields[0], line, "deviation");
        if (y < lower - kBoundSlack || y > upper + kBoundSlack) {
          ++result.rows_dropped;
          return;
        }
        result.sample.deviations.push_back(y);
        Refine(result.sample.resolution, DecimalStep(fields[0]));
      });
  return result;
}

DeviationIngest IngestDeviationsFile(const std::string& path, double lower,
                                     double upper) {
  std::ifstream in = OpenOrThrow(path);
  return IngestDeviations(in, lower, upper);
}

std::string FormatPrice(double price, double precision) {
  char buffer[64];
  if (precision <= 0.0) {
    std::snprintf(buffer, sizeof buffer, "%.17g", price);
    return buffer;
  }
  const int digits =
      std::max(0, static_cast<int>(std::ceil(-std::log10(precision) - 1e-9)));
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, RoundToTick(price, precision));
  std::string out = buffer;
  if (out.find_first_not_of("-0.") == std::string::npos) out = out.substr(out[0] == '-');
  return out;
}

void WriteTenders(std::ostream& out, const std::vector<TenderRecord>& tenders,
                  double precision) {
  out << "tender_id,estimate,bid\n";
  for (const TenderRecord& t : tenders) {
    for (double bid : t.bids) {
      out << t.tender_id << ',' << FormatPrice(t.estimate, precision) << ','
          << FormatPrice(bid, precision) << '\n';
    }
  }
}

void WriteDeviations(std::ostream& out, const BidSample& sample,
                     double precision) {
  out << "deviation\n";
  for (double y : sample.deviations) out << FormatPrice(y, precision) << '\n';
}

std::vector<HistogramBin> Histogram(const BidSample& sample, int bins, double lo,
                                    double hi) {
  if (sample.deviations.empty()) {
    throw Error(ErrorKind::kInvalidInput, "histogram of an empty sample");
  }
  if (bins < 1 || !(lo < hi)) {
    throw Error(ErrorKind::kInvalidInput, "need bins >= 1 and lo < hi");
  }
  const double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].lo = lo + width * b;
    out[b].hi = b + 1 == bins ? hi : lo + width * (b + 1);
  }
  for (double y : sample.deviations) {
    if (y < lo || y > hi) continue;
    int b = static_cast<int>(std::floor((y - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    // Edge rounding: keep the half-open convention exact.
    while (b > 0 && y < out[b].lo) --b;
    while (b + 1 < bins && y >= out[b + 1].lo) ++b;
    ++out[b].count;
  }
  const double m = static_cast<double>(sample.size());
  for (HistogramBin& bin : out) bin.density = bin.count / (m * (bin.hi - bin.lo));
  return out;
}

void WriteHistogram(std::ostream& out, const std::vector<HistogramBin>& bins,
                    double precision) {
  out << "bin_lo,bin_hi,count,empirical_density\n";
  char density[64];
  for (const HistogramBin& bin : bins) {
    std::snprintf(density, sizeof density, "%.10g", bin.density);
    out << FormatPrice(bin.lo, precision) << ',' << FormatPrice(bin.hi, precision)
        << ',' << bin.count << ',' << density << '\n';
  }
}

}  // namespace refprice
