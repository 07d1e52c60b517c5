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

#ifndef REFPRICE_TENDER_IO_H_
#define REFPRICE_TENDER_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "refprice/estimation.h"
#include "refprice/game.h"

namespace refprice {

struct TenderRecord {
  std::string tender_id;
  double estimate = 0.0;
  std::vector<double> bids;
  ContractKind contract_kind = ContractKind::kSuppliesServices;
};

// TenderCSV (`tender_id,estimate,bid`), rows grouped by tender in order of
// first appearance. Tender records keep every bid; the deviation sample
// keeps only bids inside the contract kind's admissible band and the rest
// are counted in rows_dropped.
struct TenderIngest {
  std::vector<TenderRecord> tenders;
  BidSample sample;
  int rows_read = 0;
  int rows_dropped = 0;
};

// DeviationCSV (`deviation`), rows outside [lower, upper] dropped.
struct DeviationIngest {
  BidSample sample;
  int rows_read = 0;
  int rows_dropped = 0;
};

TenderIngest IngestTenders(std::istream& in, ContractKind kind);
TenderIngest IngestTendersFile(const std::string& path, ContractKind kind);
DeviationIngest IngestDeviations(std::istream& in, double lower, double upper);
DeviationIngest IngestDeviationsFile(const std::string& path, double lower,
                                     double upper);

// Fixed-point decimal with as many digits as `precision` resolves
// (0.01 -> 2 digits). precision == 0 prints the shortest exact form.
std::string FormatPrice(double price, double precision);

void WriteTenders(std::ostream& out, const std::vector<TenderRecord>& tenders,
                  double precision);
void WriteDeviations(std::ostream& out, const BidSample& sample,
                     double precision);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  double density = 0.0;  // count / (M * width)
};

// Equal-width bins over [lo, hi]; the last bin is closed on the right.
std::vector<HistogramBin> Histogram(const BidSample& sample, int bins, double lo,
                                    double hi);
void WriteHistogram(std::ostream& out, const std::vector<HistogramBin>& bins,
                    double precision);

}  // namespace refprice

#endif  // REFPRICE_TENDER_IO_H_
