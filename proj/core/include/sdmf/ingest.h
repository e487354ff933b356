// Copyright 2026 The sdmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDMF_INGEST_H_
#define SDMF_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sdmf/domain.h"

namespace sdmf {

struct RawRating {
  std::string user_id;
  std::string item_id;
  double value = 0.0;
  int64_t timestamp = 0;  // days since 1970-01-01
};

struct RawTrustEdge {
  std::string user_a;
  std::string user_b;
  int64_t timestamp = 0;  // days since 1970-01-01
};

enum class DateFormat {
  kIso,          // YYYY-MM-DD
  kDays,         // integer days since epoch
  kUnixSeconds,  // integer seconds since epoch, floored to days
};

// Describes a delimiter-separated input file. Column indices are zero-based.
// Ratings use user/item/value/date; trust uses user/item(as second user)/date.
struct FormatDescriptor {
  char delimiter = '\t';
  int user_column = 0;
  int second_column = 1;  // item id for ratings, user_b for trust
  int value_column = 2;   // ratings only
  int date_column = 3;
  DateFormat date_format = DateFormat::kIso;
  int skip_header_lines = 0;

  static FormatDescriptor RatingsTsv() { return {}; }
  static FormatDescriptor TrustTsv() {
    FormatDescriptor d;
    d.value_column = -1;
    d.date_column = 2;
    return d;
  }
};

// Outcome of a parse: the well-formed rows plus diagnostics for the rest.
template <typename Row>
struct ParseResult {
  std::vector<Row> rows;
  int64_t malformed = 0;
  // "line N: reason" for the first few malformed rows.
  std::vector<std::string> diagnostics;
};

// Blank lines and lines starting with '#' are ignored. Throws InputError if
// the file cannot be read or more than half of the data rows are malformed.
ParseResult<RawRating> ParseRatings(const std::filesystem::path& path,
                                    const FormatDescriptor& format =
                                        FormatDescriptor::RatingsTsv());

// Undirected de-duplication: (a, b) and (b, a) collapse into one edge that
// keeps the earliest timestamp. Self loops are counted as malformed.
ParseResult<RawTrustEdge> ParseTrust(const std::filesystem::path& path,
                                     const FormatDescriptor& format =
                                         FormatDescriptor::TrustTsv());

// Accepts ISO dates or plain integers (days since epoch).
std::vector<int64_t> ParseCutoffs(const std::filesystem::path& path);

int64_t ParseDate(const std::string& text, DateFormat format);

// Keeps ratings whose user has strictly more than `threshold` ratings.
std::vector<RawRating> FilterMinRatings(const std::vector<RawRating>& ratings,
                                        int threshold);

struct IdMap {
  std::vector<std::string> names;  // dense index -> id
  std::map<std::string, int> index;

  int size() const { return static_cast<int>(names.size()); }
};

struct BinnedData {
  RatingsTimeline ratings;
  TrustTimeline trust;
  IdMap users;
  IdMap items;
};

// Bin of a timestamp: the number of cutoffs <= timestamp.
int BinOf(int64_t timestamp, const std::vector<int64_t>& cutoffs);

// Users and items are the ones appearing in `ratings`, indexed in
// lexicographic id order. Trust edges touching unknown users are dropped.
// Duplicate (user, item) ratings in one bin keep the latest timestamp.
BinnedData BinTimelines(const std::vector<RawRating>& ratings,
                        const std::vector<RawTrustEdge>& edges,
                        const std::vector<int64_t>& cutoffs);

struct SplitTimeline {
  RatingsTimeline train;
  RatingsTimeline test;
  uint64_t seed = 0;
};

// Per bin, a seeded shuffle sends ceil(fraction * p_t) observations to train
// and the rest to test.
SplitTimeline SplitTrainTest(const RatingsTimeline& timeline, double fraction,
                             uint64_t seed);

// Canonical on-disk layout: ratings_bin_<t>.tsv, trust_bin_<t>.tsv,
// users.map, items.map, meta.txt.
void WriteCanonical(const std::filesystem::path& dir, const BinnedData& data);
BinnedData ReadCanonical(const std::filesystem::path& dir);

}  // namespace sdmf

#endif  // SDMF_INGEST_H_
