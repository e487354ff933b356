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

#include "sdmf/ingest.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "sdmf/io_util.h"
#include "sdmf/random.h"

namespace sdmf {

namespace fs = std::filesystem;

namespace {

constexpr size_t kMaxDiagnostics = 10;

std::vector<std::string> SplitFields(const std::string& line, char delim) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t\r");
    const auto last = f.find_last_not_of(" \t\r");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

std::optional<int64_t> ParseInt(const std::string& s) {
  int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> ParseReal(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Iterates the data lines of a text file, invoking `row` with (line number,
// fields). `row` returns an error string for malformed rows, empty otherwise.
template <typename Row>
ParseResult<Row> ParseLines(
    const fs::path& path, const FormatDescriptor& format,
    const std::function<std::string(const std::vector<std::string>&,
                                    std::vector<Row>&)>& row) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path.string());
  ParseResult<Row> result;
  std::string line;
  int64_t line_no = 0;
  int64_t data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= format.skip_header_lines) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') continue;
    ++data_rows;
    const std::string error = row(SplitFields(line, format.delimiter), result.rows);
    if (!error.empty()) {
      ++result.malformed;
      if (result.diagnostics.size() < kMaxDiagnostics) {
        result.diagnostics.push_back(path.string() + ":" +
                                     std::to_string(line_no) + ": " + error);
      }
    }
  }
  if (data_rows > 0 && 2 * result.malformed > data_rows) {
    std::string msg = path.string() + ": " + std::to_string(result.malformed) +
                      " of " + std::to_string(data_rows) +
                      " rows malformed (format mismatch?)";
    if (!result.diagnostics.empty()) msg += "; first: " + result.diagnostics[0];
    throw InputError(msg);
  }
  return result;
}

int MaxColumn(std::initializer_list<int> cols) {
  return *std::max_element(cols.begin(), cols.end());
}

}  // namespace

int64_t ParseDate(const std::string& text, DateFormat format) {
  switch (format) {
    case DateFormat::kDays: {
      auto v = ParseInt(text);
      if (!v) throw InputError("bad day count '" + text + "'");
      return *v;
    }
    case DateFormat::kUnixSeconds: {
      auto v = ParseInt(text);
      if (!v) throw InputError("bad unix timestamp '" + text + "'");
      // Floor division so pre-epoch seconds land on the right day.
      return *v >= 0 ? *v / 86400 : -((-*v + 86399) / 86400);
    }
    case DateFormat::kIso: {
      std::string s = text;
      if (s.size() > 10 && (s[10] == 'T' || s[10] == ' ')) s.resize(10);
      if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        throw InputError("bad ISO date '" + text + "'");
      }
      auto y = ParseInt(s.substr(0, 4));
      auto mo = ParseInt(s.substr(5, 2));
      auto d = ParseInt(s.substr(8, 2));
      if (!y || !mo || !d) throw InputError("bad ISO date '" + text + "'");
      using namespace std::chrono;
      const year_month_day ymd{year{static_cast<int>(*y)},
                               month{static_cast<unsigned>(*mo)},
                               day{static_cast<unsigned>(*d)}};
      if (!ymd.ok()) throw InputError("invalid calendar date '" + text + "'");
      return sys_days{ymd}.time_since_epoch().count();
    }
  }
  throw InputError("unknown date format");
}

ParseResult<RawRating> ParseRatings(const fs::path& path,
                                    const FormatDescriptor& format) {
  const int needed = MaxColumn({format.user_column, format.second_column,
                                format.value_column, format.date_column}) + 1;
  return ParseLines<RawRating>(
      path, format,
      [&](const std::vector<std::string>& f, std::vector<RawRating>& rows) {
        if (static_cast<int>(f.size()) < needed) {
          return std::string("expected at least ") + std::to_string(needed) +
                 " fields, got " + std::to_string(f.size());
        }
        RawRating r;
        r.user_id = f[format.user_column];
        r.item_id = f[format.second_column];
        if (r.user_id.empty() || r.item_id.empty()) return std::string("empty id");
        auto value = ParseReal(f[format.value_column]);
        if (!value) return "bad rating value '" + f[format.value_column] + "'";
        r.value = *value;
        try {
          r.timestamp = ParseDate(f[format.date_column], format.date_format);
        } catch (const InputError& e) {
          return std::string(e.what());
        }
        rows.push_back(std::move(r));
        return std::string();
      });
}

ParseResult<RawTrustEdge> ParseTrust(const fs::path& path,
                                     const FormatDescriptor& format) {
  const int needed =
      MaxColumn({format.user_column, format.second_column, format.date_column}) + 1;
  std::map<std::pair<std::string, std::string>, size_t> seen;
  auto result = ParseLines<RawTrustEdge>(
      path, format,
      [&](const std::vector<std::string>& f, std::vector<RawTrustEdge>& rows) {
        if (static_cast<int>(f.size()) < needed) {
          return std::string("expected at least ") + std::to_string(needed) +
                 " fields, got " + std::to_string(f.size());
        }
        RawTrustEdge e;
        e.user_a = f[format.user_column];
        e.user_b = f[format.second_column];
        if (e.user_a.empty() || e.user_b.empty()) return std::string("empty id");
        if (e.user_a == e.user_b) return std::string("self loop");
        try {
          e.timestamp = ParseDate(f[format.date_column], format.date_format);
        } catch (const InputError& err) {
          return std::string(err.what());
        }
        auto key = std::minmax(e.user_a, e.user_b);
        auto [it, inserted] =
            seen.emplace(std::make_pair(key.first, key.second), rows.size());
        if (inserted) {
          rows.push_back(std::move(e));
        } else {
          auto& kept = rows[it->second];
          kept.timestamp = std::min(kept.timestamp, e.timestamp);
        }
        return std::string();
      });
  return result;
}

std::vector<int64_t> ParseCutoffs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path.string());
  std::vector<int64_t> cutoffs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitFields(line, '\t');
    if (fields[0].empty() || fields[0][0] == '#') continue;
    int64_t value;
    if (auto v = ParseInt(fields[0])) {
      value = *v;
    } else {
      try {
        value = ParseDate(fields[0], DateFormat::kIso);
      } catch (const InputError& e) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                         e.what());
      }
    }
    if (!cutoffs.empty() && value <= cutoffs.back()) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": cutoffs must be strictly increasing");
    }
    cutoffs.push_back(value);
  }
  return cutoffs;
}

std::vector<RawRating> FilterMinRatings(const std::vector<RawRating>& ratings,
                                        int threshold) {
  if (threshold < 0) throw InputError("min-ratings threshold must be >= 0");
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& r : ratings) ++counts[r.user_id];
  std::vector<RawRating> kept;
  kept.reserve(ratings.size());
  for (const auto& r : ratings) {
    if (counts[r.user_id] > threshold) kept.push_back(r);
  }
  return kept;
}

int BinOf(int64_t timestamp, const std::vector<int64_t>& cutoffs) {
  return static_cast<int>(
      std::upper_bound(cutoffs.begin(), cutoffs.end(), timestamp) -
      cutoffs.begin());
}

BinnedData BinTimelines(const std::vector<RawRating>& ratings,
                        const std::vector<RawTrustEdge>& edges,
                        const std::vector<int64_t>& cutoffs) {
  for (size_t i = 1; i < cutoffs.size(); ++i) {
    if (cutoffs[i] <= cutoffs[i - 1]) {
      throw InputError("cutoffs must be strictly increasing");
    }
  }
  const int num_bins = static_cast<int>(cutoffs.size()) + 1;

  BinnedData out;
  auto build_map = [](IdMap& map) {
    int next = 0;
    for (auto& [name, idx] : map.index) {
      idx = next++;
      map.names.push_back(name);
    }
  };
  for (const auto& r : ratings) {
    out.users.index.emplace(r.user_id, 0);
    out.items.index.emplace(r.item_id, 0);
  }
  build_map(out.users);
  build_map(out.items);

  // (bin, user, item) -> position in `latest`; ties on timestamp keep the
  // later row.
  struct Kept {
    RatingObservation obs;
    int64_t timestamp;
  };
  std::map<std::tuple<int, int, int>, Kept> latest;
  for (const auto& r : ratings) {
    const int t = BinOf(r.timestamp, cutoffs);
    const int u = out.users.index.at(r.user_id);
    const int j = out.items.index.at(r.item_id);
    Kept k{{u, j, r.value, t}, r.timestamp};
    auto [it, inserted] = latest.emplace(std::make_tuple(t, u, j), k);
    if (!inserted && r.timestamp >= it->second.timestamp) it->second = k;
  }
  std::vector<std::vector<RatingObservation>> bins(num_bins);
  for (const auto& [key, kept] : latest) bins[std::get<0>(key)].push_back(kept.obs);
  out.ratings =
      RatingsTimeline(out.users.size(), out.items.size(), std::move(bins));

  std::map<std::pair<int, int>, int> first_bin;
  for (const auto& e : edges) {
    auto ia = out.users.index.find(e.user_a);
    auto ib = out.users.index.find(e.user_b);
    if (ia == out.users.index.end() || ib == out.users.index.end()) continue;
    if (ia->second == ib->second) continue;
    auto key = std::minmax(ia->second, ib->second);
    const int t = BinOf(e.timestamp, cutoffs);
    auto [it, inserted] = first_bin.emplace(key, t);
    if (!inserted) it->second = std::min(it->second, t);
  }
  std::vector<std::vector<WeightedEdge>> graphs(num_bins);
  for (const auto& [key, t0] : first_bin) {
    for (int t = t0; t < num_bins; ++t) {
      graphs[t].push_back({key.first, key.second, 1.0});
    }
  }
  out.trust = TrustTimeline(out.users.size(), std::move(graphs));
  return out;
}

SplitTimeline SplitTrainTest(const RatingsTimeline& timeline, double fraction,
                             uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InputError("split fraction must lie in (0, 1)");
  }
  std::vector<std::vector<RatingObservation>> train(timeline.num_bins());
  std::vector<std::vector<RatingObservation>> test(timeline.num_bins());
  for (int t = 0; t < timeline.num_bins(); ++t) {
    const auto& obs = timeline.bin(t);
    std::vector<size_t> order(obs.size());
    for (size_t l = 0; l < order.size(); ++l) order[l] = l;
    Rng rng(MixSeed(seed, static_cast<uint64_t>(t)));
    FisherYatesShuffle(order, rng);
    // Guard against fraction * p landing a hair above an integer.
    const auto n_train = static_cast<size_t>(
        std::ceil(fraction * static_cast<double>(obs.size()) - 1e-9));
    for (size_t l = 0; l < order.size(); ++l) {
      (l < n_train ? train[t] : test[t]).push_back(obs[order[l]]);
    }
  }
  SplitTimeline split;
  split.train = RatingsTimeline(timeline.num_users(), timeline.num_items(),
                                std::move(train));
  split.test = RatingsTimeline(timeline.num_users(), timeline.num_items(),
                               std::move(test));
  split.seed = seed;
  return split;
}

void WriteCanonical(const fs::path& dir, const BinnedData& data) {
  fs::create_directories(dir);
  const auto& r = data.ratings;
  for (int t = 0; t < r.num_bins(); ++t) {
    std::ofstream out(dir / ("ratings_bin_" + std::to_string(t) + ".tsv"));
    for (const auto& o : r.bin(t)) {
      out << o.user << '\t' << o.item << '\t' << FormatReal(o.value) << '\n';
    }
    if (!out) throw InputError("failed writing ratings bin " + std::to_string(t));
  }
  for (int t = 0; t < data.trust.num_bins(); ++t) {
    std::ofstream out(dir / ("trust_bin_" + std::to_string(t) + ".tsv"));
    for (const auto& e : data.trust.edges(t)) {
      out << e.a << '\t' << e.b;
      if (e.weight != 1.0) out << '\t' << FormatReal(e.weight);
      out << '\n';
    }
    if (!out) throw InputError("failed writing trust bin " + std::to_string(t));
  }
  auto write_map = [&](const char* name, const IdMap& map) {
    std::vector<int> order(map.names.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return map.names[a] < map.names[b]; });
    std::ofstream out(dir / name);
    for (int i : order) out << map.names[i] << '\t' << i << '\n';
    if (!out) throw InputError(std::string("failed writing ") + name);
  };
  write_map("users.map", data.users);
  write_map("items.map", data.items);

  std::ofstream meta(dir / "meta.txt");
  meta << "m " << r.num_users() << '\n'
       << "n " << r.num_items() << '\n'
       << "N " << r.num_bins() << '\n'
       << "p";
  for (int p : r.counts()) meta << ' ' << p;
  meta << "\nedges";
  for (int t = 0; t < data.trust.num_bins(); ++t) {
    meta << ' ' << data.trust.edges(t).size();
  }
  meta << '\n';
  if (!meta) throw InputError("failed writing meta.txt");
}

BinnedData ReadCanonical(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.txt";
  std::ifstream meta(meta_path);
  if (!meta) throw InputError("cannot read file: " + meta_path.string());
  int m = -1, n = -1, num_bins = -1;
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "m") ss >> m;
    if (key == "n") ss >> n;
    if (key == "N") ss >> num_bins;
  }
  if (m < 0 || n < 0 || num_bins < 0) {
    throw InputError(meta_path.string() + ": missing m, n or N");
  }

  auto read_lines = [](const fs::path& path, auto&& fn) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read file: " + path.string());
    std::string l;
    int line_no = 0;
    while (std::getline(in, l)) {
      ++line_no;
      if (l.empty()) continue;
      auto f = SplitFields(l, '\t');
      if (!fn(f)) {
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": malformed line");
      }
    }
  };

  BinnedData data;
  std::vector<std::vector<RatingObservation>> bins(num_bins);
  std::vector<std::vector<WeightedEdge>> graphs(num_bins);
  for (int t = 0; t < num_bins; ++t) {
    read_lines(dir / ("ratings_bin_" + std::to_string(t) + ".tsv"),
               [&](const std::vector<std::string>& f) {
                 if (f.size() < 3) return false;
                 auto u = ParseInt(f[0]);
                 auto j = ParseInt(f[1]);
                 auto v = ParseReal(f[2]);
                 if (!u || !j || !v) return false;
                 bins[t].push_back({static_cast<int>(*u), static_cast<int>(*j), *v, t});
                 return true;
               });
    read_lines(dir / ("trust_bin_" + std::to_string(t) + ".tsv"),
               [&](const std::vector<std::string>& f) {
                 if (f.size() < 2) return false;
                 auto a = ParseInt(f[0]);
                 auto b = ParseInt(f[1]);
                 if (!a || !b) return false;
                 double w = 1.0;
                 if (f.size() >= 3) {
                   auto pw = ParseReal(f[2]);
                   if (!pw) return false;
                   w = *pw;
                 }
                 graphs[t].push_back({static_cast<int>(*a), static_cast<int>(*b), w});
                 return true;
               });
  }
  data.ratings = RatingsTimeline(m, n, std::move(bins));
  data.trust = TrustTimeline(m, std::move(graphs));

  auto read_map = [&](const char* name, IdMap& map, int expected) {
    const fs::path path = dir / name;
    if (!fs::exists(path)) {
      // Maps are optional; synthesize identity names.
      for (int i = 0; i < expected; ++i) {
        map.names.push_back(std::to_string(i));
        map.index.emplace(std::to_string(i), i);
      }
      return;
    }
    map.names.assign(expected, std::string());
    read_lines(path, [&](const std::vector<std::string>& f) {
      if (f.size() < 2) return false;
      auto i = ParseInt(f[1]);
      if (!i || *i < 0 || *i >= expected) return false;
      map.names[*i] = f[0];
      return map.index.emplace(f[0], static_cast<int>(*i)).second;
    });
    if (map.size() != expected || static_cast<int>(map.index.size()) != expected) {
      throw InputError(path.string() + ": map is not a bijection onto [0, " +
                       std::to_string(expected) + ")");
    }
  };
  read_map("users.map", data.users, m);
  read_map("items.map", data.items, n);
  return data;
}

}  // namespace sdmf
