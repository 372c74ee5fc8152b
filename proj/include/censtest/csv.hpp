#pragma once

#include <iosfwd>
#include <string>

#include "censtest/data.hpp"

namespace censtest {

// Column names looked up in the CSV header. Any remaining columns are read as
// covariates, in header order.
struct CsvSchema {
    std::string time = "time";
    std::string event = "event";
    std::string group = "group";
};

// Reads a two-group dataset. The first group label encountered becomes
// group0; row order is preserved within each group. Exactly two distinct
// labels are required, events must be 0 or 1, times numeric and nonnegative.
TwoSampleData read_csv(const std::string& path, const CsvSchema& schema = {});
TwoSampleData read_csv_stream(std::istream& in, const std::string& name,
                              const CsvSchema& schema = {});

// Canonical form: time,event,group[,cov1..covK]. Numbers are written with
// shortest round-trip precision, so read_csv(write_csv(d)) reproduces d.
void write_csv(const TwoSampleData& d, const std::string& path);
void write_csv_stream(const TwoSampleData& d, std::ostream& out);

}  // namespace censtest
