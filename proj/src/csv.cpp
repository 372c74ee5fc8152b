#include "censtest/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "censtest/error.hpp"
#include "format.hpp"

namespace censtest {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& field, const std::string& name, std::size_t row) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw Error("row " + std::to_string(row) + ": column '" + name +
                    "' is not a number: '" + field + "'");
    return value;
}

}  // namespace

TwoSampleData read_csv_stream(std::istream& in, const std::string& name,
                              const CsvSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw Error(name + ": empty file");
    const auto header = split_fields(line);

    std::ptrdiff_t ci_time = -1, ci_event = -1, ci_group = -1;
    std::vector<std::size_t> ci_cov;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == schema.time) ci_time = static_cast<std::ptrdiff_t>(i);
        else if (header[i] == schema.event) ci_event = static_cast<std::ptrdiff_t>(i);
        else if (header[i] == schema.group) ci_group = static_cast<std::ptrdiff_t>(i);
        else ci_cov.push_back(i);
    }
    if (ci_time < 0) throw Error(name + ": missing column '" + schema.time + "'");
    if (ci_event < 0) throw Error(name + ": missing column '" + schema.event + "'");
    if (ci_group < 0) throw Error(name + ": missing column '" + schema.group + "'");

    TwoSampleData d;
    bool have0 = false, have1 = false;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw Error(name + ": row " + std::to_string(row) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));

        CensoredObservation o;
        o.time = parse_number(fields[static_cast<std::size_t>(ci_time)], schema.time, row);
        if (!std::isfinite(o.time) || o.time < 0.0)
            throw Error(name + ": row " + std::to_string(row) + ": time must be nonnegative");
        const double ev = parse_number(fields[static_cast<std::size_t>(ci_event)], schema.event, row);
        if (ev != 0.0 && ev != 1.0)
            throw Error(name + ": row " + std::to_string(row) + ": event must be 0 or 1");
        o.event = ev == 1.0;
        for (std::size_t c : ci_cov)
            o.covariates.push_back(parse_number(fields[c], header[c], row));

        const std::string& label = fields[static_cast<std::size_t>(ci_group)];
        if (!have0 || label == d.group0.label) {
            if (!have0) { d.group0.label = label; have0 = true; }
            d.group0.observations.push_back(std::move(o));
        } else if (!have1 || label == d.group1.label) {
            if (!have1) { d.group1.label = label; have1 = true; }
            d.group1.observations.push_back(std::move(o));
        } else {
            throw Error(name + ": row " + std::to_string(row) +
                        ": expected exactly two groups, found third label '" + label + "'");
        }
    }
    if (!have0 || !have1) throw Error(name + ": expected exactly two groups");
    validate_data(d);
    return d;
}

TwoSampleData read_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_csv_stream(in, path, schema);
}

void write_csv_stream(const TwoSampleData& d, std::ostream& out) {
    const std::size_t dim = covariate_dim(d.group0);
    out << "time,event,group";
    for (std::size_t k = 1; k <= dim; ++k) out << ",cov" << k;
    out << "\n";
    auto emit = [&](const CensoredSample& s) {
        for (const auto& o : s.observations) {
            out << detail::format_double(o.time) << ',' << (o.event ? 1 : 0) << ',' << s.label;
            for (double c : o.covariates) out << ',' << detail::format_double(c);
            out << "\n";
        }
    };
    emit(d.group0);
    emit(d.group1);
}

void write_csv(const TwoSampleData& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv_stream(d, out);
}

}  // namespace censtest
