#include "crab/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crab/error.hpp"

namespace crab {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long parse_long(const std::string& s, long line_no, const char* what) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(std::string("invalid ") + what + " '" + s + "'", line_no);
    return v;
}

double parse_double(const std::string& s, long line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("invalid ") + what + " '" + s + "'", line_no);
    }
}

} // namespace

MultiLabelDataset parse_dataset(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long line_no = 0;

    // Header: K=<int> D=<int>
    if (!std::getline(in, line)) throw ParseError("empty file, missing header", 1);
    ++line_no;
    auto header = split_ws(line);
    if (header.size() != 2 || header[0].rfind("K=", 0) != 0 || header[1].rfind("D=", 0) != 0)
        throw ParseError("expected header 'K=<int> D=<int>'", line_no);
    long k = parse_long(header[0].substr(2), line_no, "label count");
    long d = parse_long(header[1].substr(2), line_no, "feature dimension");
    if (k < 2) throw ParseError("label-space size K must be >= 2", line_no);
    if (d < 0) throw ParseError("feature dimension must be >= 0", line_no);

    MultiLabelDataset ds;
    ds.num_labels = static_cast<int>(k);
    ds.feature_dim = static_cast<std::size_t>(d);

    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue; // blank lines allowed

        Instance inst;
        inst.labels.assign(static_cast<std::size_t>(k), static_cast<std::int8_t>(-1));

        // First token: positive label indices, or "-" for an all-negative row.
        if (tokens[0] != "-") {
            std::size_t start = 0;
            const std::string& labs = tokens[0];
            while (start <= labs.size()) {
                std::size_t comma = labs.find(',', start);
                std::string part = labs.substr(start, comma == std::string::npos
                                                          ? std::string::npos
                                                          : comma - start);
                if (part.empty()) throw ParseError("empty label index", line_no);
                long idx = parse_long(part, line_no, "label index");
                if (idx < 0 || idx >= k)
                    throw ParseError("label index " + std::to_string(idx) +
                                         " out of range [0," + std::to_string(k) + ")",
                                     line_no);
                inst.labels[static_cast<std::size_t>(idx)] = 1;
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }

        for (std::size_t t = 1; t < tokens.size(); ++t) {
            std::size_t colon = tokens[t].find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == tokens[t].size())
                throw ParseError("expected '<idx>:<val>' feature, got '" + tokens[t] + "'",
                                 line_no);
            long idx = parse_long(tokens[t].substr(0, colon), line_no, "feature index");
            double val = parse_double(tokens[t].substr(colon + 1), line_no, "feature value");
            if (idx < 0 || idx >= d)
                throw ParseError("feature index " + std::to_string(idx) +
                                     " out of range [0," + std::to_string(d) + ")",
                                 line_no);
            inst.features.entries.emplace_back(static_cast<std::uint32_t>(idx), val);
        }
        std::sort(inst.features.entries.begin(), inst.features.entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t t = 1; t < inst.features.entries.size(); ++t)
            if (inst.features.entries[t].first == inst.features.entries[t - 1].first)
                throw ParseError("duplicate feature index " +
                                     std::to_string(inst.features.entries[t].first),
                                 line_no);

        ds.instances.push_back(std::move(inst));
    }

    if (ds.instances.empty()) throw ParseError("no instances");
    validate_dataset(ds);
    return ds;
}

MultiLabelDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

std::string serialize_dataset(const MultiLabelDataset& ds) {
    std::string out = "K=" + std::to_string(ds.num_labels) +
                      " D=" + std::to_string(ds.feature_dim) + "\n";
    char num[64];
    for (const auto& inst : ds.instances) {
        bool any = false;
        for (std::size_t l = 0; l < inst.labels.size(); ++l) {
            if (inst.labels[l] > 0) {
                if (any) out += ',';
                out += std::to_string(l);
                any = true;
            }
        }
        if (!any) out += '-';
        for (const auto& [idx, val] : inst.features.entries) {
            std::snprintf(num, sizeof num, " %u:%.17g", idx, val);
            out += num;
        }
        out += '\n';
    }
    return out;
}

void save_dataset(const MultiLabelDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset file '" + path + "'");
    out << serialize_dataset(ds);
    if (!out) throw IoError("write failed for '" + path + "'");
}

void validate_dataset(const MultiLabelDataset& ds) {
    if (ds.num_labels < 2) throw DomainError("label-space size K must be >= 2");
    bool any_positive = false;
    for (std::size_t i = 0; i < ds.instances.size(); ++i) {
        const auto& inst = ds.instances[i];
        if (inst.labels.size() != static_cast<std::size_t>(ds.num_labels))
            throw DimensionError("instance " + std::to_string(i) + " has " +
                                 std::to_string(inst.labels.size()) + " labels, expected " +
                                 std::to_string(ds.num_labels));
        for (auto v : inst.labels) {
            if (v != 1 && v != -1) throw DomainError("label entries must be -1 or +1");
            if (v == 1) any_positive = true;
        }
        for (const auto& [idx, val] : inst.features.entries) {
            if (idx >= ds.feature_dim)
                throw DimensionError("feature index " + std::to_string(idx) +
                                     " >= feature_dim " + std::to_string(ds.feature_dim));
            (void)val;
        }
    }
    if (!ds.instances.empty() && !any_positive)
        throw DomainError("dataset carries no positive label anywhere");
}

} // namespace crab
