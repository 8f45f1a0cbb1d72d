// SPDX-License-Identifier: Apache-2.0
//
// eacal - extended-antenna channel snapshot simulation and calibration
// Copyright (C) 2026 eacal contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "eacal/snapshot_io.hpp"

#include "eacal/errors.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace eacal
{

namespace
{

constexpr char binary_magic[8] = {'E', 'A', 'C', 'A', 'L', 'S', 'S', '1'};
constexpr std::uint64_t csv_schema_version = 1;

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void parse_fail(const std::filesystem::path &path, std::size_t line, const std::string &what)
{
    throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

// Splits one CSV line; numeric fields are parsed in place with strtod.
std::vector<std::string_view> split_fields(const std::string &line)
{
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true)
    {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos)
        {
            fields.emplace_back(line.data() + begin, line.size() - begin);
            break;
        }
        fields.emplace_back(line.data() + begin, comma - begin);
        begin = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view field, const std::filesystem::path &path, std::size_t line)
{
    const std::string tmp(field);
    char *end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
        parse_fail(path, line, "cannot parse '" + tmp + "' as a number");
    return v;
}

std::uint64_t parse_u64(std::string_view field, const std::filesystem::path &path, std::size_t line)
{
    const std::string tmp(field);
    try
    {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(tmp, &used);
        if (used != tmp.size())
            throw std::invalid_argument(tmp);
        return v;
    }
    catch (const std::exception &)
    {
        parse_fail(path, line, "cannot parse '" + tmp + "' as an unsigned integer");
    }
}

void export_csv(const SnapshotSet &set, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary); // binary: no newline translation
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");

    const std::size_t n = set.pulse.n_samples;
    out << "header," << csv_schema_version << ',' << n << ',' << fmt_double(set.pulse.carrier_hz) << ','
        << fmt_double(set.pulse.sample_rate_hz) << ',' << fmt_double(set.pulse.bandwidth_hz) << ','
        << fmt_double(set.pulse.rolloff) << ',' << set.size() << ',' << fmt_double(set.agent.x) << ','
        << fmt_double(set.agent.y) << '\n';

    std::string line;
    for (std::size_t m = 0; m < set.size(); ++m)
    {
        const auto &snap = set.snapshots[m];
        line.clear();
        line += "snapshot," + std::to_string(m) + ',' + fmt_double(snap.anchor.x) + ',' +
                fmt_double(snap.anchor.y) + ',' + fmt_double(snap.aoa);
        for (std::size_t k = 0; k < n; ++k)
        {
            const auto v = snap.r[static_cast<Eigen::Index>(k)];
            line += ',';
            line += fmt_double(v.real());
            line += ',';
            line += fmt_double(v.imag());
        }
        line += '\n';
        out << line;
    }
    if (!out)
        throw DataError("write failure on " + path.string());
}

SnapshotSet import_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        parse_fail(path, 1, "missing header record");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    const auto header = split_fields(line);
    if (header.size() != 10 || header[0] != "header")
        parse_fail(path, line_no, "expected 'header' record with 10 fields, got " + std::to_string(header.size()));
    if (parse_u64(header[1], path, line_no) != csv_schema_version)
        parse_fail(path, line_no, "unsupported snapshot schema version");

    SnapshotSet set;
    const std::size_t n = static_cast<std::size_t>(parse_u64(header[2], path, line_no));
    set.pulse.n_samples = n;
    set.pulse.carrier_hz = parse_double(header[3], path, line_no);
    set.pulse.sample_rate_hz = parse_double(header[4], path, line_no);
    set.pulse.bandwidth_hz = parse_double(header[5], path, line_no);
    set.pulse.rolloff = parse_double(header[6], path, line_no);
    const std::size_t m_count = static_cast<std::size_t>(parse_u64(header[7], path, line_no));
    set.agent.x = parse_double(header[8], path, line_no);
    set.agent.y = parse_double(header[9], path, line_no);

    set.snapshots.reserve(m_count);
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split_fields(line);
        if (fields[0] != "snapshot")
            parse_fail(path, line_no, "expected 'snapshot' record");
        if (fields.size() != 5 + 2 * n)
            parse_fail(path, line_no,
                       "snapshot record has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(5 + 2 * n) + " for " + std::to_string(n) + " samples");
        const std::uint64_t idx = parse_u64(fields[1], path, line_no);
        if (idx != set.snapshots.size())
            parse_fail(path, line_no, "snapshot index " + std::to_string(idx) + " out of order");

        Snapshot snap;
        snap.anchor.x = parse_double(fields[2], path, line_no);
        snap.anchor.y = parse_double(fields[3], path, line_no);
        snap.aoa = parse_double(fields[4], path, line_no);
        snap.r.resize(static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k)
        {
            const double re = parse_double(fields[5 + 2 * k], path, line_no);
            const double im = parse_double(fields[6 + 2 * k], path, line_no);
            snap.r[static_cast<Eigen::Index>(k)] = {re, im};
        }
        set.snapshots.push_back(std::move(snap));
    }
    if (set.snapshots.size() != m_count)
        throw DataError(path.string() + ": header promises " + std::to_string(m_count) +
                        " snapshots, file holds " + std::to_string(set.snapshots.size()));
    set.validate();
    return set;
}

void export_binary(const SnapshotSet &set, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");

    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char *>(&v), sizeof(v)); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char *>(&v), sizeof(v)); };

    out.write(binary_magic, sizeof(binary_magic));
    put_u64(set.pulse.n_samples);
    put_u64(set.size());
    put_f64(set.pulse.carrier_hz);
    put_f64(set.pulse.sample_rate_hz);
    put_f64(set.pulse.bandwidth_hz);
    put_f64(set.pulse.rolloff);
    put_f64(set.agent.x);
    put_f64(set.agent.y);
    for (const auto &snap : set.snapshots)
    {
        put_f64(snap.anchor.x);
        put_f64(snap.anchor.y);
        put_f64(snap.aoa);
        out.write(reinterpret_cast<const char *>(snap.r.data()),
                  static_cast<std::streamsize>(sizeof(std::complex<double>) * set.pulse.n_samples));
    }
    if (!out)
        throw DataError("write failure on " + path.string());
}

SnapshotSet import_binary(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, binary_magic, sizeof(magic)) != 0)
        throw DataError(path.string() + ": not an eacal binary snapshot file");

    auto get_u64 = [&](const char *what) {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char *>(&v), sizeof(v));
        if (!in)
            throw DataError(path.string() + ": truncated while reading " + std::string(what));
        return v;
    };
    auto get_f64 = [&](const char *what) {
        double v = 0;
        in.read(reinterpret_cast<char *>(&v), sizeof(v));
        if (!in)
            throw DataError(path.string() + ": truncated while reading " + std::string(what));
        return v;
    };

    SnapshotSet set;
    const std::uint64_t n = get_u64("sample count");
    const std::uint64_t m_count = get_u64("snapshot count");
    set.pulse.n_samples = static_cast<std::size_t>(n);
    set.pulse.carrier_hz = get_f64("carrier frequency");
    set.pulse.sample_rate_hz = get_f64("sample rate");
    set.pulse.bandwidth_hz = get_f64("bandwidth");
    set.pulse.rolloff = get_f64("rolloff");
    set.agent.x = get_f64("agent x");
    set.agent.y = get_f64("agent y");

    set.snapshots.reserve(m_count);
    for (std::uint64_t m = 0; m < m_count; ++m)
    {
        Snapshot snap;
        const std::string rec = "record " + std::to_string(m);
        snap.anchor.x = get_f64(rec.c_str());
        snap.anchor.y = get_f64(rec.c_str());
        snap.aoa = get_f64(rec.c_str());
        snap.r.resize(static_cast<Eigen::Index>(n));
        in.read(reinterpret_cast<char *>(snap.r.data()),
                static_cast<std::streamsize>(sizeof(std::complex<double>) * n));
        if (!in)
            throw DataError(path.string() + ": truncated in samples of record " + std::to_string(m));
        set.snapshots.push_back(std::move(snap));
    }
    set.validate();
    return set;
}

} // namespace

void export_snapshots(const SnapshotSet &set, const std::filesystem::path &path, SnapshotFormat format)
{
    set.validate();
    if (format == SnapshotFormat::csv)
        export_csv(set, path);
    else
        export_binary(set, path);
}

SnapshotSet import_snapshots(const std::filesystem::path &path)
{
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw DataError("cannot open " + path.string());
    char magic[8] = {};
    probe.read(magic, sizeof(magic));
    probe.close();
    if (std::memcmp(magic, binary_magic, sizeof(magic)) == 0)
        return import_binary(path);
    return import_csv(path);
}

} // namespace eacal
