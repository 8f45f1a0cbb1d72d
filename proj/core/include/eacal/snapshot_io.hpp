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

#ifndef EACAL_SNAPSHOT_IO_HPP
#define EACAL_SNAPSHOT_IO_HPP

#include "eacal/estimator.hpp"

#include <filesystem>

namespace eacal
{

enum class SnapshotFormat
{
    csv,   // header record + one record per snapshot, doubles round-trip exactly
    binary // same layout as raw little-endian doubles behind a magic tag
};

// Writes a snapshot set. Output bytes are a pure function of the input.
void export_snapshots(const SnapshotSet &set, const std::filesystem::path &path, SnapshotFormat format);

// Reads either format back (detected from the leading bytes). Parse errors
// carry the offending line or record.
SnapshotSet import_snapshots(const std::filesystem::path &path);

} // namespace eacal

#endif
