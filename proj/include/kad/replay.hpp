#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "kad/instance.hpp"

namespace kad {

/// Parse a JSONL replay file (one record per line, blank lines skipped).
/// Records missing "step" are numbered 0,1,2,... in file order. All lines
/// must share one vocabulary size.
std::vector<InstanceRecord> load_replay(const std::filesystem::path& path);
std::vector<InstanceRecord> load_replay(std::istream& in);

void serialize_replay(const std::vector<InstanceRecord>& records, std::ostream& out);

} // namespace kad
